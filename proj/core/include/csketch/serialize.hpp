#pragma once

#include <string>
#include <string_view>

#include "csketch/solver.hpp"

namespace csketch {

// JSON documents for sketches and fitted models. Doubles are written in
// shortest round-trip form, so save -> load reproduces every bit.

std::string to_json(const SketchSpec& spec);
SketchSpec sketch_spec_from_json(std::string_view text);

std::string to_json(const PreprocessRecord& prep);
PreprocessRecord preprocess_record_from_json(std::string_view text);

std::string to_json(const FittedModel& model);
FittedModel fitted_model_from_json(std::string_view text);

void save_model(const std::string& path, const FittedModel& model);
FittedModel load_model(const std::string& path);

std::string_view to_string(SolveRoute route);

}  // namespace csketch
