#pragma once

#include "json.hpp"

namespace csketch::cli {

/// Version, compiler, build type and RNG algorithm of this binary.
nlohmann::json environment_fingerprint();

}  // namespace csketch::cli
