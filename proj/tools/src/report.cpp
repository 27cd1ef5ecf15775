#include "report.hpp"

#include <Eigen/Core>
#include <string>

#include "csketch/rng.hpp"

#ifndef CSKETCH_VERSION
#define CSKETCH_VERSION "unknown"
#endif
#ifndef CSKETCH_BUILD_TYPE
#define CSKETCH_BUILD_TYPE "unknown"
#endif

namespace csketch::cli {

nlohmann::json environment_fingerprint() {
  return {
      {"version", CSKETCH_VERSION},
      {"build_type", CSKETCH_BUILD_TYPE},
      {"compiler", std::string(__VERSION__)},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"rng", std::string(csketch::Rng::kAlgorithm)},
  };
}

}  // namespace csketch::cli
