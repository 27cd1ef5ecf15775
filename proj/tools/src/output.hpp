#pragma once

#include <filesystem>
#include <fstream>
#include <string>

namespace csketch::cli {

/// Root directory for every file a command writes. Relative targets are
/// resolved under it; targets that would escape it are refused.
class OutputDir {
 public:
  /// `flag` wins, then $CSKETCH_OUT_DIR, then the working directory.
  static OutputDir resolve(const std::string& flag);

  explicit OutputDir(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  /// Checked path for `relative`; creates parent directories.
  std::filesystem::path file(const std::string& relative) const;

  std::ofstream open(const std::string& relative) const;

 private:
  std::filesystem::path root_;
};

}  // namespace csketch::cli
