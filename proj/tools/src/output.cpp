#include "output.hpp"

#include <cstdlib>

#include "errors.hpp"

namespace csketch::cli {

namespace fs = std::filesystem;

OutputDir OutputDir::resolve(const std::string& flag) {
  if (!flag.empty()) return OutputDir(flag);
  if (const char* env = std::getenv("CSKETCH_OUT_DIR"); env && *env) return OutputDir(env);
  return OutputDir(".");
}

OutputDir::OutputDir(fs::path root) : root_(std::move(root)) {}

fs::path OutputDir::file(const std::string& relative) const {
  const fs::path rel = fs::path(relative).lexically_normal();
  if (relative.empty() || rel.is_absolute() || rel.empty() || *rel.begin() == "..") {
    throw UsageError("output path '" + relative + "' must be relative to the output directory " + root_.string());
  }
  const fs::path full = root_ / rel;
  std::error_code ec;
  fs::create_directories(full.parent_path(), ec);
  if (ec) throw csketch::DataError("cannot create directory " + full.parent_path().string() + ": " + ec.message());
  return full;
}

std::ofstream OutputDir::open(const std::string& relative) const {
  const fs::path full = file(relative);
  std::ofstream out(full, std::ios::binary);
  if (!out) throw csketch::DataError("cannot write " + full.string());
  return out;
}

}  // namespace csketch::cli
