#include "slabprobe/error.hpp"

#include <utility>

namespace slabprobe {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i > 0) out += "; ";
    out += issues[i];
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

}  // namespace slabprobe
