#pragma once

#include <stdexcept>
#include <string>

namespace saddle {

// File problems: unreadable paths, malformed or truncated contents.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid parameters and degenerate geometry (singular maps, points at infinity).
struct ParamError : std::invalid_argument {
  explicit ParamError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace saddle
