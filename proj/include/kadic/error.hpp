#pragma once

#include <stdexcept>
#include <string>

namespace kadic {

/// Raised when an operation receives arguments outside its domain.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace kadic
