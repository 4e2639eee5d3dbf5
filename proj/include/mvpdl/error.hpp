#pragma once

#include <stdexcept>
#include <string>

namespace mvpdl {

/// Domain error: invariant violations, malformed inputs, parse failures.
/// Messages name the offending field or token.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mvpdl
