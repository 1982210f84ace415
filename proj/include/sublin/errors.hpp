#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace sublin {

// Bad configuration or arguments. The CLI maps this to exit code 2.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Brute-force or sample limits exceeded at run time.
class LimitError : public std::runtime_error {
 public:
  explicit LimitError(const std::string& what) : std::runtime_error(what) {}
};

// Compact number formatting for messages (6 significant digits).
inline std::string num(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

}  // namespace sublin
