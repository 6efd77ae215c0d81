#pragma once
/// Shared error helpers and small numeric utilities.

#include <cmath>
#include <stdexcept>
#include <string>

namespace wkg {

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Precondition failure: the caller handed us something unusable.
[[noreturn]] inline void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

/// Internal invariant failure: the library itself is in a bad state.
[[noreturn]] inline void fail_internal(const std::string& msg) {
  throw std::runtime_error("internal error: " + msg);
}

inline void require(bool ok, const std::string& msg) {
  if (!ok) fail(msg);
}

inline double sqr(double x) { return x * x; }

/// Japanese bracket <x> = sqrt(1 + x^2).
inline double jbracket(double x) { return std::sqrt(1.0 + x * x); }

}  // namespace wkg
