#pragma once

#include <stdexcept>
#include <string>

namespace sfem {

/// Error type thrown by every operation in the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(msg);
}

/// Arithmetic used when generating spectral data. Runtime solves always
/// happen in double; Extended only affects how eigenpairs are produced
/// (and how many digits a cache file carries).
enum class Precision { Double, Extended };

/// Orders above this are rejected in double precision.
inline constexpr int kMaxOrderDouble = 9;
/// Hard cap on the polynomial order, extended precision only.
inline constexpr int kMaxOrder = 21;

}  // namespace sfem
