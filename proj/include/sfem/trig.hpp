#pragma once

// The three trigonometric transforms the solver needs, as plain unnormalized
// sums:
//   dst1:           X_k = sum_{j=1}^{K-1} x_j sin(pi j k / K),   k = 1..K-1
//   dst3_synthesis: w_j = sum_{k=1}^{K}   b_k sin(pi k (j-1/2)/K), j = 1..K
//   dct3_synthesis: w_j = sum_{k=0}^{K-1} a_k cos(pi k (j-1/2)/K), j = 1..K
// Backed by FFTW r2r plans; plans are cached per length and safe to execute
// concurrently.

#include <cstdint>
#include <span>
#include <vector>

#include "sfem/types.hpp"

namespace sfem::trig {

/// Opaque handle to a cached plan. Fetch once per sweep, then run on any
/// buffers; `in` and `out` must be distinct.
class Plan {
 public:
  void execute(const double* in, double* out) const;
  int length() const { return length_; }

 private:
  friend Plan dst1_plan(int);
  friend Plan dst3_plan(int);
  friend Plan dct3_plan(int);
  friend Plan dst1_batch_plan(int, int);
  friend Plan dst3_batch_plan(int, int);
  friend Plan dct3_batch_plan(int, int);
  Plan(void* p, int len, int kind, int count) : plan_(p), length_(len), kind_(kind), count_(count) {}
  void* plan_;
  int length_;
  int kind_;
  int count_;
};

/// Transform plans; `points` is the logical length (K-1 values for dst1,
/// K for the half-sample syntheses).
Plan dst1_plan(int points);
Plan dst3_plan(int points);
Plan dct3_plan(int points);

/// Batched plans over `count` interleaved sequences: element j of sequence b
/// sits at [j*count + b]. One execute performs `count` transforms.
Plan dst1_batch_plan(int points, int count);
Plan dst3_batch_plan(int points, int count);
Plan dct3_batch_plan(int points, int count);

std::vector<double> dst1(std::span<const double> x);
/// b holds b_1..b_K (b_K participates; callers usually pass 0 there).
std::vector<double> dst3_synthesis(std::span<const double> b);
/// a holds a_0..a_{K-1}.
std::vector<double> dct3_synthesis(std::span<const double> a);

/// Total transform executions since process start (any kind, any length).
std::uint64_t invocation_count();

}  // namespace sfem::trig
