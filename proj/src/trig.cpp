#include "sfem/trig.hpp"

#include <fftw3.h>

#include <atomic>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>
#include <vector>

namespace sfem::trig {

namespace {

std::atomic<std::uint64_t> g_invocations{0};

enum Kind { kDst1 = 0, kDst3 = 1, kDct3 = 2 };

fftw_r2r_kind fftw_kind(int kind) {
  return kind == kDst1 ? FFTW_RODFT00 : (kind == kDst3 ? FFTW_RODFT01 : FFTW_REDFT01);
}

// FFTW plans keyed by (kind, length, batch count). Creation is serialized;
// execution through the new-array interface is re-entrant. FFTW_UNALIGNED
// keeps the plans valid for arbitrary caller buffers.
class PlanCache {
 public:
  fftw_plan get(Kind kind, int len, int count) {
    const auto key = std::make_tuple(static_cast<int>(kind), len, count);
    {
      std::shared_lock lock(mu_);
      auto it = plans_.find(key);
      if (it != plans_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    std::vector<double> a(static_cast<size_t>(len) * count), b(a.size());
    fftw_plan p;
    if (count == 1) {
      p = fftw_plan_r2r_1d(len, a.data(), b.data(), fftw_kind(kind), FFTW_ESTIMATE | FFTW_UNALIGNED);
    } else {
      // Interleaved batch: stride = count, neighbouring transforms adjacent.
      fftw_r2r_kind k = fftw_kind(kind);
      p = fftw_plan_many_r2r(1, &len, count, a.data(), nullptr, count, 1, b.data(), nullptr, count, 1,
                             &k, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    if (!p) fail("trig: FFTW plan creation failed");
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [key, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  std::shared_mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void Plan::execute(const double* in, double* out) const {
  g_invocations.fetch_add(count_, std::memory_order_relaxed);
  if (length_ == 0) return;
  if (kind_ == kDst1) {
    // RODFT00 returns twice the plain sine sum.
    fftw_execute_r2r(static_cast<fftw_plan>(plan_), const_cast<double*>(in), out);
    const size_t total = static_cast<size_t>(length_) * count_;
    for (size_t i = 0; i < total; ++i) out[i] *= 0.5;
    return;
  }
  // For the half-sample syntheses FFTW doubles every input term except the
  // boundary one, so feed halved coefficients through a scratch buffer.
  thread_local std::vector<double> scratch;
  const size_t total = static_cast<size_t>(length_) * count_;
  scratch.assign(in, in + total);
  if (kind_ == kDst3) {
    for (size_t i = 0; i + count_ < total; ++i) scratch[i] *= 0.5;
  } else {
    for (size_t i = count_; i < total; ++i) scratch[i] *= 0.5;
  }
  fftw_execute_r2r(static_cast<fftw_plan>(plan_), scratch.data(), out);
}

Plan dst1_plan(int points) {
  require(points >= 0, "dst1: negative length");
  return Plan(points == 0 ? nullptr : cache().get(kDst1, points, 1), points, kDst1, 1);
}

Plan dst3_plan(int points) {
  require(points >= 1, "dst3: need at least one point");
  return Plan(cache().get(kDst3, points, 1), points, kDst3, 1);
}

Plan dct3_plan(int points) {
  require(points >= 1, "dct3: need at least one point");
  return Plan(cache().get(kDct3, points, 1), points, kDct3, 1);
}

Plan dst1_batch_plan(int points, int count) {
  require(points >= 0 && count >= 1, "dst1 batch: bad shape");
  return Plan(points == 0 ? nullptr : cache().get(kDst1, points, count), points, kDst1, count);
}

Plan dst3_batch_plan(int points, int count) {
  require(points >= 1 && count >= 1, "dst3 batch: bad shape");
  return Plan(cache().get(kDst3, points, count), points, kDst3, count);
}

Plan dct3_batch_plan(int points, int count) {
  require(points >= 1 && count >= 1, "dct3 batch: bad shape");
  return Plan(cache().get(kDct3, points, count), points, kDct3, count);
}

std::vector<double> dst1(std::span<const double> x) {
  std::vector<double> out(x.size());
  dst1_plan(static_cast<int>(x.size())).execute(x.data(), out.data());
  return out;
}

std::vector<double> dst3_synthesis(std::span<const double> b) {
  require(!b.empty(), "dst3_synthesis: empty input");
  std::vector<double> out(b.size());
  dst3_plan(static_cast<int>(b.size())).execute(b.data(), out.data());
  return out;
}

std::vector<double> dct3_synthesis(std::span<const double> a) {
  require(!a.empty(), "dct3_synthesis: empty input");
  std::vector<double> out(a.size());
  dct3_plan(static_cast<int>(a.size())).execute(a.data(), out.data());
  return out;
}

std::uint64_t invocation_count() { return g_invocations.load(std::memory_order_relaxed); }

}  // namespace sfem::trig
