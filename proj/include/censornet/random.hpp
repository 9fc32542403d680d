#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "censornet/errors.hpp"

namespace censornet {

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Key for a child stream. Pure function of (key, salt), so derivation is
// independent of how much the parent stream has been consumed.
inline std::uint64_t derive_key(std::uint64_t key, std::uint64_t salt) {
  return mix64(key ^ mix64(salt ^ 0x632be59bd9b4e019ULL));
}

/// Seedable random stream with counter-style key derivation.
///
/// Every stream is identified by a 64-bit key; `fork(salt)` derives an
/// independent child stream from (key, salt) without touching the parent
/// state, which is what makes replications and per-row censoring
/// schedule-independent.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : key_(key), gen_(mix64(key)) {}

  std::uint64_t key() const { return key_; }

  /// Child stream addressed by (key, salt); const, state-independent.
  RandomStream fork(std::uint64_t salt) const {
    return RandomStream(derive_key(key_, salt));
  }

  /// Child stream keyed off the next generator word; each call differs.
  RandomStream split() { return RandomStream(derive_key(key_, gen_())); }

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform index in [0, n).
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw invalid_input_error("uniform_index: n must be positive");
    auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  /// Box-Muller, two uniforms per variate (no cached spare).
  double normal(double mean = 0.0, double sd = 1.0) {
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  /// Exact Poisson sampler. Splits large means into chunks so the Knuth
  /// product method never underflows.
  long poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
      throw invalid_input_error("poisson: mean must be finite and >= 0");
    long total = 0;
    while (mean > 30.0) {
      total += poisson_knuth(30.0);
      mean -= 30.0;
    }
    return total + poisson_knuth(mean);
  }

  long binomial(long m, double p) {
    if (m < 0 || !(p >= 0.0 && p <= 1.0))
      throw invalid_input_error("binomial: require m >= 0 and p in [0,1]");
    long hits = 0;
    for (long i = 0; i < m; ++i)
      if (uniform01() < p) ++hits;
    return hits;
  }

 private:
  long poisson_knuth(double mean) {
    const double limit = std::exp(-mean);
    long k = 0;
    double prod = 1.0;
    do {
      ++k;
      prod *= uniform01();
    } while (prod > limit);
    return k - 1;
  }

  std::uint64_t key_;
  std::mt19937_64 gen_;
};

}  // namespace censornet
