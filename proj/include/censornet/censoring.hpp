#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "censornet/random.hpp"
#include "censornet/sociomatrix.hpp"
#include "censornet/types.hpp"

namespace censornet {

/// Trait dependence of which alters get named; (0, 0) is uniform naming.
/// lambda_attr weights toward high-trait alters, lambda_sim > 0 toward
/// alters similar to the ego.
struct NamingPreference {
  double lambda_attr = 0.0;
  double lambda_sim = 0.0;

  bool uniform() const { return lambda_attr == 0.0 && lambda_sim == 0.0; }

  void validate() const {
    if (!std::isfinite(lambda_attr) || !std::isfinite(lambda_sim))
      throw invalid_config_error("NamingPreference: weights must be finite");
  }
};

enum class CensorKind { None, Hard, Flexible, Fractional };
enum class CapDistribution { Poisson, Binomial };

/// How the observed matrix X is derived from the true matrix W.
struct CensorScheme {
  CensorKind kind = CensorKind::None;
  int hard_k = 0;                                  // Hard
  double flexible_k = 0.0;                         // Flexible mean cap
  CapDistribution dist = CapDistribution::Poisson; // Flexible cap law
  long binom_m = 0;                                // Flexible binomial trials
  double binom_p = 0.0;                            // Flexible binomial rate
  double fraction = 0.0;                           // Fractional
  NamingPreference pref;

  static CensorScheme none() { return {}; }

  static CensorScheme hard(int k, NamingPreference pref = {}) {
    CensorScheme s;
    s.kind = CensorKind::Hard;
    s.hard_k = k;
    s.pref = pref;
    s.validate();
    return s;
  }

  static CensorScheme flexible_poisson(double k, NamingPreference pref = {}) {
    CensorScheme s;
    s.kind = CensorKind::Flexible;
    s.flexible_k = k;
    s.dist = CapDistribution::Poisson;
    s.pref = pref;
    s.validate();
    return s;
  }

  static CensorScheme flexible_binomial(double k, long m, double p,
                                        NamingPreference pref = {}) {
    CensorScheme s;
    s.kind = CensorKind::Flexible;
    s.flexible_k = k;
    s.dist = CapDistribution::Binomial;
    s.binom_m = m;
    s.binom_p = p;
    s.pref = pref;
    s.validate();
    return s;
  }

  static CensorScheme fractional(double f, NamingPreference pref = {}) {
    CensorScheme s;
    s.kind = CensorKind::Fractional;
    s.fraction = f;
    s.pref = pref;
    s.validate();
    return s;
  }

  void validate() const {
    pref.validate();
    switch (kind) {
      case CensorKind::None:
        break;
      case CensorKind::Hard:
        if (hard_k < 1) throw invalid_config_error("hard scheme: k must be >= 1");
        break;
      case CensorKind::Flexible:
        if (!(flexible_k > 0.0) || !std::isfinite(flexible_k))
          throw invalid_config_error("flexible scheme: k must be > 0");
        if (dist == CapDistribution::Binomial) {
          if (binom_m < 1 || !(binom_p >= 0.0 && binom_p <= 1.0))
            throw invalid_config_error(
                "flexible binomial scheme: require m >= 1 and p in [0,1]");
          if (std::abs(static_cast<double>(binom_m) * binom_p - flexible_k) >
              1e-9 * std::max(1.0, flexible_k))
            throw invalid_config_error(
                "flexible binomial scheme: m*p must equal k");
        }
        break;
      case CensorKind::Fractional:
        if (!(fraction > 0.0 && fraction <= 1.0))
          throw invalid_config_error("fractional scheme: f must lie in (0,1]");
        break;
    }
  }

  /// Canonical descriptor; comma-free so it can sit in a CSV field.
  std::string descriptor() const {
    std::string s;
    switch (kind) {
      case CensorKind::None:
        s = "none";
        break;
      case CensorKind::Hard:
        s = "hard(k=" + std::to_string(hard_k);
        break;
      case CensorKind::Flexible:
        s = dist == CapDistribution::Poisson
                ? "flexible(poisson;k=" + detail::format_g(flexible_k)
                : "flexible(binomial;k=" + detail::format_g(flexible_k) +
                      ";m=" + std::to_string(binom_m) +
                      ";p=" + detail::format_g(binom_p);
        break;
      case CensorKind::Fractional:
        s = "fractional(f=" + detail::format_g(fraction);
        break;
    }
    if (kind != CensorKind::None) {
      if (!pref.uniform())
        s += ";lattr=" + detail::format_g(pref.lambda_attr) +
             ";lsim=" + detail::format_g(pref.lambda_sim);
      s += ")";
    }
    return s;
  }
};

/// Naming weight of each alter for ego i:
/// exp(lambda_attr * y0_j - lambda_sim * |y0_i - y0_j|), up to scale.
inline std::vector<double> naming_weights(int ego, const std::vector<int>& alters,
                                          const TraitVector& y0,
                                          const NamingPreference& pref) {
  pref.validate();
  const double yi = y0.values[static_cast<std::size_t>(ego)];
  std::vector<double> w(alters.size());
  for (std::size_t a = 0; a < alters.size(); ++a) {
    const double yj = y0.values[static_cast<std::size_t>(alters[a])];
    w[a] = pref.uniform()
               ? 1.0
               : std::exp(pref.lambda_attr * yj - pref.lambda_sim * std::abs(yi - yj));
    if (!(w[a] > 0.0) || !std::isfinite(w[a]))
      throw invalid_input_error("naming_weights: weight not positive finite");
  }
  return w;
}

namespace detail {

/// Successive weighted sampling without replacement: each pick is
/// proportional to the remaining weights. Uniform weights give inclusion
/// probability count/size for every alter.
inline std::vector<int> sample_without_replacement(std::vector<int> pool,
                                                   std::vector<double> weights,
                                                   std::size_t count,
                                                   RandomStream& rng) {
  std::vector<int> chosen;
  chosen.reserve(count);
  double total = 0.0;
  for (double w : weights) total += w;
  for (std::size_t pick = 0; pick < count; ++pick) {
    double u = rng.uniform01() * total;
    std::size_t sel = pool.size() - 1;
    for (std::size_t a = 0; a < pool.size(); ++a) {
      u -= weights[a];
      if (u < 0.0) {
        sel = a;
        break;
      }
    }
    chosen.push_back(pool[sel]);
    total -= weights[sel];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(sel));
    weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(sel));
  }
  return chosen;
}

/// Shared row-wise censoring driver. `cap_of_row(degree, row_rng)` returns
/// how many alters that ego may name; rows are processed on independent
/// substreams keyed by row index, so results do not depend on evaluation
/// order.
template <typename CapFn>
Sociomatrix censor_rows(const Sociomatrix& w, const NamingPreference& pref,
                        const TraitVector& y0, RandomStream& rng, CapFn cap_of_row) {
  const int n = w.n();
  if (static_cast<int>(y0.size()) != n)
    throw invalid_input_error("censoring: trait vector length must equal n");
  RandomStream base = rng.split();
  Sociomatrix x(n);
  for (int i = 0; i < n; ++i) {
    RandomStream row_rng = base.fork(static_cast<std::uint64_t>(i));
    const std::vector<int> alters = w.alters_of(i);
    const long degree = static_cast<long>(alters.size());
    const long cap = cap_of_row(degree, row_rng);
    if (cap >= degree) {
      for (int j : alters) x.set(i, j, true);
      continue;
    }
    if (cap <= 0) continue;
    const std::vector<double> weights = naming_weights(i, alters, y0, pref);
    for (int j : sample_without_replacement(alters, weights,
                                            static_cast<std::size_t>(cap), row_rng))
      x.set(i, j, true);
  }
  return x;
}

}  // namespace detail

/// Mechanism with a strict cap: everyone names min(D_i, k) alters.
inline Sociomatrix censor_hard(const Sociomatrix& w, int k,
                               const NamingPreference& pref, const TraitVector& y0,
                               RandomStream& rng) {
  if (k < 1) throw invalid_config_error("censor_hard: k must be >= 1");
  return detail::censor_rows(
      w, pref, y0, rng, [k](long, RandomStream&) { return static_cast<long>(k); });
}

/// Mechanism with a random per-ego cap of mean k, drawn independently of
/// traits and of the network; ego i names min(D_i, K_i) alters.
inline Sociomatrix censor_flexible(const Sociomatrix& w, double k,
                                   CapDistribution dist, long binom_m,
                                   double binom_p, const NamingPreference& pref,
                                   const TraitVector& y0, RandomStream& rng) {
  if (!(k > 0.0)) throw invalid_config_error("censor_flexible: k must be > 0");
  return detail::censor_rows(w, pref, y0, rng,
                             [&](long, RandomStream& row_rng) {
                               return dist == CapDistribution::Poisson
                                          ? row_rng.poisson(k)
                                          : row_rng.binomial(binom_m, binom_p);
                             });
}

/// Mechanism naming a fraction of one's true alters: ego i names exactly
/// clamp(round_half_away_from_zero(f * D_i), 0, D_i) of them.
inline Sociomatrix censor_fractional(const Sociomatrix& w, double f,
                                     const NamingPreference& pref,
                                     const TraitVector& y0, RandomStream& rng) {
  if (!(f > 0.0 && f <= 1.0))
    throw invalid_config_error("censor_fractional: f must lie in (0,1]");
  return detail::censor_rows(w, pref, y0, rng, [f](long degree, RandomStream&) {
    const long c = std::lround(f * static_cast<double>(degree));
    return std::clamp(c, 0L, degree);
  });
}

/// Dispatch a scheme against the true matrix.
inline Sociomatrix apply_scheme(const Sociomatrix& w, const CensorScheme& scheme,
                                const TraitVector& y0, RandomStream& rng) {
  scheme.validate();
  switch (scheme.kind) {
    case CensorKind::None:
      return w;
    case CensorKind::Hard:
      return censor_hard(w, scheme.hard_k, scheme.pref, y0, rng);
    case CensorKind::Flexible:
      return censor_flexible(w, scheme.flexible_k, scheme.dist, scheme.binom_m,
                             scheme.binom_p, scheme.pref, y0, rng);
    case CensorKind::Fractional:
      return censor_fractional(w, scheme.fraction, scheme.pref, y0, rng);
  }
  throw invalid_config_error("apply_scheme: unknown scheme kind");
}

}  // namespace censornet
