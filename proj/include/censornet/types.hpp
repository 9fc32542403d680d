#pragma once

#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "censornet/errors.hpp"

namespace censornet {

namespace detail {

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

/// Shortest human-friendly rendering, used in descriptors and messages.
inline std::string format_g(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

/// 17 significant digits; round-trips any double in record files.
inline std::string format_full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace detail

/// Observed trait values, one per node.
struct TraitVector {
  std::vector<double> values;

  TraitVector() = default;
  explicit TraitVector(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  double mean() const { return detail::mean(values); }
};

/// Latent per-ego gregariousness.
struct GregVector {
  std::vector<double> values;

  GregVector() = default;
  explicit GregVector(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
};

/// Network generator configuration.
///
/// Latent edge values are Gaussian with mean
///   alpha_i + r_in*y0_j + r_out*y0_i - h*|y0_i - y0_j|
/// and variance 1 - (r_in^2 + r_out^2). `h > 0` makes ties homophilous on
/// the trait, `h < 0` heterophilous. The threshold is chosen per network so
/// the realized arc count equals round(n * target_mean_outdegree) exactly.
struct GenParams {
  int n = 100;
  double sigma_h = 0.0;
  double h = 0.0;
  double r_in = 0.0;
  double r_out = 0.0;
  double target_mean_outdegree = 10.0;

  double latent_variance() const { return 1.0 - (r_in * r_in + r_out * r_out); }

  /// Full invariant set, enforced at configuration boundaries.
  void validate() const {
    if (n < 2) throw invalid_config_error("GenParams: n must be >= 2");
    if (!(sigma_h >= 0.0) || !std::isfinite(sigma_h))
      throw invalid_config_error("GenParams: sigma_h must be finite and >= 0");
    if (!std::isfinite(h) || !std::isfinite(r_in) || !std::isfinite(r_out))
      throw invalid_config_error("GenParams: h, r_in, r_out must be finite");
    if (!(latent_variance() > 0.0))
      throw invalid_config_error("GenParams: require r_in^2 + r_out^2 < 1");
    if (!(target_mean_outdegree > 0.0) ||
        !(target_mean_outdegree < static_cast<double>(n - 1)))
      throw invalid_config_error(
          "GenParams: target_mean_outdegree must lie in (0, n-1)");
  }
};

/// One-step trait evolution coefficients.
struct EvolveParams {
  double mu = 0.0;        // intercept
  double gamma = 0.0;     // autocorrelation
  double beta = 0.0;      // contagion
  double delta = 0.0;     // outdegree effect
  double sigma_eps = 1.0; // innovation sd

  void validate() const {
    if (!(sigma_eps >= 0.0) || !std::isfinite(sigma_eps))
      throw invalid_config_error("EvolveParams: sigma_eps must be finite and >= 0");
    if (!std::isfinite(mu) || !std::isfinite(gamma) || !std::isfinite(beta) ||
        !std::isfinite(delta))
      throw invalid_config_error("EvolveParams: coefficients must be finite");
  }
};

enum class ModelForm { CenteredGeneral, PivotContagion, HomophilyDrive };

/// Which contagion term drives the evolution step.
///
/// CenteredGeneral uses sum_j W_ij (y0_j - mean(y0)) together with a centered
/// outdegree term. PivotContagion(d) uses sum_j W_ij (y0_j - d) paired with a
/// raw outdegree term delta * D_i, which is the form whose pivot algebra is
/// exactly absorbed by (mu, beta, delta - beta*d). HomophilyDrive uses
/// sum_j W_ij (y0_j - y0_i).
struct ModelSpec {
  ModelForm form = ModelForm::CenteredGeneral;
  double pivot = 0.0;

  static ModelSpec centered() { return {}; }
  static ModelSpec pivot_contagion(double d) {
    if (!std::isfinite(d))
      throw invalid_config_error("ModelSpec: pivot must be finite");
    return {ModelForm::PivotContagion, d};
  }
  static ModelSpec homophily_drive() { return {ModelForm::HomophilyDrive, 0.0}; }

  std::string name() const {
    switch (form) {
      case ModelForm::CenteredGeneral: return "centered";
      case ModelForm::PivotContagion:
        return "pivot(d=" + detail::format_g(pivot) + ")";
      case ModelForm::HomophilyDrive: return "homophily";
    }
    return "?";
  }
};

}  // namespace censornet
