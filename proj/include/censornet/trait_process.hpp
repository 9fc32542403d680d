#pragma once

#include <vector>

#include "censornet/random.hpp"
#include "censornet/sociomatrix.hpp"
#include "censornet/types.hpp"

namespace censornet {

namespace detail {

/// sum_j W_ij * y0_j for every ego.
inline std::vector<double> weighted_alter_sum(const Sociomatrix& w,
                                              const TraitVector& y0) {
  const int n = w.n();
  std::vector<double> s(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      if (w.at(i, j)) acc += y0.values[static_cast<std::size_t>(j)];
    s[static_cast<std::size_t>(i)] = acc;
  }
  return s;
}

}  // namespace detail

/// Per-ego contagion covariate under the given model form, uncentered:
/// raw alter sum for CenteredGeneral, pivoted sum for PivotContagion(d),
/// alter-minus-ego differences for HomophilyDrive.
inline std::vector<double> contagion_covariate(const Sociomatrix& w,
                                               const TraitVector& y0,
                                               const ModelSpec& spec) {
  if (static_cast<int>(y0.size()) != w.n())
    throw invalid_input_error("contagion_covariate: dimension mismatch");
  std::vector<double> s = detail::weighted_alter_sum(w, y0);
  const int n = w.n();
  switch (spec.form) {
    case ModelForm::CenteredGeneral:
      break;
    case ModelForm::PivotContagion:
      for (int i = 0; i < n; ++i)
        s[static_cast<std::size_t>(i)] -= spec.pivot * w.outdegree(i);
      break;
    case ModelForm::HomophilyDrive:
      for (int i = 0; i < n; ++i)
        s[static_cast<std::size_t>(i)] -=
            static_cast<double>(w.outdegree(i)) * y0.values[static_cast<std::size_t>(i)];
      break;
  }
  return s;
}

/// One evolution step of the trait on the network.
///
/// CenteredGeneral:
///   y1_i = mu + gamma*(y0_i - ybar) + beta*sum_j W_ij (y0_j - ybar)
///        + delta*(D_i - Dbar) + eps_i
/// PivotContagion(d) pairs the pivoted contagion sum with a raw outdegree
/// term and is evaluated through its exact zero-pivot expansion,
///   beta*sum_j W_ij y0_j + (delta - beta*d)*D_i,
/// so reparameterize_pivot() is an exact identity in floating point.
/// HomophilyDrive swaps the contagion term for beta*sum_j W_ij (y0_j - y0_i).
inline TraitVector evolve(const TraitVector& y0, const Sociomatrix& w,
                          const EvolveParams& ep, const ModelSpec& spec,
                          RandomStream& rng) {
  const int n = w.n();
  if (static_cast<int>(y0.size()) != n)
    throw invalid_input_error("evolve: trait vector length must equal n");
  ep.validate();

  const double ybar = y0.mean();
  const std::vector<int> deg = w.outdegrees();
  double dbar = 0.0;
  for (int d : deg) dbar += d;
  dbar /= static_cast<double>(n);
  const std::vector<double> alter_sum = detail::weighted_alter_sum(w, y0);

  std::vector<double> y1(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    const double di = static_cast<double>(deg[ii]);
    double network_terms = 0.0;
    switch (spec.form) {
      case ModelForm::CenteredGeneral:
        network_terms = ep.beta * (alter_sum[ii] - di * ybar) +
                        ep.delta * (di - dbar);
        break;
      case ModelForm::PivotContagion:
        network_terms =
            ep.beta * alter_sum[ii] + (ep.delta - ep.beta * spec.pivot) * di;
        break;
      case ModelForm::HomophilyDrive:
        network_terms = ep.beta * (alter_sum[ii] - di * y0.values[ii]) +
                        ep.delta * (di - dbar);
        break;
    }
    y1[ii] = ep.mu + ep.gamma * (y0.values[ii] - ybar) + network_terms +
             ep.sigma_eps * rng.normal();
  }
  return TraitVector(std::move(y1));
}

struct PivotReparam {
  double mu;
  double beta;
  double delta;
};

/// Zero-pivot coefficients equivalent to the PivotContagion(d) form:
/// beta*sum_j W_ij (y0_j - d) + delta*D_i
///   = beta*sum_j W_ij y0_j + (delta - beta*d)*D_i.
inline PivotReparam reparameterize_pivot(double mu, double beta, double delta,
                                         double d) {
  if (!std::isfinite(mu) || !std::isfinite(beta) || !std::isfinite(delta) ||
      !std::isfinite(d))
    throw invalid_input_error("reparameterize_pivot: arguments must be finite");
  return {mu, beta, delta - beta * d};
}

}  // namespace censornet
