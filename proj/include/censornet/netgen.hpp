#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "censornet/random.hpp"
#include "censornet/sociomatrix.hpp"
#include "censornet/types.hpp"

namespace censornet {

/// n iid standard normal trait values.
inline TraitVector sample_traits(int n, RandomStream& rng) {
  if (n < 2) throw invalid_config_error("sample_traits: n must be >= 2");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = rng.normal();
  return TraitVector(std::move(v));
}

/// n iid N(0, sigma_h^2) gregariousness values; sigma_h = 0 gives all zeros.
inline GregVector sample_gregariousness(int n, double sigma_h, RandomStream& rng) {
  if (!(sigma_h >= 0.0))
    throw invalid_config_error("sample_gregariousness: sigma_h must be >= 0");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = sigma_h == 0.0 ? 0.0 : rng.normal(0.0, sigma_h);
  return GregVector(std::move(v));
}

/// Mean of the latent edge value from ego i toward alter j.
inline double latent_edge_mean(double alpha_i, double y0_i, double y0_j,
                               const GenParams& p) {
  return alpha_i + p.r_in * y0_j + p.r_out * y0_i - p.h * std::abs(y0_i - y0_j);
}

/// Latent Gaussian edge values for all ordered pairs, row-major; diagonal
/// cells are NaN placeholders. One draw per off-diagonal cell in (i, j) order.
inline std::vector<double> sample_latent_edges(const TraitVector& y0,
                                               const GregVector& alpha,
                                               const GenParams& p,
                                               RandomStream& rng) {
  const int n = p.n;
  if (static_cast<int>(y0.size()) != n || static_cast<int>(alpha.size()) != n)
    throw invalid_input_error("sample_latent_edges: vector lengths must equal n");
  const double var = p.latent_variance();
  if (!(var > 0.0))
    throw invalid_config_error("sample_latent_edges: require r_in^2 + r_out^2 < 1");
  const double sd = std::sqrt(var);
  std::vector<double> z(static_cast<std::size_t>(n) * n,
                        std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i < n; ++i) {
    const double a = alpha.values[static_cast<std::size_t>(i)];
    const double yi = y0.values[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double m =
          latent_edge_mean(a, yi, y0.values[static_cast<std::size_t>(j)], p);
      z[static_cast<std::size_t>(i) * n + j] = rng.normal(m, sd);
    }
  }
  return z;
}

/// Binary network from latent values at a fixed threshold.
inline Sociomatrix threshold_edges(const std::vector<double>& z, int n,
                                   double omega) {
  Sociomatrix w(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && z[static_cast<std::size_t>(i) * n + j] >= omega)
        w.set(i, j, true);
  return w;
}

struct GeneratedNetwork {
  Sociomatrix w;
  double omega = 0.0;
};

/// Draws the latent edge matrix and thresholds it at the empirical order
/// statistic that yields exactly round(n * target_mean_outdegree) arcs.
/// Ties at the threshold are broken by (i, j) order.
inline GeneratedNetwork generate_network(const TraitVector& y0,
                                         const GregVector& alpha,
                                         const GenParams& p, RandomStream& rng) {
  const int n = p.n;
  const long cells = static_cast<long>(n) * (n - 1);
  const long arcs = std::lround(static_cast<double>(n) * p.target_mean_outdegree);
  if (arcs <= 0)
    throw invalid_config_error("generate_network: target arc count rounds to 0");
  if (arcs > cells)
    throw invalid_config_error(
        "generate_network: target arc count exceeds n*(n-1)");

  const std::vector<double> z = sample_latent_edges(y0, alpha, p, rng);

  struct Cell {
    double z;
    int i, j;
  };
  std::vector<Cell> order;
  order.reserve(static_cast<std::size_t>(cells));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        order.push_back({z[static_cast<std::size_t>(i) * n + j], i, j});
  std::sort(order.begin(), order.end(), [](const Cell& a, const Cell& b) {
    if (a.z != b.z) return a.z > b.z;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  GeneratedNetwork out{Sociomatrix(n), order[static_cast<std::size_t>(arcs - 1)].z};
  for (long k = 0; k < arcs; ++k) {
    const Cell& c = order[static_cast<std::size_t>(k)];
    out.w.set(c.i, c.j, true);
  }
  return out;
}

/// Analytic tie probability P(Z_ij >= omega) under the latent edge model.
inline double edge_probability(double alpha_i, double y0_i, double y0_j,
                               const GenParams& p, double omega) {
  const double var = p.latent_variance();
  if (!(var > 0.0))
    throw invalid_config_error("edge_probability: require r_in^2 + r_out^2 < 1");
  const double m = latent_edge_mean(alpha_i, y0_i, y0_j, p);
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  return 0.5 * std::erfc((omega - m) / std::sqrt(var) * inv_sqrt2);
}

}  // namespace censornet
