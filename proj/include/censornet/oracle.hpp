#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "censornet/censoring.hpp"
#include "censornet/inference.hpp"
#include "censornet/netgen.hpp"
#include "censornet/trait_process.hpp"

namespace censornet {

/// Brute-force OLS through the normal equations, independent of the
/// Gram-Schmidt path in fit_ols. Full-rank designs only.
struct NormalEquationsFit {
  std::array<double, 4> estimates{};
  std::array<double, 4> std_errors{};
};

inline NormalEquationsFit normal_equations_fit(const DesignMatrix& d,
                                               const std::vector<double>& y) {
  const int n = d.n;
  // Build the 4x4 Gram matrix and right-hand side.
  std::array<std::array<double, 8>, 4> aug{};  // [X'X | I] for Gauss-Jordan
  std::array<double, 4> xty{};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        s += d.cols[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] *
             d.cols[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
      aug[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = s;
    }
    aug[static_cast<std::size_t>(a)][static_cast<std::size_t>(4 + a)] = 1.0;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      s += d.cols[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] *
           y[static_cast<std::size_t>(i)];
    xty[static_cast<std::size_t>(a)] = s;
  }

  // Gauss-Jordan with partial pivoting to invert X'X.
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
          std::abs(aug[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)]))
        pivot = r;
    std::swap(aug[static_cast<std::size_t>(col)], aug[static_cast<std::size_t>(pivot)]);
    const double diag =
        aug[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
    if (diag == 0.0)
      throw invalid_input_error("normal_equations_fit: singular Gram matrix");
    for (int c = 0; c < 8; ++c)
      aug[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)] /= diag;
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double factor =
          aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      for (int c = 0; c < 8; ++c)
        aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            factor * aug[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
    }
  }

  NormalEquationsFit out;
  for (int a = 0; a < 4; ++a) {
    double s = 0.0;
    for (int b = 0; b < 4; ++b)
      s += aug[static_cast<std::size_t>(a)][static_cast<std::size_t>(4 + b)] *
           xty[static_cast<std::size_t>(b)];
    out.estimates[static_cast<std::size_t>(a)] = s;
  }

  double rss = 0.0;
  for (int i = 0; i < n; ++i) {
    double fitted = 0.0;
    for (int a = 0; a < 4; ++a)
      fitted += out.estimates[static_cast<std::size_t>(a)] *
                d.cols[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
    const double resid = y[static_cast<std::size_t>(i)] - fitted;
    rss += resid * resid;
  }
  const double sigma2 = rss / static_cast<double>(n - 4);
  for (int a = 0; a < 4; ++a)
    out.std_errors[static_cast<std::size_t>(a)] = std::sqrt(
        sigma2 * aug[static_cast<std::size_t>(a)][static_cast<std::size_t>(4 + a)]);
  return out;
}

struct OracleCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
}

inline OracleCheck oracle_ols_vs_normal_equations(std::uint64_t seed) {
  RandomStream rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 20 + static_cast<int>(rng.uniform_index(41));
    DesignMatrix d;
    d.n = n;
    const std::array<double, 4> scale = {1.0, 1.0, 0.2, 5.0};
    for (int j = 0; j < 4; ++j) {
      auto& col = d.cols[static_cast<std::size_t>(j)];
      col.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        col[static_cast<std::size_t>(i)] =
            j == 0 ? 1.0 : scale[static_cast<std::size_t>(j)] * rng.normal();
    }
    std::vector<double> y(static_cast<std::size_t>(n));
    for (double& v : y) v = rng.normal();

    const FitResult fit = fit_ols(d, TraitVector(y));
    const NormalEquationsFit ref = normal_equations_fit(d, y);
    for (int j = 0; j < 4; ++j) {
      const std::size_t jj = static_cast<std::size_t>(j);
      if (!fit.identifiable[jj]) return {"", false, "column unexpectedly dropped"};
      worst = std::max(worst, rel_diff(*fit.estimates[jj], ref.estimates[jj]));
      worst = std::max(worst, rel_diff(*fit.std_errors[jj], ref.std_errors[jj]));
    }
  }
  return {"", worst <= 1e-8,
          "max relative difference " + format_g(worst) + " over 100 fits"};
}

inline OracleCheck oracle_edge_probability(std::uint64_t seed) {
  GenParams p;
  p.n = 5;
  p.r_in = 0.3;
  p.r_out = 0.2;
  p.h = 0.4;
  p.target_mean_outdegree = 2.0;
  const TraitVector y0(std::vector<double>{0.3, -1.2, 0.5, 2.0, -0.7});
  const GregVector alpha(std::vector<double>{0.1, -0.2, 0.0, 0.3, -0.1});
  const double omega = 0.6;
  constexpr int draws = 10000;

  std::array<std::array<int, 5>, 5> hits{};
  RandomStream rng(seed);
  for (int rep = 0; rep < draws; ++rep) {
    RandomStream draw_rng = rng.fork(static_cast<std::uint64_t>(rep));
    const auto z = sample_latent_edges(y0, alpha, p, draw_rng);
    const Sociomatrix w = threshold_edges(z, p.n, omega);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (w.at(i, j)) ++hits[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }

  double worst_sigma = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      if (i == j) continue;
      const double prob = edge_probability(
          alpha.values[static_cast<std::size_t>(i)],
          y0.values[static_cast<std::size_t>(i)],
          y0.values[static_cast<std::size_t>(j)], p, omega);
      const double freq =
          static_cast<double>(hits[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) /
          draws;
      const double se = std::sqrt(std::max(prob * (1.0 - prob) / draws, 1e-12));
      worst_sigma = std::max(worst_sigma, std::abs(freq - prob) / se);
    }
  return {"", worst_sigma <= 3.0,
          "worst pair deviation " + format_g(worst_sigma) + " MC standard errors"};
}

inline OracleCheck oracle_pivot_equivalence(std::uint64_t seed) {
  RandomStream rng(seed);
  GenParams p;
  p.n = 10;
  p.target_mean_outdegree = 3.0;
  RandomStream traits_rng = rng.fork(1);
  RandomStream greg_rng = rng.fork(2);
  RandomStream net_rng = rng.fork(3);
  const TraitVector y0 = sample_traits(p.n, traits_rng);
  const GregVector alpha = sample_gregariousness(p.n, 0.5, greg_rng);
  const Sociomatrix w = generate_network(y0, alpha, p, net_rng).w;

  EvolveParams ep;
  ep.mu = 1.0;
  ep.gamma = 0.4;
  ep.beta = 2.0;
  ep.delta = 0.5;
  ep.sigma_eps = 0.0;
  const double d = 3.0;

  RandomStream noise_a = rng.fork(4);
  RandomStream noise_b = rng.fork(4);
  const TraitVector lhs = evolve(y0, w, ep, ModelSpec::pivot_contagion(d), noise_a);
  const PivotReparam rp = reparameterize_pivot(ep.mu, ep.beta, ep.delta, d);
  EvolveParams ep0 = ep;
  ep0.mu = rp.mu;
  ep0.beta = rp.beta;
  ep0.delta = rp.delta;
  const TraitVector rhs = evolve(y0, w, ep0, ModelSpec::pivot_contagion(0.0), noise_b);

  for (std::size_t i = 0; i < lhs.size(); ++i)
    if (lhs.values[i] != rhs.values[i])
      return {"", false,
              "node " + std::to_string(i) + " differs by " +
                  format_g(lhs.values[i] - rhs.values[i])};
  return {"", true, "exact vector equality on a 10-node network"};
}

inline OracleCheck oracle_inclusion_probability(std::uint64_t seed) {
  constexpr int degree = 5;
  constexpr int cap = 2;
  constexpr int draws = 100000;
  Sociomatrix w(degree + 1);
  for (int j = 1; j <= degree; ++j) w.set(0, j, true);
  const TraitVector y0(std::vector<double>(degree + 1, 0.0));

  std::array<int, degree> hits{};
  RandomStream rng(seed);
  for (int rep = 0; rep < draws; ++rep) {
    RandomStream draw_rng = rng.fork(static_cast<std::uint64_t>(rep));
    const Sociomatrix x = censor_hard(w, cap, {}, y0, draw_rng);
    for (int j = 1; j <= degree; ++j)
      if (x.at(0, j)) ++hits[static_cast<std::size_t>(j - 1)];
  }

  const double expected = static_cast<double>(cap) / degree;
  const double se = std::sqrt(expected * (1.0 - expected) / draws);
  double worst_sigma = 0.0;
  for (int a = 0; a < degree; ++a)
    worst_sigma = std::max(
        worst_sigma,
        std::abs(static_cast<double>(hits[static_cast<std::size_t>(a)]) / draws -
                 expected) /
            se);
  return {"", worst_sigma <= 3.0,
          "worst alter deviation " + format_g(worst_sigma) + " MC standard errors"};
}

}  // namespace detail

/// Built-in cross-checks of the numeric core against independent routes.
inline std::vector<OracleCheck> run_oracle_suite(std::uint64_t seed = 0x0c5e5u) {
  std::vector<OracleCheck> checks;
  OracleCheck c;

  c = detail::oracle_ols_vs_normal_equations(derive_key(seed, 1));
  c.name = "ols_vs_normal_equations";
  checks.push_back(c);

  c = detail::oracle_edge_probability(derive_key(seed, 2));
  c.name = "edge_probability_vs_monte_carlo";
  checks.push_back(c);

  c = detail::oracle_pivot_equivalence(derive_key(seed, 3));
  c.name = "pivot_reparameterization_exact";
  checks.push_back(c);

  c = detail::oracle_inclusion_probability(derive_key(seed, 4));
  c.name = "uniform_censoring_inclusion_probability";
  checks.push_back(c);

  return checks;
}

}  // namespace censornet
