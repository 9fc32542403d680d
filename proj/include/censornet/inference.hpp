#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "censornet/sociomatrix.hpp"
#include "censornet/student_t.hpp"
#include "censornet/types.hpp"

namespace censornet {

/// Coefficient slots of the fitted linear model, in design-column order.
enum Coefficient : int { kMu = 0, kGamma = 1, kBeta = 2, kDelta = 3 };
inline constexpr std::array<const char*, 4> kCoefficientNames = {"mu", "gamma",
                                                                 "beta", "delta"};

/// Four-column regression design. Column roles:
///   0 intercept, 1 autocorrelation y0 - mean(y0),
///   2 contagion sum_j X_ij (y0_j - mean(y0)), 3 observed outdegree centered.
/// Columns 1 and 3 are mean-zero by construction; column 2 carries the
/// trait centering inside the alter sum, matching the model actually fit
/// to a censored network, and so need not sum to zero.
struct DesignMatrix {
  int n = 0;
  std::array<std::vector<double>, 4> cols;
};

inline DesignMatrix build_design(const TraitVector& y0, const Sociomatrix& x) {
  const int n = x.n();
  if (static_cast<int>(y0.size()) != n)
    throw invalid_input_error("build_design: trait vector length must equal n");

  DesignMatrix d;
  d.n = n;
  for (auto& c : d.cols) c.assign(static_cast<std::size_t>(n), 0.0);

  const double ybar = y0.mean();
  std::vector<double> outdeg(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    d.cols[0][ii] = 1.0;
    d.cols[1][ii] = y0.values[ii] - ybar;
    double contagion = 0.0;
    for (int j = 0; j < n; ++j)
      if (x.at(i, j)) contagion += y0.values[static_cast<std::size_t>(j)] - ybar;
    d.cols[2][ii] = contagion;
    outdeg[ii] = static_cast<double>(x.outdegree(i));
  }
  const double dbar = detail::mean(outdeg);
  for (int i = 0; i < n; ++i)
    d.cols[3][static_cast<std::size_t>(i)] = outdeg[static_cast<std::size_t>(i)] - dbar;
  return d;
}

/// OLS output. Estimates and standard errors are absent for coefficients
/// whose design column was dropped as rank-deficient.
struct FitResult {
  std::array<std::optional<double>, 4> estimates;
  std::array<std::optional<double>, 4> std_errors;
  std::array<bool, 4> identifiable{false, false, false, false};
  int rank = 0;
  int residual_df = 0;
  double sigma_hat = 0.0;
  double max_leverage = 0.0;  // largest hat-matrix diagonal, for diagnostics
};

/// Least squares via sequential Gram-Schmidt in fixed column order
/// (intercept, autocorrelation, contagion, outdegree). A column is dropped
/// when its residual norm after projection on the preceding retained columns
/// falls to 1e-10 of its original norm, so identifiability flags are
/// deterministic and never reorder ties.
inline FitResult fit_ols(const DesignMatrix& d, const TraitVector& y1) {
  const int n = d.n;
  if (static_cast<int>(y1.size()) != n)
    throw invalid_input_error("fit_ols: response length must equal design rows");
  if (!detail::all_finite(y1.values))
    throw invalid_input_error("fit_ols: response contains non-finite values");
  for (const auto& c : d.cols)
    if (static_cast<int>(c.size()) != n || !detail::all_finite(c))
      throw invalid_input_error("fit_ols: design contains non-finite values");
  if (n <= 4)
    throw degenerate_fit_error("fit_ols: need more observations than columns");

  const auto dot = [n](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      s += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
    return s;
  };

  FitResult fit;
  std::vector<std::vector<double>> q;        // orthonormal retained columns
  std::vector<int> retained;                 // original column index per q
  std::array<std::array<double, 4>, 4> r{};  // r[k][j]: q_k . col_j

  for (int j = 0; j < 4; ++j) {
    std::vector<double> v = d.cols[static_cast<std::size_t>(j)];
    const double norm0 = std::sqrt(dot(v, v));
    for (int pass = 0; pass < 2; ++pass) {  // re-orthogonalize once
      for (std::size_t k = 0; k < q.size(); ++k) {
        const double proj = dot(q[k], v);
        r[k][static_cast<std::size_t>(j)] += proj;
        for (int i = 0; i < n; ++i)
          v[static_cast<std::size_t>(i)] -= proj * q[k][static_cast<std::size_t>(i)];
      }
    }
    const double norm1 = std::sqrt(dot(v, v));
    if (norm0 == 0.0 || norm1 <= 1e-10 * norm0) continue;  // dropped
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] /= norm1;
    r[q.size()][static_cast<std::size_t>(j)] = norm1;
    q.push_back(std::move(v));
    retained.push_back(j);
    fit.identifiable[static_cast<std::size_t>(j)] = true;
  }

  const int rank = static_cast<int>(q.size());
  fit.rank = rank;
  fit.residual_df = n - rank;
  if (fit.residual_df < 1)
    throw degenerate_fit_error("fit_ols: no residual degrees of freedom");

  std::vector<double> qty(static_cast<std::size_t>(rank));
  for (int k = 0; k < rank; ++k)
    qty[static_cast<std::size_t>(k)] = dot(q[static_cast<std::size_t>(k)], y1.values);

  // Back-substitute R b = Q'y on the retained columns.
  std::vector<double> b(static_cast<std::size_t>(rank), 0.0);
  for (int k = rank - 1; k >= 0; --k) {
    double s = qty[static_cast<std::size_t>(k)];
    for (int m = k + 1; m < rank; ++m)
      s -= r[static_cast<std::size_t>(k)]
            [static_cast<std::size_t>(retained[static_cast<std::size_t>(m)])] *
           b[static_cast<std::size_t>(m)];
    b[static_cast<std::size_t>(k)] =
        s / r[static_cast<std::size_t>(k)]
             [static_cast<std::size_t>(retained[static_cast<std::size_t>(k)])];
  }

  std::vector<double> residual = y1.values;
  for (int k = 0; k < rank; ++k)
    for (int i = 0; i < n; ++i)
      residual[static_cast<std::size_t>(i)] -=
          qty[static_cast<std::size_t>(k)] *
          q[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
  const double rss = dot(residual, residual);
  const double sigma2 = rss / static_cast<double>(fit.residual_df);
  fit.sigma_hat = std::sqrt(sigma2);

  // (G'G)^-1 = Rinv Rinv' with Rinv the inverse of the retained R block.
  std::vector<std::vector<double>> rinv(
      static_cast<std::size_t>(rank),
      std::vector<double>(static_cast<std::size_t>(rank), 0.0));
  for (int col = 0; col < rank; ++col) {
    for (int k = col; k >= 0; --k) {
      double s = (k == col) ? 1.0 : 0.0;
      for (int m = k + 1; m <= col; ++m)
        s -= r[static_cast<std::size_t>(k)]
              [static_cast<std::size_t>(retained[static_cast<std::size_t>(m)])] *
             rinv[static_cast<std::size_t>(m)][static_cast<std::size_t>(col)];
      rinv[static_cast<std::size_t>(k)][static_cast<std::size_t>(col)] =
          s / r[static_cast<std::size_t>(k)]
               [static_cast<std::size_t>(retained[static_cast<std::size_t>(k)])];
    }
  }

  for (int k = 0; k < rank; ++k) {
    double var_scale = 0.0;
    for (int m = k; m < rank; ++m)
      var_scale += rinv[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] *
                   rinv[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)];
    const std::size_t j = static_cast<std::size_t>(retained[static_cast<std::size_t>(k)]);
    fit.estimates[j] = b[static_cast<std::size_t>(k)];
    fit.std_errors[j] = fit.sigma_hat * std::sqrt(var_scale);
  }

  for (int i = 0; i < n; ++i) {
    double hii = 0.0;
    for (int k = 0; k < rank; ++k) {
      const double qi = q[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
      hii += qi * qi;
    }
    fit.max_leverage = std::max(fit.max_leverage, hii);
  }
  return fit;
}

inline double t_statistic(double estimate, double true_value, double std_error) {
  if (!(std_error > 0.0))
    throw invalid_input_error("t_statistic: std_error must be > 0");
  if (!std::isfinite(estimate) || !std::isfinite(true_value))
    throw invalid_input_error("t_statistic: arguments must be finite");
  return (estimate - true_value) / std_error;
}

/// Whether the two-sided t interval at the given level contains true_value.
inline bool covered(double estimate, double true_value, double std_error, int df,
                    double level) {
  if (!(level > 0.0 && level < 1.0))
    throw invalid_input_error("covered: level must lie in (0,1)");
  if (df < 1) throw invalid_input_error("covered: df must be >= 1");
  const double t = t_statistic(estimate, true_value, std_error);
  const double q =
      student_t_quantile(1.0 - (1.0 - level) / 2.0, static_cast<double>(df));
  return std::abs(t) <= q;
}

/// Rescales an outdegree-effect estimate by the retained-tie fraction.
inline double deflate_delta(double delta_hat, double mean_outdeg_censored,
                            double mean_outdeg_true) {
  if (!(mean_outdeg_true > 0.0))
    throw invalid_input_error("deflate_delta: mean true outdegree must be > 0");
  return delta_hat * (mean_outdeg_censored / mean_outdeg_true);
}

}  // namespace censornet
