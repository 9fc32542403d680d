#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "censornet/inference.hpp"
#include "censornet/netgen.hpp"
#include "censornet/oracle.hpp"
#include "censornet/student_t.hpp"

using namespace censornet;

namespace {

DesignMatrix random_design(int n, RandomStream& rng) {
  DesignMatrix d;
  d.n = n;
  for (int j = 0; j < 4; ++j) {
    auto& col = d.cols[static_cast<std::size_t>(j)];
    col.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      col[static_cast<std::size_t>(i)] = j == 0 ? 1.0 : rng.normal();
  }
  return d;
}

std::vector<double> predict(const DesignMatrix& d,
                            const std::array<double, 4>& coef) {
  std::vector<double> y(static_cast<std::size_t>(d.n), 0.0);
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < 4; ++j)
      y[static_cast<std::size_t>(i)] +=
          coef[static_cast<std::size_t>(j)] *
          d.cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  return y;
}

}  // namespace

TEST_CASE("student t quantiles match published values to 1e-8") {
  struct Case {
    double p, df, expected;
  };
  // Reference values from an independent statistics library.
  const Case cases[] = {
      {0.975, 1, 12.706204736432095},  {0.975, 2, 4.302652729696142},
      {0.975, 5, 2.570581835636314},   {0.975, 10, 2.2281388519649385},
      {0.995, 7, 3.4994832973505026},  {0.75, 3, 0.7648923284043453},
      {0.975, 30, 2.0422724563012373}, {0.975, 96, 1.9849843115310182},
      {0.975, 1000000, 1.9599663568141066},
  };
  for (const auto& c : cases)
    REQUIRE(student_t_quantile(c.p, c.df) == Catch::Approx(c.expected).margin(1e-8));
}

TEST_CASE("student t cdf matches reference points and symmetry") {
  REQUIRE(student_t_cdf(0.0, 5) == Catch::Approx(0.5).margin(1e-14));
  REQUIRE(student_t_cdf(1.0, 1) == Catch::Approx(0.7500000000000002).margin(1e-10));
  REQUIRE(student_t_cdf(2.5, 7) == Catch::Approx(0.9795038907071236).margin(1e-10));
  REQUIRE(student_t_cdf(0.3, 100) == Catch::Approx(0.6176000598498482).margin(1e-10));
  for (const double t : {0.3, 1.7, 4.2})
    REQUIRE(student_t_cdf(-t, 9) ==
            Catch::Approx(1.0 - student_t_cdf(t, 9)).margin(1e-12));
  REQUIRE(student_t_quantile(0.25, 3) ==
          Catch::Approx(-student_t_quantile(0.75, 3)).margin(1e-12));
}

TEST_CASE("t statistic arithmetic and preconditions") {
  REQUIRE(t_statistic(1.0, 1.0, 0.5) == 0.0);
  REQUIRE(t_statistic(2.0, 1.0, 0.5) == 2.0);
  REQUIRE_THROWS_AS(t_statistic(1.0, 0.0, 0.0), invalid_input_error);
  REQUIRE_THROWS_AS(t_statistic(1.0, 0.0, -1.0), invalid_input_error);
}

TEST_CASE("coverage decision at the normal-limit quantile") {
  const int df = 1000000;
  REQUIRE(covered(1.959 * 0.5 + 1.0, 1.0, 0.5, df, 0.95));
  REQUIRE_FALSE(covered(1.961 * 0.5 + 1.0, 1.0, 0.5, df, 0.95));
  REQUIRE(covered(3.0, 3.0, 0.7, 12, 0.95));  // estimate equals truth
  REQUIRE(covered(3.0, 3.0, 0.7, 12, 0.5));
  REQUIRE_THROWS_AS(covered(1.0, 0.0, 0.0, 10, 0.95), invalid_input_error);
  REQUIRE_THROWS_AS(covered(1.0, 0.0, 1.0, 0, 0.95), invalid_input_error);
  REQUIRE_THROWS_AS(covered(1.0, 0.0, 1.0, 10, 1.0), invalid_input_error);
}

TEST_CASE("deflate_delta rescales by the retained-tie fraction") {
  REQUIRE(deflate_delta(10.0, 1.0, 10.0) == 1.0);
  REQUIRE(deflate_delta(0.37, 5.0, 5.0) == 0.37);
  REQUIRE_THROWS_AS(deflate_delta(1.0, 1.0, 0.0), invalid_input_error);
}

TEST_CASE("build_design reproduces the generative regressors when X = W") {
  GenParams p;
  p.n = 20;
  p.target_mean_outdegree = 4.0;
  RandomStream rng(31);
  RandomStream traits = rng.fork(1), net = rng.fork(2);
  const TraitVector y0 = sample_traits(p.n, traits);
  const GregVector alpha(std::vector<double>(20, 0.0));
  const Sociomatrix w = generate_network(y0, alpha, p, net).w;

  const DesignMatrix d = build_design(y0, w);
  const double ybar = y0.mean();
  double dbar = 0.0;
  for (int i = 0; i < p.n; ++i) dbar += w.outdegree(i);
  dbar /= p.n;
  for (int i = 0; i < p.n; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    REQUIRE(d.cols[0][ii] == 1.0);
    REQUIRE(d.cols[1][ii] == Catch::Approx(y0.values[ii] - ybar).margin(1e-12));
    double contagion = 0.0;
    for (int j = 0; j < p.n; ++j)
      if (w.at(i, j)) contagion += y0.values[static_cast<std::size_t>(j)] - ybar;
    REQUIRE(d.cols[2][ii] == Catch::Approx(contagion).margin(1e-12));
    REQUIRE(d.cols[3][ii] == Catch::Approx(w.outdegree(i) - dbar).margin(1e-12));
  }

  // Centered columns sum to zero.
  double sum1 = 0.0, sum3 = 0.0;
  for (int i = 0; i < p.n; ++i) {
    sum1 += d.cols[1][static_cast<std::size_t>(i)];
    sum3 += d.cols[3][static_cast<std::size_t>(i)];
  }
  REQUIRE(std::abs(sum1) <= 1e-10 * p.n);
  REQUIRE(std::abs(sum3) <= 1e-10 * p.n);
}

TEST_CASE("build_design degenerate columns") {
  const TraitVector y0(std::vector<double>{0.5, -0.5, 1.5, -1.5, 0.0, 1.0});
  SECTION("identical row sums zero out the outdegree column") {
    Sociomatrix x(6);
    for (int i = 0; i < 6; ++i) x.set(i, (i + 1) % 6, true);
    const DesignMatrix d = build_design(y0, x);
    for (double v : d.cols[3]) REQUIRE(v == 0.0);
  }
  SECTION("an empty observed matrix zeroes contagion and outdegree") {
    const DesignMatrix d = build_design(y0, Sociomatrix(6));
    for (double v : d.cols[2]) REQUIRE(v == 0.0);
    for (double v : d.cols[3]) REQUIRE(v == 0.0);
  }
}

TEST_CASE("fit_ols interpolates noiseless data exactly") {
  RandomStream rng(41);
  const DesignMatrix d = random_design(25, rng);
  const std::array<double, 4> truth = {0.7, -0.3, 1.1, 0.25};
  const FitResult fit = fit_ols(d, TraitVector(predict(d, truth)));
  REQUIRE(fit.rank == 4);
  for (int j = 0; j < 4; ++j) {
    const std::size_t jj = static_cast<std::size_t>(j);
    REQUIRE(fit.identifiable[jj]);
    REQUIRE(*fit.estimates[jj] ==
            Catch::Approx(truth[jj]).epsilon(1e-8).margin(1e-10));
  }
  REQUIRE(fit.sigma_hat <= 1e-10);
}

TEST_CASE("fit_ols drops a zero outdegree column and flags it") {
  RandomStream rng(42);
  DesignMatrix d = random_design(30, rng);
  for (double& v : d.cols[3]) v = 0.0;
  std::vector<double> y(30);
  for (double& v : y) v = rng.normal();
  const FitResult fit = fit_ols(d, TraitVector(y));
  REQUIRE(fit.identifiable == std::array<bool, 4>{true, true, true, false});
  REQUIRE(fit.rank == 3);
  REQUIRE(fit.residual_df == 27);
  REQUIRE_FALSE(fit.estimates[3].has_value());
  REQUIRE_FALSE(fit.std_errors[3].has_value());
  for (int j = 0; j < 3; ++j) REQUIRE(fit.estimates[static_cast<std::size_t>(j)]);
}

TEST_CASE("fit_ols drops an exactly collinear column deterministically") {
  RandomStream rng(43);
  DesignMatrix d = random_design(30, rng);
  // Make the outdegree column a linear combination of earlier columns.
  for (int i = 0; i < 30; ++i)
    d.cols[3][static_cast<std::size_t>(i)] =
        2.0 * d.cols[1][static_cast<std::size_t>(i)] -
        d.cols[2][static_cast<std::size_t>(i)];
  std::vector<double> y(30);
  for (double& v : y) v = rng.normal();
  const FitResult fit = fit_ols(d, TraitVector(y));
  REQUIRE(fit.identifiable == std::array<bool, 4>{true, true, true, false});
}

TEST_CASE("fit_ols agrees with the normal-equations oracle") {
  RandomStream rng(44);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 20 + static_cast<int>(rng.uniform_index(31));
    const DesignMatrix d = random_design(n, rng);
    std::vector<double> y(static_cast<std::size_t>(n));
    for (double& v : y) v = rng.normal();
    const FitResult fit = fit_ols(d, TraitVector(y));
    const NormalEquationsFit ref = normal_equations_fit(d, y);
    for (int j = 0; j < 4; ++j) {
      const std::size_t jj = static_cast<std::size_t>(j);
      REQUIRE(*fit.estimates[jj] ==
              Catch::Approx(ref.estimates[jj]).epsilon(1e-8).margin(1e-12));
      REQUIRE(*fit.std_errors[jj] ==
              Catch::Approx(ref.std_errors[jj]).epsilon(1e-8).margin(1e-12));
    }
  }
}

TEST_CASE("refitting on fitted values is idempotent") {
  RandomStream rng(45);
  const DesignMatrix d = random_design(40, rng);
  std::vector<double> y(40);
  for (double& v : y) v = rng.normal();
  const FitResult first = fit_ols(d, TraitVector(y));
  std::array<double, 4> coef{};
  for (int j = 0; j < 4; ++j)
    coef[static_cast<std::size_t>(j)] = *first.estimates[static_cast<std::size_t>(j)];
  const FitResult second = fit_ols(d, TraitVector(predict(d, coef)));
  for (int j = 0; j < 4; ++j)
    REQUIRE(*second.estimates[static_cast<std::size_t>(j)] ==
            Catch::Approx(coef[static_cast<std::size_t>(j)]).margin(1e-10));
}

TEST_CASE("shifting covariates changes only the intercept") {
  RandomStream rng(46);
  const DesignMatrix centered = random_design(35, rng);
  DesignMatrix shifted = centered;
  const std::array<double, 4> shift = {0.0, 3.0, -1.5, 7.0};
  for (int j = 1; j < 4; ++j)
    for (double& v : shifted.cols[static_cast<std::size_t>(j)])
      v += shift[static_cast<std::size_t>(j)];
  std::vector<double> y(35);
  for (double& v : y) v = rng.normal();
  const FitResult a = fit_ols(centered, TraitVector(y));
  const FitResult b = fit_ols(shifted, TraitVector(y));
  for (int j = 1; j < 4; ++j)
    REQUIRE(*a.estimates[static_cast<std::size_t>(j)] ==
            Catch::Approx(*b.estimates[static_cast<std::size_t>(j)])
                .epsilon(1e-9)
                .margin(1e-12));
}

TEST_CASE("residuals are orthogonal to every retained column") {
  RandomStream rng(47);
  const DesignMatrix d = random_design(45, rng);
  std::vector<double> y(45);
  for (double& v : y) v = rng.normal();
  const FitResult fit = fit_ols(d, TraitVector(y));
  std::array<double, 4> coef{};
  for (int j = 0; j < 4; ++j)
    coef[static_cast<std::size_t>(j)] = *fit.estimates[static_cast<std::size_t>(j)];
  const std::vector<double> fitted = predict(d, coef);
  for (int j = 0; j < 4; ++j) {
    double inner = 0.0, scale = 0.0;
    for (int i = 0; i < 45; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      inner += (y[ii] - fitted[ii]) * d.cols[static_cast<std::size_t>(j)][ii];
      scale += d.cols[static_cast<std::size_t>(j)][ii] *
               d.cols[static_cast<std::size_t>(j)][ii];
    }
    REQUIRE(std::abs(inner) <= 1e-8 * std::sqrt(scale));
  }
}

TEST_CASE("fit_ols input validation") {
  RandomStream rng(48);
  DesignMatrix d = random_design(3, rng);
  std::vector<double> y3 = {1.0, 2.0, 3.0};
  REQUIRE_THROWS_AS(fit_ols(d, TraitVector(y3)), degenerate_fit_error);

  DesignMatrix good = random_design(10, rng);
  std::vector<double> y10(10, 1.0);
  y10[4] = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(fit_ols(good, TraitVector(y10)), invalid_input_error);

  DesignMatrix bad_col = random_design(10, rng);
  bad_col.cols[2][3] = std::numeric_limits<double>::infinity();
  REQUIRE_THROWS_AS(fit_ols(bad_col, TraitVector(std::vector<double>(10, 0.0))),
                    invalid_input_error);
}

TEST_CASE("null t statistics follow the t distribution") {
  // Fixed design, 2000 noise draws: the empirical distribution of the gamma
  // t statistic should track t(df) closely and 95% intervals should cover.
  const int n = 30;
  RandomStream rng(49);
  const DesignMatrix d = random_design(n, rng);
  const std::array<double, 4> truth = {0.4, -0.2, 0.9, 0.1};
  const std::vector<double> signal = predict(d, truth);

  constexpr int reps = 2000;
  std::vector<double> tstats;
  int cover = 0;
  RandomStream root(50);
  for (int rep = 0; rep < reps; ++rep) {
    RandomStream noise = root.fork(static_cast<std::uint64_t>(rep));
    std::vector<double> y = signal;
    for (double& v : y) v += noise.normal();
    const FitResult fit = fit_ols(d, TraitVector(y));
    tstats.push_back(t_statistic(*fit.estimates[1], truth[1], *fit.std_errors[1]));
    if (covered(*fit.estimates[1], truth[1], *fit.std_errors[1], fit.residual_df,
                0.95))
      ++cover;
  }

  const double coverage = static_cast<double>(cover) / reps;
  REQUIRE(coverage > 0.93);
  REQUIRE(coverage < 0.97);

  std::sort(tstats.begin(), tstats.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < tstats.size(); ++i) {
    const double cdf = student_t_cdf(tstats[i], n - 4);
    const double lo = static_cast<double>(i) / reps;
    const double hi = static_cast<double>(i + 1) / reps;
    ks = std::max({ks, std::abs(cdf - lo), std::abs(cdf - hi)});
  }
  REQUIRE(ks < 1.63 / std::sqrt(static_cast<double>(reps)));  // 1% critical value
}
