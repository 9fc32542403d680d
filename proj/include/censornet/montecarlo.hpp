#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "censornet/censoring.hpp"
#include "censornet/config.hpp"
#include "censornet/inference.hpp"
#include "censornet/netgen.hpp"
#include "censornet/trait_process.hpp"

namespace censornet {

// Salts for the per-replication stream tree.
namespace stream_role {
inline constexpr std::uint64_t kScenario = 1;
inline constexpr std::uint64_t kTraits = 2;
inline constexpr std::uint64_t kGregariousness = 3;
inline constexpr std::uint64_t kNetwork = 4;
inline constexpr std::uint64_t kNoise = 5;
inline constexpr std::uint64_t kCensor = 6;
}  // namespace stream_role

/// Everything needed to reproduce one replication.
struct Scenario {
  GenParams gen;
  EvolveParams evolve;
  ModelSpec model;
  CensorScheme scheme;
  std::uint64_t seed = 0;
};

/// One CSV row: scenario truth, realized network statistics, and the fit.
struct CoefCell {
  std::optional<double> estimate;
  std::optional<double> std_error;
  std::optional<double> t_stat;
  std::optional<bool> covered95;
  bool identifiable = false;
};

struct ReplicationRecord {
  long replication_id = 0;
  std::string status = "ok";
  std::uint64_t seed = 0;
  int n = 0;
  double target_mean_outdegree = 0.0;
  std::string model;
  std::string scheme;
  double mu_true = 0.0, gamma_true = 0.0, beta_true = 0.0, delta_true = 0.0;
  double sigma_eps = 0.0, sigma_h = 0.0, h = 0.0, r_in = 0.0, r_out = 0.0;
  std::optional<double> omega;
  std::optional<double> mean_outdeg_true;
  std::optional<double> mean_outdeg_censored;
  std::optional<long> zero_namers;
  std::optional<int> rank;
  std::optional<double> sigma_hat;
  std::optional<double> max_leverage;
  std::array<CoefCell, 4> coef;  // mu, gamma, beta, delta
  std::optional<double> deflated_delta;

  bool ok() const { return status == "ok"; }
};

namespace detail {

inline double draw_param(const ParamRange& range, RandomStream& rng) {
  if (rng.uniform01() < range.zero_prob) return 0.0;
  return rng.uniform(range.lo, range.hi);
}

}  // namespace detail

/// Draws one scenario: each evolution/network parameter is zero with its
/// configured probability, otherwise uniform on its range; n comes from the
/// configured node-count set and the scheme from the configured scheme list.
inline Scenario sample_scenario(const ExperimentConfig& cfg, RandomStream& rng) {
  if (cfg.node_counts.empty() || cfg.schemes.empty())
    throw invalid_config_error("sample_scenario: empty node_counts or schemes");
  Scenario s;
  s.gen.n = cfg.node_counts[rng.uniform_index(cfg.node_counts.size())];
  s.gen.target_mean_outdegree = cfg.target_mean_outdegree;
  s.evolve.mu = cfg.mu;
  s.evolve.sigma_eps = cfg.sigma_eps;
  s.evolve.gamma = detail::draw_param(cfg.gamma, rng);
  s.evolve.beta = detail::draw_param(cfg.beta, rng);
  s.evolve.delta = detail::draw_param(cfg.delta, rng);
  s.gen.sigma_h = detail::draw_param(cfg.sigma_h, rng);
  s.gen.h = detail::draw_param(cfg.h, rng);
  for (long tries = 0;; ++tries) {
    s.gen.r_in = detail::draw_param(cfg.r_in, rng);
    s.gen.r_out = detail::draw_param(cfg.r_out, rng);
    if (s.gen.latent_variance() > 0.0) break;
    if (tries >= 1000000)
      throw invalid_config_error(
          "sample_scenario: cannot satisfy r_in^2 + r_out^2 < 1");
  }
  s.model = cfg.model;
  s.scheme = cfg.schemes[rng.uniform_index(cfg.schemes.size())];
  s.seed = rng.key();
  return s;
}

/// Runs the full pipeline for one scenario. Module failures are captured in
/// the record's status code; they never abort a batch.
inline ReplicationRecord run_replication(const Scenario& s) {
  ReplicationRecord rec;
  rec.seed = s.seed;
  rec.n = s.gen.n;
  rec.target_mean_outdegree = s.gen.target_mean_outdegree;
  rec.model = s.model.name();
  rec.scheme = s.scheme.descriptor();
  rec.mu_true = s.evolve.mu;
  rec.gamma_true = s.evolve.gamma;
  rec.beta_true = s.evolve.beta;
  rec.delta_true = s.evolve.delta;
  rec.sigma_eps = s.evolve.sigma_eps;
  rec.sigma_h = s.gen.sigma_h;
  rec.h = s.gen.h;
  rec.r_in = s.gen.r_in;
  rec.r_out = s.gen.r_out;

  try {
    RandomStream traits_rng(derive_key(s.seed, stream_role::kTraits));
    RandomStream greg_rng(derive_key(s.seed, stream_role::kGregariousness));
    RandomStream net_rng(derive_key(s.seed, stream_role::kNetwork));
    RandomStream noise_rng(derive_key(s.seed, stream_role::kNoise));
    RandomStream censor_rng(derive_key(s.seed, stream_role::kCensor));

    const TraitVector y0 = sample_traits(s.gen.n, traits_rng);
    const GregVector alpha = sample_gregariousness(s.gen.n, s.gen.sigma_h, greg_rng);
    const GeneratedNetwork net = generate_network(y0, alpha, s.gen, net_rng);
    const TraitVector y1 = evolve(y0, net.w, s.evolve, s.model, noise_rng);
    const Sociomatrix x = apply_scheme(net.w, s.scheme, y0, censor_rng);

    rec.omega = net.omega;
    rec.mean_outdeg_true = net.w.mean_outdegree();
    rec.mean_outdeg_censored = x.mean_outdegree();
    long zero_namers = 0;
    for (int i = 0; i < x.n(); ++i)
      if (x.outdegree(i) == 0) ++zero_namers;
    rec.zero_namers = zero_namers;

    const FitResult fit = fit_ols(build_design(y0, x), y1);
    rec.rank = fit.rank;
    rec.sigma_hat = fit.sigma_hat;
    rec.max_leverage = fit.max_leverage;

    const std::array<double, 4> truth = {s.evolve.mu, s.evolve.gamma,
                                         s.evolve.beta, s.evolve.delta};
    double y_rms = 0.0;
    for (double v : y1.values) y_rms += v * v;
    y_rms = std::sqrt(y_rms / static_cast<double>(y1.size()));
    // An interpolating fit leaves sigma_hat at the rounding floor; its
    // interval degenerates to the point estimate.
    const bool exact_fit = fit.sigma_hat <= 1e-10 * std::max(1.0, y_rms);

    for (int j = 0; j < 4; ++j) {
      const std::size_t jj = static_cast<std::size_t>(j);
      CoefCell& cell = rec.coef[jj];
      cell.identifiable = fit.identifiable[jj];
      if (!cell.identifiable) continue;
      cell.estimate = fit.estimates[jj];
      cell.std_error = fit.std_errors[jj];
      if (!exact_fit && *cell.std_error > 0.0) {
        cell.t_stat = t_statistic(*cell.estimate, truth[jj], *cell.std_error);
        cell.covered95 =
            covered(*cell.estimate, truth[jj], *cell.std_error, fit.residual_df, 0.95);
      } else {
        cell.covered95 =
            std::abs(*cell.estimate - truth[jj]) <= 1e-8 * (1.0 + std::abs(truth[jj]));
      }
    }
    if (s.scheme.kind == CensorKind::Fractional && rec.coef[kDelta].estimate)
      rec.deflated_delta = deflate_delta(*rec.coef[kDelta].estimate,
                                         *rec.mean_outdeg_censored,
                                         *rec.mean_outdeg_true);
  } catch (const std::exception& e) {
    rec.status = error_code(e);
  }
  return rec;
}

/// Runs R replications. Replication r draws everything from a stream keyed
/// by (master_seed, r), so the records are a pure function of the config and
/// seed regardless of worker count or schedule. Records are returned in
/// replication order.
inline std::vector<ReplicationRecord> run_experiment(
    const ExperimentConfig& cfg, unsigned workers = 0,
    const std::function<void(long, long)>& progress = {}) {
  cfg.validate();
  const long total = cfg.replications;
  std::vector<ReplicationRecord> records(static_cast<std::size_t>(total));

  const auto run_one = [&cfg, &records](long r) {
    const std::uint64_t rep_key =
        derive_key(cfg.master_seed, static_cast<std::uint64_t>(r));
    RandomStream scenario_rng(derive_key(rep_key, stream_role::kScenario));
    Scenario s = sample_scenario(cfg, scenario_rng);
    s.seed = rep_key;
    records[static_cast<std::size_t>(r)] = run_replication(s);
    records[static_cast<std::size_t>(r)].replication_id = r;
  };

  if (workers == 0) {
    workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
  }
  workers = static_cast<unsigned>(
      std::min<long>(static_cast<long>(workers), total));

  if (workers <= 1) {
    for (long r = 0; r < total; ++r) {
      run_one(r);
      if (progress) progress(r + 1, total);
    }
    return records;
  }

  std::atomic<long> next{0};
  std::atomic<long> done{0};
  std::mutex progress_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const long r = next.fetch_add(1);
        if (r >= total) return;
        run_one(r);
        const long completed = done.fetch_add(1) + 1;
        if (progress) {
          std::lock_guard<std::mutex> lock(progress_mutex);
          progress(completed, total);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  return records;
}

}  // namespace censornet
