#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "censornet/montecarlo.hpp"

namespace censornet {

/// Stratification bands. Heterogeneity: sigma_h = 0, 0 < sigma_h < cut,
/// sigma_h >= cut. Homophily: h < 0, h = 0, h > 0.
struct StrataConfig {
  double het_high_cut = 1.0;

  std::string het_band(double sigma_h) const {
    if (sigma_h == 0.0) return "zero";
    return sigma_h < het_high_cut ? "low" : "high";
  }
  static std::string hom_band(double h) {
    if (h < 0.0) return "neg";
    return h == 0.0 ? "zero" : "pos";
  }
  std::string key(const ReplicationRecord& r) const {
    return "scheme=" + r.scheme + "|het=" + het_band(r.sigma_h) +
           "|hom=" + hom_band(r.h);
  }
};

inline constexpr int kTStatBins = 81;
inline constexpr double kTStatLo = -8.0;
inline constexpr double kTStatHi = 8.0;

/// Per-coefficient statistics within one stratum. Slopes regress the
/// estimate on the generative truth across replications; records whose
/// coefficient was unidentifiable are excluded from every statistic here and
/// counted in n_unidentifiable instead.
struct CoefSummary {
  long n_used = 0;
  long n_unidentifiable = 0;
  double frac_unidentifiable = 0.0;
  std::optional<double> mean_bias;
  std::optional<double> sd_bias;
  std::optional<double> slope_no_intercept;
  std::optional<double> slope_with_intercept;
  std::optional<double> coverage95;
  std::array<long, kTStatBins> t_hist{};
};

struct StratumSummary {
  long count = 0;
  std::array<CoefSummary, 4> coef;
};

struct Summary {
  long total = 0;
  long failed = 0;
  std::map<std::string, StratumSummary> strata;
};

namespace detail {

struct CoefAccumulator {
  long n_unident = 0;
  std::vector<double> truth, estimate;
  long covered_n = 0, covered_hits = 0;
  std::array<long, kTStatBins> hist{};

  void add(const ReplicationRecord& rec, int j) {
    const CoefCell& cell = rec.coef[static_cast<std::size_t>(j)];
    if (!cell.identifiable || !cell.estimate) {
      ++n_unident;
      return;
    }
    const std::array<double, 4> t = {rec.mu_true, rec.gamma_true, rec.beta_true,
                                     rec.delta_true};
    truth.push_back(t[static_cast<std::size_t>(j)]);
    estimate.push_back(*cell.estimate);
    if (cell.covered95) {
      ++covered_n;
      if (*cell.covered95) ++covered_hits;
    }
    if (cell.t_stat && *cell.t_stat >= kTStatLo && *cell.t_stat < kTStatHi) {
      const auto bin = static_cast<int>((*cell.t_stat - kTStatLo) /
                                        (kTStatHi - kTStatLo) * kTStatBins);
      ++hist[static_cast<std::size_t>(std::min(bin, kTStatBins - 1))];
    }
  }

  CoefSummary finish() const {
    CoefSummary out;
    out.n_used = static_cast<long>(truth.size());
    out.n_unidentifiable = n_unident;
    const long denom = out.n_used + n_unident;
    out.frac_unidentifiable =
        denom > 0 ? static_cast<double>(n_unident) / static_cast<double>(denom) : 0.0;
    out.t_hist = hist;
    if (out.n_used == 0) return out;

    double sum_bias = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i)
      sum_bias += estimate[i] - truth[i];
    const double mean_bias = sum_bias / static_cast<double>(out.n_used);
    out.mean_bias = mean_bias;
    if (out.n_used > 1) {
      double ss = 0.0;
      for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = estimate[i] - truth[i] - mean_bias;
        ss += d * d;
      }
      out.sd_bias = std::sqrt(ss / static_cast<double>(out.n_used - 1));
    }

    double sxx = 0.0, sxy = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      sxx += truth[i] * truth[i];
      sxy += truth[i] * estimate[i];
      sx += truth[i];
      sy += estimate[i];
    }
    const double m = static_cast<double>(out.n_used);
    if (sxx > 1e-30) out.slope_no_intercept = sxy / sxx;
    const double var_x = sxx - sx * sx / m;
    if (var_x > 1e-30)
      out.slope_with_intercept = (sxy - sx * sy / m) / var_x;
    if (covered_n > 0)
      out.coverage95 =
          static_cast<double>(covered_hits) / static_cast<double>(covered_n);
    return out;
  }
};

}  // namespace detail

/// Stratified summary over a record set. Failed replications are excluded
/// from strata and counted at the top level, so stratum counts plus the
/// failure count partition the records.
inline Summary summarize(const std::vector<ReplicationRecord>& records,
                         const StrataConfig& strata = {}) {
  long ok_count = 0;
  Summary out;
  out.total = static_cast<long>(records.size());
  std::map<std::string, std::pair<long, std::array<detail::CoefAccumulator, 4>>> acc;
  for (const auto& rec : records) {
    if (!rec.ok()) {
      ++out.failed;
      continue;
    }
    ++ok_count;
    auto& slot = acc[strata.key(rec)];
    ++slot.first;
    for (int j = 0; j < 4; ++j) slot.second[static_cast<std::size_t>(j)].add(rec, j);
  }
  if (ok_count == 0)
    throw invalid_input_error("summarize: no successful replication records");
  for (const auto& [key, slot] : acc) {
    StratumSummary s;
    s.count = slot.first;
    for (int j = 0; j < 4; ++j)
      s.coef[static_cast<std::size_t>(j)] =
          slot.second[static_cast<std::size_t>(j)].finish();
    out.strata.emplace(key, std::move(s));
  }
  return out;
}

inline nlohmann::json to_json(const Summary& summary) {
  nlohmann::json edges = nlohmann::json::array();
  for (int b = 0; b <= kTStatBins; ++b)
    edges.push_back(kTStatLo + (kTStatHi - kTStatLo) * b / kTStatBins);

  nlohmann::json root;
  root["total_replications"] = summary.total;
  root["failed"] = summary.failed;
  nlohmann::json strata = nlohmann::json::object();
  for (const auto& [key, s] : summary.strata) {
    nlohmann::json js;
    js["count"] = s.count;
    nlohmann::json coefs = nlohmann::json::object();
    for (int j = 0; j < 4; ++j) {
      const CoefSummary& c = s.coef[static_cast<std::size_t>(j)];
      nlohmann::json jc;
      jc["n_used"] = c.n_used;
      jc["n_unidentifiable"] = c.n_unidentifiable;
      jc["frac_unidentifiable"] = c.frac_unidentifiable;
      const auto set = [&jc](const char* name, const std::optional<double>& v) {
        if (v)
          jc[name] = *v;
        else
          jc[name] = nullptr;
      };
      set("mean_bias", c.mean_bias);
      set("sd_bias", c.sd_bias);
      set("slope_no_intercept", c.slope_no_intercept);
      set("slope_with_intercept", c.slope_with_intercept);
      set("coverage95", c.coverage95);
      jc["t_hist"] = {{"bin_edges", edges}, {"counts", c.t_hist}};
      coefs[kCoefficientNames[static_cast<std::size_t>(j)]] = std::move(jc);
    }
    js["coefficients"] = std::move(coefs);
    strata[key] = std::move(js);
  }
  root["strata"] = std::move(strata);
  return root;
}

}  // namespace censornet
