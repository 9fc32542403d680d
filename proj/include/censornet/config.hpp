#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "censornet/censoring.hpp"
#include "censornet/types.hpp"

namespace censornet {

/// Sampling law of one scenario parameter: zero with probability zero_prob,
/// otherwise uniform on [lo, hi].
struct ParamRange {
  double lo = 0.0;
  double hi = 0.0;
  double zero_prob = 0.5;

  void validate(const std::string& name) const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
      throw invalid_config_error("range " + name + ": require finite lo <= hi");
    if (!(zero_prob >= 0.0 && zero_prob <= 1.0))
      throw invalid_config_error("range " + name + ": zero_prob must lie in [0,1]");
  }

  /// Smallest |value| the range can produce; 0 whenever zero is reachable.
  double min_abs() const {
    if (zero_prob > 0.0) return 0.0;
    if (lo <= 0.0 && hi >= 0.0) return 0.0;
    return std::min(std::abs(lo), std::abs(hi));
  }
};

/// Full experiment description; the CLI reads this from a config file.
struct ExperimentConfig {
  long replications = 2000;
  std::uint64_t master_seed = 1;
  std::vector<int> node_counts = {100, 200};
  double target_mean_outdegree = 10.0;
  double sigma_eps = 1.0;
  double mu = 0.0;
  ModelSpec model = ModelSpec::centered();
  ParamRange gamma{-0.3, 0.3};
  ParamRange beta{-0.3, 0.3};
  ParamRange delta{-0.2, 0.2};
  ParamRange sigma_h{0.0, 2.0};
  ParamRange h{-1.0, 1.0};
  ParamRange r_in{-0.5, 0.5};
  ParamRange r_out{-0.5, 0.5};
  std::vector<CensorScheme> schemes = {CensorScheme::none()};
  std::string out_path;

  void validate() const {
    if (replications < 1)
      throw invalid_config_error("replications must be >= 1");
    if (node_counts.empty())
      throw invalid_config_error("node_counts must be non-empty");
    for (int n : node_counts) {
      GenParams g;
      g.n = n;
      g.target_mean_outdegree = target_mean_outdegree;
      g.validate();
    }
    if (!(sigma_eps >= 0.0) || !std::isfinite(sigma_eps))
      throw invalid_config_error("sigma_eps must be finite and >= 0");
    if (!std::isfinite(mu)) throw invalid_config_error("mu must be finite");
    gamma.validate("gamma");
    beta.validate("beta");
    delta.validate("delta");
    sigma_h.validate("sigma_h");
    h.validate("h");
    r_in.validate("r_in");
    r_out.validate("r_out");
    if (sigma_h.lo < 0.0)
      throw invalid_config_error("range sigma_h: values must be >= 0");
    const double min_rin = r_in.min_abs();
    const double min_rout = r_out.min_abs();
    if (min_rin * min_rin + min_rout * min_rout >= 1.0)
      throw invalid_config_error(
          "ranges r_in/r_out cannot satisfy r_in^2 + r_out^2 < 1");
    if (schemes.empty())
      throw invalid_config_error("at least one censoring scheme is required");
    for (const auto& s : schemes) s.validate();
  }
};

namespace detail {

inline std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct ConfigParser {
  int line_no = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw invalid_config_error("config line " + std::to_string(line_no) + ": " + msg);
  }

  double parse_double(const std::string& tok) const {
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) fail("malformed number '" + tok + "'");
      return v;
    } catch (const invalid_config_error&) {
      throw;
    } catch (const std::exception&) {
      fail("malformed number '" + tok + "'");
    }
  }

  long parse_long(const std::string& tok) const {
    long v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
      fail("malformed integer '" + tok + "'");
    return v;
  }

  std::uint64_t parse_u64(const std::string& tok) const {
    std::uint64_t v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
      fail("malformed unsigned integer '" + tok + "'");
    return v;
  }

  ParamRange parse_range(const std::string& value) const {
    const auto toks = split_ws(value);
    if (toks.size() < 2 || toks.size() > 3)
      fail("expected '<lo> <hi> [zero_prob=<q>]'");
    ParamRange r;
    r.lo = parse_double(toks[0]);
    r.hi = parse_double(toks[1]);
    if (toks.size() == 3) {
      if (toks[2].rfind("zero_prob=", 0) != 0)
        fail("unexpected token '" + toks[2] + "' (want zero_prob=<q>)");
      r.zero_prob = parse_double(toks[2].substr(10));
    }
    return r;
  }
};

/// In-progress [scheme] section; converted once the section ends.
struct SchemeDraft {
  int line = 0;
  std::string kind;
  bool has_k = false, has_f = false, has_m = false, has_p = false;
  double k = 0.0, f = 0.0, p = 0.0;
  long m = 0;
  std::string dist = "poisson";
  NamingPreference pref;

  CensorScheme finish() const {
    const auto fail = [this](const std::string& msg) -> CensorScheme {
      throw invalid_config_error("config line " + std::to_string(line) +
                                 ": [scheme] " + msg);
    };
    if (kind.empty()) return fail("is missing 'kind'");
    if (kind == "none") {
      CensorScheme s = CensorScheme::none();
      s.pref = pref;
      return s;
    }
    if (kind == "hard") {
      if (!has_k) return fail("of kind hard needs 'k'");
      if (k != std::floor(k) || k < 1)
        return fail("of kind hard needs integer k >= 1");
      return CensorScheme::hard(static_cast<int>(k), pref);
    }
    if (kind == "flexible") {
      if (!has_k) return fail("of kind flexible needs 'k'");
      if (dist == "poisson") return CensorScheme::flexible_poisson(k, pref);
      if (dist == "binomial") {
        // Default m = 2k rounded, p = k/m, keeping the mean at k.
        long mm = has_m ? m : std::lround(2.0 * k);
        if (mm < 1) mm = 1;
        const double pp = has_p ? p : k / static_cast<double>(mm);
        return CensorScheme::flexible_binomial(k, mm, pp, pref);
      }
      return fail("dist must be poisson or binomial");
    }
    if (kind == "fractional") {
      if (!has_f) return fail("of kind fractional needs 'f'");
      return CensorScheme::fractional(f, pref);
    }
    return fail("has unknown kind '" + kind + "'");
  }
};

}  // namespace detail

/// Parses the documented key-value config format. Unknown keys and malformed
/// values are reported with their line number; all module invariants are
/// enforced before returning.
inline ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path);

  ExperimentConfig cfg;
  bool saw_scheme_section = false;
  std::vector<detail::SchemeDraft> drafts;
  std::string section;
  detail::ConfigParser p;

  std::string raw;
  while (std::getline(in, raw)) {
    ++p.line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') p.fail("unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section == "scheme") {
        saw_scheme_section = true;
        drafts.emplace_back();
        drafts.back().line = p.line_no;
      } else if (section != "ranges") {
        p.fail("unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) p.fail("expected 'key = value'");

    if (section.empty()) {
      if (key == "replications") cfg.replications = p.parse_long(value);
      else if (key == "master_seed") cfg.master_seed = p.parse_u64(value);
      else if (key == "node_counts") {
        cfg.node_counts.clear();
        for (const auto& tok : detail::split_ws(value))
          cfg.node_counts.push_back(static_cast<int>(p.parse_long(tok)));
      } else if (key == "target_mean_outdegree")
        cfg.target_mean_outdegree = p.parse_double(value);
      else if (key == "sigma_eps") cfg.sigma_eps = p.parse_double(value);
      else if (key == "mu") cfg.mu = p.parse_double(value);
      else if (key == "model") {
        const auto toks = detail::split_ws(value);
        if (toks[0] == "centered" && toks.size() == 1)
          cfg.model = ModelSpec::centered();
        else if (toks[0] == "homophily" && toks.size() == 1)
          cfg.model = ModelSpec::homophily_drive();
        else if (toks[0] == "pivot" && toks.size() == 2)
          cfg.model = ModelSpec::pivot_contagion(p.parse_double(toks[1]));
        else
          p.fail("model must be 'centered', 'homophily', or 'pivot <d>'");
      } else if (key == "out")
        cfg.out_path = value;
      else
        p.fail("unknown key '" + key + "'");
    } else if (section == "ranges") {
      if (key == "gamma") cfg.gamma = p.parse_range(value);
      else if (key == "beta") cfg.beta = p.parse_range(value);
      else if (key == "delta") cfg.delta = p.parse_range(value);
      else if (key == "sigma_h") cfg.sigma_h = p.parse_range(value);
      else if (key == "h") cfg.h = p.parse_range(value);
      else if (key == "r_in") cfg.r_in = p.parse_range(value);
      else if (key == "r_out") cfg.r_out = p.parse_range(value);
      else p.fail("unknown range '" + key + "'");
    } else {  // [scheme]
      detail::SchemeDraft& d = drafts.back();
      if (key == "kind") d.kind = value;
      else if (key == "k") { d.k = p.parse_double(value); d.has_k = true; }
      else if (key == "f") { d.f = p.parse_double(value); d.has_f = true; }
      else if (key == "m") { d.m = p.parse_long(value); d.has_m = true; }
      else if (key == "p") { d.p = p.parse_double(value); d.has_p = true; }
      else if (key == "dist") d.dist = value;
      else if (key == "lambda_attr") d.pref.lambda_attr = p.parse_double(value);
      else if (key == "lambda_sim") d.pref.lambda_sim = p.parse_double(value);
      else p.fail("unknown scheme key '" + key + "'");
    }
  }
  if (in.bad()) throw io_error("read failure on config file: " + path);

  if (saw_scheme_section) {
    cfg.schemes.clear();
    for (const auto& d : drafts) cfg.schemes.push_back(d.finish());
  }
  cfg.validate();
  return cfg;
}

}  // namespace censornet
