#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "censornet/errors.hpp"
#include "censornet/types.hpp"

namespace censornet {

/// Binary directed adjacency matrix with a structurally zero diagonal.
/// Entry (i, j) means ego i names alter j.
class Sociomatrix {
 public:
  Sociomatrix() = default;
  explicit Sociomatrix(int n) : n_(n), cells_(static_cast<std::size_t>(n) * n, 0) {
    if (n < 2) throw invalid_config_error("Sociomatrix: n must be >= 2");
  }

  int n() const { return n_; }

  bool at(int i, int j) const { return cells_[idx(i, j)] != 0; }

  void set(int i, int j, bool value) {
    if (i == j && value)
      throw invalid_input_error("Sociomatrix: self-edges are not allowed");
    cells_[idx(i, j)] = value ? 1 : 0;
  }

  int outdegree(int i) const {
    int d = 0;
    const std::uint8_t* row = cells_.data() + idx(i, 0);
    for (int j = 0; j < n_; ++j) d += row[j];
    return d;
  }

  std::vector<int> outdegrees() const {
    std::vector<int> d(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) d[static_cast<std::size_t>(i)] = outdegree(i);
    return d;
  }

  long arc_count() const {
    long total = 0;
    for (std::uint8_t c : cells_) total += c;
    return total;
  }

  double mean_outdegree() const {
    return static_cast<double>(arc_count()) / static_cast<double>(n_);
  }

  std::vector<int> alters_of(int i) const {
    std::vector<int> out;
    for (int j = 0; j < n_; ++j)
      if (at(i, j)) out.push_back(j);
    return out;
  }

  bool operator==(const Sociomatrix& other) const = default;

  /// Edge-list export: a `# n=<n> omega=<omega>` header, an optional
  /// `# censored=<scheme>` header, then one 0-indexed `i,j` line per arc in
  /// (i, j) order.
  void write_edge_list(std::ostream& os, double omega,
                       const std::string& censored = "") const {
    os << "# n=" << n_ << " omega=" << detail::format_full(omega) << "\n";
    if (!censored.empty()) os << "# censored=" << censored << "\n";
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (at(i, j)) os << i << "," << j << "\n";
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(j);
  }

  int n_ = 0;
  std::vector<std::uint8_t> cells_;
};

}  // namespace censornet
