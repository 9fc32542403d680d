#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "censornet/montecarlo.hpp"

namespace censornet {

// Fixed record-file column order. Fields never contain commas; absent values
// are empty fields; floats carry 17 significant digits; lines end with LF.
inline constexpr const char* kRecordsHeader =
    "replication_id,status,seed,n,target_mean_outdegree,model,scheme,"
    "mu_true,gamma_true,beta_true,delta_true,sigma_eps,sigma_h,h,r_in,r_out,"
    "omega,mean_outdeg_true,mean_outdeg_censored,zero_namers,"
    "rank,sigma_hat,max_leverage,"
    "mu_est,mu_se,mu_ident,mu_t,mu_cov95,"
    "gamma_est,gamma_se,gamma_ident,gamma_t,gamma_cov95,"
    "beta_est,beta_se,beta_ident,beta_t,beta_cov95,"
    "delta_est,delta_se,delta_ident,delta_t,delta_cov95,"
    "delta_deflated";

namespace detail {

inline void put(std::string& row, const std::string& v) {
  row += v;
  row += ',';
}
inline void put(std::string& row, double v) { put(row, format_full(v)); }
inline void put(std::string& row, long v) { put(row, std::to_string(v)); }
inline void put(std::string& row, std::uint64_t v) { put(row, std::to_string(v)); }
inline void put(std::string& row, int v) { put(row, std::to_string(v)); }

template <typename T>
void put(std::string& row, const std::optional<T>& v) {
  if (v)
    put(row, *v);
  else
    row += ',';
}

inline void put(std::string& row, const std::optional<bool>& v) {
  if (v)
    put(row, *v ? 1L : 0L);
  else
    row += ',';
}

}  // namespace detail

inline std::string record_to_csv_row(const ReplicationRecord& rec) {
  std::string row;
  row.reserve(600);
  detail::put(row, rec.replication_id);
  detail::put(row, rec.status);
  detail::put(row, rec.seed);
  detail::put(row, rec.n);
  detail::put(row, rec.target_mean_outdegree);
  detail::put(row, rec.model);
  detail::put(row, rec.scheme);
  detail::put(row, rec.mu_true);
  detail::put(row, rec.gamma_true);
  detail::put(row, rec.beta_true);
  detail::put(row, rec.delta_true);
  detail::put(row, rec.sigma_eps);
  detail::put(row, rec.sigma_h);
  detail::put(row, rec.h);
  detail::put(row, rec.r_in);
  detail::put(row, rec.r_out);
  detail::put(row, rec.omega);
  detail::put(row, rec.mean_outdeg_true);
  detail::put(row, rec.mean_outdeg_censored);
  detail::put(row, rec.zero_namers);
  detail::put(row, rec.rank);
  detail::put(row, rec.sigma_hat);
  detail::put(row, rec.max_leverage);
  for (const CoefCell& cell : rec.coef) {
    detail::put(row, cell.estimate);
    detail::put(row, cell.std_error);
    detail::put(row, rec.ok() ? std::optional<bool>(cell.identifiable)
                              : std::optional<bool>());
    detail::put(row, cell.t_stat);
    detail::put(row, cell.covered95);
  }
  if (rec.deflated_delta)
    row += detail::format_full(*rec.deflated_delta);
  return row;
}

inline void write_records_csv(std::ostream& os,
                              const std::vector<ReplicationRecord>& records) {
  os << kRecordsHeader << '\n';
  for (const auto& rec : records) os << record_to_csv_row(rec) << '\n';
  if (!os) throw io_error("failed while writing records");
}

namespace detail {

struct FieldReader {
  std::vector<std::string> fields;
  long line_no = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw io_error("records line " + std::to_string(line_no) + ": " + msg);
  }

  double as_double(std::size_t i) const {
    const std::string& f = fields[i];
    try {
      std::size_t pos = 0;
      const double v = std::stod(f, &pos);
      if (pos != f.size()) fail("malformed number '" + f + "'");
      return v;
    } catch (const io_error&) {
      throw;
    } catch (const std::exception&) {
      fail("malformed number '" + f + "'");
    }
  }

  long as_long(std::size_t i) const {
    const std::string& f = fields[i];
    long v = 0;
    const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
    if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
      fail("malformed integer '" + f + "'");
    return v;
  }

  std::uint64_t as_u64(std::size_t i) const {
    const std::string& f = fields[i];
    std::uint64_t v = 0;
    const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
    if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
      fail("malformed unsigned integer '" + f + "'");
    return v;
  }

  bool empty(std::size_t i) const { return fields[i].empty(); }

  std::optional<double> opt_double(std::size_t i) const {
    if (empty(i)) return std::nullopt;
    return as_double(i);
  }
  std::optional<long> opt_long(std::size_t i) const {
    if (empty(i)) return std::nullopt;
    return as_long(i);
  }
  std::optional<bool> opt_bool(std::size_t i) const {
    if (empty(i)) return std::nullopt;
    return as_long(i) != 0;
  }
};

}  // namespace detail

/// Reads a records CSV produced by write_records_csv. Throws io_error on an
/// empty stream, a wrong header, or malformed rows.
inline std::vector<ReplicationRecord> read_records_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header != kRecordsHeader)
    throw io_error("records file is empty or has an unexpected header");

  constexpr std::size_t kFieldCount = 44;
  std::vector<ReplicationRecord> records;
  std::string line;
  long line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    detail::FieldReader fr;
    fr.line_no = line_no;
    std::string field;
    std::istringstream fs(line);
    while (std::getline(fs, field, ',')) fr.fields.push_back(field);
    if (line.back() == ',') fr.fields.emplace_back();
    if (fr.fields.size() != kFieldCount)
      fr.fail("expected " + std::to_string(kFieldCount) + " fields, got " +
              std::to_string(fr.fields.size()));

    ReplicationRecord rec;
    rec.replication_id = fr.as_long(0);
    rec.status = fr.fields[1];
    rec.seed = fr.as_u64(2);
    rec.n = static_cast<int>(fr.as_long(3));
    rec.target_mean_outdegree = fr.as_double(4);
    rec.model = fr.fields[5];
    rec.scheme = fr.fields[6];
    rec.mu_true = fr.as_double(7);
    rec.gamma_true = fr.as_double(8);
    rec.beta_true = fr.as_double(9);
    rec.delta_true = fr.as_double(10);
    rec.sigma_eps = fr.as_double(11);
    rec.sigma_h = fr.as_double(12);
    rec.h = fr.as_double(13);
    rec.r_in = fr.as_double(14);
    rec.r_out = fr.as_double(15);
    rec.omega = fr.opt_double(16);
    rec.mean_outdeg_true = fr.opt_double(17);
    rec.mean_outdeg_censored = fr.opt_double(18);
    rec.zero_namers = fr.opt_long(19);
    if (const auto r = fr.opt_long(20)) rec.rank = static_cast<int>(*r);
    rec.sigma_hat = fr.opt_double(21);
    rec.max_leverage = fr.opt_double(22);
    for (int j = 0; j < 4; ++j) {
      const std::size_t base = 23 + 5 * static_cast<std::size_t>(j);
      CoefCell& cell = rec.coef[static_cast<std::size_t>(j)];
      cell.estimate = fr.opt_double(base);
      cell.std_error = fr.opt_double(base + 1);
      cell.identifiable = fr.opt_bool(base + 2).value_or(false);
      cell.t_stat = fr.opt_double(base + 3);
      cell.covered95 = fr.opt_bool(base + 4);
    }
    rec.deflated_delta = fr.opt_double(43);
    records.push_back(std::move(rec));
  }
  if (is.bad()) throw io_error("read failure on records stream");
  if (records.empty()) throw io_error("records file contains no rows");
  return records;
}

}  // namespace censornet
