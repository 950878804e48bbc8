#include "addhaz/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "addhaz/errors.hpp"

namespace addhaz {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, std::size_t row, const std::string& col) {
  const std::string s = strip(raw);
  if (s.empty())
    throw ParseError("empty cell at row " + std::to_string(row) + ", column '" + col + "'");
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    if (!std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("cannot parse '" + s + "' at row " + std::to_string(row) + ", column '" +
                     col + "'");
  }
}

}  // namespace

Dataset load_dataset(const std::string& path, const std::string& time_col,
                     const std::string& status_col,
                     const std::vector<std::string>& covariate_cols) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::string header;
  if (!std::getline(in, header)) throw ParseError("'" + path + "' is empty, expected a header row");
  std::vector<std::string> cols = split_csv_line(header);
  for (auto& c : cols) c = strip(c);

  auto col_index = [&](const std::string& name) {
    auto it = std::find(cols.begin(), cols.end(), name);
    if (it == cols.end()) throw ConfigError("column '" + name + "' not found in '" + path + "'");
    return static_cast<std::size_t>(it - cols.begin());
  };

  const std::size_t time_idx = col_index(time_col);
  const std::size_t status_idx = col_index(status_col);
  std::vector<std::size_t> cov_idx;
  cov_idx.reserve(covariate_cols.size());
  for (const auto& name : covariate_cols) cov_idx.push_back(col_index(name));

  Dataset d;
  d.p = covariate_cols.size();
  d.names = covariate_cols;

  std::string line;
  std::size_t row = 1;  // header is row 0
  while (std::getline(in, line)) {
    if (strip(line).empty()) {
      ++row;
      continue;
    }
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != cols.size())
      throw ParseError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                       " fields, expected " + std::to_string(cols.size()));

    SubjectRecord rec;
    rec.time = parse_cell(fields[time_idx], row, time_col);
    if (rec.time < 0)
      throw DomainError("negative time " + std::to_string(rec.time) + " at row " +
                        std::to_string(row));
    const double st = parse_cell(fields[status_idx], row, status_col);
    if (st != 0.0 && st != 1.0)
      throw ParseError("status must be 0 or 1, got '" + strip(fields[status_idx]) + "' at row " +
                       std::to_string(row));
    rec.status = static_cast<int>(st);
    rec.covariates.reserve(d.p);
    for (std::size_t j = 0; j < d.p; ++j)
      rec.covariates.push_back(parse_cell(fields[cov_idx[j]], row, covariate_cols[j]));
    d.records.push_back(std::move(rec));
    ++row;
  }
  return d;
}

Dataset rescale_covariates(const Dataset& d) {
  Dataset out = d;
  if (d.p == 0 || d.records.empty()) {
    out.scale_info = std::vector<ColumnScale>(d.p);
    return out;
  }
  std::vector<ColumnScale> scale(d.p);
  for (std::size_t j = 0; j < d.p; ++j) {
    double lo = d.records.front().covariates[j];
    double hi = lo;
    for (const auto& r : d.records) {
      lo = std::min(lo, r.covariates[j]);
      hi = std::max(hi, r.covariates[j]);
    }
    if (lo == hi)
      throw DegenerateColumn("covariate '" + d.names[j] + "' is constant (" + std::to_string(lo) +
                             "), cannot rescale to [0,1]");
    scale[j] = {lo, hi};
    for (auto& r : out.records) r.covariates[j] = (r.covariates[j] - lo) / (hi - lo);
  }
  if (d.scale_info) {
    // Compose with the previous mapping so the stored (min, max) keep
    // referring to the original coordinates.
    for (std::size_t j = 0; j < d.p; ++j) {
      const ColumnScale& prev = (*d.scale_info)[j];
      const double w = prev.max - prev.min;
      scale[j] = {prev.min + scale[j].min * w, prev.min + scale[j].max * w};
    }
  }
  out.scale_info = std::move(scale);
  return out;
}

Dataset check_ties(const Dataset& d, TiePolicy policy, std::uint64_t seed) {
  // Group event records by time.
  std::map<double, std::vector<std::size_t>> events_at;
  for (std::size_t i = 0; i < d.records.size(); ++i)
    if (d.records[i].status == 1) events_at[d.records[i].time].push_back(i);

  std::vector<double> tied_times;
  for (const auto& [t, idx] : events_at)
    if (idx.size() > 1) tied_times.push_back(t);

  if (tied_times.empty()) return d;

  if (policy == TiePolicy::reject) {
    std::string msg = "tied event times:";
    for (double t : tied_times) msg += " " + std::to_string(t);
    throw TiesError(msg);
  }

  // Half the minimum positive gap between distinct observed times bounds the
  // jitter so perturbed events cannot cross any other observed time.
  std::vector<double> all_times;
  all_times.reserve(d.records.size());
  for (const auto& r : d.records) all_times.push_back(r.time);
  std::sort(all_times.begin(), all_times.end());
  all_times.erase(std::unique(all_times.begin(), all_times.end()), all_times.end());
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < all_times.size(); ++i)
    min_gap = std::min(min_gap, all_times[i] - all_times[i - 1]);
  if (!std::isfinite(min_gap)) min_gap = std::max(1.0, all_times.front());
  const double half_gap = min_gap / 2.0;

  Dataset out = d;
  std::mt19937_64 rng(seed);
  for (double t : tied_times) {
    const auto& idx = events_at[t];
    // Offsets are one-sided in (0, half_gap) so times stay nonnegative and
    // below the next distinct observed time.
    std::vector<double> offsets;
    while (offsets.size() < idx.size()) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      const double off = half_gap * (0.25 + 0.5 * u);
      if (std::find(offsets.begin(), offsets.end(), off) == offsets.end())
        offsets.push_back(off);
    }
    std::sort(offsets.begin(), offsets.end());
    for (std::size_t r = 0; r < idx.size(); ++r) out.records[idx[r]].time = t + offsets[r];
  }
  return out;
}

namespace detail {

std::vector<std::size_t> canonical_order(const Dataset& d) {
  std::vector<std::size_t> order(d.records.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = d.records[a];
    const auto& rb = d.records[b];
    if (ra.time != rb.time) return ra.time > rb.time;
    if (ra.status != rb.status) return ra.status > rb.status;
    return ra.covariates > rb.covariates;
  });
  return order;
}

}  // namespace detail

EventTable build_event_table(const Dataset& d) {
  std::size_t n_events = 0;
  for (const auto& r : d.records) n_events += static_cast<std::size_t>(r.status == 1);
  if (n_events == 0) throw NoEventsError("dataset has no events, nothing to fit");

  const std::size_t dim = d.p + 1;
  const std::vector<std::size_t> order = detail::canonical_order(d);

  EventTable table;
  table.event_times.reserve(n_events);
  table.failing_covariates.reserve(n_events);
  table.risk_sums.reserve(n_events);
  table.risk_counts.reserve(n_events);

  // Walk times in descending order, accumulating the risk sums; snapshot after
  // a whole tied-time group so censored subjects at the event time stay in
  // its risk set (t_l >= t*_k).
  Vector acc = Vector::Zero(dim);
  int count = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double t = d.records[order[i]].time;
    std::size_t group_end = i;
    int event_idx = -1;
    while (group_end < order.size() && d.records[order[group_end]].time == t) {
      const auto& rec = d.records[order[group_end]];
      if (rec.status == 1) {
        if (event_idx >= 0) throw TiesError("tied event times at " + std::to_string(t));
        event_idx = static_cast<int>(group_end);
      }
      acc(0) += 1.0;
      for (std::size_t j = 0; j < d.p; ++j) acc(j + 1) += rec.covariates[j];
      ++count;
      ++group_end;
    }
    if (event_idx >= 0) {
      const auto& rec = d.records[order[static_cast<std::size_t>(event_idx)]];
      Vector x = Vector::Zero(dim);
      x(0) = 1.0;
      for (std::size_t j = 0; j < d.p; ++j) x(j + 1) = rec.covariates[j];
      table.event_times.push_back(t);
      table.failing_covariates.push_back(std::move(x));
      table.risk_sums.push_back(acc);
      table.risk_counts.push_back(count);
    }
    i = group_end;
  }

  std::reverse(table.event_times.begin(), table.event_times.end());
  std::reverse(table.failing_covariates.begin(), table.failing_covariates.end());
  std::reverse(table.risk_sums.begin(), table.risk_sums.end());
  std::reverse(table.risk_counts.begin(), table.risk_counts.end());
  return table;
}

}  // namespace addhaz
