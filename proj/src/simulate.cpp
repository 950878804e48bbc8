#include "addhaz/simulate.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "addhaz/errors.hpp"
#include "addhaz/mle.hpp"
#include "addhaz/ols.hpp"
#include "addhaz/predict.hpp"

namespace addhaz {

namespace {

// Counter-based stream: every draw is a pure function of (seed, counter), so
// replications are reproducible independent of evaluation order.
struct SplitMix {
  std::uint64_t state;

  explicit SplitMix(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1); never exactly 0 so logs stay finite.
  double uniform() {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
  }
};

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t rep) {
  SplitMix m(master ^ (0x632be59bd9b4e019ULL + rep * 0x9e3779b97f4a7c15ULL));
  m.next();
  return m.next();
}

std::string fmt_shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void run_indexed(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min(threads, count);
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace

void SimConfig::validate() const {
  if (beta_slopes.empty()) throw ConfigError("beta_slopes must include the baseline slope");
  if (n < p() + 2) throw ConfigError("n must be at least p+2");
  if (reps < 1) throw ConfigError("reps must be at least 1");
  if (!(censor_low < censor_high)) throw ConfigError("censor_low must be below censor_high");
  if (static_cast<int>(target_x.size()) != p())
    throw ConfigError("target_x must have " + std::to_string(p()) + " entries");
  for (double v : target_x)
    if (v < 0.0 || v > 1.0) throw ConfigError("target_x entries must lie in [0,1]");
  if (checkpoints.empty()) throw ConfigError("at least one checkpoint time is required");
  for (double t : checkpoints)
    if (t < 0.0) throw ConfigError("checkpoint times must be nonnegative");
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

double SimConfig::true_cumulative_hazard(double t) const {
  double slope = beta_slopes[0];
  for (int j = 0; j < p(); ++j) slope += beta_slopes[static_cast<std::size_t>(j) + 1] * target_x[static_cast<std::size_t>(j)];
  return slope / 2.0 * t * t;
}

Dataset gen_replication(const SimConfig& cfg, int rep_index) {
  SplitMix rng(mix_seed(cfg.master_seed, static_cast<std::uint64_t>(rep_index)));
  const int p = cfg.p();

  Dataset d;
  d.p = static_cast<std::size_t>(p);
  d.names.reserve(d.p);
  for (int j = 1; j <= p; ++j) d.names.push_back("x" + std::to_string(j));
  d.records.reserve(static_cast<std::size_t>(cfg.n));

  for (int i = 0; i < cfg.n; ++i) {
    SubjectRecord rec;
    rec.covariates.resize(d.p);
    double slope = cfg.beta_slopes[0];
    for (int j = 0; j < p; ++j) {
      rec.covariates[static_cast<std::size_t>(j)] = rng.uniform();
      slope += cfg.beta_slopes[static_cast<std::size_t>(j) + 1] *
               rec.covariates[static_cast<std::size_t>(j)];
    }
    // H(t | x) = (slope / 2) t^2, so T* = sqrt(E / (slope / 2)) by inverse
    // transform with E standard exponential.
    const double rate = slope / 2.0;
    const double expo = -std::log(rng.uniform());
    const double event_time = std::sqrt(expo / rate);
    const double censor_time = cfg.censor_low + (cfg.censor_high - cfg.censor_low) * rng.uniform();
    rec.status = event_time <= censor_time ? 1 : 0;
    rec.time = std::min(event_time, censor_time);
    d.records.push_back(std::move(rec));
  }
  return d;
}

SimSummary run_study(const SimConfig& cfg) {
  cfg.validate();
  const std::size_t n_cp = cfg.checkpoints.size();
  const int reps = cfg.reps;

  std::vector<double> ols_est(static_cast<std::size_t>(reps) * n_cp, 0.0);
  std::vector<double> mle_est(static_cast<std::size_t>(reps) * n_cp, 0.0);
  std::vector<char> failed(static_cast<std::size_t>(reps), 0);
  std::vector<int> censored(static_cast<std::size_t>(reps), 0);

  run_indexed(reps, cfg.threads, [&](int rep) {
    const Dataset d = gen_replication(cfg, rep);
    int n_cens = 0;
    for (const auto& r : d.records) n_cens += r.status == 0;
    censored[static_cast<std::size_t>(rep)] = n_cens;
    try {
      const FitResult ols = fit_ols(d);
      const FitResult mle = fit_mle(d);
      for (std::size_t c = 0; c < n_cp; ++c) {
        ols_est[static_cast<std::size_t>(rep) * n_cp + c] =
            cumulative_hazard(ols, cfg.target_x, cfg.checkpoints[c]);
        mle_est[static_cast<std::size_t>(rep) * n_cp + c] =
            cumulative_hazard(mle, cfg.target_x, cfg.checkpoints[c]);
      }
    } catch (const Error&) {
      failed[static_cast<std::size_t>(rep)] = 1;
    }
  });

  SimSummary summary;
  summary.reps_requested = reps;
  long long total_censored = 0;
  for (int rep = 0; rep < reps; ++rep) {
    total_censored += censored[static_cast<std::size_t>(rep)];
    if (failed[static_cast<std::size_t>(rep)])
      ++summary.fit_failures;
    else
      ++summary.reps_used;
  }
  summary.censor_rate = static_cast<double>(total_censored) /
                        (static_cast<double>(reps) * static_cast<double>(cfg.n));

  auto aggregate = [&](const std::vector<double>& est, std::size_t c) {
    CheckpointStats st;
    st.time = cfg.checkpoints[c];
    st.truth = cfg.true_cumulative_hazard(st.time);
    const int used = summary.reps_used;
    if (used == 0) return st;
    double sum = 0.0;
    for (int rep = 0; rep < reps; ++rep)
      if (!failed[static_cast<std::size_t>(rep)])
        sum += est[static_cast<std::size_t>(rep) * n_cp + c];
    st.mean = sum / used;
    st.bias = st.mean - st.truth;
    double ss_mean = 0.0;
    double ss_truth = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      if (failed[static_cast<std::size_t>(rep)]) continue;
      const double v = est[static_cast<std::size_t>(rep) * n_cp + c];
      ss_mean += (v - st.mean) * (v - st.mean);
      ss_truth += (v - st.truth) * (v - st.truth);
    }
    st.ese = used > 1 ? std::sqrt(ss_mean / (used - 1)) : 0.0;
    st.rmse = std::sqrt(ss_truth / used);
    return st;
  };

  summary.ols.reserve(n_cp);
  summary.mle.reserve(n_cp);
  for (std::size_t c = 0; c < n_cp; ++c) {
    summary.ols.push_back(aggregate(ols_est, c));
    summary.mle.push_back(aggregate(mle_est, c));
  }
  return summary;
}

std::string format_summary_table(const SimConfig& cfg, const SimSummary& s) {
  std::ostringstream out;
  out << "simulation study: n=" << cfg.n << " reps=" << s.reps_requested
      << " seed=" << cfg.master_seed << "\n";
  out << "censoring rate: " << fmt_fixed(s.censor_rate, 4)
      << "  fit failures (excluded pairwise): " << s.fit_failures << "\n\n";
  out << "time     truth    method  mean      bias      ese       rmse\n";
  for (std::size_t c = 0; c < s.ols.size(); ++c) {
    for (const auto* row : {&s.ols[c], &s.mle[c]}) {
      out << fmt_fixed(row->time, 2) << "     " << fmt_fixed(row->truth, 4) << "   "
          << (row == &s.ols[c] ? "OLS   " : "MLE   ") << "  " << fmt_fixed(row->mean, 4) << "   "
          << (row->bias < 0 ? "" : " ") << fmt_fixed(row->bias, 4) << "   "
          << fmt_fixed(row->ese, 4) << "    " << fmt_fixed(row->rmse, 4) << "\n";
    }
  }
  return out.str();
}

std::string format_summary_csv(const SimSummary& s) {
  std::ostringstream out;
  out << "method,time,true_cumhaz,mean_estimate,bias,empirical_se,rmse\n";
  auto rows = [&](const std::vector<CheckpointStats>& stats, const char* label) {
    for (const auto& st : stats)
      out << label << "," << fmt_shortest(st.time) << "," << fmt_shortest(st.truth) << ","
          << fmt_shortest(st.mean) << "," << fmt_shortest(st.bias) << ","
          << fmt_shortest(st.ese) << "," << fmt_shortest(st.rmse) << "\n";
  };
  rows(s.ols, "OLS");
  rows(s.mle, "MLE");
  return out.str();
}

void export_curves(const std::vector<std::pair<std::string, const FitResult*>>& fits,
                   const std::vector<double>& x, std::span<const double> grid,
                   const std::optional<std::function<double(double)>>& true_cumhaz,
                   const std::string& path) {
  std::vector<std::vector<std::pair<double, double>>> curves;
  curves.reserve(fits.size());
  for (const auto& [label, fit] : fits) curves.push_back(survival_curve(*fit, x, grid));

  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "time";
  for (const auto& [label, fit] : fits) out << ",S_" << label;
  if (true_cumhaz) out << ",S_true";
  out << "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << fmt_shortest(grid[i]);
    for (const auto& curve : curves) out << "," << fmt_shortest(curve[i].second);
    if (true_cumhaz) out << "," << fmt_shortest(std::exp(-(*true_cumhaz)(grid[i])));
    out << "\n";
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

void apply_config_file(SimConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r\n");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r\n");
      return s.substr(b, e - b + 1);
    };
    const std::string stripped = strip(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value' at line " + std::to_string(lineno) + " of '" +
                       path + "'");
    const std::string key = strip(stripped.substr(0, eq));
    const std::string value = strip(stripped.substr(eq + 1));

    const auto as_double = [&](const std::string& v) {
      try {
        std::size_t pos = 0;
        const double parsed = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return parsed;
      } catch (const std::exception&) {
        throw ParseError("cannot parse value '" + v + "' for key '" + key + "' in '" + path +
                         "'");
      }
    };
    const auto as_list = [&](const std::string& v) {
      std::vector<double> vals;
      std::stringstream ss(v);
      std::string field;
      while (std::getline(ss, field, ',')) vals.push_back(as_double(strip(field)));
      return vals;
    };

    if (key == "n")
      cfg.n = static_cast<int>(as_double(value));
    else if (key == "reps")
      cfg.reps = static_cast<int>(as_double(value));
    else if (key == "seed")
      cfg.master_seed = static_cast<std::uint64_t>(as_double(value));
    else if (key == "threads")
      cfg.threads = static_cast<int>(as_double(value));
    else if (key == "censor_low")
      cfg.censor_low = as_double(value);
    else if (key == "censor_high")
      cfg.censor_high = as_double(value);
    else if (key == "beta_slopes")
      cfg.beta_slopes = as_list(value);
    else if (key == "target_x")
      cfg.target_x = as_list(value);
    else if (key == "checkpoints")
      cfg.checkpoints = as_list(value);
    else
      throw ConfigError("unknown configuration key '" + key + "' in '" + path + "'");
  }
}

}  // namespace addhaz
