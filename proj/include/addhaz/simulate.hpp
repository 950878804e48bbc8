#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "addhaz/types.hpp"

namespace addhaz {

// Monte-Carlo comparison of the OLS and MLE fits on Weibull-type data whose
// hazard is linear in t: h(t | x) = (b0 + b1 x1 + ... + bp xp) t.
struct SimConfig {
  int n = 500;
  int reps = 1000;
  // Slopes of beta(t) = slopes * t; first entry is the baseline.
  std::vector<double> beta_slopes{0.05, 0.02, 0.04, 0.06, 0.08};
  double censor_low = 2.5;
  double censor_high = 7.5;
  std::vector<double> target_x{0.4, 0.6, 0.4, 0.6};
  std::vector<double> checkpoints{1.93, 3.00, 4.24};
  std::uint64_t master_seed = 1;
  int threads = 1;

  int p() const { return static_cast<int>(beta_slopes.size()) - 1; }
  void validate() const;  // throws ConfigError
  // H(t | target_x) = rate * t^2 with rate = slopes.(1, target_x) / 2.
  double true_cumulative_hazard(double t) const;
};

struct CheckpointStats {
  double time = 0.0;
  double truth = 0.0;
  double mean = 0.0;
  double bias = 0.0;
  double ese = 0.0;   // standard deviation about the mean (divisor reps-1)
  double rmse = 0.0;  // root mean squared deviation from the truth
};

struct SimSummary {
  std::vector<CheckpointStats> ols;
  std::vector<CheckpointStats> mle;
  double censor_rate = 0.0;
  int reps_requested = 0;
  int reps_used = 0;
  int fit_failures = 0;  // replications excluded pairwise from both methods
};

// Deterministic function of (cfg.master_seed, rep_index); replications are
// independent of each other and of evaluation order.
Dataset gen_replication(const SimConfig& cfg, int rep_index);

SimSummary run_study(const SimConfig& cfg);

std::string format_summary_table(const SimConfig& cfg, const SimSummary& s);
std::string format_summary_csv(const SimSummary& s);

// Writes survival curves (t, S_<label>..., S_true when given) as CSV rows.
void export_curves(const std::vector<std::pair<std::string, const FitResult*>>& fits,
                   const std::vector<double>& x, std::span<const double> grid,
                   const std::optional<std::function<double(double)>>& true_cumhaz,
                   const std::string& path);

// Parses `key = value` lines into cfg; unknown keys are errors.
void apply_config_file(SimConfig& cfg, const std::string& path);

}  // namespace addhaz
