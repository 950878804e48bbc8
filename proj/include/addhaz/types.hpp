#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "addhaz/errors.hpp"

namespace addhaz {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// One observation: follow-up time, event indicator, covariates.
// The implicit intercept covariate is never stored; it is prepended when an
// extended vector (1, x1, ..., xp) is needed.
struct SubjectRecord {
  double time = 0.0;
  int status = 0;  // 1 = event, 0 = censored
  std::vector<double> covariates;
};

struct ColumnScale {
  double min = 0.0;
  double max = 1.0;
};

struct Dataset {
  std::vector<SubjectRecord> records;
  std::size_t p = 0;
  std::vector<std::string> names;  // covariate labels, length p
  // Per-column (min, max) of the original values, set once rescaled.
  std::optional<std::vector<ColumnScale>> scale_info;

  std::size_t n() const { return records.size(); }
};

// Ordered distinct event times t*_1 < ... < t*_K with, per time, the failing
// subject's extended covariate vector and the componentwise risk sums
// s_kj = sum of x_lj over {l : t_l >= t*_k}.
struct EventTable {
  std::vector<double> event_times;
  std::vector<Vector> failing_covariates;  // each length p+1, leading 1
  std::vector<Vector> risk_sums;           // each length p+1
  std::vector<int> risk_counts;            // number at risk, equals s_k0

  std::size_t size() const { return event_times.size(); }
  std::size_t dim() const { return risk_sums.empty() ? 0 : static_cast<std::size_t>(risk_sums.front().size()); }
};

enum class Method { ols, mle, mle_cone };
const char* method_label(Method m);

// The estimate of the cumulative regression functions B(t): a right-continuous
// step function, zero before the first event time, with one jump vector per
// event time.
struct StepCoefficients {
  std::vector<double> event_times;  // K ascending
  std::vector<Vector> jumps;        // K vectors of length p+1
  Method method = Method::ols;

  std::vector<Vector> cumulative() const;
};

struct TimeDiagnostic {
  bool rank_deficient = false;  // OLS zero-jump convention applied here
  int multiplicity = 1;         // number of tied maximizers (MLE)
};

struct FitResult {
  StepCoefficients coefficients;
  std::vector<TimeDiagnostic> diagnostics;  // length K
  std::vector<double> per_time_loglik;      // MLE only, length K (else empty)
  std::optional<double> total_loglik;       // MLE only
  std::vector<std::string> covariate_names;
  std::optional<std::vector<ColumnScale>> scale_info;
};

// Per-event-time constrained maximizer: all tied edge solutions, their uniform
// average, the attained hazard ratio and log-likelihood term log(ratio) - 1.
struct JumpSolution {
  std::vector<Vector> candidates;
  Vector averaged;
  double max_ratio = 0.0;
  double per_time_loglik = 0.0;
};

}  // namespace addhaz
