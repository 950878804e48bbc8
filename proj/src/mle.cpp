#include "addhaz/mle.hpp"

#include <cmath>
#include <string>

#include "addhaz/data_io.hpp"
#include "addhaz/errors.hpp"

namespace addhaz {

namespace detail {

void require_unit_cube(const Dataset& d) {
  for (std::size_t i = 0; i < d.records.size(); ++i)
    for (std::size_t j = 0; j < d.p; ++j) {
      const double v = d.records[i].covariates[j];
      if (v < 0.0 || v > 1.0)
        throw DomainError("covariate '" + d.names[j] + "' = " + std::to_string(v) + " at row " +
                          std::to_string(i + 1) +
                          " lies outside [0,1]; rescale the data first");
    }
}

}  // namespace detail

namespace {

void check_inputs(const Vector& x, const Vector& s) {
  if (x.size() != s.size() || x.size() < 1) throw DomainError("x and s must have equal length p+1");
  if (x(0) != 1.0) throw DomainError("extended covariate vector must start with 1");
  for (Eigen::Index j = 1; j < x.size(); ++j)
    if (x(j) < 0.0 || x(j) > 1.0) throw DomainError("covariate outside [0,1]");
  if (!(s(0) > 0.0)) throw DomainError("risk sum s_0 must be positive");
  for (Eigen::Index j = 0; j < s.size(); ++j)
    if (s(j) < 0.0) throw DomainError("risk sums must be nonnegative");
}

AdmissibleRatio make_ratio(double num, double den) {
  if (den > 0.0) return {num / den, RatioTag::finite};
  if (num == 0.0) return {0.0, RatioTag::excluded};
  return {std::numeric_limits<double>::infinity(), RatioTag::unbounded};
}

}  // namespace

std::vector<AdmissibleRatio> admissible_ratios(const Vector& x, const Vector& s) {
  check_inputs(x, s);
  const Eigen::Index p = x.size() - 1;
  std::vector<AdmissibleRatio> ratios;
  ratios.reserve(static_cast<std::size_t>(2 * p));
  for (Eigen::Index j = 1; j <= p; ++j) ratios.push_back(make_ratio(x(j), s(j)));
  for (Eigen::Index j = 1; j <= p; ++j) ratios.push_back(make_ratio(1.0 - x(j), s(0) - s(j)));
  return ratios;
}

JumpSolution mle_jump_full(const Vector& x, const Vector& s) {
  check_inputs(x, s);
  const Eigen::Index p = x.size() - 1;

  JumpSolution sol;
  if (p == 0) {
    // Only the baseline: max of log(b0) - s0 b0 over b0 >= 0.
    sol.max_ratio = 1.0 / s(0);
    sol.candidates.push_back(Vector::Constant(1, sol.max_ratio));
    sol.averaged = sol.candidates.front();
    sol.per_time_loglik = std::log(sol.max_ratio) - 1.0;
    return sol;
  }

  const std::vector<AdmissibleRatio> ratios = admissible_ratios(x, s);
  double vmax = 0.0;
  for (std::size_t m = 0; m < ratios.size(); ++m) {
    if (ratios[m].tag == RatioTag::unbounded) {
      const Eigen::Index j = static_cast<Eigen::Index>(m % static_cast<std::size_t>(p)) + 1;
      throw DegenerateRiskSet("ratio " + std::to_string(m + 1) + " (covariate " +
                              std::to_string(j) +
                              ") has zero denominator with positive numerator; the likelihood "
                              "supremum is infinite");
    }
    if (ratios[m].tag == RatioTag::finite) vmax = std::max(vmax, ratios[m].value);
  }
  if (!(vmax > 0.0))
    throw NoPositiveRatio("every admissible ratio is zero; the failing subject's fitted hazard "
                          "would vanish");

  const double threshold = vmax * (1.0 - detail::kRatioTieTol);
  Vector sum = Vector::Zero(p + 1);
  for (std::size_t m = 0; m < ratios.size(); ++m) {
    if (ratios[m].tag != RatioTag::finite || ratios[m].value < threshold) continue;
    Vector beta = Vector::Zero(p + 1);
    const Eigen::Index j = static_cast<Eigen::Index>(m % static_cast<std::size_t>(p)) + 1;
    if (m < static_cast<std::size_t>(p)) {
      beta(j) = 1.0 / s(j);
    } else {
      const double den = s(0) - s(j);
      beta(0) = 1.0 / den;
      beta(j) = -1.0 / den;
    }
    sum += beta;
    sol.candidates.push_back(std::move(beta));
  }
  sol.averaged = sum / static_cast<double>(sol.candidates.size());
  sol.max_ratio = vmax;
  sol.per_time_loglik = std::log(vmax) - 1.0;
  return sol;
}

FitResult fit_mle(const Dataset& d) {
  detail::require_unit_cube(d);
  const EventTable table = build_event_table(d);
  const std::size_t K = table.size();

  FitResult result;
  result.coefficients.method = Method::mle;
  result.coefficients.event_times = table.event_times;
  result.coefficients.jumps.resize(K);
  result.diagnostics.resize(K);
  result.per_time_loglik.resize(K);
  result.covariate_names = d.names;
  result.scale_info = d.scale_info;

  double total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    try {
      JumpSolution sol = mle_jump_full(table.failing_covariates[k], table.risk_sums[k]);
      result.coefficients.jumps[k] = sol.averaged;
      result.diagnostics[k].multiplicity = static_cast<int>(sol.candidates.size());
      result.per_time_loglik[k] = sol.per_time_loglik;
      total += sol.per_time_loglik;
    } catch (const DegenerateRiskSet& e) {
      throw DegenerateRiskSet("at event time " + std::to_string(table.event_times[k]) + ": " +
                              e.what());
    } catch (const NoPositiveRatio& e) {
      throw NoPositiveRatio("at event time " + std::to_string(table.event_times[k]) + ": " +
                            e.what());
    }
  }
  result.total_loglik = total;
  return result;
}

}  // namespace addhaz
