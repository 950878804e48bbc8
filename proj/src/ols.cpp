#include "addhaz/ols.hpp"

#include <Eigen/Eigenvalues>

#include "addhaz/data_io.hpp"
#include "addhaz/errors.hpp"

namespace addhaz {

namespace {
// Relative eigenvalue threshold below which X^T X is treated as singular.
constexpr double kRankTol = 1e-10;
}  // namespace

OlsJump ols_jump_from_normal(const Matrix& xtx, const Vector& x_failing) {
  const Eigen::Index dim = xtx.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(xtx);
  const Vector& ev = es.eigenvalues();  // ascending
  const double lmax = ev(dim - 1);
  if (!(lmax > 0.0) || ev(0) < kRankTol * lmax) return {Vector::Zero(dim), true};
  const Vector projected = es.eigenvectors().transpose() * x_failing;
  return {es.eigenvectors() * (projected.array() / ev.array()).matrix(), false};
}

OlsJump ols_jump(std::span<const Vector> at_risk_covariates, std::size_t failing_index) {
  if (at_risk_covariates.empty()) throw DomainError("empty risk set");
  if (failing_index >= at_risk_covariates.size())
    throw DomainError("failing index out of range");
  const Eigen::Index dim = at_risk_covariates.front().size();
  Matrix xtx = Matrix::Zero(dim, dim);
  for (const Vector& row : at_risk_covariates) xtx.noalias() += row * row.transpose();
  return ols_jump_from_normal(xtx, at_risk_covariates[failing_index]);
}

FitResult fit_ols(const Dataset& d) {
  const EventTable table = build_event_table(d);
  const std::size_t dim = d.p + 1;
  const std::size_t K = table.size();

  // Accumulate the per-time normal matrices X^T X as suffix sums of outer
  // products in the same canonical order used for the risk sums.
  const std::vector<std::size_t> order = detail::canonical_order(d);
  std::vector<Matrix> xtx_at(K);
  {
    Matrix acc = Matrix::Zero(dim, dim);
    Vector x = Vector::Zero(dim);
    std::size_t next = K;  // next event (in descending walk) to snapshot
    std::size_t i = 0;
    while (i < order.size()) {
      const double t = d.records[order[i]].time;
      std::size_t group_end = i;
      while (group_end < order.size() && d.records[order[group_end]].time == t) {
        const auto& rec = d.records[order[group_end]];
        x(0) = 1.0;
        for (std::size_t j = 0; j < d.p; ++j) x(j + 1) = rec.covariates[j];
        acc.noalias() += x * x.transpose();
        ++group_end;
      }
      if (next > 0 && table.event_times[next - 1] == t) {
        --next;
        xtx_at[next] = acc;
      }
      i = group_end;
    }
  }

  FitResult result;
  result.coefficients.method = Method::ols;
  result.coefficients.event_times = table.event_times;
  result.coefficients.jumps.resize(K);
  result.diagnostics.resize(K);
  result.covariate_names = d.names;
  result.scale_info = d.scale_info;

  for (std::size_t k = 0; k < K; ++k) {
    OlsJump j = ols_jump_from_normal(xtx_at[k], table.failing_covariates[k]);
    result.diagnostics[k].rank_deficient = j.rank_deficient;
    result.coefficients.jumps[k] = std::move(j.jump);
  }
  return result;
}

}  // namespace addhaz
