#pragma once

#include <span>

#include "addhaz/types.hpp"

namespace addhaz {

struct OlsJump {
  Vector jump;
  bool rank_deficient = false;
};

// Least-squares jump (X^T X)^{-1} X^T dN, where X stacks the extended at-risk
// covariate vectors and dN is the unit vector at the failing row. When X^T X
// is rank deficient the jump is the zero vector, flagged.
OlsJump ols_jump(std::span<const Vector> at_risk_covariates, std::size_t failing_index);

// Same computation from the accumulated normal equations: solves
// xtx * jump = x_failing.
OlsJump ols_jump_from_normal(const Matrix& xtx, const Vector& x_failing);

FitResult fit_ols(const Dataset& d);

}  // namespace addhaz
