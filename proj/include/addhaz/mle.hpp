#pragma once

#include <vector>

#include "addhaz/types.hpp"

namespace addhaz {

enum class RatioTag {
  finite,
  excluded,   // 0/0: the direction gives the failing subject zero hazard
  unbounded,  // positive/0: the likelihood supremum is infinite
};

struct AdmissibleRatio {
  double value = 0.0;
  RatioTag tag = RatioTag::finite;
};

// The 2p edge ratios of the full vertex constraint set: v_j = x_j / s_j for
// j = 1..p, then v_{p+j} = (1 - x_j) / (s_0 - s_j). Entry m < p is the single
// positive covariate jump e_{m+1}; entry m >= p is the intercept-up,
// covariate-down direction f_{m-p+1}.
std::vector<AdmissibleRatio> admissible_ratios(const Vector& x, const Vector& s);

// Analytic maximizer of log(x^T b) - s^T b over the cone where the hazard is
// nonnegative at every vertex of the unit cube. Throws DegenerateRiskSet when
// an unbounded ratio occurs and NoPositiveRatio when the best ratio is zero.
JumpSolution mle_jump_full(const Vector& x, const Vector& s);

FitResult fit_mle(const Dataset& d);

namespace detail {
// Ensures every covariate lies in [0,1]; names the first offender.
void require_unit_cube(const Dataset& d);
// Relative tolerance for declaring two edge ratios tied.
inline constexpr double kRatioTieTol = 1e-9;
}  // namespace detail

}  // namespace addhaz
