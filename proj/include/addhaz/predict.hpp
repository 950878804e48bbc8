#pragma once

#include <span>
#include <utility>
#include <vector>

#include "addhaz/types.hpp"

namespace addhaz {

// H(t | x) = (1, x)^T sum of jumps at event times <= t. Right-continuous,
// zero before the first event time. x must lie in [0,1]^p.
double cumulative_hazard(const FitResult& f, const std::vector<double>& x, double t);

// S(t | x) = exp(-H(t | x)) over the grid, as (t, S) pairs.
std::vector<std::pair<double, double>> survival_curve(const FitResult& f,
                                                      const std::vector<double>& x,
                                                      std::span<const double> grid);

struct LogLikelihood {
  double value = 0.0;
  // Some event's fitted hazard was nonpositive (possible for OLS); the
  // log-likelihood is -infinity and `value` is not meaningful.
  bool minus_infinity = false;
};

// Recomputes sum_i [ delta_i log((1,x_i)^T jump_{k(i)}) - (1,x_i)^T B(t_i) ]
// from the data. For MLE fits this matches the stored total.
LogLikelihood total_loglik(const FitResult& f, const Dataset& d);

// Converts raw-coordinate covariates to the fitted [0,1] scale using the
// scale info carried by the fit.
std::vector<double> rescale_point(const FitResult& f, const std::vector<double>& raw);

}  // namespace addhaz
