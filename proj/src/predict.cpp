#include "addhaz/predict.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "addhaz/data_io.hpp"
#include "addhaz/errors.hpp"

namespace addhaz {

namespace {

Vector extend(const std::vector<double>& x) {
  Vector v(x.size() + 1);
  v(0) = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) v(j + 1) = x[j];
  return v;
}

void check_point(const FitResult& f, const std::vector<double>& x) {
  const std::size_t p = f.coefficients.jumps.empty()
                            ? f.covariate_names.size()
                            : static_cast<std::size_t>(f.coefficients.jumps.front().size()) - 1;
  if (x.size() != p)
    throw DomainError("covariate vector has length " + std::to_string(x.size()) + ", expected " +
                      std::to_string(p));
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] < 0.0 || x[j] > 1.0)
      throw DomainError("covariate " + std::to_string(j + 1) + " = " + std::to_string(x[j]) +
                        " lies outside [0,1]");
}

// Index of the last event time <= t, or -1.
std::ptrdiff_t step_index(const std::vector<double>& times, double t) {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  return it - times.begin() - 1;
}

}  // namespace

double cumulative_hazard(const FitResult& f, const std::vector<double>& x, double t) {
  check_point(f, x);
  if (t < 0.0) throw DomainError("time must be nonnegative");
  const Vector xe = extend(x);
  const std::ptrdiff_t last = step_index(f.coefficients.event_times, t);
  double h = 0.0;
  for (std::ptrdiff_t k = 0; k <= last; ++k) h += xe.dot(f.coefficients.jumps[k]);
  return h;
}

std::vector<std::pair<double, double>> survival_curve(const FitResult& f,
                                                      const std::vector<double>& x,
                                                      std::span<const double> grid) {
  check_point(f, x);
  const Vector xe = extend(x);
  // Hazard increments per event time, prefix-summed once.
  std::vector<double> cum(f.coefficients.event_times.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < cum.size(); ++k) {
    acc += xe.dot(f.coefficients.jumps[k]);
    cum[k] = acc;
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  for (double t : grid) {
    if (t < 0.0) throw DomainError("time must be nonnegative");
    const std::ptrdiff_t last = step_index(f.coefficients.event_times, t);
    const double h = last < 0 ? 0.0 : cum[static_cast<std::size_t>(last)];
    out.emplace_back(t, std::exp(-h));
  }
  return out;
}

LogLikelihood total_loglik(const FitResult& f, const Dataset& d) {
  const EventTable table = build_event_table(d);
  if (table.event_times != f.coefficients.event_times)
    throw ConfigError("fit and dataset disagree on the event times");

  LogLikelihood ll;
  const std::vector<Vector> cum = f.coefficients.cumulative();
  for (const auto& rec : d.records) {
    Vector xe(d.p + 1);
    xe(0) = 1.0;
    for (std::size_t j = 0; j < d.p; ++j) xe(j + 1) = rec.covariates[j];

    const std::ptrdiff_t last = step_index(f.coefficients.event_times, rec.time);
    if (last >= 0) ll.value -= xe.dot(cum[static_cast<std::size_t>(last)]);
    if (rec.status == 1) {
      const auto it = std::lower_bound(table.event_times.begin(), table.event_times.end(),
                                       rec.time);
      const std::size_t k = static_cast<std::size_t>(it - table.event_times.begin());
      const double hazard = xe.dot(f.coefficients.jumps[k]);
      if (!(hazard > 0.0)) {
        ll.minus_infinity = true;
        ll.value = -std::numeric_limits<double>::infinity();
        return ll;
      }
      ll.value += std::log(hazard);
    }
  }
  return ll;
}

std::vector<double> rescale_point(const FitResult& f, const std::vector<double>& raw) {
  if (!f.scale_info)
    throw ConfigError("fit carries no rescaling information; pass covariates in [0,1]");
  const auto& scale = *f.scale_info;
  if (raw.size() != scale.size())
    throw DomainError("covariate vector has length " + std::to_string(raw.size()) +
                      ", expected " + std::to_string(scale.size()));
  std::vector<double> out(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j)
    out[j] = (raw[j] - scale[j].min) / (scale[j].max - scale[j].min);
  return out;
}

}  // namespace addhaz
