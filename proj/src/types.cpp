#include "addhaz/types.hpp"

namespace addhaz {

const char* category_label(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::config: return "CONFIG";
    case ErrorCategory::parse: return "PARSE";
    case ErrorCategory::ties: return "TIES";
    case ErrorCategory::degenerate: return "DEGENERATE";
    case ErrorCategory::io: return "IO";
    case ErrorCategory::rank_cone: return "RANKCONE";
    case ErrorCategory::domain: return "DOMAIN";
  }
  return "UNKNOWN";
}

int category_exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::config: return 2;
    case ErrorCategory::parse: return 3;
    case ErrorCategory::ties: return 4;
    case ErrorCategory::degenerate: return 5;
    case ErrorCategory::io: return 6;
    case ErrorCategory::rank_cone: return 7;
    case ErrorCategory::domain: return 2;  // invalid user-supplied value
  }
  return 1;
}

const char* method_label(Method m) {
  switch (m) {
    case Method::ols: return "ols";
    case Method::mle: return "mle";
    case Method::mle_cone: return "mle-cone";
  }
  return "unknown";
}

std::vector<Vector> StepCoefficients::cumulative() const {
  std::vector<Vector> out;
  out.reserve(jumps.size());
  Vector acc;
  for (const Vector& j : jumps) {
    if (acc.size() == 0)
      acc = j;
    else
      acc += j;
    out.push_back(acc);
  }
  return out;
}

}  // namespace addhaz
