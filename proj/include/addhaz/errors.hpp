#pragma once

#include <stdexcept>
#include <string>

namespace addhaz {

// Stable error categories. The CLI maps each category to an exit code and a
// machine-parsable stderr prefix, so library errors must carry one.
enum class ErrorCategory {
  config,
  parse,
  ties,
  degenerate,
  io,
  rank_cone,
  domain,
};

const char* category_label(ErrorCategory c);
int category_exit_code(ErrorCategory c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error(ErrorCategory::config, m) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error(ErrorCategory::parse, m) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& m) : Error(ErrorCategory::domain, m) {}
};

struct TiesError : Error {
  explicit TiesError(const std::string& m) : Error(ErrorCategory::ties, m) {}
};

struct NoEventsError : Error {
  explicit NoEventsError(const std::string& m) : Error(ErrorCategory::degenerate, m) {}
};

struct DegenerateColumn : Error {
  explicit DegenerateColumn(const std::string& m) : Error(ErrorCategory::degenerate, m) {}
};

// A ratio denominator vanished with positive numerator: the likelihood
// supremum is infinite and no maximizer exists.
struct DegenerateRiskSet : Error {
  explicit DegenerateRiskSet(const std::string& m) : Error(ErrorCategory::degenerate, m) {}
};

// Every admissible direction gives the failing subject zero hazard.
struct NoPositiveRatio : Error {
  explicit NoPositiveRatio(const std::string& m) : Error(ErrorCategory::degenerate, m) {}
};

struct SizeError : Error {
  explicit SizeError(const std::string& m) : Error(ErrorCategory::config, m) {}
};

struct RankError : Error {
  explicit RankError(const std::string& m) : Error(ErrorCategory::rank_cone, m) {}
};

struct StartNotFeasible : Error {
  explicit StartNotFeasible(const std::string& m) : Error(ErrorCategory::rank_cone, m) {}
};

struct IoError : Error {
  explicit IoError(const std::string& m) : Error(ErrorCategory::io, m) {}
};

}  // namespace addhaz
