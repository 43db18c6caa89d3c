#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace liouville {

/// Evaluation outside a function's domain (radius too small, E <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed arguments: empty intervals, gamma <= 1, singular masses.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A precondition of a constructive step does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Non-finite intermediate values. Carries the radius where it happened.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double radius)
      : std::runtime_error(what + " at r=" + std::to_string(radius)), radius_(radius) {}
  double radius() const noexcept { return radius_; }

 private:
  double radius_;
};

/// Invalid run configuration; lists every offending field (dotted path) with the reason.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::vector<std::string> fields, std::vector<std::string> reasons);
  const std::vector<std::string>& fields() const noexcept { return fields_; }
  const std::vector<std::string>& reasons() const noexcept { return reasons_; }

 private:
  std::vector<std::string> fields_;
  std::vector<std::string> reasons_;
};

}  // namespace liouville
