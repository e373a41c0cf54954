#pragma once

#include <stdexcept>
#include <string>

namespace gcpt {

/// A parameter set violated one of its construction constraints. `constraint()`
/// names the violated rule, e.g. "m_minus >= m_plus".
class InvalidParameter : public std::invalid_argument {
 public:
  InvalidParameter(std::string constraint, const std::string& detail)
      : std::invalid_argument(constraint + ": " + detail), constraint_(std::move(constraint)) {}

  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

/// Evaluation outside the domain where a quantity is defined (e.g. w'(0)).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A value lies outside the range of a bounded map (e.g. inverting a bounded v).
class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// The quadrature oracle failed to reach its tolerance.
class OracleFailure : public std::runtime_error {
 public:
  OracleFailure(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// Invalid population scenario. `path()` is a JSON pointer into the scenario
/// document, or "/individuals/<n>" for a failing individual.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string path, const std::string& detail)
      : std::runtime_error(path + ": " + detail), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace gcpt
