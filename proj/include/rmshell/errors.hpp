#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rmshell {

/// Argument outside the domain of an operation (negative Bessel argument,
/// radius outside the shell, degenerate geometry).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// One or more material or dimensionless constraints are violated.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "invalid parameters:";
    for (const auto& item : items) out += "\n  - " + item;
    return out;
  }

  std::vector<std::string> violations_;
};

/// The Reuss relations cannot be inverted: the micro modulus does not exceed
/// the macro modulus, so the meso modulus would be infinite or negative.
class HomogenizationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// The boundary-condition system is numerically singular.
class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(const std::string& what, double condition_estimate)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}

  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// The deviation measure needs a nonzero outer displacement.
class NormalizationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The finite-difference oracle produced a singular discrete system.
class OracleFailure : public std::runtime_error {
 public:
  OracleFailure(const std::string& what, std::size_t grid_points, double condition_estimate)
      : std::runtime_error(what), grid_points_(grid_points), condition_estimate_(condition_estimate) {}

  std::size_t grid_points() const noexcept { return grid_points_; }
  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  std::size_t grid_points_;
  double condition_estimate_;
};

}  // namespace rmshell
