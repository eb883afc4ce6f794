#pragma once

// Closed-form fields sampled on a uniform radial grid, next to the classical
// reference and the deviation between the two.

#include <concepts>
#include <cstddef>
#include <optional>
#include <vector>

#include "rmshell/analytic_solver.hpp"
#include "rmshell/classical_reference.hpp"

namespace rmshell {

template <std::floating_point T>
struct RadialProfile {
  ShellGeometry<T> geometry;
  BoundaryData<T> boundary;
  CoefficientSet<T> coefficients;
  ClassicalCoefficients<T> classical;
  std::vector<FieldSample<T>> samples;
  std::vector<T> classical_u;
  /// Empty when U_o = 0.
  std::optional<std::vector<T>> deviation;

  std::size_t size() const { return samples.size(); }
};

/// n radii r_i + k (r_o - r_i) / (n - 1); the last one is exactly r_o.
template <std::floating_point T>
std::vector<T> uniform_grid(const ShellGeometry<T>& geom, std::size_t n) {
  if (n < 2) throw DomainError("a radial grid needs at least two samples");
  std::vector<T> r(n);
  const T h = geom.thickness() / T(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) r[k] = geom.r_i + T(k) * h;
  r[n - 1] = geom.r_o;
  return r;
}

/// Per-sample deviation; throws NormalizationError when U_o = 0.
template <std::floating_point T>
std::vector<T> deviation(const RadialProfile<T>& micro, const ClassicalCoefficients<T>& classical, T u_o) {
  std::vector<T> out;
  out.reserve(micro.size());
  for (const auto& s : micro.samples) out.push_back(deviation(s.u_r, classical.displacement(s.r), u_o));
  return out;
}

template <std::floating_point T>
RadialProfile<T> profile(const MaterialParameters<T>& p, const ShellGeometry<T>& geom, const BoundaryData<T>& bc,
                         std::size_t n) {
  RadialProfile<T> out;
  out.geometry = geom;
  out.boundary = bc;
  out.coefficients = solve_coefficients(p, geom, bc);
  out.classical = classical_solve(geom, bc);
  const FieldEvaluator<T> eval(p, geom, out.coefficients);
  const auto grid = uniform_grid(geom, n);
  out.samples.reserve(n);
  out.classical_u.reserve(n);
  for (T r : grid) {
    out.samples.push_back(eval(r));
    out.classical_u.push_back(out.classical.displacement(r));
  }
  if (bc.u_o != T(0)) out.deviation = deviation(out, out.classical, bc.u_o);
  return out;
}

}  // namespace rmshell
