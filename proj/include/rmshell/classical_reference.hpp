#pragma once

// Classical plane-strain Lame annulus under the same radial Dirichlet data:
// u_r = alpha r + beta / r. The pure-displacement problem is material-free.

#include <concepts>

#include "rmshell/analytic_solver.hpp"
#include "rmshell/errors.hpp"

namespace rmshell {

template <std::floating_point T>
struct ClassicalCoefficients {
  T alpha{};  // coefficient of r
  T beta{};   // coefficient of 1/r

  T displacement(T r) const { return alpha * r + beta / r; }
  T slope(T r) const { return alpha - beta / (r * r); }

  bool operator==(const ClassicalCoefficients&) const = default;
};

/// Throws DomainError for degenerate geometry (including r_i = r_o).
template <std::floating_point T>
ClassicalCoefficients<T> classical_solve(const ShellGeometry<T>& geom, const BoundaryData<T>& bc) {
  require_valid(geom);
  const T ri = geom.r_i;
  const T ro = geom.r_o;
  const T gap = ro * ro - ri * ri;
  return {(bc.u_o * ro - bc.u_i * ri) / gap, ri * ro * (bc.u_i * ro - bc.u_o * ri) / gap};
}

/// (u_micro - u_classical) / U_o; throws NormalizationError when U_o = 0.
template <std::floating_point T>
T deviation(T u_micro, T u_classical, T u_o) {
  if (u_o == T(0)) throw NormalizationError("deviation is normalized by U_o, which is zero; renormalize by U_i");
  return (u_micro - u_classical) / u_o;
}

}  // namespace rmshell
