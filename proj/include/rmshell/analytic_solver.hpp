#pragma once

// Closed-form axisymmetric solution for a long cylindrical shell with
// prescribed radial displacements and consistent coupling at both faces.
//
// With Z = P_tt + P_rr the radial subsystem reduces to the inhomogeneous
// modified Bessel equation Z'' + Z'/r - a Z + b = 0, so
//
//   Z   = b/a + D1 I0(s r) + D2 K0(s r),                      s = sqrt(a)
//   u_r = F0 C1 r + C2 / r + (B / s) (D1 I1(s r) - D2 K1(s r))
//
// and P_tt, P_rr follow algebraically. C3 = C2 mu_m / (mu_e + mu_m) is forced
// by the moment balance, leaving C1, C2, D1, D2 for the four boundary values
// u_r(r_i), u_r(r_o), P_tt(r_i), P_tt(r_o). The shear components P_rt, P_tr
// vanish identically, and mu_c never enters.
//
// Bessel columns are assembled with exponentially scaled kernels:
// D1 is carried as D1 exp(s r_o) and D2 as D2 exp(-s r_i), so every matrix
// entry is O(1) even when s r_o is several hundred.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <sstream>
#include <string>

#include "rmshell/errors.hpp"
#include "rmshell/linalg.hpp"
#include "rmshell/material.hpp"
#include "rmshell/special_functions.hpp"

namespace rmshell {

template <std::floating_point T>
struct ShellGeometry {
  T r_i{};
  T r_o{};

  T thickness() const { return r_o - r_i; }

  template <std::floating_point U>
  ShellGeometry<U> cast() const {
    return {U(r_i), U(r_o)};
  }
};

template <std::floating_point T>
void require_valid(const ShellGeometry<T>& g) {
  if (!(g.r_i > 0) || !(g.r_i < g.r_o) || !std::isfinite(g.r_o))
    throw DomainError("shell geometry requires 0 < r_i < r_o");
}

/// Prescribed radial displacements at the inner and outer faces.
template <std::floating_point T>
struct BoundaryData {
  T u_i{};
  T u_o{};

  bool is_zero() const { return u_i == T(0) && u_o == T(0); }

  template <std::floating_point U>
  BoundaryData<U> cast() const {
    return {U(u_i), U(u_o)};
  }
};

/// Material-only combinations appearing in the closed form.
template <std::floating_point T>
struct DerivedCoefficients {
  T decay_sq{};           // a
  T decay{};              // sqrt(a), inverse boundary-layer length
  T source_per_c1{};      // b / C1
  T trace_gain{};         // A in u' + u/r = A C1 + B (D1 I0 + D2 K0)
  T bessel_coupling{};    // B, zero iff mu_m kappa_e = mu_e kappa_m
  T curl_weight{};        // xi1 = (kappa_m + mu_m) / (2 mu_m)
  T trace_weight{};       // xi2, X + Y = xi2 Z + C1
  T hoop_gain{};          // xi3
  T displacement_gain{};  // F0 = A / 2
  T micro_diag_gain{};    // C1 coefficient of P_tt and P_rr
  T c3_ratio{};           // mu_m / (mu_e + mu_m)
  T micro_bulk_ratio{};   // kappa_m / mu_m
  T radial_weight{};      // (kappa_m - mu_m) / (2 mu_m)

  /// Bessel prefactor of u_r, B / sqrt(a).
  T displacement_bessel() const { return bessel_coupling / decay; }

  // Boundary-system entries transcribed from the published closed form with
  // unscaled kernels. f1_printed lacks the 1/r carried by f2; the assembled
  // system uses displacement_bessel() * I1(s r) / r instead.
  T f1_printed(T r) const { return displacement_bessel() * bessel_i1(decay * r); }
  T f2(T r) const { return -displacement_bessel() * bessel_k1(decay * r) / r; }
  T f3(T r) const {
    const T x = decay * r;
    return curl_weight * bessel_i0(x) - bessel_i1(x) / x * micro_bulk_ratio;
  }
  T f4(T r) const {
    const T x = decay * r;
    return curl_weight * bessel_k0(x) + bessel_k1(x) / x * micro_bulk_ratio;
  }
};

namespace detail {

template <std::floating_point T>
DerivedCoefficients<T> derive(const MaterialParameters<T>& p) {
  const T mue = p.mu_e;
  const T mum = p.mu_m;
  const T ke = p.kappa_e();
  const T km = p.kappa_m();
  const T curvature = p.mu_M * p.L_c * p.L_c;
  const T denom = mue * ke * (mum + km) + mum * km * (mue + ke);

  DerivedCoefficients<T> d;
  d.decay_sq = T(4) / curvature * (mue * ke / (ke + mue) + mum * km / (km + mum));
  d.decay = std::sqrt(d.decay_sq);
  d.source_per_c1 = T(4) / curvature * ke * mum / (km + mum);
  d.trace_gain = mum * (ke + mue) * (ke + km) / denom;
  d.bessel_coupling = (mum * ke - mue * km) / (mum * (mue + ke));
  d.curl_weight = (km + mum) / (T(2) * mum);
  d.trace_weight = -mue * (km + mum) / (mum * (ke + mue));
  d.hoop_gain = mum * km * (mue + ke) / denom;
  d.displacement_gain = d.trace_gain / T(2);
  d.micro_diag_gain = mum * ke * (ke + mue) / (T(2) * denom);
  d.c3_ratio = mum / (mue + mum);
  d.micro_bulk_ratio = km / mum;
  d.radial_weight = (km - mum) / (T(2) * mum);
  return d;
}

}  // namespace detail

/// Throws ValidationError for inadmissible moduli.
template <std::floating_point T>
DerivedCoefficients<T> derived_coefficients(const MaterialParameters<T>& p) {
  require_valid(p);
  return detail::derive(p);
}

/// Integration constants of the closed form.
///
/// The Bessel constants are stored scaled: d1_scaled = D1 exp(outer_anchor)
/// and d2_scaled = D2 exp(-inner_anchor), with the anchors s r_o and s r_i.
template <std::floating_point T>
struct CoefficientSet {
  T c1{};
  T c2{};
  T c3{};
  T d1_scaled{};
  T d2_scaled{};
  T outer_anchor{};
  T inner_anchor{};
  /// Condition estimate of the (scaled) 4x4 boundary system; 1 for zero data.
  T condition{1};
  /// ||M x - rhs|| / ||rhs|| of the boundary system.
  T relative_residual{};

  T d1() const { return d1_scaled * std::exp(-outer_anchor); }
  T d2() const { return d2_scaled * std::exp(inner_anchor); }

  template <std::floating_point U>
  CoefficientSet<U> cast() const {
    return {U(c1), U(c2), U(c3), U(d1_scaled), U(d2_scaled), U(outer_anchor), U(inner_anchor), U(condition),
            U(relative_residual)};
  }
};

/// Fields of the closed form at one radius.
template <std::floating_point T>
struct FieldSample {
  T r{};
  T u_r{};
  T p_rr{};
  T p_tt{};
  T p_rt{};
  T p_tr{};
  T z{};       // P_tt + P_rr, from its own Bessel form
  T y{};       // u_r / r - P_tt, from its own closed form
  T du_dr{};   // derivative of the u_r closed form
  T curl_p{};  // P_tt' + (P_tt - P_rr) / r
};

enum class BesselScaling { kScaled, kUnscaled };

/// Largest accepted condition estimate, relative to 1 / epsilon.
inline constexpr double kConditionLimitOverEpsilon = 1e-4;
/// Post-solve residual bound of the boundary system.
inline constexpr double kSystemResidualTolerance = 1e-10;

/// Evaluates the closed form for fixed material, geometry and constants.
/// Cheap to copy; holds no mutable state.
template <std::floating_point T>
class FieldEvaluator {
 public:
  FieldEvaluator(const MaterialParameters<T>& p, const ShellGeometry<T>& geom, const CoefficientSet<T>& coeffs)
      : geom_(geom), coeffs_(coeffs), derived_(detail::derive(p)) {}

  const DerivedCoefficients<T>& derived() const { return derived_; }
  const CoefficientSet<T>& coefficients() const { return coeffs_; }
  const ShellGeometry<T>& geometry() const { return geom_; }

  /// Radii may overshoot [r_i, r_o] by 1e-12 r_o to absorb grid rounding.
  FieldSample<T> operator()(T r) const {
    const T slack = T(1e-12) * geom_.r_o;
    if (!(r >= geom_.r_i - slack && r <= geom_.r_o + slack))
      throw DomainError("radius outside the shell");
    return unchecked(r);
  }

  FieldSample<T> unchecked(T r) const {
    const auto& d = derived_;
    const auto& c = coeffs_;
    const T s = d.decay;
    const T x = s * r;
    const auto k = scaled_bessel_set(x);
    const T grow = std::exp(x - c.outer_anchor);
    const T decay = std::exp(c.inner_anchor - x);
    // D1 I_nu(x) and D2 K_nu(x)
    const T di0 = c.d1_scaled * k.i0 * grow;
    const T di1 = c.d1_scaled * k.i1 * grow;
    const T dk0 = c.d2_scaled * k.k0 * decay;
    const T dk1 = c.d2_scaled * k.k1 * decay;

    const T q = d.micro_bulk_ratio;
    const T r2 = r * r;
    const T shear_gap = (c.c2 - c.c3) / r2;

    FieldSample<T> f;
    f.r = r;
    f.u_r = d.displacement_gain * c.c1 * r + c.c2 / r + d.displacement_bessel() * (di1 - dk1);
    f.p_tt = d.micro_diag_gain * c.c1 + d.curl_weight * (di0 + dk0) + q * (dk1 - di1) / x + shear_gap;
    f.p_rr = d.micro_diag_gain * c.c1 - d.radial_weight * (di0 + dk0) - q * (dk1 - di1) / x - shear_gap;
    f.p_rt = T(0);
    f.p_tr = T(0);
    f.z = d.source_per_c1 * c.c1 / d.decay_sq + di0 + dk0;
    const T y_bessel = T(2) * d.curl_weight + d.trace_weight;
    f.y = c.c1 * d.hoop_gain / T(2) + c.c3 / r2 - d.curl_weight * (di0 + dk0) + y_bessel * (di1 - dk1) / x;

    f.du_dr = d.displacement_gain * c.c1 - c.c2 / r2 +
              d.displacement_bessel() * (s * (di0 + dk0) + (dk1 - di1) / r);
    // d/dx (I1/x) = I0/x - 2 I1/x^2,  d/dx (K1/x) = -K0/x - 2 K1/x^2
    const T di1_over_x = di0 / x - T(2) * di1 / (x * x);
    const T dk1_over_x = -dk0 / x - T(2) * dk1 / (x * x);
    const T dp_tt = s * (d.curl_weight * (di1 - dk1) + q * (dk1_over_x - di1_over_x)) - T(2) * shear_gap / r;
    f.curl_p = dp_tt + (f.p_tt - f.p_rr) / r;
    return f;
  }

 private:
  ShellGeometry<T> geom_;
  CoefficientSet<T> coeffs_;
  DerivedCoefficients<T> derived_;
};

namespace detail {

/// One displacement row u_r(r)/r and one consistent-coupling row P_tt(r).
template <std::floating_point T>
struct BoundaryRows {
  Vector<T, 4> displacement;
  Vector<T, 4> coupling;
};

template <std::floating_point T>
BoundaryRows<T> boundary_rows(const DerivedCoefficients<T>& d, T r, T outer_anchor, T inner_anchor,
                              BesselScaling scaling) {
  const T x = d.decay * r;
  T i0, i1, k0, k1;
  if (scaling == BesselScaling::kScaled) {
    const auto k = scaled_bessel_set(x);
    const T grow = std::exp(x - outer_anchor);
    const T decay = std::exp(inner_anchor - x);
    i0 = k.i0 * grow;
    i1 = k.i1 * grow;
    k0 = k.k0 * decay;
    k1 = k.k1 * decay;
  } else {
    i0 = bessel_i0(x);
    i1 = bessel_i1(x);
    k0 = bessel_k0(x);
    k1 = bessel_k1(x);
  }
  const T q = d.micro_bulk_ratio;
  BoundaryRows<T> rows;
  rows.displacement = {d.displacement_gain, T(1) / (r * r), d.displacement_bessel() * i1 / r,
                       -d.displacement_bessel() * k1 / r};
  rows.coupling = {d.micro_diag_gain, (T(1) - d.c3_ratio) / (r * r), d.curl_weight * i0 - q * i1 / x,
                   d.curl_weight * k0 + q * k1 / x};
  return rows;
}

}  // namespace detail

/// The 4x4 boundary system in the unknowns (C1, C2, D1', D2') and its
/// right-hand side, where D1', D2' are scaled or raw depending on `scaling`.
template <std::floating_point T>
struct BoundarySystem {
  Matrix<T, 4> matrix{};
  Vector<T, 4> rhs{};
  T outer_anchor{};
  T inner_anchor{};
};

template <std::floating_point T>
BoundarySystem<T> assemble_boundary_system(const DerivedCoefficients<T>& d, const ShellGeometry<T>& geom,
                                           const BoundaryData<T>& bc,
                                           BesselScaling scaling = BesselScaling::kScaled) {
  BoundarySystem<T> sys;
  sys.outer_anchor = d.decay * geom.r_o;
  sys.inner_anchor = d.decay * geom.r_i;
  const auto inner = detail::boundary_rows(d, geom.r_i, sys.outer_anchor, sys.inner_anchor, scaling);
  const auto outer = detail::boundary_rows(d, geom.r_o, sys.outer_anchor, sys.inner_anchor, scaling);
  sys.matrix = {inner.displacement, outer.displacement, inner.coupling, outer.coupling};
  sys.rhs = {bc.u_i / geom.r_i, bc.u_o / geom.r_o, bc.u_i / geom.r_i, bc.u_o / geom.r_o};
  return sys;
}

/// Solves for the integration constants.
///
/// Throws ValidationError / DomainError for bad inputs and ConditioningError
/// when the boundary system is numerically singular or the solve misses the
/// residual bound.
template <std::floating_point T>
CoefficientSet<T> solve_coefficients(const MaterialParameters<T>& p, const ShellGeometry<T>& geom,
                                     const BoundaryData<T>& bc,
                                     BesselScaling scaling = BesselScaling::kScaled) {
  require_valid(p);
  require_valid(geom);
  if (!std::isfinite(bc.u_i) || !std::isfinite(bc.u_o)) throw DomainError("boundary displacements must be finite");

  const auto d = detail::derive(p);
  CoefficientSet<T> out;
  out.outer_anchor = d.decay * geom.r_o;
  out.inner_anchor = d.decay * geom.r_i;
  if (bc.is_zero()) return out;

  const auto sys = assemble_boundary_system(d, geom, bc, scaling);
  const auto lu = DenseLu<T, 4>::factor(sys.matrix);
  const T limit = T(kConditionLimitOverEpsilon) / std::numeric_limits<T>::epsilon();
  auto fail = [](T cond) {
    std::ostringstream os;
    os << "boundary system is numerically singular (condition estimate " << cond
       << "); use the scaled Bessel assembly";
    throw ConditioningError(os.str(), static_cast<double>(cond));
  };
  if (!lu) fail(std::numeric_limits<T>::infinity());
  const T cond = condition_estimate(sys.matrix, *lu);
  if (!std::isfinite(cond) || cond > limit) fail(cond);

  const auto x = lu->solve(sys.rhs);
  auto residual = multiply(sys.matrix, x);
  for (std::size_t i = 0; i < 4; ++i) residual[i] -= sys.rhs[i];
  out.relative_residual = norm2(residual) / norm2(sys.rhs);
  out.condition = cond;
  if (!(out.relative_residual <= T(kSystemResidualTolerance))) fail(cond);

  out.c1 = x[0];
  out.c2 = x[1];
  out.c3 = x[1] * d.c3_ratio;
  if (scaling == BesselScaling::kScaled) {
    out.d1_scaled = x[2];
    out.d2_scaled = x[3];
  } else {
    out.d1_scaled = x[2] * std::exp(out.outer_anchor);
    out.d2_scaled = x[3] * std::exp(-out.inner_anchor);
  }
  return out;
}

/// Throws DomainError when r lies outside [r_i, r_o] (beyond rounding slack).
template <std::floating_point T>
FieldSample<T> evaluate(const MaterialParameters<T>& p, const ShellGeometry<T>& geom,
                        const CoefficientSet<T>& coeffs, T r) {
  return FieldEvaluator<T>(p, geom, coeffs)(r);
}

/// Solved problem bundled with its evaluator.
template <std::floating_point T>
class ShellSolution {
 public:
  ShellSolution(const MaterialParameters<T>& p, const ShellGeometry<T>& geom, const BoundaryData<T>& bc)
      : material_(p), geometry_(geom), boundary_(bc), evaluator_(p, geom, solve_coefficients(p, geom, bc)) {}

  FieldSample<T> operator()(T r) const { return evaluator_(r); }

  const MaterialParameters<T>& material() const { return material_; }
  const ShellGeometry<T>& geometry() const { return geometry_; }
  const BoundaryData<T>& boundary() const { return boundary_; }
  const CoefficientSet<T>& coefficients() const { return evaluator_.coefficients(); }
  const FieldEvaluator<T>& evaluator() const { return evaluator_; }

 private:
  MaterialParameters<T> material_;
  ShellGeometry<T> geometry_;
  BoundaryData<T> boundary_;
  FieldEvaluator<T> evaluator_;
};

}  // namespace rmshell
