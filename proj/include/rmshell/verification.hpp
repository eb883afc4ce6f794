#pragma once

// Independent checks of the closed form:
//  - strong-form residuals of the radial balance, the two moment balances and
//    the three shear equations, with derivatives taken numerically;
//  - a second-order finite-difference solve of the same boundary-value problem;
//  - the stored energy along either solution.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <vector>

#include "rmshell/analytic_solver.hpp"
#include "rmshell/errors.hpp"
#include "rmshell/linalg.hpp"
#include "rmshell/material.hpp"
#include "rmshell/profile.hpp"

namespace rmshell {

enum class Equation {
  kRadialBalance,   // divergence of the radial force
  kRadialMoment,    // rr moment balance, algebraic in P
  kHoopMoment,      // tt moment balance, carries the curvature term
  kShearBalance,    // shear counterpart of the radial balance
  kShearMomentRt,
  kShearMomentTr,
};

inline constexpr std::size_t kEquationCount = 6;

inline const char* equation_name(Equation e) {
  switch (e) {
    case Equation::kRadialBalance: return "radial_balance";
    case Equation::kRadialMoment: return "radial_moment";
    case Equation::kHoopMoment: return "hoop_moment";
    case Equation::kShearBalance: return "shear_balance";
    case Equation::kShearMomentRt: return "shear_moment_rt";
    case Equation::kShearMomentTr: return "shear_moment_tr";
  }
  return "?";
}

template <std::floating_point T>
struct EquationResidual {
  /// max over the grid of |lhs - rhs| / max |term|, with 0/0 read as 0.
  T max_normalized{};
  T max_abs{};
  /// Radius of the worst normalized residual and its reference magnitude.
  T worst_radius{};
  T normalization{};
};

template <std::floating_point T>
struct ResidualReport {
  std::array<EquationResidual<T>, kEquationCount> equations{};
  std::vector<T> grid;
  T step{};

  const EquationResidual<T>& operator[](Equation e) const { return equations[static_cast<std::size_t>(e)]; }

  T max_radial() const {
    return std::max({(*this)[Equation::kRadialBalance].max_normalized, (*this)[Equation::kRadialMoment].max_normalized,
                     (*this)[Equation::kHoopMoment].max_normalized});
  }
  T max_shear() const {
    return std::max({(*this)[Equation::kShearBalance].max_abs, (*this)[Equation::kShearMomentRt].max_abs,
                     (*this)[Equation::kShearMomentTr].max_abs});
  }
};

namespace detail {

/// Scalar value with derivatives obtained by Richardson-extrapolated central
/// differences.
template <std::floating_point W>
struct Jet {
  W value{};
  W first{};
  W second{};
};

/// Central first and second differences at steps h, h/2, ..., h/2^levels,
/// combined by Richardson extrapolation in powers of h^2.
template <std::floating_point W, class F>
std::array<Jet<W>, 5> richardson_jets(const F& fields, W r, W h, int levels) {
  constexpr std::size_t kFields = 5;
  const auto centre = fields(r);
  std::vector<std::array<W, kFields>> d1(levels + 1), d2(levels + 1);
  W step = h;
  for (int j = 0; j <= levels; ++j, step /= 2) {
    const auto plus = fields(r + step);
    const auto minus = fields(r - step);
    for (std::size_t f = 0; f < kFields; ++f) {
      d1[j][f] = (plus[f] - minus[f]) / (2 * step);
      d2[j][f] = (plus[f] - 2 * centre[f] + minus[f]) / (step * step);
    }
  }
  W factor = 4;
  for (int m = 1; m <= levels; ++m, factor *= 4) {
    for (int j = levels; j >= m; --j) {
      for (std::size_t f = 0; f < kFields; ++f) {
        d1[j][f] += (d1[j][f] - d1[j - 1][f]) / (factor - 1);
        d2[j][f] += (d2[j][f] - d2[j - 1][f]) / (factor - 1);
      }
    }
  }
  std::array<Jet<W>, kFields> out;
  for (std::size_t f = 0; f < kFields; ++f) out[f] = {centre[f], d1[levels][f], d2[levels][f]};
  return out;
}

template <std::floating_point W, std::size_t N>
std::pair<W, W> residual_and_scale(const std::array<W, N>& signed_terms) {
  W sum = 0;
  W scale = 0;
  for (W t : signed_terms) {
    sum += t;
    scale = std::max(scale, std::abs(t));
  }
  return {std::abs(sum), scale};
}

template <std::floating_point T, std::floating_point W>
void accumulate(EquationResidual<T>& acc, std::pair<W, W> residual_scale, W r) {
  const auto [abs_res, scale] = residual_scale;
  const T normalized = scale > 0 ? T(abs_res / scale) : T(0);
  acc.max_abs = std::max(acc.max_abs, T(abs_res));
  if (normalized >= acc.max_normalized) {
    acc.max_normalized = normalized;
    acc.worst_radius = T(r);
    acc.normalization = T(scale);
  }
}

}  // namespace detail

/// Strong-form residuals of arbitrary trial fields at n interior radii.
///
/// `fields(r)` returns {u_r, P_rr, P_tt, P_rt, P_tr} in the working type W.
/// Derivatives use central differences at step step_factor * (r_o - r_i),
/// reduced if needed so stencils stay inside the shell, with
/// `richardson_levels` extrapolation steps.
template <std::floating_point T, std::floating_point W, class Fields>
ResidualReport<T> residual_check_fields(const MaterialParameters<T>& p, const ShellGeometry<T>& geom,
                                        const Fields& fields, std::size_t n, T step_factor = T(1e-3),
                                        int richardson_levels = 2) {
  if (n < 10) throw DomainError("residual_check needs at least 10 interior samples");
  require_valid(p);
  require_valid(geom);

  const auto pw = p.template cast<W>();
  const auto gw = geom.template cast<W>();
  const W length = gw.thickness();
  const W spacing = length / W(n + 1);
  const W h = std::min(W(step_factor) * length, spacing / 2);

  const W mue = pw.mu_e;
  const W lae = pw.lambda_e;
  const W mum = pw.mu_m;
  const W lam = pw.lambda_m;
  const W muc = pw.mu_c;
  const W stiff = 2 * mue + lae;
  const W curvature = pw.mu_M * pw.L_c * pw.L_c;

  ResidualReport<T> report;
  report.step = T(h);
  report.grid.reserve(n);

  for (std::size_t k = 0; k < n; ++k) {
    const W r = gw.r_i + W(k + 1) * spacing;
    report.grid.push_back(T(r));
    const auto j = detail::richardson_jets(fields, r, h, richardson_levels);
    const auto& u = j[0];
    const auto& prr = j[1];
    const auto& ptt = j[2];
    const auto& prt = j[3];
    const auto& ptr = j[4];

    const W x = u.first - prr.value;
    const W y = u.value / r - ptt.value;
    const W dx = u.second - prr.first;
    const W dy = u.first / r - u.value / (r * r) - ptt.first;
    const W curl = ptt.first + (ptt.value - prr.value) / r;
    const W dcurl = ptt.second + (ptt.first - prr.first) / r - (ptt.value - prr.value) / (r * r);
    const W trace = prr.value + ptt.value;

    auto& eq = report.equations;
    detail::accumulate(
        eq[0], detail::residual_and_scale(std::array<W, 4>{stiff * dx, lae * dy, 2 * mue * dy, 2 * mue * curl}), r);
    detail::accumulate(eq[1], detail::residual_and_scale(std::array<W, 5>{stiff * x, lae * y, -2 * mum * prr.value,
                                                                          -lam * trace, curvature / r * curl}),
                       r);
    detail::accumulate(eq[2], detail::residual_and_scale(std::array<W, 5>{stiff * y, lae * x, -2 * mum * ptt.value,
                                                                          -lam * trace, curvature * dcurl}),
                       r);

    const W shear_sum = prt.value + ptr.value;
    const W shear_gap = prt.value - ptr.value;
    detail::accumulate(eq[3],
                       detail::residual_and_scale(std::array<W, 2>{
                           mue * (prt.first + ptr.first + 2 * shear_sum / r), -muc * (prt.first - ptr.first)}),
                       r);
    detail::accumulate(eq[4],
                       detail::residual_and_scale(std::array<W, 4>{
                           mue * shear_sum, mum * shear_sum, muc * shear_gap,
                           curvature * (ptr.first / r + shear_sum / (r * r))}),
                       r);
    detail::accumulate(eq[5],
                       detail::residual_and_scale(std::array<W, 4>{
                           mue * shear_sum, mum * shear_sum, -muc * shear_gap,
                           curvature * (-ptr.second + shear_sum / (r * r) - prt.first / r - ptr.first / r)}),
                       r);
  }
  return report;
}

/// Strong-form residuals of the closed form with the given constants.
///
/// Fields are evaluated in W (long double by default). The closed form
/// solves the field equations for any constants, so this checks the field
/// formulas; boundary values are checked separately.
template <std::floating_point T, std::floating_point W = long double>
ResidualReport<T> residual_check(const MaterialParameters<T>& p, const ShellGeometry<T>& geom,
                                 const CoefficientSet<T>& coeffs, std::size_t n, T step_factor = T(1e-3),
                                 int richardson_levels = 2) {
  require_valid(p);
  require_valid(geom);
  const FieldEvaluator<W> eval(p.template cast<W>(), geom.template cast<W>(), coeffs.template cast<W>());
  auto fields = [&eval](W r) {
    const auto s = eval.unchecked(r);
    return std::array<W, 5>{s.u_r, s.p_rr, s.p_tt, s.p_rt, s.p_tr};
  };
  return residual_check_fields<T, W>(p, geom, fields, n, step_factor, richardson_levels);
}

/// Nodal solution of the finite-difference oracle.
template <std::floating_point T>
struct FdSolution {
  std::vector<T> r;
  std::vector<T> u_r;
  std::vector<T> p_rr;
  std::vector<T> p_tt;
  static constexpr int order = 2;
  /// max |pivot| / min |pivot| of the banded factorization.
  T pivot_ratio{};

  std::size_t size() const { return r.size(); }
};

namespace detail {

enum FdField : std::size_t { kU = 0, kPrr = 1, kPtt = 2 };

/// Second-order first-derivative stencil: central inside, one-sided at ends.
template <std::floating_point T>
void first_derivative_stencil(std::size_t k, std::size_t n, T h, std::array<std::ptrdiff_t, 3>& nodes,
                              std::array<T, 3>& weights) {
  if (k == 0) {
    nodes = {0, 1, 2};
    weights = {T(-3) / (2 * h), T(4) / (2 * h), T(-1) / (2 * h)};
  } else if (k + 1 == n) {
    const auto last = static_cast<std::ptrdiff_t>(n - 1);
    nodes = {last, last - 1, last - 2};
    weights = {T(3) / (2 * h), T(-4) / (2 * h), T(1) / (2 * h)};
  } else {
    const auto c = static_cast<std::ptrdiff_t>(k);
    nodes = {c - 1, c, c + 1};
    weights = {T(-1) / (2 * h), T(0), T(1) / (2 * h)};
  }
}

/// Same stencil applied to nodal values.
template <std::floating_point T>
T nodal_derivative(std::span<const T> f, std::size_t k, T h) {
  std::array<std::ptrdiff_t, 3> nodes{};
  std::array<T, 3> w{};
  first_derivative_stencil(k, f.size(), h, nodes, w);
  T d = 0;
  for (int s = 0; s < 3; ++s) d += w[s] * f[static_cast<std::size_t>(nodes[s])];
  return d;
}

}  // namespace detail

/// Second-order finite differences for (u_r, P_rr, P_tt) on n uniform nodes.
///
/// Unknowns are interleaved per node. Interior nodes carry the radial balance
/// and both moment balances; boundary nodes carry the Dirichlet value of u_r,
/// the coupling value of P_tt, and the rr moment balance with one-sided
/// derivatives. Throws OracleFailure when the discrete system is singular.
template <std::floating_point T>
FdSolution<T> fd_solve(const MaterialParameters<T>& p, const ShellGeometry<T>& geom, const BoundaryData<T>& bc,
                       std::size_t n) {
  using namespace detail;
  if (n < 32) throw DomainError("fd_solve needs at least 32 grid points");
  require_valid(p);
  require_valid(geom);

  const auto grid = uniform_grid(geom, n);
  const T h = geom.thickness() / T(n - 1);
  const T mue = p.mu_e;
  const T lae = p.lambda_e;
  const T mum = p.mu_m;
  const T lam = p.lambda_m;
  const T stiff = 2 * mue + lae;
  const T curvature = p.mu_M * p.L_c * p.L_c;

  BandedMatrix<T> a(3 * n, 8, 8);
  std::vector<T> rhs(3 * n, T(0));
  auto col = [](std::size_t node, FdField f) { return 3 * node + f; };

  auto add_value = [&](std::size_t row, std::size_t k, FdField f, T c) { a.add(row, col(k, f), c); };
  auto add_first = [&](std::size_t row, std::size_t k, FdField f, T c) {
    std::array<std::ptrdiff_t, 3> nodes{};
    std::array<T, 3> w{};
    first_derivative_stencil(k, n, h, nodes, w);
    for (int s = 0; s < 3; ++s)
      if (w[s] != T(0)) a.add(row, col(static_cast<std::size_t>(nodes[s]), f), c * w[s]);
  };
  auto add_second = [&](std::size_t row, std::size_t k, FdField f, T c) {
    a.add(row, col(k - 1, f), c / (h * h));
    a.add(row, col(k, f), -2 * c / (h * h));
    a.add(row, col(k + 1, f), c / (h * h));
  };
  // curvature-weighted curl term: w (P_tt' + (P_tt - P_rr) / r)
  auto add_curl = [&](std::size_t row, std::size_t k, T w) {
    const T r = grid[k];
    add_first(row, k, kPtt, w);
    add_value(row, k, kPtt, w / r);
    add_value(row, k, kPrr, -w / r);
  };
  // rr moment balance at node k, valid at every node
  auto radial_moment = [&](std::size_t row, std::size_t k) {
    const T r = grid[k];
    add_first(row, k, kU, stiff);
    add_value(row, k, kPrr, -stiff - 2 * mum - lam);
    add_value(row, k, kU, lae / r);
    add_value(row, k, kPtt, -lae - lam);
    add_curl(row, k, curvature / r);
  };

  for (std::size_t k = 0; k < n; ++k) {
    const T r = grid[k];
    const std::size_t base = 3 * k;
    if (k == 0 || k + 1 == n) {
      const T u = k == 0 ? bc.u_i : bc.u_o;
      add_value(base, k, kU, T(1));
      rhs[base] = u;
      radial_moment(base + 1, k);
      add_value(base + 2, k, kPtt, T(1));
      rhs[base + 2] = u / r;
      continue;
    }
    // stiff (u'' - P_rr') + (lae + 2 mue)(u'/r - u/r^2 - P_tt') + 2 mue curl = 0
    const T hoop = lae + 2 * mue;
    add_second(base, k, kU, stiff);
    add_first(base, k, kPrr, -stiff);
    add_first(base, k, kU, hoop / r);
    add_value(base, k, kU, -hoop / (r * r));
    add_first(base, k, kPtt, -hoop);
    add_curl(base, k, 2 * mue);

    radial_moment(base + 1, k);

    // stiff (u/r - P_tt) + lae (u' - P_rr) - 2 mum P_tt - lam tr P + curvature curl' = 0
    const std::size_t row = base + 2;
    add_value(row, k, kU, stiff / r);
    add_value(row, k, kPtt, -stiff - 2 * mum - lam);
    add_first(row, k, kU, lae);
    add_value(row, k, kPrr, -lae - lam);
    add_second(row, k, kPtt, curvature);
    add_first(row, k, kPtt, curvature / r);
    add_first(row, k, kPrr, -curvature / r);
    add_value(row, k, kPtt, -curvature / (r * r));
    add_value(row, k, kPrr, curvature / (r * r));
  }

  // Move the imposed values to the right-hand side so their rows stay
  // decoupled through pivoting and come back exactly.
  for (std::size_t node : {std::size_t{0}, n - 1}) {
    for (FdField field : {kU, kPtt}) {
      const std::size_t j = col(node, field);
      const T value = rhs[j];
      const std::size_t first = j > 16 ? j - 16 : 0;
      const std::size_t last = std::min(3 * n - 1, j + 8);
      for (std::size_t i = first; i <= last; ++i) {
        if (i == j || !a.in_band(i, j)) continue;
        rhs[i] -= a.at(i, j) * value;
        a.at(i, j) = T(0);
      }
    }
  }

  const auto f = a.solve_in_place(rhs);
  const bool finite = std::all_of(rhs.begin(), rhs.end(), [](T v) { return std::isfinite(v); });
  if (f.singular || !finite) {
    std::ostringstream os;
    os << "finite-difference system is singular (n = " << n << ", pivot ratio " << f.pivot_ratio << ")";
    throw OracleFailure(os.str(), n, static_cast<double>(f.pivot_ratio));
  }

  FdSolution<T> out;
  out.r = grid;
  out.pivot_ratio = f.pivot_ratio;
  out.u_r.resize(n);
  out.p_rr.resize(n);
  out.p_tt.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.u_r[k] = rhs[3 * k + kU];
    out.p_rr[k] = rhs[3 * k + kPrr];
    out.p_tt[k] = rhs[3 * k + kPtt];
  }
  return out;
}

/// max_k |u_fd - u_exact| / max_k |u_exact| on the oracle nodes; 0 when both vanish.
template <std::floating_point T>
T fd_displacement_error(const FdSolution<T>& fd, const FieldEvaluator<T>& exact) {
  T err = 0;
  T scale = 0;
  for (std::size_t k = 0; k < fd.size(); ++k) {
    const T u = exact(fd.r[k]).u_r;
    err = std::max(err, std::abs(fd.u_r[k] - u));
    scale = std::max(scale, std::abs(u));
  }
  return scale > 0 ? err / scale : err;
}

/// Convergence order from errors on grids with spacings h_coarse > h_fine.
template <std::floating_point T>
T observed_order(T error_coarse, T error_fine, T h_coarse, T h_fine) {
  return std::log(error_coarse / error_fine) / std::log(h_coarse / h_fine);
}

namespace detail {

template <std::floating_point T>
T trapezoid_2pi_r(std::span<const T> r, std::span<const T> density) {
  T sum = 0;
  for (std::size_t k = 1; k < r.size(); ++k)
    sum += (r[k] - r[k - 1]) * (r[k] * density[k] + r[k - 1] * density[k - 1]) / 2;
  return 2 * std::numbers::pi_v<T> * sum;
}

template <std::floating_point T>
T axisymmetric_density(const MaterialParameters<T>& p, T r, T u, T du, T prr, T ptt, T curl) {
  const Tensor2<T> grad{{{du, T(0)}, {T(0), u / r}}};
  const Tensor2<T> micro{{{prr, T(0)}, {T(0), ptt}}};
  return energy_density(p, grad, micro, curl);
}

}  // namespace detail

/// Same quadrature along an evaluator with arbitrary constants.
template <std::floating_point T>
T energy_along(const MaterialParameters<T>& p, const FieldEvaluator<T>& eval, std::size_t n) {
  const auto r = uniform_grid(eval.geometry(), n);
  std::vector<T> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto s = eval(r[k]);
    w[k] = detail::axisymmetric_density(p, s.r, s.u_r, s.du_dr, s.p_rr, s.p_tt, s.curl_p);
  }
  return detail::trapezoid_2pi_r<T>(r, w);
}

/// Same quadrature along the oracle solution, derivatives by its own stencils.
template <std::floating_point T>
T energy_along(const MaterialParameters<T>& p, const FdSolution<T>& fd) {
  const std::size_t n = fd.size();
  const T h = fd.r[1] - fd.r[0];
  std::vector<T> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const T r = fd.r[k];
    const T du = detail::nodal_derivative<T>(fd.u_r, k, h);
    const T dptt = detail::nodal_derivative<T>(fd.p_tt, k, h);
    const T curl = dptt + (fd.p_tt[k] - fd.p_rr[k]) / r;
    w[k] = detail::axisymmetric_density(p, r, fd.u_r[k], du, fd.p_rr[k], fd.p_tt[k], curl);
  }
  return detail::trapezoid_2pi_r<T>(fd.r, w);
}

/// Stored energy per unit length along the closed form, trapezoid rule with
/// weight 2 pi r on n uniform nodes.
template <std::floating_point T>
T energy_check(const MaterialParameters<T>& p, const ShellGeometry<T>& geom, const BoundaryData<T>& bc,
               std::size_t n) {
  require_valid(p);
  const FieldEvaluator<T> eval(p, geom, solve_coefficients(p, geom, bc));
  return energy_along(p, eval, n);
}

/// Absolute misfit of the four boundary values, each relative to
/// max(|U_i|, |U_o|) (absolute when both vanish).
template <std::floating_point T>
struct BoundaryErrors {
  T u_inner{};
  T u_outer{};
  T coupling_inner{};
  T coupling_outer{};

  T max() const { return std::max({u_inner, u_outer, coupling_inner, coupling_outer}); }
};

template <std::floating_point T>
BoundaryErrors<T> boundary_errors(const FieldEvaluator<T>& eval, const BoundaryData<T>& bc) {
  const auto& g = eval.geometry();
  const T scale = std::max({std::abs(bc.u_i), std::abs(bc.u_o)});
  const T denom = scale > 0 ? scale : T(1);
  const auto in = eval(g.r_i);
  const auto out = eval(g.r_o);
  return {std::abs(in.u_r - bc.u_i) / denom, std::abs(out.u_r - bc.u_o) / denom,
          std::abs(in.p_tt - bc.u_i / g.r_i) / denom, std::abs(out.p_tt - bc.u_o / g.r_o) / denom};
}

/// Thresholds of the combined verification run.
struct VerificationLimits {
  double residual = 1e-7;
  double boundary = 1e-9;
  double fd_error = 1e-3;
  double energy_gap = 1e-3;
  std::size_t residual_samples = 1000;
  std::size_t fd_points = 1024;
  std::size_t energy_points = 2001;
};

template <std::floating_point T>
struct VerificationReport {
  ResidualReport<T> residuals;
  BoundaryErrors<T> boundary;
  T fd_error{};
  T energy{};
  T fd_energy{};
  T energy_gap{};
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// Runs every check against the supplied constants, which need not be the
/// solved ones (a perturbed set must fail).
template <std::floating_point T>
VerificationReport<T> verify(const MaterialParameters<T>& p, const ShellGeometry<T>& geom, const BoundaryData<T>& bc,
                             const CoefficientSet<T>& coeffs, const VerificationLimits& limits = {}) {
  VerificationReport<T> rep;
  const FieldEvaluator<T> eval(p, geom, coeffs);
  rep.residuals = residual_check(p, geom, coeffs, limits.residual_samples);
  rep.boundary = boundary_errors(eval, bc);
  const auto fd = fd_solve(p, geom, bc, limits.fd_points);
  rep.fd_error = fd_displacement_error(fd, eval);
  rep.energy = energy_along(p, eval, limits.energy_points);
  rep.fd_energy = energy_along(p, fd);
  const T gap = std::abs(rep.energy - rep.fd_energy);
  rep.energy_gap = rep.energy > 0 ? gap / rep.energy : gap;

  auto check = [&](bool ok, const char* metric, T value, double limit) {
    if (ok) return;
    std::ostringstream os;
    os.precision(6);
    os << metric << " = " << value << " violates limit " << limit;
    rep.failures.push_back(os.str());
  };
  check(rep.residuals.max_radial() <= T(limits.residual), "residual_max", rep.residuals.max_radial(), limits.residual);
  check(rep.residuals.max_shear() == T(0), "shear_residual_max", rep.residuals.max_shear(), 0.0);
  check(rep.boundary.max() <= T(limits.boundary), "boundary_error_max", rep.boundary.max(), limits.boundary);
  check(rep.fd_error <= T(limits.fd_error), "fd_relative_error", rep.fd_error, limits.fd_error);
  check(rep.energy_gap <= T(limits.energy_gap), "energy_relative_gap", rep.energy_gap, limits.energy_gap);
  check(rep.energy >= T(0), "energy", rep.energy, 0.0);
  return rep;
}

}  // namespace rmshell
