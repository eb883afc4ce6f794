#pragma once

// Isotropic relaxed micromorphic moduli in plane strain.
//
// Naming: _e meso (elastic coupling), _m micro, _M macro, _c Cosserat couple.
// Plane-strain bulk moduli are kappa = lambda + mu. Macro and meso/micro
// moduli are linked by the Reuss relations 1/mu_M = 1/mu_e + 1/mu_m and
// 1/kappa_M = 1/kappa_e + 1/kappa_m.

#include <array>
#include <cmath>
#include <concepts>
#include <sstream>
#include <string>
#include <vector>

#include "rmshell/errors.hpp"

namespace rmshell {

/// Relative tolerance of the Reuss consistency checks.
inline constexpr double kReussTolerance = 1e-12;

template <std::floating_point T>
struct MaterialParameters {
  T mu_e{};
  T lambda_e{};
  T mu_m{};
  T lambda_m{};
  /// Stored for completeness; never read by the axisymmetric solution.
  T mu_c{};
  T mu_M{};
  T kappa_M{};
  T L_c{};

  T kappa_e() const { return lambda_e + mu_e; }
  T kappa_m() const { return lambda_m + mu_m; }
  T lambda_M() const { return kappa_M - mu_M; }

  /// Macro moduli from the meso and micro ones through the Reuss relations.
  static MaterialParameters from_moduli(T mu_e, T lambda_e, T mu_m, T lambda_m, T mu_c, T L_c) {
    MaterialParameters p{mu_e, lambda_e, mu_m, lambda_m, mu_c, T{}, T{}, L_c};
    p.mu_M = mu_e * mu_m / (mu_e + mu_m);
    p.kappa_M = p.kappa_e() * p.kappa_m() / (p.kappa_e() + p.kappa_m());
    return p;
  }

  template <std::floating_point U>
  MaterialParameters<U> cast() const {
    return {U(mu_e), U(lambda_e), U(mu_m), U(lambda_m), U(mu_c), U(mu_M), U(kappa_M), U(L_c)};
  }

  bool operator==(const MaterialParameters&) const = default;
};

/// Figure parametrization: moduli relative to mu_M plus geometry and loading.
template <std::floating_point T>
struct DimensionlessSet {
  T g1{};        // mu_m / mu_M
  T g2{};        // kappa_m / mu_M
  T g3{};        // kappa_M / mu_M
  T beta{};      // r_i / r_o
  T lc_ratio{};  // r_o / L_c
  T delta{};     // U_i / U_o
};

enum class Constraint {
  kFinite,
  kMicroShearPositive,
  kMesoShearPositive,
  kCoupleNonNegative,
  kMicroBulkPositive,
  kMesoBulkPositive,
  kLengthPositive,
  kReussShear,
  kReussBulk,
  kReussGapShear,
  kReussGapBulk,
  kMesoShearAboveMacro,
  kMesoBulkAboveMacro,
  kMacroShearPositive,
  kMacroBulkPositive,
  kMacroBulkAboveShear,
  kMicroBulkAboveShear,
};

struct Violation {
  Constraint constraint;
  std::string description;
};

struct ValidityReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  bool violates(Constraint c) const {
    for (const auto& v : violations)
      if (v.constraint == c) return true;
    return false;
  }

  std::vector<std::string> descriptions() const {
    std::vector<std::string> out;
    for (const auto& v : violations) out.push_back(v.description);
    return out;
  }
};

namespace detail {

template <std::floating_point T>
bool reuss_consistent(T macro, T meso, T micro) {
  const T lhs = T(1) / macro;
  const T rhs = T(1) / meso + T(1) / micro;
  return std::abs(lhs - rhs) <= T(kReussTolerance) * std::abs(lhs);
}

template <class T>
std::string describe(const char* text, T value) {
  std::ostringstream os;
  os.precision(17);
  os << text << " (got " << value << ")";
  return os.str();
}

}  // namespace detail

/// Positivity of the energy, Reuss consistency, and the inequalities they imply.
template <std::floating_point T>
ValidityReport validate(const MaterialParameters<T>& p) {
  ValidityReport report;
  auto require = [&](bool ok, Constraint c, const char* text, auto value) {
    if (!ok) report.violations.push_back({c, detail::describe(text, value)});
  };
  auto require_plain = [&](bool ok, Constraint c, const char* text) {
    if (!ok) report.violations.push_back({c, text});
  };

  const std::array<T, 8> all{p.mu_e, p.lambda_e, p.mu_m, p.lambda_m, p.mu_c, p.mu_M, p.kappa_M, p.L_c};
  bool finite = true;
  for (T v : all) finite = finite && std::isfinite(v);
  if (!finite) {
    require_plain(false, Constraint::kFinite, "all moduli and L_c must be finite");
    return report;
  }

  const T ke = p.kappa_e();
  const T km = p.kappa_m();
  require(p.mu_m > 0, Constraint::kMicroShearPositive, "mu_m > 0", p.mu_m);
  require(p.mu_e > 0, Constraint::kMesoShearPositive, "mu_e > 0", p.mu_e);
  require(p.mu_c >= 0, Constraint::kCoupleNonNegative, "mu_c >= 0", p.mu_c);
  require(km > 0, Constraint::kMicroBulkPositive, "kappa_m > 0", km);
  require(ke > 0, Constraint::kMesoBulkPositive, "kappa_e > 0", ke);
  require(p.L_c > 0, Constraint::kLengthPositive, "L_c > 0", p.L_c);
  require(p.mu_M > 0, Constraint::kMacroShearPositive, "mu_M > 0", p.mu_M);
  require(p.kappa_M > 0, Constraint::kMacroBulkPositive, "kappa_M > 0", p.kappa_M);
  require(p.mu_m > p.mu_M, Constraint::kReussGapShear, "mu_m > mu_M (Reuss gap)", p.mu_m - p.mu_M);
  require(km > p.kappa_M, Constraint::kReussGapBulk, "kappa_m > kappa_M (Reuss gap)", km - p.kappa_M);
  require_plain(detail::reuss_consistent(p.mu_M, p.mu_e, p.mu_m), Constraint::kReussShear,
                "1/mu_M = 1/mu_e + 1/mu_m");
  require_plain(detail::reuss_consistent(p.kappa_M, ke, km), Constraint::kReussBulk,
                "1/kappa_M = 1/kappa_e + 1/kappa_m");
  require(p.mu_e > p.mu_M, Constraint::kMesoShearAboveMacro, "mu_e > mu_M", p.mu_e - p.mu_M);
  require(ke > p.kappa_M, Constraint::kMesoBulkAboveMacro, "kappa_e > kappa_M", ke - p.kappa_M);
  require(p.kappa_M > p.mu_M, Constraint::kMacroBulkAboveShear, "kappa_M > mu_M", p.kappa_M - p.mu_M);
  require(km > p.mu_m, Constraint::kMicroBulkAboveShear, "kappa_m > mu_m", km - p.mu_m);
  return report;
}

template <std::floating_point T>
void require_valid(const MaterialParameters<T>& p) {
  const auto report = validate(p);
  if (!report.ok()) throw ValidationError(report.descriptions());
}

/// Violated inequalities of a dimensionless set, empty when admissible.
template <std::floating_point T>
std::vector<std::string> check_dimensionless(const DimensionlessSet<T>& g) {
  std::vector<std::string> out;
  auto require = [&](bool ok, const char* text, T value) {
    if (!ok) out.push_back(detail::describe(text, value));
  };
  require(g.g1 > 1, "G1 > 1", g.g1);
  require(g.g2 > g.g1, "G2 > G1", g.g2 - g.g1);
  require(g.g3 > 1, "G3 > 1", g.g3);
  require(g.g2 > g.g3, "G2 > G3", g.g2 - g.g3);
  require(g.beta > 0 && g.beta < 1, "0 < beta < 1", g.beta);
  require(g.lc_ratio > 0, "lc_ratio > 0", g.lc_ratio);
  require(std::isfinite(g.delta), "delta finite", g.delta);
  return out;
}

/// Invert the Reuss relations for the meso moduli given G1, G2, G3.
///
/// mu_M and r_o fix the stress and length units; both default to 1.
/// Throws HomogenizationError when G1 <= 1 or G2 <= G3 (no finite positive
/// meso modulus exists) and ValidationError for any other violated inequality.
template <std::floating_point T>
MaterialParameters<T> from_dimensionless(const DimensionlessSet<T>& g, T mu_M = T(1), T r_o = T(1),
                                         T mu_c = T(0)) {
  auto violations = check_dimensionless(g);
  if (!(mu_M > 0)) violations.push_back(detail::describe("mu_M > 0", mu_M));
  if (!(r_o > 0)) violations.push_back(detail::describe("r_o > 0", r_o));
  if (!(g.g1 > 1) || !(g.g2 > g.g3)) throw HomogenizationError(violations);
  if (!violations.empty()) throw ValidationError(violations);

  const T mu_m = g.g1 * mu_M;
  const T kappa_m = g.g2 * mu_M;
  const T kappa_M = g.g3 * mu_M;
  const T mu_e = mu_M * mu_m / (mu_m - mu_M);
  const T kappa_e = kappa_M * kappa_m / (kappa_m - kappa_M);

  MaterialParameters<T> p{mu_e, kappa_e - mu_e, mu_m, kappa_m - mu_m, mu_c, mu_M, kappa_M, r_o / g.lc_ratio};
  require_valid(p);
  return p;
}

/// (G1, G2, G3, r_o / L_c) recovered from the moduli.
template <std::floating_point T>
std::array<T, 4> dimensionless_ratios(const MaterialParameters<T>& p, T r_o) {
  return {p.mu_m / p.mu_M, p.kappa_m() / p.mu_M, p.kappa_M / p.mu_M, r_o / p.L_c};
}

template <std::floating_point T>
using Tensor2 = std::array<std::array<T, 2>, 2>;

/// Strain energy density restricted to the in-plane components.
///
/// curl_p is the single nonzero component of Curl P in the plane-strain
/// setting. Throws ValidationError for inadmissible moduli.
template <std::floating_point T>
T energy_density(const MaterialParameters<T>& p, const Tensor2<T>& grad_u, const Tensor2<T>& micro,
                 T curl_p) {
  require_valid(p);
  T sym_rel = 0;
  T skew_rel = 0;
  T sym_micro = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const T rel_ij = grad_u[i][j] - micro[i][j];
      const T rel_ji = grad_u[j][i] - micro[j][i];
      const T s = (rel_ij + rel_ji) / 2;
      const T w = (rel_ij - rel_ji) / 2;
      const T m = (micro[i][j] + micro[j][i]) / 2;
      sym_rel += s * s;
      skew_rel += w * w;
      sym_micro += m * m;
    }
  }
  const T tr_rel = grad_u[0][0] + grad_u[1][1] - micro[0][0] - micro[1][1];
  const T tr_micro = micro[0][0] + micro[1][1];
  return p.mu_e * sym_rel + p.lambda_e / 2 * tr_rel * tr_rel + p.mu_c * skew_rel + p.mu_m * sym_micro +
         p.lambda_m / 2 * tr_micro * tr_micro + p.mu_M * p.L_c * p.L_c / 2 * curl_p * curl_p;
}

}  // namespace rmshell
