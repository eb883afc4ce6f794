#pragma once

// Parameter sets of the published parametric studies, as data.

#include <initializer_list>
#include <string>
#include <vector>

#include "rmshell/analytic_solver.hpp"
#include "rmshell/errors.hpp"
#include "rmshell/material.hpp"

namespace rmshell {

/// Material, geometry and loading of one dimensionless configuration.
struct ShellProblem {
  MaterialParameters<double> material;
  ShellGeometry<double> geometry;
  BoundaryData<double> boundary;
};

/// r_i = beta r_o, U_i = delta U_o. Throws as from_dimensionless.
inline ShellProblem make_problem(const DimensionlessSet<double>& g, double mu_M = 1.0, double r_o = 1.0,
                                 double u_o = 1.0, double mu_c = 0.0) {
  return {from_dimensionless(g, mu_M, r_o, mu_c), {g.beta * r_o, r_o}, {g.delta * u_o, u_o}};
}

struct CurvePreset {
  std::string label;
  DimensionlessSet<double> set;
};

struct FigurePreset {
  int id{};
  std::string title;
  /// Key of the DimensionlessSet field that differs between curves.
  std::string varied_key;
  std::vector<CurvePreset> curves;
  /// Free-form provenance remarks copied into the metadata sidecar.
  std::vector<std::string> notes;
};

namespace detail {

inline std::vector<CurvePreset> vary(DimensionlessSet<double> base, double DimensionlessSet<double>::*field,
                                     const char* key, std::initializer_list<double> values) {
  std::vector<CurvePreset> out;
  for (double v : values) {
    base.*field = v;
    std::string label = key;
    label += '=';
    std::string number = std::to_string(v);
    number.erase(number.find_last_not_of('0') + 1);
    if (number.back() == '.') number.pop_back();
    out.push_back({label + number, base});
  }
  return out;
}

inline std::vector<FigurePreset> build_presets() {
  using D = DimensionlessSet<double>;
  std::vector<FigurePreset> f;
  //           g1    g2   g3   beta  lc   delta
  const D thick{1.45, 5.0, 2.0, 0.15, 2.0, 0.0};
  f.push_back({2, "thick shell, micro shear ratio", "g1", vary(thick, &D::g1, "g1", {1.45, 3.25, 4.95}), {}});
  D thin = thick;
  thin.beta = 0.85;
  f.push_back({3, "thin shell, micro shear ratio", "g1", vary(thin, &D::g1, "g1", {1.45, 3.25, 4.95}), {}});
  const D bulk{2.0, 5.0, 1.3, 0.15, 2.0, 0.0};
  f.push_back({4, "thick shell, micro bulk ratio", "g2", vary(bulk, &D::g2, "g2", {3.0, 5.0, 7.0}), {}});
  const D macro{2.5, 3.5, 2.0, 0.15, 2.0, 0.0};
  f.push_back({5,
               "thick shell, macro bulk ratio",
               "g3",
               vary(macro, &D::g3, "g3", {1.5, 2.0, 2.5}),
               {"g3 values implementer-chosen: the source study does not list them"}});
  const D ratio{1.5, 5.5, 2.0, 0.2, 1.0, 0.0};
  f.push_back({6, "thick shell, boundary displacement ratio", "delta",
               vary(ratio, &D::delta, "delta", {-0.5, -0.25, 0.0, 0.25, 0.5}), {}});
  const D length{1.5, 5.0, 2.0, 0.25, 1.0, 0.5};
  f.push_back({7, "deviation, large characteristic length", "lc_ratio",
               vary(length, &D::lc_ratio, "lc_ratio", {0.05, 0.1, 0.2, 0.5, 1.0}), {}});
  f.push_back({8, "deviation, small characteristic length", "lc_ratio",
               vary(length, &D::lc_ratio, "lc_ratio", {2.0, 5.0, 10.0, 20.0, 200.0}), {}});
  return f;
}

}  // namespace detail

inline const std::vector<FigurePreset>& figure_presets() {
  static const std::vector<FigurePreset> presets = detail::build_presets();
  return presets;
}

/// Throws DomainError for ids outside 2..8.
inline const FigurePreset& figure_preset(int id) {
  for (const auto& f : figure_presets())
    if (f.id == id) return f;
  throw DomainError("unknown figure id " + std::to_string(id) + " (expected 2..8)");
}

}  // namespace rmshell
