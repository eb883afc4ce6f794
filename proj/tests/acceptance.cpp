// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--expect-fail N[,N...]]
//
// Exit status is 0 when the failing criteria are exactly the expected set.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bessel_oracle.hpp"
#include "rmshell/rmshell.hpp"

namespace {

using rmshell::DimensionlessSet;
using rmshell::FieldEvaluator;
using rmshell::make_problem;
using rmshell::ShellProblem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

FieldEvaluator<double> solved(const ShellProblem& pr) {
  return {pr.material, pr.geometry, rmshell::solve_coefficients(pr.material, pr.geometry, pr.boundary)};
}

const rmshell::CurvePreset& curve(int figure, std::size_t index) { return rmshell::figure_preset(figure).curves.at(index); }

double max_abs_deviation(const DimensionlessSet<double>& g) {
  const auto pr = make_problem(g);
  const auto prof = rmshell::profile(pr.material, pr.geometry, pr.boundary, 1001);
  double m = 0;
  for (double d : *prof.deviation) m = std::max(m, std::abs(d));
  return m;
}

/// +1 above classical on every open-interior sample, -1 below on every one, 0 otherwise.
int interior_side(const DimensionlessSet<double>& g) {
  const auto pr = make_problem(g);
  const auto prof = rmshell::profile(pr.material, pr.geometry, pr.boundary, 1001);
  bool above = true;
  bool below = true;
  for (std::size_t k = 1; k + 1 < prof.size(); ++k) {
    const double d = prof.samples[k].u_r - prof.classical_u[k];
    above = above && d > 0;
    below = below && d < 0;
  }
  return above ? 1 : below ? -1 : 0;
}

Outcome closed_form_exactness() {
  const auto t0 = Clock::now();
  const auto pr = make_problem(curve(2, 0).set);
  const auto c = rmshell::solve_coefficients(pr.material, pr.geometry, pr.boundary);
  const auto rep = rmshell::residual_check(pr.material, pr.geometry, c, 1000);
  const double t = seconds_since(t0);
  const bool ok = rep.max_radial() <= 1e-7 && rep.max_shear() == 0.0 && rep.grid.size() == 1000 && t < 1.0;
  return {ok, "max normalized residual " + fmt(rep.max_radial()) + ", shear " + fmt(rep.max_shear()) + ", " +
                  fmt(t) + " s"};
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  double worst_error = 0;
  double lo_order = 10;
  double hi_order = -10;
  std::string lo_label;
  std::string hi_label;
  bool ok = true;
  for (const auto& fig : rmshell::figure_presets()) {
    for (const auto& cv : fig.curves) {
      const auto pr = make_problem(cv.set);
      const auto exact = solved(pr);
      auto err = [&](std::size_t n) {
        return rmshell::fd_displacement_error(rmshell::fd_solve(pr.material, pr.geometry, pr.boundary, n), exact);
      };
      const double e512 = err(512);
      const double e1024 = err(1024);
      const double e2048 = err(2048);
      const double order = rmshell::observed_order(e512, e2048, 1.0 / 511, 1.0 / 2047);
      const std::string label = "fig" + std::to_string(fig.id) + " " + cv.label;
      worst_error = std::max(worst_error, e1024);
      if (order < lo_order) lo_order = order, lo_label = label;
      if (order > hi_order) hi_order = order, hi_label = label;
      ok = ok && e1024 <= 1e-3 && std::abs(order - 2.0) <= 0.3;
    }
  }
  const double t = seconds_since(t0);
  ok = ok && t < 10.0;
  return {ok, "worst n=1024 error " + fmt(worst_error) + ", order range [" + fmt(lo_order) + " (" + lo_label + "), " +
                  fmt(hi_order) + " (" + hi_label + ")], " + fmt(t) + " s"};
}

Outcome boundary_conditions() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  double worst_bc = 0;
  double worst_c3 = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    DimensionlessSet<double> g;
    g.g1 = 1.02 + 5 * u(rng);
    g.g3 = 1.02 + 5 * u(rng);
    g.g2 = std::max(g.g1, g.g3) * (1.02 + 2 * u(rng));
    g.beta = 0.05 + 0.9 * u(rng);
    g.lc_ratio = std::exp(std::log(0.05) + u(rng) * std::log(4000.0));
    g.delta = 2 * u(rng) - 1;
    const double r_o = 0.1 + 10 * u(rng);
    auto pr = make_problem(g, 0.1 + 100 * u(rng), r_o, (2 * u(rng) - 1) * r_o);
    const auto eval = solved(pr);
    const auto& c = eval.coefficients();
    const auto& geo = pr.geometry;
    const auto& bc = pr.boundary;
    const double scale = std::max(std::abs(bc.u_i), std::abs(bc.u_o));
    const auto in = eval(geo.r_i);
    const auto out = eval(geo.r_o);
    worst_bc = std::max({worst_bc, std::abs(in.u_r - bc.u_i) / scale, std::abs(out.u_r - bc.u_o) / scale,
                         std::abs(in.p_tt - bc.u_i / geo.r_i) * geo.r_i / scale,
                         std::abs(out.p_tt - bc.u_o / geo.r_o) * geo.r_o / scale});
    const double m = pr.material.mu_m / (pr.material.mu_e + pr.material.mu_m);
    if (c.c2 != 0) worst_c3 = std::max(worst_c3, rel_err(c.c3, c.c2 * m));
  }
  return {worst_bc <= 1e-9 && worst_c3 <= 1e-12,
          "1000 sets, worst boundary error " + fmt(worst_bc) + ", worst C3 constraint error " + fmt(worst_c3)};
}

Outcome thick_shell_trend() {
  const int s145 = interior_side(curve(2, 0).set);
  const int s325 = interior_side(curve(2, 1).set);
  const int s495 = interior_side(curve(2, 2).set);
  auto word = [](int s) { return s > 0 ? "above" : s < 0 ? "below" : "crossing"; };
  return {s145 == 1 && s325 == -1 && s495 == -1,
          std::string("g1=1.45 ") + word(s145) + ", g1=3.25 " + word(s325) + ", g1=4.95 " + word(s495)};
}

Outcome macro_shear_trend() {
  std::vector<double> devs;
  bool above = true;
  for (const auto& cv : rmshell::figure_preset(4).curves) {
    above = above && interior_side(cv.set) == 1;
    devs.push_back(max_abs_deviation(cv.set));
  }
  const bool increasing = devs.size() == 3 && devs[0] < devs[1] && devs[1] < devs[2];
  const double le3 = rmshell::from_dimensionless(curve(4, 0).set).lambda_e;
  const double le7 = rmshell::from_dimensionless(curve(4, 2).set).lambda_e;
  const bool sign_change = std::abs(le3 - 0.294) <= 1e-3 && std::abs(le7 + 0.404) <= 1e-3;
  return {above && increasing && sign_change, "max|delta| " + fmt(devs[0]) + " < " + fmt(devs[1]) + " < " +
                                                  fmt(devs[2]) + ", lambda_e " + fmt(le3) + " -> " + fmt(le7)};
}

Outcome length_scale_limits() {
  std::vector<double> small;
  std::vector<double> large;
  for (const auto& cv : rmshell::figure_preset(7).curves) small.push_back(max_abs_deviation(cv.set));
  for (const auto& cv : rmshell::figure_preset(8).curves) large.push_back(max_abs_deviation(cv.set));
  const bool up = std::is_sorted(small.begin(), small.end(), std::less_equal<>());
  const bool down = std::is_sorted(large.begin(), large.end(), std::greater_equal<>());
  const double at_one = small.back();
  const double lo = small.front() / at_one;
  const double hi = large.back() / at_one;
  return {up && down && lo <= 0.05 && hi <= 0.05, std::string(up ? "increasing" : "NOT increasing") + " to lc=1, " +
                                                      (down ? "decreasing" : "NOT decreasing") +
                                                      " from lc=2, limits at " + fmt(100 * lo) + "% and " +
                                                      fmt(100 * hi) + "% of lc=1"};
}

Outcome couple_modulus_invariance() {
  bool identical = true;
  std::size_t curves = 0;
  for (const auto& fig : rmshell::figure_presets()) {
    for (const auto& cv : fig.curves) {
      ++curves;
      const auto base = make_problem(cv.set, 1.0, 1.0, 1.0, 0.0);
      const auto p0 = rmshell::profile(base.material, base.geometry, base.boundary, 257);
      for (double mu_c : {1.0, 100.0}) {
        const auto pr = make_problem(cv.set, 1.0, 1.0, 1.0, mu_c);
        const auto p = rmshell::profile(pr.material, pr.geometry, pr.boundary, 257);
        for (std::size_t k = 0; k < p.size(); ++k) {
          identical = identical && p.samples[k].u_r == p0.samples[k].u_r && p.samples[k].p_rr == p0.samples[k].p_rr &&
                      p.samples[k].p_tt == p0.samples[k].p_tt;
        }
      }
    }
  }
  return {identical, std::to_string(curves) + " presets, mu_c in {0, 1, 100}, " +
                         (identical ? "bit-identical" : "fields differ")};
}

/// Largest departure of f from the A + B / r^2 curve through its end values,
/// relative to max |f|.
double non_lame_content(const std::vector<double>& r, const std::vector<double>& f) {
  const double ra = r.front();
  const double rb = r.back();
  const double b = (f.front() - f.back()) / (1 / (ra * ra) - 1 / (rb * rb));
  const double a = f.back() - b / (rb * rb);
  double gap = 0;
  double size = 0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    gap = std::max(gap, std::abs(f[k] - (a + b / (r[k] * r[k]))));
    size = std::max(size, std::abs(f[k]));
  }
  return gap / size;
}

Outcome degenerate_family() {
  const DimensionlessSet<double> g{2.0, 4.0, 2.0, 0.15, 2.0, 0.35};
  const auto pr = make_problem(g);
  const auto prof = rmshell::profile(pr.material, pr.geometry, pr.boundary, 1001);
  double worst = 0;
  std::vector<double> r;
  std::vector<double> prr;
  std::vector<double> ptt;
  for (std::size_t k = 0; k < prof.size(); ++k) {
    const auto& s = prof.samples[k];
    worst = std::max(worst, rel_err(s.u_r, prof.classical_u[k]));
    r.push_back(s.r);
    prr.push_back(s.p_rr);
    ptt.push_back(s.p_tt);
  }
  const double brr = non_lame_content(r, prr);
  const double btt = non_lame_content(r, ptt);
  return {worst <= 1e-9 && brr > 1e-3 && btt > 1e-3, "u_r vs classical " + fmt(worst) +
                                                         ", non-Lame content P_rr " + fmt(brr) + ", P_tt " + fmt(btt)};
}

Outcome special_functions() {
  double wronskian = 0;
  for (int k = 0; k < 400; ++k) {
    const double x = 1e-3 * std::pow(1e5, k / 399.0);
    const double w = x * (rmshell::bessel_i0(x) * rmshell::bessel_k1(x) + rmshell::bessel_i1(x) * rmshell::bessel_k0(x));
    wronskian = std::max(wronskian, std::abs(w - 1));
  }
  const double ref = std::max({rel_err(rmshell::bessel_i0(1.0), oracle::value(oracle::Kernel::kI0, 1.0)),
                               rel_err(rmshell::bessel_i1(1.0), oracle::value(oracle::Kernel::kI1, 1.0)),
                               rel_err(rmshell::bessel_k0(1.0), oracle::value(oracle::Kernel::kK0, 1.0)),
                               rel_err(rmshell::bessel_k1(1.0), oracle::value(oracle::Kernel::kK1, 1.0))});
  const auto big = rmshell::scaled_bessel_set(1e6);
  const bool finite = std::isfinite(big.i0) && std::isfinite(big.i1) && std::isfinite(big.k0) &&
                      std::isfinite(big.k1) && big.i0 > 0 && big.k1 > 0;
  return {wronskian <= 1e-12 && ref <= 1e-12 && finite, "Wronskian error " + fmt(wronskian) +
                                                            ", x=1 vs oracle " + fmt(ref) +
                                                            (finite ? ", scaled finite at 1e6" : ", NOT finite at 1e6")};
}

Outcome large_argument() {
  const auto& cv = rmshell::figure_preset(8).curves.back();
  const auto pr = make_problem(cv.set);
  const auto c = rmshell::solve_coefficients(pr.material, pr.geometry, pr.boundary);
  const bool finite = std::isfinite(c.c1) && std::isfinite(c.c2) && std::isfinite(c.c3) &&
                      std::isfinite(c.d1_scaled) && std::isfinite(c.d2_scaled);
  const auto rep = rmshell::residual_check(pr.material, pr.geometry, c, 1000);
  const double s_ro = std::sqrt(rmshell::derived_coefficients(pr.material).decay_sq) * pr.geometry.r_o;
  return {finite && rep.max_radial() <= 1e-7 && rep.max_shear() == 0.0,
          cv.label + ", sqrt(a) r_o = " + fmt(s_ro) + ", max normalized residual " + fmt(rep.max_radial())};
}

std::set<int> parse_expected(int argc, char** argv) {
  std::set<int> out;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--expect-fail") != 0) continue;
    std::stringstream ss(argv[i + 1]);
    std::string item;
    while (std::getline(ss, item, ',')) out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::set<int> expected = parse_expected(argc, argv);
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"closed-form exactness", closed_form_exactness},
      {"oracle equivalence", oracle_equivalence},
      {"boundary conditions", boundary_conditions},
      {"thick-shell micro shear trend", thick_shell_trend},
      {"macro shear trend and lambda_e sign", macro_shear_trend},
      {"characteristic length limits", length_scale_limits},
      {"couple modulus invariance", couple_modulus_invariance},
      {"degenerate family", degenerate_family},
      {"special functions", special_functions},
      {"large-argument robustness", large_argument},
  };
  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) failed.insert(id);
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str());
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failed.size(), criteria.size());
  if (failed != expected) {
    std::printf("failing set differs from the expected set\n");
    return 1;
  }
  return 0;
}
