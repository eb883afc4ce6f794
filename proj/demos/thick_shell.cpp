// Solves a thick shell, prints a coarse displacement table next to the
// classical Lame profile, and runs the verification battery.

#include <cstdio>

#include "rmshell/rmshell.hpp"

int main() {
  const rmshell::DimensionlessSet<double> set{1.45, 5.0, 2.0, 0.15, 2.0, 0.0};
  const auto pr = rmshell::make_problem(set);
  const auto prof = rmshell::profile(pr.material, pr.geometry, pr.boundary, 11);

  std::printf("%8s %12s %12s %12s\n", "r", "u_r", "classical", "delta");
  for (std::size_t k = 0; k < prof.size(); ++k) {
    std::printf("%8.3f %12.6f %12.6f %12.3e\n", prof.samples[k].r, prof.samples[k].u_r, prof.classical_u[k],
                (*prof.deviation)[k]);
  }

  const auto rep = rmshell::verify(pr.material, pr.geometry, pr.boundary, prof.coefficients);
  std::printf("residual %.2e, boundary %.2e, fd %.2e, energy gap %.2e: %s\n", rep.residuals.max_radial(),
              rep.boundary.max(), rep.fd_error, rep.energy_gap, rep.passed() ? "pass" : "fail");
  return rep.passed() ? 0 : 1;
}
