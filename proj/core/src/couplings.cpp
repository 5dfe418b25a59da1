#include "plasmon/couplings.hpp"

#include <cmath>
#include <numbers>

#include "plasmon/errors.hpp"

namespace plasmon {

Energy vacuum_coupling(DipoleMoment mu, Energy omega, double volume_nm3, double eps_b) {
  require_positive(mu.value, "dipole moment");
  require_positive(omega.value, "omega");
  require_positive(volume_nm3, "mode volume");
  require_positive(eps_b, "eps_b");
  const double g2 = mu.value * mu.value * constants::coulomb * 2.0 * std::numbers::pi *
                    omega.value / (eps_b * volume_nm3);
  return Energy{std::sqrt(g2)};
}

DipoleMoment plasmon_effective_dipole(Energy gamma_rad, Energy omega) {
  require_positive(gamma_rad.value, "radiative width");
  require_positive(omega.value, "omega");
  // 3 pi eps0 hbar c^3 / 2  ->  3 (hbar c)^3 / (8 e^2/(4 pi eps0)) in natural units.
  const double mu2 = 3.0 * std::pow(constants::hbar_c, 3) * gamma_rad.value /
                     (8.0 * constants::coulomb * std::pow(omega.value, 3));
  return DipoleMoment{std::sqrt(mu2)};
}

Energy dipole_dipole_coupling(DipoleMoment mu_a, DipoleMoment mu_b, Length d, double eps_b,
                              DipoleGeometry geometry) {
  require_non_negative(mu_a.value, "dipole moment");
  require_non_negative(mu_b.value, "dipole moment");
  require_positive(d.value, "dipole separation");
  require_positive(eps_b, "eps_b");
  const double kappa = geometry == DipoleGeometry::longitudinal ? 2.0 : -1.0;
  return Energy{kappa * mu_a.value * mu_b.value * constants::coulomb /
                (eps_b * std::pow(d.value, 3))};
}

Energy free_space_decay(DipoleMoment mu, Energy omega, double eps_b) {
  require_non_negative(mu.value, "dipole moment");
  const double k = wavevector(omega, eps_b);
  return Energy{(4.0 / 3.0) * k * k * k * mu.value * mu.value * constants::coulomb / eps_b};
}

QuenchSum multipole_quench_sum(DipoleMoment mu, const DrudeMetal& metal, Length radius,
                               Length surface_distance, const Environment& env, Energy omega,
                               Orientation orientation) {
  require_non_negative(mu.value, "dipole moment");
  require_positive(radius.value, "sphere radius");
  require_finite(surface_distance.value, "emitter distance");
  if (surface_distance.value <= 0.0) {
    throw DomainError("emitter must lie outside the particle (D > 0)");
  }
  require_positive(omega.value, "omega");
  env.validate();

  constexpr int kMaxOrder = 20000;
  const double R = radius.value;
  const double d = R + surface_distance.value;
  const double ratio2 = (R / d) * (R / d);

  // R^(2l+1)/d^(2l+4) = (R/d)^(2l+1) / d^3, iterated to avoid overflow.
  double geometric = std::pow(R / d, 5) / (d * d * d);
  double sum = 0.0;
  double prev_term = 0.0;
  double relative_tail = 0.0;
  int l = 2;
  for (;; ++l) {
    if (l > kMaxOrder) throw NumericalError("multipole quench series did not converge");
    const double ld = static_cast<double>(l);
    const double weight =
        orientation == Orientation::radial ? (ld + 1.0) * (ld + 1.0) : 0.5 * ld * (ld + 1.0);
    const double im_f = std::imag(multipole_absorption_response(metal, env, l, omega));
    const double term = weight * geometric * im_f;
    sum += term;
    geometric *= ratio2;

    if (l >= 3 && sum > 0.0) {
      const double rho = std::max(ratio2, prev_term > 0.0 ? term / prev_term : 0.0);
      relative_tail = rho < 1.0 ? term * rho / ((1.0 - rho) * sum) : 1.0;
      if (term < 1e-4 * sum && relative_tail < 1e-3) break;
    }
    if (sum == 0.0 && l >= 3) break;  // lossless metal
    prev_term = term;
  }

  const double prefactor = 2.0 * mu.value * mu.value * constants::coulomb / env.eps_b;
  return QuenchSum{Energy{prefactor * sum}, l, relative_tail};
}

std::pair<Energy, Energy> project_couplings(Energy G, Energy g1, double theta) {
  require_finite(theta, "theta");
  if (theta < 0.0 || theta > std::numbers::pi / 2 + 1e-12) {
    throw DomainError("theta must lie in [0, 90] degrees");
  }
  return {G * std::cos(theta), g1 * std::sin(theta)};
}

PlasmonMode dipolar_mode(const Nanoparticle& particle, const Environment& env, int axis) {
  particle.validate();
  env.validate();
  PlasmonMode mode;
  mode.order = 1;
  mode.axis = axis;
  mode.omega = axis_mode_frequency(particle.metal, env, particle.depolarization(axis));
  mode.gamma_rad = dipolar_radiative_rate(particle, env, axis);
  mode.gamma_ohmic = particle.metal.gamma_o;
  mode.mu_eff = plasmon_effective_dipole(mode.gamma_rad, mode.omega);
  return mode;
}

}  // namespace plasmon
