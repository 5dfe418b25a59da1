#pragma once

#include <utility>

#include "plasmon/materials.hpp"
#include "plasmon/quantities.hpp"

namespace plasmon {

/// Emitter dipole relative to the line joining it to the particle centre.
enum class Orientation { radial, tangential };

/// Point-dipole pair geometry: kappa = 2 (collinear) or -1 (side by side).
enum class DipoleGeometry { longitudinal, transverse };

struct Emitter {
  DipoleMoment mu{1.0};
  Energy omega;
  /// Distance from the particle surface.
  Length distance;
  Orientation orientation = Orientation::radial;
  Energy gamma_s;
  Energy gamma_m;

  Energy total_width() const { return gamma_s + gamma_m; }
};

struct CavityMode {
  Energy omega;
  double q_factor = 1e5;
  /// Mode volume in nm^3.
  double volume_nm3 = 1e9;

  Energy width() const { return omega / q_factor; }
};

/// Signed couplings as they enter the effective Hamiltonian.
struct CouplingSet {
  Energy g1;  ///< plasmon <-> cavity
  Energy G;   ///< plasmon <-> emitter
  Energy J;   ///< cavity <-> emitter
};

/// |g| = mu sqrt(2 pi e^2/(4 pi eps0) omega / (eps_b V)).
Energy vacuum_coupling(DipoleMoment mu, Energy omega, double volume_nm3, double eps_b);

/// Plasmon dipole from its radiative width: mu^2 = 3 pi eps0 hbar c^3 gamma_rad / (2 omega^3).
DipoleMoment plasmon_effective_dipole(Energy gamma_rad, Energy omega);

/// kappa mu_a mu_b e^2/(4 pi eps0) / (eps_b d^3), d centre to emitter.
Energy dipole_dipole_coupling(DipoleMoment mu_a, DipoleMoment mu_b, Length d, double eps_b,
                              DipoleGeometry geometry);

/// Spontaneous emission width (4/3) k^3 mu^2 e^2/(4 pi eps0) / eps_b.
Energy free_space_decay(DipoleMoment mu, Energy omega, double eps_b);

struct QuenchSum {
  Energy rate;
  int l_max = 0;
  /// Geometric estimate of the truncated tail relative to the retained sum.
  double relative_tail = 0.0;
};

/// Emitter energy transfer into the l >= 2 sphere modes at distance D from the
/// surface:
///   2 mu^2 e^2/(4 pi eps0 eps_b) sum_l w_l R^(2l+1) Im f_l(omega) / d^(2l+4),
/// d = R + D, w_l = (l+1)^2 (radial) or l(l+1)/2 (tangential). Truncated once
/// the last term falls below 1e-4 of the running sum and the tail estimate
/// below 1e-3.
QuenchSum multipole_quench_sum(DipoleMoment mu, const DrudeMetal& metal, Length radius,
                               Length surface_distance, const Environment& env, Energy omega,
                               Orientation orientation);

inline Energy multipole_quench_rate(DipoleMoment mu, const DrudeMetal& metal, Length radius,
                                    Length surface_distance, const Environment& env, Energy omega,
                                    Orientation orientation) {
  return multipole_quench_sum(mu, metal, radius, surface_distance, env, omega, orientation).rate;
}

/// (G cos theta, g1 sin theta); theta in radians, within [0, pi/2].
std::pair<Energy, Energy> project_couplings(Energy G, Energy g1, double theta);

/// Dipolar mode along `axis` with frequency, widths and effective dipole
/// derived from the particle.
PlasmonMode dipolar_mode(const Nanoparticle& particle, const Environment& env, int axis = 0);

}  // namespace plasmon
