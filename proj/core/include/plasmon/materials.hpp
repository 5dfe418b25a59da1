#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "plasmon/quantities.hpp"

namespace plasmon {

/// Drude metal eps(w) = eps_inf - wp^2 / (w^2 + i w gamma_o).
struct DrudeMetal {
  double eps_inf = 1.0;
  Energy omega_p{4.0};
  Energy gamma_o{0.2};

  /// Gold-like parameters: eps_inf = 1, wp = 4 eV, gamma_o = 0.2 eV.
  static DrudeMetal reference_gold();
  void validate() const;
  bool operator==(const DrudeMetal&) const = default;
};

struct Environment {
  double eps_b = 1.0;
  void validate() const;
  bool operator==(const Environment&) const = default;
};

struct Sphere {
  Length radius;
  bool operator==(const Sphere&) const = default;
};

/// Semi-axes along the three principal directions; axis 0 is the one the
/// dipolar mode is taken along unless stated otherwise.
struct Ellipsoid {
  Length a1, a2, a3;
  bool operator==(const Ellipsoid&) const = default;
};

struct Nanoparticle {
  std::variant<Sphere, Ellipsoid> shape;
  DrudeMetal metal;

  bool operator==(const Nanoparticle&) const = default;
  void validate() const;
  bool is_sphere() const { return std::holds_alternative<Sphere>(shape); }
  /// Largest semi-axis (the radius for a sphere).
  Length max_extent() const;
  /// a1*a2*a3, or R^3.
  double semi_axes_product() const;
  /// Depolarization factor along `axis` (1/3 for spheres).
  double depolarization(int axis) const;
  /// Non-empty when the particle is too large for the quasi-static model.
  std::optional<std::string> quasi_static_warning() const;
};

/// One localized plasmon mode reduced to a damped oscillator.
struct PlasmonMode {
  int order = 1;
  int axis = 0;
  Energy omega;
  Energy gamma_rad;
  Energy gamma_ohmic;
  DipoleMoment mu_eff;

  Energy total_width() const { return gamma_rad + gamma_ohmic; }
};

std::complex<double> drude_permittivity(const DrudeMetal& metal, Energy omega);

/// Frequency of the order-l sphere mode from Re eps_m = -eps_b (l+1)/l with
/// damping dropped.
Energy sphere_mode_frequency(const DrudeMetal& metal, const Environment& env, int l);

/// Dipolar resonance along an ellipsoid axis with depolarization factor L.
Energy axis_mode_frequency(const DrudeMetal& metal, const Environment& env, double depolarization);

/// (L1, L2, L3) from the standard elliptic integral; sums to 1.
std::array<double, 3> depolarization_factors(const Ellipsoid& ellipsoid);

/// Quasi-static polarizability along `axis`, divided by 4 pi eps0 (nm^3).
std::complex<double> polarizability(const Nanoparticle& particle, const Environment& env, int axis,
                                    Energy omega);

struct LorentzianFit {
  Energy omega_res;
  Energy width;
  /// A in alpha(w) ~ A / (omega_res - w - i width/2).
  double residue = 0.0;
};

/// Reduces a single-resonance response alpha(w) on [lo, hi] to Lorentzian
/// oscillator parameters. The resonance is the root of Re[1/alpha]; width and
/// residue come from the first-order expansion of 1/alpha around it.
/// Throws NumericalError unless Re[1/alpha] changes sign exactly once on the
/// scan grid.
LorentzianFit lorentzian_reduction(const std::function<std::complex<double>(double)>& alpha,
                                   Energy lo, Energy hi, int scan_points = 2001);

/// Dipolar radiative width (2/9) eps_b a1 a2 a3 w1^6 / (L^2 wp^2 (hbar c)^3).
Energy dipolar_radiative_rate(const Nanoparticle& particle, const Environment& env, int axis = 0);

/// Dimensionless l-pole response l (eps_m - eps_b) / (l eps_m + (l+1) eps_b).
std::complex<double> multipole_absorption_response(const DrudeMetal& metal, const Environment& env,
                                                   int l, Energy omega);

}  // namespace plasmon
