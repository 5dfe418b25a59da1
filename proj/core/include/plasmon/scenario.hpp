#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plasmon/couplings.hpp"
#include "plasmon/materials.hpp"

namespace plasmon {

/// How couplings and rates not given explicitly are obtained.
enum class CouplingSource { first_principles, paper_exact, calibrated };

/// Where a resolved number came from; written next to every parameter in
/// result metadata.
enum class Provenance { first_principles, paper_exact, calibrated, override_value };

std::string_view to_string(CouplingSource source);
std::string_view to_string(Provenance provenance);
std::string_view to_string(Orientation orientation);

struct EmitterSpec {
  bool present = true;
  DipoleMoment mu{1.0};
  /// Distance from the particle surface (tip for ellipsoids).
  Length distance{10.0};
  Orientation orientation = Orientation::radial;
  /// omega_1 - omega_e.
  Energy detuning_1e{0.0};
  /// Angle between the particle long axis and the cavity polarization; when
  /// set, G and g1 are projected as G cos(theta), g1 sin(theta).
  std::optional<double> theta_deg;
  /// Angle between the emitter dipole and the cavity polarization (scales J).
  double cavity_angle_deg = 0.0;

  bool operator==(const EmitterSpec&) const = default;
};

struct CavitySpec {
  bool present = true;
  double q_factor = 1e5;
  double volume_um3 = 1.0;
  /// omega_c - omega_e (used when an emitter is present).
  Energy detuning_ce{0.0};
  /// omega_1 - omega_c (used without an emitter).
  Energy detuning_1c{0.0};

  bool operator==(const CavitySpec&) const = default;
};

/// Values are kept in the units of their config keys so that a scenario
/// survives a text round trip bit for bit.
struct CouplingSpec {
  CouplingSource mode = CouplingSource::first_principles;
  std::optional<double> g1_mev;
  std::optional<double> G_mev;
  std::optional<double> J_uev;
  std::optional<double> gamma_1r_mev;
  std::optional<double> gamma_s_uev;
  std::optional<double> gamma_m_uev;
  double g1_sign = -1.0;
  double G_sign = -1.0;
  double J_sign = -1.0;
  /// The multipole quench sum is rescaled to hit this rate at this distance.
  double quench_ref_distance_nm = 10.0;
  double quench_ref_rate_uev = 83.0;
  /// Calibration targets for mode = calibrated.
  double target_splitting_mev = 3.5;
  double target_narrow_width_mev = 0.11;

  bool operator==(const CouplingSpec&) const = default;
};

/// Sweep axes. Unset values fall back to per-command defaults.
struct SweepSpec {
  std::optional<Energy> pump_start;
  std::optional<Energy> pump_stop;
  std::optional<int> pump_points;
  std::optional<Energy> ec_start;
  std::optional<Energy> ec_stop;
  std::optional<Energy> ec_step;
  std::optional<Energy> spectra_ec_step;
  std::optional<double> d_min_nm;
  std::optional<double> d_max_nm;
  std::optional<int> d_points;
  std::optional<double> q_min;
  std::optional<double> q_max;
  std::optional<int> q_points;
  std::optional<double> t_stop_fs;
  std::optional<int> t_points;
  std::vector<double> trace_q_factors;

  bool operator==(const SweepSpec&) const = default;
};

struct Scenario {
  std::string name;
  Nanoparticle particle{Sphere{Length{10.0}}, DrudeMetal::reference_gold()};
  Environment environment;
  EmitterSpec emitter;
  CavitySpec cavity;
  CouplingSpec couplings;
  SweepSpec sweep;

  bool operator==(const Scenario&) const = default;
};

}  // namespace plasmon
