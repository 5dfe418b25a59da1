#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plasmon/dynamics.hpp"
#include "plasmon/network.hpp"
#include "plasmon/scenario.hpp"

namespace plasmon {

struct ResolvedParameter {
  std::string name;  ///< unit suffix included, e.g. "g1_ev"
  double value = 0.0;
  Provenance provenance = Provenance::first_principles;
};

/// Outcome of fitting |G| and |g1| to a target splitting and narrow linewidth.
struct CalibrationReport {
  CouplingSet couplings;  ///< signed and projected, as they enter H
  Energy G_unprojected;
  Energy g1_unprojected;
  /// Point-dipole estimates for the same geometry.
  Energy G_estimate;
  Energy g1_estimate;
  StrongPair pair;  ///< at zero cavity-emitter detuning
  double residual_splitting = 0.0;  ///< relative
  double residual_narrow = 0.0;     ///< relative
  int iterations = 0;

  double G_ratio() const { return G_unprojected / G_estimate; }
  double g1_ratio() const { return g1_unprojected / g1_estimate; }
};

/// Every number the Hamiltonian needs, with provenance.
struct ResolvedSystem {
  Scenario scenario;
  PlasmonMode plasmon;
  Energy omega_e;
  Energy omega_c;
  Energy gamma_c;
  Energy gamma_s;
  Energy gamma_m;
  CouplingSet couplings;  ///< signed and projected
  std::vector<ResolvedParameter> parameters;
  std::optional<CalibrationReport> calibration;
  std::vector<std::string> warnings;

  bool has_emitter() const { return scenario.emitter.present; }
  bool has_cavity() const { return scenario.cavity.present; }
  /// Value of a named parameter; throws DomainError for unknown names.
  double parameter(std::string_view name) const;
};

/// Overrides win; everything else is computed (and, in calibrated mode, G
/// and g1 are fitted). Throws DomainError / ConfigError / NumericalError.
ResolvedSystem resolve(const Scenario& scenario);

/// With an emitter: basis (plasmon, cavity, emitter) in the emitter frame.
/// Without: (plasmon, cavity) in the cavity frame.
EffectiveHamiltonian cavity_hamiltonian(const ResolvedSystem& system);
/// Same, with the cavity moved to omega_e + detuning_ce (gamma_c kept).
EffectiveHamiltonian cavity_hamiltonian(const ResolvedSystem& system, Energy detuning_ce);
/// The cavity removed, same frame as cavity_hamiltonian.
EffectiveHamiltonian bare_hamiltonian(const ResolvedSystem& system);

/// Emitter when present, else the plasmon.
ModeLabel driven_mode(const ResolvedSystem& system);

/// Fits |G cos(theta)| and |g1 sin(theta)| so that at zero cavity-emitter
/// detuning the two narrowest eigenmodes are split by `splitting` and the
/// narrower has width `narrow_width`. Throws NumericalError with residuals
/// when no solution is found.
CalibrationReport calibrate_strong_coupling(const ResolvedSystem& base, Energy splitting,
                                            Energy narrow_width);

/// `points` log-spaced values over [lo, hi].
std::vector<double> log_grid(double lo, double hi, int points);
/// `points` evenly spaced values over [lo, hi].
std::vector<double> linear_grid(double lo, double hi, int points);
/// lo, lo + step, ... up to hi (inclusive within step/1e6).
std::vector<double> stepped_grid(double lo, double hi, double step);

struct Fig1cResult {
  ResolvedSystem system;
  std::vector<double> detunings;  ///< pump - cavity
  SpectrumResult cavity;
  SpectrumResult bare;
};

Fig1cResult run_fig1c(const Scenario& scenario, std::optional<int> grid = std::nullopt);

struct Fig2Result {
  ResolvedSystem system;
  std::vector<double> detunings;  ///< pump - cavity
  SpectrumResult cavity;
  SpectrumResult bare;
  Energy delta0;
  double yield_at_delta0 = 0.0;
  double bare_yield_at_delta0 = 0.0;
  double power_enhancement_at_delta0 = 0.0;
  /// Grid point where the cavity yield peaks.
  double yield_argmax = 0.0;
};

Fig2Result run_fig2(const Scenario& scenario, std::optional<int> grid = std::nullopt);

struct EnhancementCell {
  double d_nm = 0.0;
  double q_factor = 0.0;
  double delta0 = 0.0;
  double yield_cavity = 0.0;
  double yield_bare = 0.0;
  double yield_enhancement = 0.0;
  double power_enhancement = 0.0;
};

/// The scenario at emitter distance d_nm and quality factor q, with G and
/// gamma_m recomputed for that distance, pumped at its own Fano detuning.
EnhancementCell enhancement_cell(const Scenario& base, double d_nm, double q_factor);

struct EnhancementMap {
  std::vector<double> d_nm;
  std::vector<double> q_factors;
  /// Row-major: cells[i * q_factors.size() + j] for d_nm[i], q_factors[j].
  std::vector<EnhancementCell> cells;

  const EnhancementCell& at(std::size_t i, std::size_t j) const {
    return cells[i * q_factors.size() + j];
  }
};

/// Grids must be strictly increasing and positive.
EnhancementMap enhancement_map(const Scenario& base, const std::vector<double>& d_nm,
                               const std::vector<double>& q_factors);

enum class Objective { yield, power };

std::string_view to_string(Objective objective);

struct OptimalQ {
  Objective objective = Objective::yield;
  double d_nm = 0.0;
  double q_opt = 0.0;
  double value = 0.0;
  /// False when the coarse scan peaks at an end of the interval; q_opt is
  /// then that end point.
  bool interior = false;
  std::vector<double> coarse_q;
  std::vector<double> coarse_values;
};

/// Coarse log scan followed by golden-section refinement in log Q, to 1e-3
/// relative in Q.
OptimalQ optimal_q(const Scenario& base, double d_nm, Objective objective, double q_min = 1e2,
                   double q_max = 1e7, int coarse_points = 61);

struct TraceCase {
  std::string label;
  std::optional<double> q_factor;  ///< empty for the no-cavity case
  std::vector<double> population;  ///< emitter population on Fig3Result::times_fs
  int maxima = 0;
  double skip_fs = 0.0;
};

struct Fig3Result {
  ResolvedSystem system;
  std::vector<double> times_fs;
  std::vector<TraceCase> traces;
  std::vector<double> detunings;  ///< pump - emitter
  SpectrumResult cavity;
  SpectrumResult bare;
  /// The two strongest peaks of the cavity radiative spectrum (pump - emitter).
  std::vector<double> peaks;
  double doublet_separation = 0.0;
};

Fig3Result run_fig3(const Scenario& scenario, std::optional<int> grid = std::nullopt);

/// Branches of cavity_hamiltonian over emitter - cavity detunings.
EigenBranchSet eigen_sweep(const ResolvedSystem& system, std::span<const double> detunings_ec);

struct Fig4Result {
  ResolvedSystem system;
  std::vector<double> spectra_ec;      ///< emitter - cavity detuning per spectrum
  std::vector<double> pump_detunings;  ///< pump - cavity
  std::vector<SpectrumResult> spectra;
  EigenBranchSet branches;
  BranchPairSummary summary;
  StrongPair at_zero;
};

Fig4Result run_fig4(const Scenario& scenario, std::optional<int> grid = std::nullopt);

}  // namespace plasmon
