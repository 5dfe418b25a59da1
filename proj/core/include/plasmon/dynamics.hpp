#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "plasmon/network.hpp"

namespace plasmon {

/// Weak coherent drive f e^{-i detuning t} on one mode (i dv/dt = H v + f).
struct DriveSpec {
  ModeLabel mode = ModeLabel::emitter;
  double amplitude = 1.0;
  Energy detuning;
};

struct ChannelPower {
  std::string id;
  ChannelKind kind = ChannelKind::radiative;
  double power = 0.0;
};

struct SteadyState {
  Energy detuning;
  Eigen::VectorXcd amplitudes;
  std::vector<ChannelPower> powers;

  double radiative_power() const;
  double ohmic_power() const;
  /// Power of a named channel, zero when absent.
  double channel(std::string_view id) const;
};

/// v = (detuning - H)^-1 f. Coherent channels report |sum sqrt(g_k) v_k|^2,
/// incoherent ones sum g_k |v_k|^2. Throws NumericalError when the system is
/// singular to working precision.
SteadyState steady_state(const EffectiveHamiltonian& h, const std::vector<OutputChannel>& channels,
                         const DriveSpec& drive);

struct PowerBalance {
  /// sum_i gamma_i |v_i|^2
  double dissipated = 0.0;
  /// 2 Im(v^dagger f)
  double injected = 0.0;
};

PowerBalance power_balance(const EffectiveHamiltonian& h, const SteadyState& state,
                           const DriveSpec& drive);

/// Radiated over total channel power. Throws NumericalError when every
/// channel is dark.
double quantum_yield(const SteadyState& state);

/// Pump detuning of maximal destructive interference, -J g1 / G.
Energy fano_detuning(Energy J, Energy g1, Energy G);

struct TimeTrace {
  std::vector<double> times_fs;
  std::vector<ModeLabel> modes;
  /// rows: time points, columns: modes in `modes` order.
  Eigen::MatrixXd populations;

  std::vector<double> population(ModeLabel label) const;
  std::vector<double> total() const;
};

/// Populations |exp(-i H t) v0|^2 on the given grid (fs, increasing from 0).
TimeTrace evolve(const EffectiveHamiltonian& h, const Eigen::VectorXcd& initial,
                 std::span<const double> times_fs);

/// Same trajectory from an adaptive Dormand-Prince 5(4) integration of
/// i dv/dt = H v. Used as an independent check on `evolve`.
TimeTrace evolve_adaptive(const EffectiveHamiltonian& h, const Eigen::VectorXcd& initial,
                          std::span<const double> times_fs, double tolerance = 1e-12);

/// Smallest eigen-linewidth -2 Im(lambda) of h.
double slowest_decay(const EffectiveHamiltonian& h);
/// Largest eigen-linewidth of h.
double fastest_decay(const EffectiveHamiltonian& h);

/// `points` samples on [0, span_factor / slowest_decay(h)] in fs.
std::vector<double> default_time_grid(const EffectiveHamiltonian& h, int points = 4096,
                                      double span_factor = 10.0);

/// Strict local maxima above `threshold`, ignoring samples before `skip_fs`.
int count_oscillation_maxima(const TimeTrace& trace, ModeLabel label, double threshold = 1e-3,
                             double skip_fs = 0.0);

struct SpectrumResult {
  std::vector<double> detunings;
  std::vector<std::string> channel_ids;
  /// rows: detunings, columns: channel_ids.
  Eigen::MatrixXd channel_power;
  std::vector<double> radiative;
  std::vector<double> ohmic;
  /// rows: detunings, columns: basis modes.
  Eigen::MatrixXd mode_population;

  std::vector<double> yield() const;
};

/// Steady-state response over a pump sweep with the drive on `driven`.
SpectrumResult emission_spectrum(const EffectiveHamiltonian& h,
                                 const std::vector<OutputChannel>& channels, ModeLabel driven,
                                 std::span<const double> detunings, double amplitude = 1.0);

/// Interior local maxima of `values`, as indices.
std::vector<std::size_t> local_maxima(std::span<const double> values);

struct EigenBranchSet {
  std::vector<double> sweep;
  /// branches[b][k]: eigenvalue of branch b at sweep point k.
  std::vector<std::vector<std::complex<double>>> branches;
  /// Steps where two assignments had equal overlap and eigenvalue proximity
  /// decided.
  int ambiguous_steps = 0;

  std::vector<double> detunings(std::size_t branch) const;
  std::vector<double> linewidths(std::size_t branch) const;
};

/// Complex eigenvalues of family(x) over the sweep, with branch identity
/// carried by maximal eigenvector overlap between neighbouring points.
EigenBranchSet eigen_branches(const std::function<EffectiveHamiltonian(double)>& family,
                              std::span<const double> sweep);

struct StrongPair {
  std::complex<double> lower;  ///< smaller real part
  std::complex<double> upper;
  double splitting = 0.0;      ///< Re(upper - lower), i.e. 2 g_eff
  double kappa_broad = 0.0;    ///< larger of the two linewidths
  double kappa_narrow = 0.0;
  double cooperativity() const;
};

/// The two narrowest eigenmodes of h.
StrongPair strong_pair(const EffectiveHamiltonian& h);

struct BranchPairSummary {
  std::size_t first = 0;
  std::size_t second = 0;
  double min_re_separation = 0.0;
  double min_im_separation = 0.0;
  bool real_parts_cross = false;
  bool linewidths_cross = false;
};

/// Tracks the two branches with the smallest mean linewidth over the sweep.
BranchPairSummary summarize_strong_branches(const EigenBranchSet& set);

}  // namespace plasmon
