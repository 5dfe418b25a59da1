#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plasmon/couplings.hpp"
#include "plasmon/quantities.hpp"

namespace plasmon {

enum class ModeLabel { plasmon_dipole, cavity, emitter };

std::string_view to_string(ModeLabel label);

namespace channel_names {
inline constexpr std::string_view radiative = "radiative";
inline constexpr std::string_view ohmic = "ohmic";
}  // namespace channel_names

struct DecayTerm {
  std::string channel;
  Energy rate;
};

/// One diagonal entry: detuning from the frame reference and the physical
/// decay channels whose rates add up to the mode's full width.
struct ModeDescriptor {
  ModeLabel label = ModeLabel::emitter;
  Energy detuning;
  std::vector<DecayTerm> split;

  Energy total_width() const;
  /// Rate of a named channel, zero when absent.
  Energy rate_of(std::string_view channel) const;
};

ModeDescriptor plasmon_descriptor(Energy detuning, Energy gamma_rad, Energy gamma_ohmic);
ModeDescriptor cavity_descriptor(Energy detuning, Energy gamma_c);
ModeDescriptor emitter_descriptor(Energy detuning, Energy gamma_s, Energy gamma_m);

struct ModeCoupling {
  ModeLabel a;
  ModeLabel b;
  Energy value;
};

/// Non-Hermitian single-excitation Hamiltonian: detuning - i gamma/2 on the
/// diagonal, real couplings off it. Complex symmetric by construction.
/// Immutable once built.
class EffectiveHamiltonian {
 public:
  EffectiveHamiltonian(std::vector<ModeDescriptor> modes, const std::vector<ModeCoupling>& couplings,
                       Energy reference);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const std::vector<ModeDescriptor>& modes() const { return modes_; }
  Energy reference() const { return reference_; }
  Eigen::Index size() const { return matrix_.rows(); }
  std::optional<Eigen::Index> index_of(ModeLabel label) const;
  Eigen::Index require_index(ModeLabel label) const;
  /// Full widths gamma_i, in basis order.
  Eigen::VectorXd widths() const;

 private:
  std::vector<ModeDescriptor> modes_;
  Eigen::MatrixXcd matrix_;
  Energy reference_;
};

/// Basis (plasmon, cavity, emitter) in the emitter frame.
EffectiveHamiltonian build_three_mode(const ModeDescriptor& plasmon, const ModeDescriptor& cavity,
                                      const ModeDescriptor& emitter, const CouplingSet& couplings,
                                      Energy emitter_frequency = Energy{0.0});

/// Basis (plasmon, cavity) in the cavity frame.
EffectiveHamiltonian build_two_mode(const ModeDescriptor& plasmon, const ModeDescriptor& cavity,
                                    Energy g1, Energy cavity_frequency = Energy{0.0});

/// Basis (plasmon, emitter) in the emitter frame; the no-cavity reference.
EffectiveHamiltonian build_plasmon_emitter(const ModeDescriptor& plasmon,
                                           const ModeDescriptor& emitter, Energy G,
                                           Energy emitter_frequency = Energy{0.0});

enum class ChannelKind { radiative, ohmic };
enum class Combine { coherent, incoherent };

struct ChannelTerm {
  ModeLabel mode;
  /// sqrt(gamma) in sqrt(eV).
  double amplitude_rate = 0.0;
};

struct OutputChannel {
  std::string id;
  ChannelKind kind = ChannelKind::radiative;
  Combine combine = Combine::incoherent;
  std::vector<ChannelTerm> terms;
};

enum class ChannelSet { mnp_only, with_emitter };

/// Output operators for the particle (and emitter). Modes missing from `h`
/// and zero-rate terms are left out:
///   mnp_only:     rad1 = sqrt(g1r) a1, rad2 = sqrt(gc) c, ohm1 = sqrt(go) a1
///   with_emitter: rad1 = sqrt(g1r) a1 + sqrt(gs) s (coherent), rad2, ohm1,
///                 ohm2 = sqrt(gm) s
std::vector<OutputChannel> standard_channels(const EffectiveHamiltonian& h, ChannelSet set);

}  // namespace plasmon
