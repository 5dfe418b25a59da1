#include "plasmon/network.hpp"

#include <cmath>

#include "plasmon/errors.hpp"

namespace plasmon {

std::string_view to_string(ModeLabel label) {
  switch (label) {
    case ModeLabel::plasmon_dipole:
      return "plasmon_dipole";
    case ModeLabel::cavity:
      return "cavity";
    case ModeLabel::emitter:
      return "emitter";
  }
  return "unknown";
}

Energy ModeDescriptor::total_width() const {
  Energy total{0.0};
  for (const auto& term : split) total += term.rate;
  return total;
}

Energy ModeDescriptor::rate_of(std::string_view channel) const {
  Energy total{0.0};
  for (const auto& term : split) {
    if (term.channel == channel) total += term.rate;
  }
  return total;
}

ModeDescriptor plasmon_descriptor(Energy detuning, Energy gamma_rad, Energy gamma_ohmic) {
  return {ModeLabel::plasmon_dipole,
          detuning,
          {{std::string(channel_names::radiative), gamma_rad},
           {std::string(channel_names::ohmic), gamma_ohmic}}};
}

ModeDescriptor cavity_descriptor(Energy detuning, Energy gamma_c) {
  return {ModeLabel::cavity, detuning, {{std::string(channel_names::radiative), gamma_c}}};
}

ModeDescriptor emitter_descriptor(Energy detuning, Energy gamma_s, Energy gamma_m) {
  return {ModeLabel::emitter,
          detuning,
          {{std::string(channel_names::radiative), gamma_s},
           {std::string(channel_names::ohmic), gamma_m}}};
}

EffectiveHamiltonian::EffectiveHamiltonian(std::vector<ModeDescriptor> modes,
                                           const std::vector<ModeCoupling>& couplings,
                                           Energy reference)
    : modes_(std::move(modes)), reference_(reference) {
  if (modes_.empty()) throw DomainError("network needs at least one mode");
  const auto n = static_cast<Eigen::Index>(modes_.size());
  matrix_ = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& mode = modes_[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < i; ++j) {
      if (modes_[static_cast<std::size_t>(j)].label == mode.label) {
        throw DomainError("duplicate mode label " + std::string(to_string(mode.label)));
      }
    }
    require_finite(mode.detuning.value, "mode detuning");
    for (const auto& term : mode.split) {
      require_non_negative(term.rate.value, "decay rate");
    }
    matrix_(i, i) = {mode.detuning.value, -0.5 * mode.total_width().value};
  }
  for (const auto& c : couplings) {
    require_finite(c.value.value, "coupling");
    const auto a = require_index(c.a);
    const auto b = require_index(c.b);
    if (a == b) throw DomainError("a mode cannot couple to itself");
    matrix_(a, b) += c.value.value;
    matrix_(b, a) += c.value.value;
  }
}

std::optional<Eigen::Index> EffectiveHamiltonian::index_of(ModeLabel label) const {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].label == label) return static_cast<Eigen::Index>(i);
  }
  return std::nullopt;
}

Eigen::Index EffectiveHamiltonian::require_index(ModeLabel label) const {
  auto idx = index_of(label);
  if (!idx) throw DomainError("mode " + std::string(to_string(label)) + " not in network");
  return *idx;
}

Eigen::VectorXd EffectiveHamiltonian::widths() const {
  Eigen::VectorXd w(size());
  for (Eigen::Index i = 0; i < size(); ++i) {
    w(i) = modes_[static_cast<std::size_t>(i)].total_width().value;
  }
  return w;
}

EffectiveHamiltonian build_three_mode(const ModeDescriptor& plasmon, const ModeDescriptor& cavity,
                                      const ModeDescriptor& emitter, const CouplingSet& couplings,
                                      Energy emitter_frequency) {
  return EffectiveHamiltonian(
      {plasmon, cavity, emitter},
      {{ModeLabel::plasmon_dipole, ModeLabel::cavity, couplings.g1},
       {ModeLabel::plasmon_dipole, ModeLabel::emitter, couplings.G},
       {ModeLabel::cavity, ModeLabel::emitter, couplings.J}},
      emitter_frequency);
}

EffectiveHamiltonian build_two_mode(const ModeDescriptor& plasmon, const ModeDescriptor& cavity,
                                    Energy g1, Energy cavity_frequency) {
  return EffectiveHamiltonian({plasmon, cavity},
                              {{ModeLabel::plasmon_dipole, ModeLabel::cavity, g1}},
                              cavity_frequency);
}

EffectiveHamiltonian build_plasmon_emitter(const ModeDescriptor& plasmon,
                                           const ModeDescriptor& emitter, Energy G,
                                           Energy emitter_frequency) {
  return EffectiveHamiltonian({plasmon, emitter},
                              {{ModeLabel::plasmon_dipole, ModeLabel::emitter, G}},
                              emitter_frequency);
}

namespace {

void add_term(std::vector<ChannelTerm>& terms, const EffectiveHamiltonian& h, ModeLabel label,
              std::string_view channel) {
  const auto idx = h.index_of(label);
  if (!idx) return;
  const double rate = h.modes()[static_cast<std::size_t>(*idx)].rate_of(channel).value;
  if (rate > 0.0) terms.push_back({label, std::sqrt(rate)});
}

}  // namespace

std::vector<OutputChannel> standard_channels(const EffectiveHamiltonian& h, ChannelSet set) {
  using enum ModeLabel;
  std::vector<OutputChannel> channels;

  OutputChannel rad1{"rad1", ChannelKind::radiative,
                     set == ChannelSet::with_emitter ? Combine::coherent : Combine::incoherent,
                     {}};
  add_term(rad1.terms, h, plasmon_dipole, channel_names::radiative);
  if (set == ChannelSet::with_emitter) add_term(rad1.terms, h, emitter, channel_names::radiative);
  channels.push_back(std::move(rad1));

  OutputChannel rad2{"rad2", ChannelKind::radiative, Combine::incoherent, {}};
  add_term(rad2.terms, h, cavity, channel_names::radiative);
  channels.push_back(std::move(rad2));

  OutputChannel ohm1{"ohm1", ChannelKind::ohmic, Combine::incoherent, {}};
  add_term(ohm1.terms, h, plasmon_dipole, channel_names::ohmic);
  channels.push_back(std::move(ohm1));

  if (set == ChannelSet::with_emitter) {
    OutputChannel ohm2{"ohm2", ChannelKind::ohmic, Combine::incoherent, {}};
    add_term(ohm2.terms, h, emitter, channel_names::ohmic);
    channels.push_back(std::move(ohm2));
  }

  std::erase_if(channels, [](const OutputChannel& c) { return c.terms.empty(); });
  return channels;
}

}  // namespace plasmon
