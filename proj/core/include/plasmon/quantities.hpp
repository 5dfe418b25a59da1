#pragma once

// Natural units used throughout: energies (and therefore frequencies, decay
// rates and coupling constants) in eV with hbar = 1, lengths in nm, dipole
// moments in e*nm. Decay rates are full widths.

#include <compare>

namespace plasmon {

namespace constants {
/// hbar * c in eV*nm.
inline constexpr double hbar_c = 197.3270;
/// e^2 / (4 pi eps0) in eV*nm.
inline constexpr double coulomb = 1.439964;
/// hbar in eV*fs; only used to label time axes.
inline constexpr double hbar_ev_fs = 0.6582119569;
}  // namespace constants

template <class Tag>
struct Quantity {
  double value = 0.0;

  constexpr Quantity() = default;
  constexpr explicit Quantity(double v) : value(v) {}

  constexpr auto operator<=>(const Quantity&) const = default;

  constexpr Quantity operator-() const { return Quantity{-value}; }
  constexpr Quantity& operator+=(Quantity o) {
    value += o.value;
    return *this;
  }
  constexpr Quantity& operator-=(Quantity o) {
    value -= o.value;
    return *this;
  }
  friend constexpr Quantity operator+(Quantity a, Quantity b) { return Quantity{a.value + b.value}; }
  friend constexpr Quantity operator-(Quantity a, Quantity b) { return Quantity{a.value - b.value}; }
  friend constexpr Quantity operator*(double s, Quantity q) { return Quantity{s * q.value}; }
  friend constexpr Quantity operator*(Quantity q, double s) { return Quantity{s * q.value}; }
  friend constexpr Quantity operator/(Quantity q, double s) { return Quantity{q.value / s}; }
  friend constexpr double operator/(Quantity a, Quantity b) { return a.value / b.value; }
};

/// eV (hbar = 1): frequencies, widths, couplings.
using Energy = Quantity<struct EnergyTag>;
/// nm.
using Length = Quantity<struct LengthTag>;
/// e*nm, always a magnitude.
using DipoleMoment = Quantity<struct DipoleTag>;

namespace literals {
constexpr Energy operator""_eV(long double v) { return Energy{static_cast<double>(v)}; }
constexpr Energy operator""_eV(unsigned long long v) { return Energy{static_cast<double>(v)}; }
constexpr Energy operator""_meV(long double v) { return Energy{static_cast<double>(v) * 1e-3}; }
constexpr Energy operator""_meV(unsigned long long v) { return Energy{static_cast<double>(v) * 1e-3}; }
constexpr Energy operator""_ueV(long double v) { return Energy{static_cast<double>(v) * 1e-6}; }
constexpr Energy operator""_ueV(unsigned long long v) { return Energy{static_cast<double>(v) * 1e-6}; }
constexpr Length operator""_nm(long double v) { return Length{static_cast<double>(v)}; }
constexpr Length operator""_nm(unsigned long long v) { return Length{static_cast<double>(v)}; }
constexpr DipoleMoment operator""_e_nm(long double v) { return DipoleMoment{static_cast<double>(v)}; }
constexpr DipoleMoment operator""_e_nm(unsigned long long v) { return DipoleMoment{static_cast<double>(v)}; }
}  // namespace literals

/// Wavevector sqrt(eps_b) * omega / (hbar c) in 1/nm.
double wavevector(Energy omega, double eps_b);

/// fs <-> 1/eV conversions for time axes.
constexpr double fs_to_inverse_ev(double t_fs) { return t_fs / constants::hbar_ev_fs; }
constexpr double inverse_ev_to_fs(double t) { return t * constants::hbar_ev_fs; }

}  // namespace plasmon
