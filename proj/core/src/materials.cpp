#include "plasmon/materials.hpp"

#include <boost/math/special_functions/ellint_rd.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "plasmon/errors.hpp"

namespace plasmon {

DrudeMetal DrudeMetal::reference_gold() { return DrudeMetal{1.0, Energy{4.0}, Energy{0.2}}; }

void DrudeMetal::validate() const {
  require_finite(eps_inf, "eps_inf");
  if (eps_inf < 1.0) throw DomainError("eps_inf must be >= 1");
  require_positive(omega_p.value, "omega_p");
  require_non_negative(gamma_o.value, "gamma_o");
}

void Environment::validate() const {
  require_finite(eps_b, "eps_b");
  if (eps_b < 1.0) throw DomainError("eps_b must be >= 1");
}

void Nanoparticle::validate() const {
  metal.validate();
  if (const auto* s = std::get_if<Sphere>(&shape)) {
    require_positive(s->radius.value, "sphere radius");
  } else {
    const auto& e = std::get<Ellipsoid>(shape);
    require_positive(e.a1.value, "semi-axis a1");
    require_positive(e.a2.value, "semi-axis a2");
    require_positive(e.a3.value, "semi-axis a3");
  }
}

Length Nanoparticle::max_extent() const {
  if (const auto* s = std::get_if<Sphere>(&shape)) return s->radius;
  const auto& e = std::get<Ellipsoid>(shape);
  return std::max({e.a1, e.a2, e.a3});
}

double Nanoparticle::semi_axes_product() const {
  if (const auto* s = std::get_if<Sphere>(&shape)) return std::pow(s->radius.value, 3);
  const auto& e = std::get<Ellipsoid>(shape);
  return e.a1.value * e.a2.value * e.a3.value;
}

double Nanoparticle::depolarization(int axis) const {
  if (axis < 0 || axis > 2) throw DomainError("axis must be 0, 1 or 2");
  if (is_sphere()) return 1.0 / 3.0;
  return depolarization_factors(std::get<Ellipsoid>(shape))[static_cast<std::size_t>(axis)];
}

std::optional<std::string> Nanoparticle::quasi_static_warning() const {
  if (is_sphere() && max_extent().value > 30.0) {
    return "sphere radius exceeds 30 nm; quasi-static LSPR parameters become inaccurate";
  }
  return std::nullopt;
}

std::complex<double> drude_permittivity(const DrudeMetal& metal, Energy omega) {
  require_positive(omega.value, "omega");
  const double w = omega.value;
  const double wp = metal.omega_p.value;
  return metal.eps_inf - wp * wp / std::complex<double>(w * w, w * metal.gamma_o.value);
}

Energy sphere_mode_frequency(const DrudeMetal& metal, const Environment& env, int l) {
  if (l < 1) throw DomainError("multipole order must be >= 1");
  metal.validate();
  env.validate();
  const double ratio = static_cast<double>(l + 1) / static_cast<double>(l);
  return Energy{metal.omega_p.value / std::sqrt(metal.eps_inf + env.eps_b * ratio)};
}

Energy axis_mode_frequency(const DrudeMetal& metal, const Environment& env, double depolarization) {
  require_positive(depolarization, "depolarization factor");
  if (depolarization >= 1.0) throw DomainError("depolarization factor must be < 1");
  metal.validate();
  env.validate();
  const double ratio = (1.0 - depolarization) / depolarization;
  return Energy{metal.omega_p.value / std::sqrt(metal.eps_inf + env.eps_b * ratio)};
}

std::array<double, 3> depolarization_factors(const Ellipsoid& e) {
  const std::array<double, 3> sq{e.a1.value * e.a1.value, e.a2.value * e.a2.value,
                                 e.a3.value * e.a3.value};
  for (double s : sq) require_positive(s, "semi-axis");
  const double abc = e.a1.value * e.a2.value * e.a3.value;

  // (1/2) int_0^inf ds / ((s + a_i^2) sqrt(prod_j (s + a_j^2))) = R_D(a_j^2, a_k^2, a_i^2) / 3.
  std::array<double, 3> factors{};
  for (std::size_t i = 0; i < 3; ++i) {
    factors[i] = abc / 3.0 * boost::math::ellint_rd(sq[(i + 1) % 3], sq[(i + 2) % 3], sq[i]);
  }
  return factors;
}

std::complex<double> polarizability(const Nanoparticle& particle, const Environment& env, int axis,
                                    Energy omega) {
  const double depol = particle.depolarization(axis);
  const auto eps_m = drude_permittivity(particle.metal, omega);
  const double volume_factor = particle.semi_axes_product() / 3.0;
  return volume_factor * (eps_m - env.eps_b) / (env.eps_b + depol * (eps_m - env.eps_b));
}

LorentzianFit lorentzian_reduction(const std::function<std::complex<double>(double)>& alpha,
                                   Energy lo, Energy hi, int scan_points) {
  require_positive(lo.value, "scan window start");
  if (!(hi > lo)) throw DomainError("scan window must satisfy hi > lo");
  if (scan_points < 3) throw DomainError("scan needs at least 3 points");

  auto re_denominator = [&](double w) { return std::real(1.0 / alpha(w)); };

  const double step = (hi.value - lo.value) / (scan_points - 1);
  int crossings = 0;
  double bracket_lo = lo.value;
  double bracket_hi = hi.value;
  double prev = re_denominator(lo.value);
  for (int i = 1; i < scan_points; ++i) {
    const double w = lo.value + step * i;
    const double cur = re_denominator(w);
    if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) {
      ++crossings;
      bracket_lo = w - step;
      bracket_hi = w;
    }
    prev = cur;
  }
  if (crossings != 1) {
    throw NumericalError("expected exactly one resonance in scan window, found " +
                         std::to_string(crossings));
  }

  double omega_res = bracket_lo;
  const double f_lo = re_denominator(bracket_lo);
  const double f_hi = re_denominator(bracket_hi);
  if (f_hi == 0.0) {
    omega_res = bracket_hi;
  } else if (f_lo != 0.0) {
    std::uintmax_t max_iter = 200;
    const auto root = boost::math::tools::toms748_solve(
        re_denominator, bracket_lo, bracket_hi, f_lo, f_hi,
        boost::math::tools::eps_tolerance<double>(52), max_iter);
    omega_res = 0.5 * (root.first + root.second);
  }

  const double h = 1e-6 * std::max(omega_res, step);
  const double slope = (re_denominator(omega_res + h) - re_denominator(omega_res - h)) / (2.0 * h);
  if (slope == 0.0 || !std::isfinite(slope)) {
    throw NumericalError("flat denominator at resonance");
  }
  const double im_denominator = std::imag(1.0 / alpha(omega_res));
  return LorentzianFit{Energy{omega_res}, Energy{2.0 * im_denominator / slope}, -1.0 / slope};
}

Energy dipolar_radiative_rate(const Nanoparticle& particle, const Environment& env, int axis) {
  particle.validate();
  env.validate();
  const double depol = particle.depolarization(axis);
  const double w1 = axis_mode_frequency(particle.metal, env, depol).value;
  const double wp = particle.metal.omega_p.value;
  const double hc3 = std::pow(constants::hbar_c, 3);
  return Energy{(2.0 / 9.0) * env.eps_b * particle.semi_axes_product() * std::pow(w1, 6) /
                (depol * depol * wp * wp * hc3)};
}

std::complex<double> multipole_absorption_response(const DrudeMetal& metal, const Environment& env,
                                                   int l, Energy omega) {
  if (l < 1) throw DomainError("multipole order must be >= 1");
  const auto eps_m = drude_permittivity(metal, omega);
  const double ld = static_cast<double>(l);
  return ld * (eps_m - env.eps_b) / (ld * eps_m + (ld + 1.0) * env.eps_b);
}

}  // namespace plasmon
