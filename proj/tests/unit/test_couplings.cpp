#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "plasmon/couplings.hpp"
#include "plasmon/errors.hpp"

using namespace plasmon;
using namespace plasmon::literals;

namespace {
const Energy kOmega1{4.0 / std::sqrt(3.0)};
}

TEST_SUITE("couplings") {
  TEST_CASE("reference coupling magnitudes") {
    const auto J = vacuum_coupling(1.0_e_nm, kOmega1, 1e9, 1.0);
    CHECK(J.value == doctest::Approx(144e-6).epsilon(0.02));

    const auto mu1 = plasmon_effective_dipole(2.45_meV, kOmega1);
    CHECK(mu1.value == doctest::Approx(20.1).epsilon(0.01));

    const auto g1 = vacuum_coupling(mu1, kOmega1, 1e9, 1.0);
    CHECK(g1.value == doctest::Approx(2.9e-3).epsilon(0.02));

    const auto G = dipole_dipole_coupling(mu1, 1.0_e_nm, 20_nm, 1.0, DipoleGeometry::longitudinal);
    CHECK(std::abs(G.value) == doctest::Approx(7.2e-3).epsilon(0.02));

    const auto gs = free_space_decay(1.0_e_nm, kOmega1, 1.0);
    CHECK(gs.value == doctest::Approx(3e-6).epsilon(0.05));
  }

  TEST_CASE("dipole geometry sets the orientation factor") {
    const auto l = dipole_dipole_coupling(3.0_e_nm, 2.0_e_nm, 15_nm, 1.0, DipoleGeometry::longitudinal);
    const auto t = dipole_dipole_coupling(3.0_e_nm, 2.0_e_nm, 15_nm, 1.0, DipoleGeometry::transverse);
    CHECK(l.value == doctest::Approx(-2.0 * t.value));
  }

  TEST_CASE("scaling exponents under random ratios") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.2, 5.0);
    for (int i = 0; i < 200; ++i) {
      const double s = u(rng);
      const DipoleMoment mu{u(rng) * 10.0};
      const Energy w{u(rng)};
      const double v = u(rng) * 1e8;
      const Length d{u(rng) * 10.0};
      CHECK(vacuum_coupling(mu, w, s * v, 1.0) / vacuum_coupling(mu, w, v, 1.0) ==
            doctest::Approx(std::pow(s, -0.5)).epsilon(1e-12));
      CHECK(dipole_dipole_coupling(mu, mu, s * d, 1.0, DipoleGeometry::longitudinal) /
                dipole_dipole_coupling(mu, mu, d, 1.0, DipoleGeometry::longitudinal) ==
            doctest::Approx(std::pow(s, -3)).epsilon(1e-12));
      CHECK(free_space_decay(s * mu, w, 1.0) / free_space_decay(mu, w, 1.0) ==
            doctest::Approx(s * s).epsilon(1e-12));
      CHECK(free_space_decay(mu, s * w, 1.0) / free_space_decay(mu, w, 1.0) ==
            doctest::Approx(s * s * s).epsilon(1e-12));
      CHECK(plasmon_effective_dipole(s * 1e-3_eV, w) / plasmon_effective_dipole(1e-3_eV, w) ==
            doctest::Approx(std::sqrt(s)).epsilon(1e-12));
    }
  }

  TEST_CASE("effective dipole inverts the dipole radiation rate") {
    const Energy w{1.3};
    const auto mu = plasmon_effective_dipole(0.7_meV, w);
    // Larmor rate of a two-level dipole: 4 k^3 mu^2 e^2/(3 * 4 pi eps0), and
    // the plasmon oscillator radiates twice as fast per unit |mu|^2.
    const double k = w.value / constants::hbar_c;
    const double rate = 4.0 * k * k * k * mu.value * mu.value * constants::coulomb / 3.0;
    CHECK(2.0 * rate == doctest::Approx(0.7e-3).epsilon(1e-12));
  }

  TEST_CASE("multipole quenching sum") {
    const auto metal = DrudeMetal::reference_gold();
    const auto radial = multipole_quench_sum(1.0_e_nm, metal, 10_nm, 10_nm, Environment{}, kOmega1,
                                             Orientation::radial);
    const auto tangential = multipole_quench_sum(1.0_e_nm, metal, 10_nm, 10_nm, Environment{},
                                                 kOmega1, Orientation::tangential);
    CHECK(radial.rate.value == doctest::Approx(302e-6).epsilon(0.02));
    CHECK(tangential.rate.value == doctest::Approx(105e-6).epsilon(0.02));
    CHECK(radial.relative_tail < 1e-3);
    CHECK(radial.l_max >= 2);

    const auto near = multipole_quench_rate(1.0_e_nm, metal, 10_nm, 2_nm, Environment{}, kOmega1,
                                            Orientation::radial);
    CHECK(near > radial.rate);
    const auto doubled = multipole_quench_rate(2.0_e_nm, metal, 10_nm, 10_nm, Environment{},
                                               kOmega1, Orientation::radial);
    CHECK(doubled / radial.rate == doctest::Approx(4.0).epsilon(1e-12));

    CHECK_THROWS_AS(multipole_quench_sum(1.0_e_nm, metal, 10_nm, 0_nm, Environment{}, kOmega1,
                                         Orientation::radial),
                    DomainError);
  }

  TEST_CASE("very close emitters still converge or report") {
    const auto metal = DrudeMetal::reference_gold();
    const auto q = multipole_quench_sum(1.0_e_nm, metal, 10_nm, Length{0.05}, Environment{},
                                        kOmega1, Orientation::radial);
    CHECK(std::isfinite(q.rate.value));
    CHECK(q.l_max > 50);
  }

  TEST_CASE("angle projection") {
    const auto [G, g1] = project_couplings(10_meV, 4_meV, std::numbers::pi / 3.0);
    CHECK(G.value == doctest::Approx(5e-3));
    CHECK(g1.value == doctest::Approx(4e-3 * std::sqrt(3.0) / 2.0));
    CHECK_THROWS_AS(project_couplings(1_meV, 1_meV, 2.0), DomainError);
  }

  TEST_CASE("dipolar mode of a sphere") {
    const auto mode = dipolar_mode(Nanoparticle{Sphere{10_nm}, DrudeMetal::reference_gold()},
                                   Environment{});
    CHECK(mode.omega.value == doctest::Approx(kOmega1.value));
    CHECK(mode.gamma_ohmic.value == 0.2);
    CHECK(mode.total_width().value == doctest::Approx(0.2 + mode.gamma_rad.value));
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(vacuum_coupling(1.0_e_nm, kOmega1, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(dipole_dipole_coupling(1.0_e_nm, 1.0_e_nm, 0_nm, 1.0,
                                           DipoleGeometry::longitudinal),
                    DomainError);
    CHECK_THROWS_AS(plasmon_effective_dipole(Energy{0.0}, kOmega1), DomainError);
  }
}
