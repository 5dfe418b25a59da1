#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "plasmon/config.hpp"
#include "plasmon/errors.hpp"
#include "plasmon/experiments.hpp"
#include "plasmon/parallel.hpp"

using namespace plasmon;

namespace {

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

struct WorkerGuard {
  ~WorkerGuard() { set_worker_count(0); }
};

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("fig2 resolution keeps explicit values") {
    const auto sys = resolve(load_scenario("fig2"));
    CHECK(sys.parameter("g1_ev") == doctest::Approx(-2.9e-3));
    CHECK(sys.parameter("G_ev") == doctest::Approx(-7.2e-3));
    CHECK(sys.parameter("J_ev") == doctest::Approx(-144e-6));
    CHECK(sys.parameter("gamma_m_ev") == doctest::Approx(83e-6));
    CHECK(sys.parameter("delta0_ev") == doctest::Approx(5.8e-5).epsilon(1e-9));
    CHECK(sys.parameter("omega_1_ev") == doctest::Approx(4.0 / std::sqrt(3.0)).epsilon(1e-6));
    CHECK(sys.gamma_c.value == doctest::Approx(sys.omega_c.value / 1e5));
    CHECK_THROWS_AS(sys.parameter("nope"), DomainError);
    for (const auto& p : sys.parameters) {
      if (p.name == "G_ev") CHECK(p.provenance == Provenance::paper_exact);
      if (p.name == "omega_1_ev") CHECK(p.provenance == Provenance::first_principles);
    }
  }

  TEST_CASE("explicit values outside exact mode are labelled overrides") {
    auto s = load_scenario("fig2");
    s.couplings.mode = CouplingSource::first_principles;
    const auto sys = resolve(s);
    for (const auto& p : sys.parameters) {
      if (p.name == "G_ev") CHECK(p.provenance == Provenance::override_value);
    }
    CHECK(to_string(Provenance::override_value) == "override");
  }

  TEST_CASE("first-principles couplings land near the reference set") {
    auto s = load_scenario("fig2");
    s.couplings = CouplingSpec{};
    const auto sys = resolve(s);
    CHECK(std::abs(sys.couplings.g1.value) == doctest::Approx(2.9e-3).epsilon(0.02));
    CHECK(std::abs(sys.couplings.G.value) == doctest::Approx(7.2e-3).epsilon(0.02));
    CHECK(std::abs(sys.couplings.J.value) == doctest::Approx(144e-6).epsilon(0.02));
    CHECK(sys.gamma_s.value == doctest::Approx(3e-6).epsilon(0.05));
    CHECK(sys.gamma_m.value == doctest::Approx(83e-6).epsilon(1e-9));
    CHECK(sys.plasmon.gamma_rad.value == doctest::Approx(2.45e-3).epsilon(0.02));
    const auto d0 = fano_detuning(sys.couplings.J, sys.couplings.g1, sys.couplings.G).value;
    CHECK(d0 > 0.0);
  }

  TEST_CASE("fig1c agrees with the two-mode elimination") {
    const auto r = run_fig1c(load_scenario("fig1c"));
    const auto& sys = r.system;
    const double g = sys.couplings.g1.value;
    const double g1r = sys.plasmon.gamma_rad.value;
    const double go = sys.plasmon.gamma_ohmic.value;
    const double gc = sys.gamma_c.value;
    const double d1c = sys.scenario.cavity.detuning_1c.value;
    const std::complex<double> i(0.0, 1.0);
    for (std::size_t k = 0; k < r.detunings.size(); ++k) {
      const double x = r.detunings[k];
      const auto a = 1.0 / ((x - d1c + i * (g1r + go) / 2.0) - g * g / (x + i * gc / 2.0));
      const auto c = g * a / (x + i * gc / 2.0);
      const double rad = g1r * std::norm(a) + gc * std::norm(c);
      const double ohm = go * std::norm(a);
      CHECK(std::abs(r.cavity.radiative[k] - rad) <= 1e-6 * rad);
      CHECK(std::abs(r.cavity.ohmic[k] - ohm) <= 1e-6 * ohm);
      const auto a0 = 1.0 / (x - d1c + i * (g1r + go) / 2.0);
      CHECK(std::abs(r.bare.ohmic[k] - go * std::norm(a0)) <= 1e-6 * go * std::norm(a0));
    }
  }

  TEST_CASE("fig1c suppression and enhancement on resonance") {
    const auto r = run_fig1c(load_scenario("fig1c"));
    const auto mid = r.detunings.size() / 2;
    REQUIRE(r.detunings[mid] == doctest::Approx(0.0));
    CHECK(r.bare.ohmic[mid] / r.cavity.ohmic[mid] >= 30.0);
    CHECK(r.cavity.radiative[mid] / r.bare.radiative[mid] >= 8.0);
  }

  TEST_CASE("fig2 yield and power figures") {
    const auto r = run_fig2(load_scenario("fig2"));
    CHECK(r.delta0.value == doctest::Approx(5.8e-5).epsilon(0.01));
    CHECK(r.yield_at_delta0 >= 0.40);
    CHECK(r.bare_yield_at_delta0 >= 0.005);
    CHECK(r.bare_yield_at_delta0 <= 0.025);
    CHECK(r.power_enhancement_at_delta0 >= 10.0);
    const double step = r.detunings[1] - r.detunings[0];
    CHECK(std::abs(r.yield_argmax - r.delta0.value) <= step * (1 + 1e-9));
    CHECK(max_of(r.cavity.yield()) == doctest::Approx(r.yield_at_delta0).epsilon(0.01));
  }

  TEST_CASE("grid override changes only the sampling") {
    const auto r = run_fig2(load_scenario("fig2"), 101);
    CHECK(r.detunings.size() == 101);
    CHECK(r.yield_at_delta0 == doctest::Approx(run_fig2(load_scenario("fig2")).yield_at_delta0));
  }

  TEST_CASE("figure runners reject mismatched scenarios") {
    CHECK_THROWS_AS(run_fig1c(load_scenario("fig2")), DomainError);
    CHECK_THROWS_AS(run_fig2(load_scenario("fig1c")), DomainError);
    CHECK_THROWS_AS(run_fig4(load_scenario("fig1c")), DomainError);
  }

  TEST_CASE("map cell equals a standalone evaluation") {
    const auto base = load_scenario("fig2");
    const std::vector<double> d{4.0, 10.0, 17.0};
    const std::vector<double> q{1e3, 4e4, 2e6};
    const auto map = enhancement_map(base, d, q);
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t j = 0; j < q.size(); ++j) {
        const auto cell = enhancement_cell(base, d[i], q[j]);
        CHECK(map.at(i, j).yield_enhancement == cell.yield_enhancement);
        CHECK(map.at(i, j).power_enhancement == cell.power_enhancement);
        CHECK(map.at(i, j).delta0 == cell.delta0);
      }
    }
  }

  TEST_CASE("map is identical for one and many workers") {
    WorkerGuard guard;
    const auto base = load_scenario("fig2");
    const auto d = linear_grid(3.0, 20.0, 6);
    const auto q = log_grid(1e2, 1e7, 7);
    set_worker_count(1);
    const auto one = enhancement_map(base, d, q);
    set_worker_count(4);
    const auto many = enhancement_map(base, d, q);
    for (std::size_t k = 0; k < one.cells.size(); ++k) {
      CHECK(one.cells[k].yield_enhancement == many.cells[k].yield_enhancement);
      CHECK(one.cells[k].power_enhancement == many.cells[k].power_enhancement);
    }
  }

  TEST_CASE("map rejects bad grids") {
    const auto base = load_scenario("fig2");
    CHECK_THROWS_AS(enhancement_map(base, {}, {1e3}), DomainError);
    CHECK_THROWS_AS(enhancement_map(base, {5.0, 4.0}, {1e3}), DomainError);
    CHECK_THROWS_AS(enhancement_map(base, {5.0}, {-1.0}), DomainError);
  }

  TEST_CASE("optimal Q is an interior maximum") {
    const auto base = load_scenario("fig2");
    const auto opt = optimal_q(base, 10.0, Objective::yield);
    REQUIRE(opt.interior);
    CHECK(opt.value >= enhancement_cell(base, 10.0, opt.q_opt * 0.5).yield_enhancement);
    CHECK(opt.value >= enhancement_cell(base, 10.0, opt.q_opt * 2.0).yield_enhancement);
    CHECK(opt.value >= max_of(opt.coarse_values));
    const auto best = std::max_element(opt.coarse_values.begin(), opt.coarse_values.end()) -
                      opt.coarse_values.begin();
    const double cell = std::log(opt.coarse_q[1] / opt.coarse_q[0]);
    CHECK(std::abs(std::log(opt.q_opt / opt.coarse_q[static_cast<std::size_t>(best)])) <= cell);
    CHECK(opt.value > opt.coarse_values.front());
    CHECK(opt.value > opt.coarse_values.back());
  }

  TEST_CASE("stronger quenching moves the optimum") {
    auto base = load_scenario("fig2");
    const auto before = optimal_q(base, 10.0, Objective::yield);
    base.couplings.quench_ref_rate_uev *= 2.0;
    const auto after = optimal_q(base, 10.0, Objective::yield);
    CHECK(std::abs(std::log(after.q_opt / before.q_opt)) > 1e-2);
  }

  TEST_CASE("power objective is scanned too") {
    const auto opt = optimal_q(load_scenario("fig2"), 10.0, Objective::power);
    CHECK(opt.objective == Objective::power);
    CHECK(opt.value > 1.0);
    CHECK(to_string(Objective::power) == "power");
  }

  TEST_CASE("calibration hits its targets") {
    const auto sys = resolve(load_scenario("fig3"));
    REQUIRE(sys.calibration.has_value());
    const auto& cal = *sys.calibration;
    CHECK(std::abs(cal.pair.splitting / 3.5e-3 - 1) < 1e-3);
    CHECK(std::abs(cal.pair.kappa_narrow / 0.11e-3 - 1) < 1e-3);
    CHECK(cal.pair.kappa_broad == doctest::Approx(1.28e-3).epsilon(0.25));
    CHECK(cal.pair.cooperativity() > 80.0);
    CHECK(cal.G_unprojected.value > 0.0);
    CHECK(cal.g1_unprojected.value > 0.0);
  }

  TEST_CASE("unreachable calibration target throws") {
    auto s = load_scenario("fig3");
    s.couplings.target_narrow_width_mev = 1e-6;
    CHECK_THROWS_AS(resolve(s), NumericalError);
  }

  TEST_CASE("fig3 traces and doublet") {
    const auto r = run_fig3(load_scenario("fig3"));
    REQUIRE(r.traces.size() == 4);
    CHECK(r.traces[2].label == "q_100000");
    CHECK(r.traces[2].maxima >= 5);
    CHECK(r.traces[3].label == "no_cavity");
    CHECK(r.traces[3].maxima == 0);
    REQUIRE(r.peaks.size() == 2);
    CHECK(r.doublet_separation == doctest::Approx(4e-3).epsilon(0.25));
  }

  TEST_CASE("fig4 branches stay separated") {
    const auto r = run_fig4(load_scenario("fig4"));
    CHECK(r.summary.min_re_separation > 0.0);
    CHECK(r.summary.min_im_separation > 0.0);
    CHECK_FALSE(r.summary.real_parts_cross);
    CHECK_FALSE(r.summary.linewidths_cross);
    CHECK(r.branches.sweep.size() == 201);
    CHECK(r.spectra.size() == 11);
    CHECK(r.at_zero.splitting == doctest::Approx(3.5e-3).epsilon(1e-3));
  }

  TEST_CASE("grids") {
    const auto lg = log_grid(1.0, 100.0, 3);
    CHECK(lg[1] == doctest::Approx(10.0));
    CHECK(lg.back() == 100.0);
    const auto sg = stepped_grid(-1.0, 1.0, 0.5);
    CHECK(sg.size() == 5);
    CHECK(linear_grid(0.0, 1.0, 5)[2] == 0.5);
    CHECK_THROWS_AS(log_grid(-1.0, 1.0, 3), DomainError);
    CHECK_THROWS_AS(stepped_grid(0.0, 1.0, 0.0), DomainError);
  }
}
