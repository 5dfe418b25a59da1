// Acceptance checks. One line per criterion:
//   PASS criterion N: <summary>
//   FAIL criterion N: <summary>
// Usage: plasmon_acceptance [--criterion N]

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <fmt/format.h>

#include "plasmon/config.hpp"
#include "plasmon/couplings.hpp"
#include "plasmon/dynamics.hpp"
#include "plasmon/experiments.hpp"
#include "plasmon/materials.hpp"
#include "plasmon_cli/cli.hpp"

using namespace plasmon;
namespace fs = std::filesystem;

namespace {

class Checks {
 public:
  void expect(bool ok, std::string what) {
    if (!ok) failures_.push_back(std::move(what));
    ++count_;
  }
  void near(double value, double target, double rel, std::string_view what) {
    const double err = std::abs(value / target - 1.0);
    expect(err <= rel, fmt::format("{} = {:.6g}, want {:.6g} +/- {:g}%", what, value, target, rel * 100));
  }
  void at_least(double value, double bound, std::string_view what) {
    expect(value >= bound, fmt::format("{} = {:.6g}, want >= {:g}", what, value, bound));
  }
  void note(std::string text) { notes_.push_back(std::move(text)); }

  bool ok() const { return failures_.empty(); }
  std::string summary() const {
    std::string out = fmt::format("{} checks", count_);
    for (const auto& n : notes_) out += "; " + n;
    for (const auto& f : failures_) out += "; FAILED " + f;
    return out;
  }

 private:
  int count_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

// Resonance with the damping left out of the denominator.
double oracle_dipole_frequency(double eps_inf, double wp, double eps_b) {
  auto f = [&](double w) { return eps_inf - wp * wp / (w * w) + 2 * eps_b; };
  double lo = 1e-6, hi = wp;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(lo) < 0) == (f(mid) < 0) ? lo = mid : hi = mid;
  }
  return 0.5 * (lo + hi);
}

void criterion_1(Checks& c) {
  const auto metal = DrudeMetal::reference_gold();
  const Environment env{};
  const Nanoparticle sphere{Sphere{Length{10.0}}, metal};
  const double w1 = sphere_mode_frequency(metal, env, 1).value;
  const double oracle = oracle_dipole_frequency(1.0, 4.0, 1.0);
  c.expect(std::abs(w1 - oracle) <= 1e-4, fmt::format("omega_1 {:.6f} vs oracle {:.6f}", w1, oracle));
  c.expect(std::abs(w1 - 2.3094) <= 1e-4, fmt::format("omega_1 = {:.6f}, want 2.3094", w1));

  const Energy g1r = dipolar_radiative_rate(sphere, env);
  c.near(g1r.value, 2.45e-3, 0.02, "gamma_1r");
  const Energy gs = free_space_decay(DipoleMoment{1.0}, Energy{w1}, 1.0);
  c.near(gs.value, 3e-6, 0.05, "gamma_s");
  const Energy J = vacuum_coupling(DipoleMoment{1.0}, Energy{w1}, 1e9, 1.0);
  c.near(J.value, 144e-6, 0.02, "J");
  const auto mu1 = plasmon_effective_dipole(g1r, Energy{w1});
  const Energy g1 = vacuum_coupling(mu1, Energy{w1}, 1e9, 1.0);
  c.near(g1.value, 2.9e-3, 0.02, "g1");
  const Energy G = dipole_dipole_coupling(mu1, DipoleMoment{1.0}, Length{20.0}, 1.0,
                                          DipoleGeometry::longitudinal);
  c.near(std::abs(G.value), 7.2e-3, 0.02, "|G|");
  const double delta0 = fano_detuning(-J, -g1, -G).value;
  c.near(delta0, 58e-6, 0.01, "delta0 (computed couplings)");
  c.note(fmt::format("omega_1 {:.5f} eV, gamma_1r {:.4g} meV, gamma_s {:.4g} ueV, J {:.4g} ueV, g1 {:.4g} meV, "
                     "|G| {:.4g} meV, delta0 {:.4g} ueV",
                     w1, g1r.value * 1e3, gs.value * 1e6, J.value * 1e6, g1.value * 1e3,
                     std::abs(G.value) * 1e3, delta0 * 1e6));
}

void criterion_2(Checks& c) {
  const auto r = run_fig1c(load_scenario("fig1c"));
  const auto& sys = r.system;
  const double g = sys.couplings.g1.value;
  const double g1r = sys.plasmon.gamma_rad.value;
  const double go = sys.plasmon.gamma_ohmic.value;
  const double gc = sys.gamma_c.value;
  const double d1c = sys.scenario.cavity.detuning_1c.value;
  const std::complex<double> i(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < r.detunings.size(); ++k) {
    const double x = r.detunings[k];
    const auto a = 1.0 / ((x - d1c + i * (g1r + go) / 2.0) - g * g / (x + i * gc / 2.0));
    const auto cav = g * a / (x + i * gc / 2.0);
    const auto a0 = 1.0 / (x - d1c + i * (g1r + go) / 2.0);
    const double expected[] = {g1r * std::norm(a) + gc * std::norm(cav), go * std::norm(a),
                               g1r * std::norm(a0), go * std::norm(a0)};
    const double got[] = {r.cavity.radiative[k], r.cavity.ohmic[k], r.bare.radiative[k], r.bare.ohmic[k]};
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(got[j] / expected[j] - 1.0));
  }
  c.expect(worst <= 1e-6, fmt::format("closed-form deviation {:.3g}", worst));

  const auto zero = static_cast<std::size_t>(
      std::min_element(r.detunings.begin(), r.detunings.end(),
                       [](double a, double b) { return std::abs(a) < std::abs(b); }) -
      r.detunings.begin());
  const double ohmic_drop = r.bare.ohmic[zero] / r.cavity.ohmic[zero];
  const double rad_gain = r.cavity.radiative[zero] / r.bare.radiative[zero];
  c.at_least(ohmic_drop, 30.0, "Ohmic reduction");
  c.at_least(rad_gain, 8.0, "radiation enhancement");
  c.note(fmt::format("Ohmic reduction {:.1f}, radiation gain {:.2f}, closed-form max rel dev {:.2g}",
                     ohmic_drop, rad_gain, worst));
}

void criterion_3(Checks& c) {
  const auto r = run_fig2(load_scenario("fig2"));
  c.at_least(r.yield_at_delta0, 0.40, "eta(delta0)");
  c.expect(r.bare_yield_at_delta0 >= 0.005 && r.bare_yield_at_delta0 <= 0.025,
           fmt::format("bare eta = {:.4g}, want [0.005, 0.025]", r.bare_yield_at_delta0));
  c.at_least(r.power_enhancement_at_delta0, 10.0, "power enhancement");
  const double step = r.detunings[1] - r.detunings[0];
  const double offset = std::abs(r.yield_argmax - r.delta0.value);
  c.expect(offset <= step * (1 + 1e-9),
           fmt::format("argmax offset {:.3g} eV exceeds step {:.3g}", offset, step));
  c.note(fmt::format("eta {:.4f}, bare eta {:.4g}, power x{:.2f}, argmax {:.3g} vs delta0 {:.3g}",
                     r.yield_at_delta0, r.bare_yield_at_delta0, r.power_enhancement_at_delta0,
                     r.yield_argmax, r.delta0.value));
}

void criterion_4(Checks& c) {
  const auto base = load_scenario("fig2");
  const auto opt = optimal_q(base, 10.0, Objective::yield);
  c.expect(opt.interior, "Q_opt at D = 10 nm is not interior");
  const double lo = opt.coarse_values.front();
  const double hi = opt.coarse_values.back();
  c.expect(opt.value > lo && opt.value > hi,
           fmt::format("no interior maximum: ends {:.3g}, {:.3g}, best {:.3g}", lo, hi, opt.value));

  double worst = 1e300;
  double worst_d = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double d = 5.0 + 0.5 * k;
    const auto o = optimal_q(base, d, Objective::yield);
    if (o.value < worst) {
      worst = o.value;
      worst_d = d;
    }
  }
  c.at_least(worst, 20.0, fmt::format("min over D of optimal yield enhancement (D = {:g})", worst_d));

  const auto low_q = enhancement_cell(base, 10.0, 1e2);
  c.expect(std::abs(low_q.yield_enhancement - 1.0) <= 0.2,
           fmt::format("yield enhancement at Q = 1e2 = {:.4g}, want 1 +/- 20%", low_q.yield_enhancement));
  c.note(fmt::format("Q_opt(10 nm) {:.4g} with x{:.2f}; min over D in [5, 15] x{:.2f} at {:g} nm; "
                     "Q = 1e2 yield x{:.3f}, power x{:.3f}",
                     opt.q_opt, opt.value, worst, worst_d, low_q.yield_enhancement,
                     low_q.power_enhancement));
}

void criterion_5(Checks& c) {
  const auto sys = resolve(load_scenario("fig3"));
  if (!sys.calibration) {
    c.expect(false, "no calibration report");
    return;
  }
  const auto& pair = sys.calibration->pair;
  c.near(pair.splitting, 3.5e-3, 1e-3, "2 g_eff");
  c.near(pair.kappa_narrow, 0.11e-3, 1e-3, "kappa_2");
  c.near(pair.kappa_broad, 1.28e-3, 0.25, "kappa_1");
  c.expect(pair.cooperativity() > 80.0, fmt::format("cooperativity {:.2f} <= 80", pair.cooperativity()));

  const auto f3 = run_fig3(load_scenario("fig3"));
  int q5 = -1;
  int none = -1;
  for (const auto& t : f3.traces) {
    if (t.q_factor && *t.q_factor == 1e5) q5 = t.maxima;
    if (!t.q_factor) none = t.maxima;
  }
  c.expect(q5 >= 5, fmt::format("Q = 1e5 trace has {} maxima", q5));
  c.expect(none == 0, fmt::format("no-cavity trace has {} maxima", none));
  c.near(f3.doublet_separation, 4e-3, 0.25, "doublet separation");

  const auto f4 = run_fig4(load_scenario("fig4"));
  c.expect(f4.summary.min_re_separation > 0.0 && !f4.summary.real_parts_cross,
           "real parts of the strong branches touch");
  c.expect(f4.summary.min_im_separation > 0.0 && !f4.summary.linewidths_cross,
           "linewidths of the strong branches touch");
  c.note(fmt::format("2g_eff {:.4g} meV, kappa_1 {:.4g} meV, kappa_2 {:.4g} meV, C {:.1f}, maxima {}/{}, "
                     "doublet {:.3g} meV, min branch sep Re {:.3g} meV Im {:.3g} meV",
                     pair.splitting * 1e3, pair.kappa_broad * 1e3, pair.kappa_narrow * 1e3,
                     pair.cooperativity(), q5, none, f3.doublet_separation * 1e3,
                     f4.summary.min_re_separation * 1e3, f4.summary.min_im_separation * 1e3));
}

EffectiveHamiltonian random_network(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> det(-0.05, 0.05);
  std::uniform_real_distribution<double> lw(-6.0, -1.0);
  std::uniform_real_distribution<double> cp(-0.01, 0.01);
  auto rate = [&] { return Energy{std::pow(10.0, lw(rng))}; };
  return build_three_mode(plasmon_descriptor(Energy{det(rng)}, rate(), rate()),
                          cavity_descriptor(Energy{det(rng)}, rate()),
                          emitter_descriptor(Energy{det(rng)}, rate(), rate()),
                          CouplingSet{Energy{cp(rng)}, Energy{cp(rng)}, Energy{cp(rng)}});
}

void criterion_6(Checks& c) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> pump(-0.05, 0.05);
  double balance = 0.0;
  double symmetry = 0.0;
  double trace = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto h = random_network(rng);
    const DriveSpec drive{ModeLabel::emitter, 1.0, Energy{pump(rng)}};
    const auto s = steady_state(h, standard_channels(h, ChannelSet::with_emitter), drive);
    const auto b = power_balance(h, s, drive);
    balance = std::max(balance, std::abs(b.dissipated - b.injected) / std::abs(b.injected));
    const auto& m = h.matrix();
    symmetry = std::max(symmetry, (m - m.transpose()).norm());
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m);
    trace = std::max(trace, std::abs(m.trace() - es.eigenvalues().sum()));
  }
  c.expect(balance <= 1e-9, fmt::format("power balance deviation {:.3g}", balance));
  c.expect(symmetry <= 1e-12, fmt::format("H - H^T = {:.3g}", symmetry));
  c.expect(trace <= 1e-12, fmt::format("trace - sum(lambda) = {:.3g}", trace));

  double propagation = 0.0;
  bool monotone = true;
  for (int k = 0; k < 20; ++k) {
    const auto h = random_network(rng);
    Eigen::VectorXcd v0 = Eigen::VectorXcd::Zero(3);
    v0(2) = 1.0;
    const auto times = default_time_grid(h, 200, 1.0);
    const auto a = evolve(h, v0, times);
    const auto b = evolve_adaptive(h, v0, times);
    propagation = std::max(propagation, (a.populations - b.populations).cwiseAbs().maxCoeff());
    const auto total = a.total();
    for (std::size_t j = 1; j < total.size(); ++j) monotone = monotone && total[j] <= total[j - 1] * (1 + 1e-12);
  }
  c.expect(propagation <= 1e-8, fmt::format("expm vs adaptive {:.3g}", propagation));
  c.expect(monotone, "undriven population increased");

  {
    const CouplingSet cs{Energy{-2.9e-3}, Energy{-7.2e-3}, Energy{0.0}};
    const auto h = build_three_mode(plasmon_descriptor(Energy{0.0}, Energy{2.45e-3}, Energy{0.2}),
                                    cavity_descriptor(Energy{0.0}, Energy{23e-6}),
                                    emitter_descriptor(Energy{0.0}, Energy{3e-6}, Energy{83e-6}), cs);
    const double delta0 = fano_detuning(cs.J, cs.g1, cs.G).value;
    std::vector<double> grid;
    for (int k = -2000; k <= 2000; ++k) grid.push_back(delta0 + k * 1e-7);
    const auto spec = emission_spectrum(h, standard_channels(h, ChannelSet::with_emitter),
                                        ModeLabel::plasmon_dipole, grid);
    const auto p = h.require_index(ModeLabel::plasmon_dipole);
    Eigen::Index best = 0;
    spec.mode_population.col(p).minCoeff(&best);
    const double miss = std::abs(grid[static_cast<std::size_t>(best)] - delta0);
    c.expect(miss <= 23e-6 / 2, fmt::format("Fano minimum {:.3g} eV from delta0", miss));
  }

  std::uniform_real_distribution<double> factor(0.2, 5.0);
  double scaling = 0.0;
  const auto rel = [](double got, double want) { return std::abs(got / want - 1.0); };
  const Environment env{};
  for (int k = 0; k < 200; ++k) {
    const double s = factor(rng);
    const DipoleMoment mu{0.3 + factor(rng)};
    const Energy w{0.5 + factor(rng)};
    scaling = std::max(scaling, rel(vacuum_coupling(mu, w, 1e9 * s, 1.0) / vacuum_coupling(mu, w, 1e9, 1.0),
                                    std::pow(s, -0.5)));
    scaling = std::max(scaling, rel(dipole_dipole_coupling(mu, mu, Length{20 * s}, 1.0, DipoleGeometry::longitudinal) /
                                        dipole_dipole_coupling(mu, mu, Length{20}, 1.0, DipoleGeometry::longitudinal),
                                    std::pow(s, -3.0)));
    scaling = std::max(scaling, rel(free_space_decay(DipoleMoment{mu.value * s}, w, 1.0) /
                                        free_space_decay(mu, w, 1.0),
                                    s * s));
    scaling = std::max(scaling, rel(free_space_decay(mu, Energy{w.value * s}, 1.0) / free_space_decay(mu, w, 1.0),
                                    s * s * s));
    const Nanoparticle a{Sphere{Length{4.0}}, DrudeMetal::reference_gold()};
    const Nanoparticle b{Sphere{Length{4.0 * s}}, DrudeMetal::reference_gold()};
    scaling = std::max(scaling, rel(dipolar_radiative_rate(b, env) / dipolar_radiative_rate(a, env), s * s * s));
  }
  c.expect(scaling <= 1e-9, fmt::format("scaling exponent deviation {:.3g}", scaling));
  c.note(fmt::format("balance {:.2g}, symmetry {:.2g}, trace {:.2g}, propagation {:.2g}, scaling {:.2g}",
                     balance, symmetry, trace, propagation, scaling));
}

std::vector<std::pair<std::string, std::string>> files_of(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::ifstream in(entry.path(), std::ios::binary);
    out.emplace_back(entry.path().filename().string(),
                     std::string(std::istreambuf_iterator<char>(in), {}));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void criterion_7(Checks& c) {
  const auto root = fs::temp_directory_path() / fmt::format("plasmon_acceptance_{}", ::getpid());
  fs::remove_all(root);
  std::size_t compared = 0;
  for (const char* command : {"fig1c", "fig2", "fig3", "fig4"}) {
    std::vector<std::vector<std::pair<std::string, std::string>>> runs;
    for (const char* threads : {"1", "4", "1"}) {
      const auto dir = root / fmt::format("{}_{}_{}", command, threads, runs.size());
      std::ostringstream out, err;
      const int code = cli::run({command, "--out", dir.string(), "--threads", threads}, out, err);
      c.expect(code == 0, fmt::format("{} --threads {} exited {}: {}", command, threads, code, err.str()));
      runs.push_back(code == 0 ? files_of(dir) : decltype(files_of(dir)){});
    }
    for (std::size_t r = 1; r < runs.size(); ++r) {
      c.expect(!runs[0].empty() && runs[r] == runs[0], fmt::format("{} output differs in run {}", command, r));
    }
    compared += runs[0].size();
  }
  {
    std::vector<std::string> maps;
    for (const char* threads : {"1", "4"}) {
      const auto dir = root / fmt::format("map_{}", threads);
      std::ostringstream out, err;
      const int code = cli::run({"map", "--grid", "12", "--out", dir.string(), "--threads", threads}, out, err);
      c.expect(code == 0, fmt::format("map --threads {} exited {}", threads, code));
      std::ifstream in(dir / "map.csv", std::ios::binary);
      maps.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    c.expect(!maps[0].empty() && maps[0] == maps[1], "map output differs between 1 and 4 workers");
  }
  fs::remove_all(root);
  c.note(fmt::format("{} figure files identical over 3 runs (1, 4, 1 workers)", compared));
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<void(Checks&)>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                           criterion_5, criterion_6, criterion_7};
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: plasmon_acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::cerr << "criterion must be 1.." << criteria.size() << "\n";
    return 2;
  }
  bool all_ok = true;
  for (std::size_t n = 1; n <= criteria.size(); ++n) {
    if (only != 0 && static_cast<int>(n) != only) continue;
    Checks checks;
    try {
      criteria[n - 1](checks);
    } catch (const std::exception& e) {
      checks.expect(false, fmt::format("exception: {}", e.what()));
    }
    std::cout << (checks.ok() ? "PASS" : "FAIL") << " criterion " << n << ": " << checks.summary() << "\n";
    all_ok = all_ok && checks.ok();
  }
  return all_ok ? 0 : 1;
}
