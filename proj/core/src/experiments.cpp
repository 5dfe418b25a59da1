#include "plasmon/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "plasmon/errors.hpp"
#include "plasmon/parallel.hpp"

namespace plasmon {

namespace {

constexpr double kMeV = 1e-3;
constexpr double kUeV = 1e-6;

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

Provenance override_provenance(const Scenario& s) {
  return s.couplings.mode == CouplingSource::paper_exact ? Provenance::paper_exact
                                                         : Provenance::override_value;
}

class ParameterLog {
 public:
  explicit ParameterLog(std::vector<ResolvedParameter>& out) : out_(out) {}
  void add(std::string name, double value, Provenance p) {
    out_.push_back({std::move(name), value, p});
  }

 private:
  std::vector<ResolvedParameter>& out_;
};

Energy resolve_gamma_m(const Scenario& s, const ResolvedSystem& r, Provenance& provenance) {
  const auto& c = s.couplings;
  if (c.gamma_m_uev) {
    provenance = override_provenance(s);
    return Energy{*c.gamma_m_uev * kUeV};
  }
  const auto* sphere = std::get_if<Sphere>(&s.particle.shape);
  if (!sphere) {
    throw DomainError("multipole quenching is only modelled for spheres; set gamma_m_uev");
  }
  const auto& metal = s.particle.metal;
  const auto& em = s.emitter;
  const auto at = [&](double d_nm) {
    return multipole_quench_rate(em.mu, metal, sphere->radius, Length{d_nm}, s.environment,
                                 r.omega_e, em.orientation);
  };
  const Energy reference = at(c.quench_ref_distance_nm);
  provenance = Provenance::calibrated;
  return Energy{at(em.distance.value).value * (c.quench_ref_rate_uev * kUeV) / reference.value};
}

// Modes in the emitter frame at cavity-emitter detuning `ce`.
EffectiveHamiltonian three_mode(const ResolvedSystem& r, Energy ce, const CouplingSet& c) {
  const auto& p = r.plasmon;
  return build_three_mode(plasmon_descriptor(r.scenario.emitter.detuning_1e, p.gamma_rad,
                                             p.gamma_ohmic),
                          cavity_descriptor(ce, r.gamma_c),
                          emitter_descriptor(Energy{0.0}, r.gamma_s, r.gamma_m), c, r.omega_e);
}

double total_radiative(const SteadyState& s) { return s.radiative_power(); }

}  // namespace

double ResolvedSystem::parameter(std::string_view name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return p.value;
  }
  throw DomainError(fmt::format("no resolved parameter named '{}'", name));
}

ResolvedSystem resolve(const Scenario& scenario) {
  scenario.particle.validate();
  scenario.environment.validate();
  const auto& em = scenario.emitter;
  const auto& cav = scenario.cavity;
  const auto& c = scenario.couplings;
  const Provenance given = override_provenance(scenario);

  ResolvedSystem r;
  r.scenario = scenario;
  ParameterLog log(r.parameters);
  if (auto warning = scenario.particle.quasi_static_warning()) r.warnings.push_back(*warning);

  r.plasmon = dipolar_mode(scenario.particle, scenario.environment, 0);
  log.add("omega_1_ev", r.plasmon.omega.value, Provenance::first_principles);
  if (c.gamma_1r_mev) {
    r.plasmon.gamma_rad = Energy{*c.gamma_1r_mev * kMeV};
    r.plasmon.mu_eff = plasmon_effective_dipole(r.plasmon.gamma_rad, r.plasmon.omega);
  }
  log.add("gamma_1r_ev", r.plasmon.gamma_rad.value,
          c.gamma_1r_mev ? given : Provenance::first_principles);
  log.add("gamma_o_ev", r.plasmon.gamma_ohmic.value, Provenance::first_principles);
  log.add("mu_1_e_nm", r.plasmon.mu_eff.value, Provenance::first_principles);

  r.omega_e = r.plasmon.omega - em.detuning_1e;
  if (em.present) {
    require_positive(r.omega_e.value, "emitter frequency (omega_1 - detuning_1e)");
    log.add("omega_e_ev", r.omega_e.value, Provenance::first_principles);
  }

  if (cav.present) {
    r.omega_c = em.present ? r.omega_e + cav.detuning_ce : r.plasmon.omega - cav.detuning_1c;
    require_positive(r.omega_c.value, "cavity frequency");
    require_positive(cav.q_factor, "q_factor");
    require_positive(cav.volume_um3, "vc_um3");
    r.gamma_c = r.omega_c / cav.q_factor;
    log.add("omega_c_ev", r.omega_c.value, Provenance::first_principles);
    log.add("gamma_c_ev", r.gamma_c.value, Provenance::first_principles);
  }

  // Unit couplings projected once, which also validates the angle.
  const auto [cos_t, sin_t] = em.theta_deg
                                  ? project_couplings(Energy{1.0}, Energy{1.0}, deg_to_rad(*em.theta_deg))
                                  : std::pair{Energy{1.0}, Energy{1.0}};
  const double volume_nm3 = cav.volume_um3 * 1e9;
  const double eps_b = scenario.environment.eps_b;

  if (em.present) {
    require_positive(em.mu.value, "mu_e_nm");
    require_positive(em.distance.value, "distance_nm");
    r.gamma_s = c.gamma_s_uev ? Energy{*c.gamma_s_uev * kUeV}
                              : free_space_decay(em.mu, r.omega_e, eps_b);
    log.add("gamma_s_ev", r.gamma_s.value, c.gamma_s_uev ? given : Provenance::first_principles);
    Provenance gm_provenance = Provenance::first_principles;
    r.gamma_m = resolve_gamma_m(scenario, r, gm_provenance);
    log.add("gamma_m_ev", r.gamma_m.value, gm_provenance);
  }

  Provenance g1_provenance = Provenance::first_principles;
  if (cav.present) {
    if (c.g1_mev) {
      r.couplings.g1 = Energy{*c.g1_mev * kMeV};
      g1_provenance = given;
    } else {
      const Energy g = vacuum_coupling(r.plasmon.mu_eff, r.omega_c, volume_nm3, eps_b);
      r.couplings.g1 = c.g1_sign * g * sin_t.value;
    }
  }

  Provenance G_provenance = Provenance::first_principles;
  if (em.present) {
    if (c.G_mev) {
      r.couplings.G = Energy{*c.G_mev * kMeV};
      G_provenance = given;
    } else {
      const auto geometry = em.orientation == Orientation::radial ? DipoleGeometry::longitudinal
                                                                  : DipoleGeometry::transverse;
      const Length d = scenario.particle.max_extent() + em.distance;
      const Energy g = dipole_dipole_coupling(r.plasmon.mu_eff, em.mu, d, eps_b, geometry);
      r.couplings.G = c.G_sign * Energy{std::abs(g.value)} * cos_t.value;
    }
  }

  Provenance J_provenance = Provenance::first_principles;
  if (em.present && cav.present) {
    if (c.J_uev) {
      r.couplings.J = Energy{*c.J_uev * kUeV};
      J_provenance = given;
    } else {
      const Energy g = vacuum_coupling(em.mu, r.omega_c, volume_nm3, eps_b);
      r.couplings.J = c.J_sign * g * std::cos(deg_to_rad(em.cavity_angle_deg));
    }
  }

  if (c.mode == CouplingSource::calibrated && em.present && cav.present) {
    if (c.g1_mev || c.G_mev) {
      throw ConfigError({"mode = calibrated fits g1 and G; remove g1_mev / G_mev overrides"});
    }
    r.calibration = calibrate_strong_coupling(r, Energy{c.target_splitting_mev * kMeV},
                                              Energy{c.target_narrow_width_mev * kMeV});
    r.couplings.g1 = r.calibration->couplings.g1;
    r.couplings.G = r.calibration->couplings.G;
    g1_provenance = Provenance::calibrated;
    G_provenance = Provenance::calibrated;
  }

  if (cav.present) log.add("g1_ev", r.couplings.g1.value, g1_provenance);
  if (em.present) log.add("G_ev", r.couplings.G.value, G_provenance);
  if (em.present && cav.present) log.add("J_ev", r.couplings.J.value, J_provenance);
  if (r.calibration) {
    const auto& cal = *r.calibration;
    log.add("G_unprojected_ev", cal.G_unprojected.value, Provenance::calibrated);
    log.add("g1_unprojected_ev", cal.g1_unprojected.value, Provenance::calibrated);
    log.add("G_point_dipole_ev", cal.G_estimate.value, Provenance::first_principles);
    log.add("g1_point_dipole_ev", cal.g1_estimate.value, Provenance::first_principles);
    log.add("G_ratio_calibrated_to_point_dipole", cal.G_ratio(), Provenance::calibrated);
    log.add("g1_ratio_calibrated_to_point_dipole", cal.g1_ratio(), Provenance::calibrated);
    log.add("kappa_1_ev", cal.pair.kappa_broad, Provenance::calibrated);
    log.add("kappa_2_ev", cal.pair.kappa_narrow, Provenance::calibrated);
    log.add("splitting_2g_eff_ev", cal.pair.splitting, Provenance::calibrated);
    log.add("cooperativity", cal.pair.cooperativity(), Provenance::calibrated);
  }
  if (em.present && cav.present && r.couplings.G.value != 0.0) {
    const auto worst = std::max({g1_provenance, G_provenance, J_provenance});
    log.add("delta0_ev", fano_detuning(r.couplings.J, r.couplings.g1, r.couplings.G).value, worst);
  }
  return r;
}

EffectiveHamiltonian cavity_hamiltonian(const ResolvedSystem& r) {
  if (!r.has_cavity()) throw DomainError("scenario has no cavity");
  if (r.has_emitter()) return three_mode(r, r.scenario.cavity.detuning_ce, r.couplings);
  const auto& p = r.plasmon;
  return build_two_mode(plasmon_descriptor(r.scenario.cavity.detuning_1c, p.gamma_rad,
                                           p.gamma_ohmic),
                        cavity_descriptor(Energy{0.0}, r.gamma_c), r.couplings.g1, r.omega_c);
}

EffectiveHamiltonian cavity_hamiltonian(const ResolvedSystem& r, Energy detuning_ce) {
  if (!r.has_cavity() || !r.has_emitter()) {
    throw DomainError("cavity-emitter detuning needs both a cavity and an emitter");
  }
  return three_mode(r, detuning_ce, r.couplings);
}

EffectiveHamiltonian bare_hamiltonian(const ResolvedSystem& r) {
  const auto& p = r.plasmon;
  if (r.has_emitter()) {
    return build_plasmon_emitter(
        plasmon_descriptor(r.scenario.emitter.detuning_1e, p.gamma_rad, p.gamma_ohmic),
        emitter_descriptor(Energy{0.0}, r.gamma_s, r.gamma_m), r.couplings.G, r.omega_e);
  }
  const Energy reference = r.has_cavity() ? r.omega_c : p.omega;
  const Energy detuning = p.omega - reference;
  return EffectiveHamiltonian({plasmon_descriptor(detuning, p.gamma_rad, p.gamma_ohmic)}, {},
                              reference);
}

ModeLabel driven_mode(const ResolvedSystem& r) {
  return r.has_emitter() ? ModeLabel::emitter : ModeLabel::plasmon_dipole;
}

CalibrationReport calibrate_strong_coupling(const ResolvedSystem& base, Energy splitting,
                                            Energy narrow_width) {
  require_positive(splitting.value, "target splitting");
  require_positive(narrow_width.value, "target narrow linewidth");
  if (!base.has_cavity() || !base.has_emitter()) {
    throw DomainError("calibration needs a cavity and an emitter");
  }
  const auto& s = base.scenario;
  const auto [cos_e, sin_e] =
      s.emitter.theta_deg ? project_couplings(Energy{1.0}, Energy{1.0}, deg_to_rad(*s.emitter.theta_deg))
                          : std::pair{Energy{1.0}, Energy{1.0}};
  const double cos_t = cos_e.value;
  const double sin_t = sin_e.value;
  if (cos_t < 1e-12 || sin_t < 1e-12) {
    throw DomainError("theta must lie strictly between 0 and 90 degrees for calibration");
  }

  // Unknowns: log of the projected magnitudes |G cos t|, |g1 sin t|.
  const auto couplings_at = [&](double lg, double lg1) {
    CouplingSet c = base.couplings;
    c.G = s.couplings.G_sign * Energy{std::exp(lg)};
    c.g1 = s.couplings.g1_sign * Energy{std::exp(lg1)};
    return c;
  };
  const auto pair_at = [&](double lg, double lg1) {
    return strong_pair(three_mode(base, Energy{0.0}, couplings_at(lg, lg1)));
  };
  const auto residual = [&](double lg, double lg1) {
    const auto p = pair_at(lg, lg1);
    return std::array<double, 2>{p.splitting / splitting.value - 1.0,
                                 p.kappa_narrow / narrow_width.value - 1.0};
  };
  const auto norm = [](const std::array<double, 2>& r) { return std::hypot(r[0], r[1]); };

  // Coarse scan picks the basin; Newton with a finite-difference Jacobian
  // and backtracking finishes.
  const double lo = std::log(1e-5);
  const double hi = std::log(1.0);
  constexpr int kScan = 81;
  std::vector<double> scan_norm(kScan * kScan);
  parallel_for(scan_norm.size(), [&](std::size_t k) {
    const double lg = lo + (hi - lo) * static_cast<double>(k / kScan) / (kScan - 1);
    const double lg1 = lo + (hi - lo) * static_cast<double>(k % kScan) / (kScan - 1);
    scan_norm[k] = norm(residual(lg, lg1));
  });
  const auto best = static_cast<std::size_t>(
      std::min_element(scan_norm.begin(), scan_norm.end()) - scan_norm.begin());
  double x0 = lo + (hi - lo) * static_cast<double>(best / kScan) / (kScan - 1);
  double x1 = lo + (hi - lo) * static_cast<double>(best % kScan) / (kScan - 1);

  auto r = residual(x0, x1);
  int iterations = 0;
  constexpr int kMaxIterations = 100;
  constexpr double kTolerance = 1e-10;
  while (norm(r) > kTolerance && iterations < kMaxIterations) {
    ++iterations;
    constexpr double h = 1e-7;
    const auto r0p = residual(x0 + h, x1);
    const auto r1p = residual(x0, x1 + h);
    const double j00 = (r0p[0] - r[0]) / h, j10 = (r0p[1] - r[1]) / h;
    const double j01 = (r1p[0] - r[0]) / h, j11 = (r1p[1] - r[1]) / h;
    const double det = j00 * j11 - j01 * j10;
    if (!std::isfinite(det) || std::abs(det) < 1e-300) break;
    const double d0 = -(j11 * r[0] - j01 * r[1]) / det;
    const double d1 = -(-j10 * r[0] + j00 * r[1]) / det;
    double step = 1.0;
    bool improved = false;
    for (int k = 0; k < 40; ++k, step *= 0.5) {
      const auto trial = residual(x0 + step * d0, x1 + step * d1);
      if (norm(trial) < norm(r)) {
        x0 += step * d0;
        x1 += step * d1;
        r = trial;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (!(std::abs(r[0]) < 1e-6 && std::abs(r[1]) < 1e-6)) {
    throw NumericalError(fmt::format(
        "coupling calibration did not converge: splitting residual {:.3e}, narrow-width residual "
        "{:.3e} after {} iterations (|G cos t| = {:.6g} eV, |g1 sin t| = {:.6g} eV)",
        r[0], r[1], iterations, std::exp(x0), std::exp(x1)));
  }

  CalibrationReport report;
  report.couplings = couplings_at(x0, x1);
  report.G_unprojected = Energy{std::exp(x0) / cos_t};
  report.g1_unprojected = Energy{std::exp(x1) / sin_t};
  const auto geometry = s.emitter.orientation == Orientation::radial
                            ? DipoleGeometry::longitudinal
                            : DipoleGeometry::transverse;
  report.G_estimate = Energy{std::abs(
      dipole_dipole_coupling(base.plasmon.mu_eff, s.emitter.mu,
                             s.particle.max_extent() + s.emitter.distance, s.environment.eps_b,
                             geometry)
          .value)};
  report.g1_estimate = vacuum_coupling(base.plasmon.mu_eff, base.omega_e,
                                       s.cavity.volume_um3 * 1e9, s.environment.eps_b);
  report.pair = pair_at(x0, x1);
  report.residual_splitting = r[0];
  report.residual_narrow = r[1];
  report.iterations = iterations;
  return report;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  require_positive(lo, "grid start");
  if (!(hi > lo) || points < 2) throw DomainError("log grid needs lo < hi and >= 2 points");
  std::vector<double> out(static_cast<std::size_t>(points));
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (points - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (!(hi > lo) || points < 2) throw DomainError("grid needs lo < hi and >= 2 points");
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  }
  out.back() = hi;
  return out;
}

std::vector<double> stepped_grid(double lo, double hi, double step) {
  require_positive(step, "sweep step");
  if (!(hi >= lo)) throw DomainError("sweep stop must not be below its start");
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-6));
  std::vector<double> out;
  for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

namespace {

std::vector<double> pump_grid(const Scenario& s, double default_half_width, int default_points,
                              std::optional<int> grid) {
  const auto& sw = s.sweep;
  const double lo = sw.pump_start ? sw.pump_start->value : -default_half_width;
  const double hi = sw.pump_stop ? sw.pump_stop->value : default_half_width;
  const int n = grid.value_or(sw.pump_points.value_or(default_points));
  return linear_grid(lo, hi, n);
}

std::vector<double> shifted(const std::vector<double>& v, double by) {
  std::vector<double> out(v);
  for (auto& x : out) x += by;
  return out;
}

}  // namespace

Fig1cResult run_fig1c(const Scenario& scenario, std::optional<int> grid) {
  if (scenario.emitter.present || !scenario.cavity.present) {
    throw DomainError("fig1c needs a cavity and no emitter");
  }
  Fig1cResult out;
  out.system = resolve(scenario);
  out.detunings = pump_grid(scenario, 10e-3, 2001, grid);
  const auto h = cavity_hamiltonian(out.system);
  const auto h0 = bare_hamiltonian(out.system);
  out.cavity = emission_spectrum(h, standard_channels(h, ChannelSet::mnp_only),
                                 ModeLabel::plasmon_dipole, out.detunings);
  out.bare = emission_spectrum(h0, standard_channels(h0, ChannelSet::mnp_only),
                               ModeLabel::plasmon_dipole, out.detunings);
  return out;
}

Fig2Result run_fig2(const Scenario& scenario, std::optional<int> grid) {
  if (!scenario.emitter.present || !scenario.cavity.present) {
    throw DomainError("fig2 needs a cavity and an emitter");
  }
  Fig2Result out;
  out.system = resolve(scenario);
  const auto& sys = out.system;
  out.detunings = pump_grid(scenario, 10e-3, 2001, grid);
  const double ce = scenario.cavity.detuning_ce.value;
  const auto drive_axis = shifted(out.detunings, ce);

  const auto h = cavity_hamiltonian(sys);
  const auto h0 = bare_hamiltonian(sys);
  const auto channels = standard_channels(h, ChannelSet::with_emitter);
  const auto channels0 = standard_channels(h0, ChannelSet::with_emitter);
  out.cavity = emission_spectrum(h, channels, ModeLabel::emitter, drive_axis);
  out.bare = emission_spectrum(h0, channels0, ModeLabel::emitter, drive_axis);
  out.cavity.detunings = out.detunings;
  out.bare.detunings = out.detunings;

  out.delta0 = fano_detuning(sys.couplings.J, sys.couplings.g1, sys.couplings.G);
  const DriveSpec at_delta0{ModeLabel::emitter, 1.0, out.delta0 + Energy{ce}};
  const auto s = steady_state(h, channels, at_delta0);
  const auto s0 = steady_state(h0, channels0, at_delta0);
  out.yield_at_delta0 = quantum_yield(s);
  out.bare_yield_at_delta0 = quantum_yield(s0);
  out.power_enhancement_at_delta0 = total_radiative(s) / total_radiative(s0);

  const auto yield = out.cavity.yield();
  const auto it = std::max_element(yield.begin(), yield.end());
  out.yield_argmax = out.detunings[static_cast<std::size_t>(it - yield.begin())];
  return out;
}

EnhancementCell enhancement_cell(const Scenario& base, double d_nm, double q_factor) {
  require_positive(d_nm, "distance");
  require_positive(q_factor, "q_factor");
  Scenario s = base;
  s.emitter.distance = Length{d_nm};
  s.cavity.q_factor = q_factor;
  s.couplings.G_mev.reset();
  s.couplings.gamma_m_uev.reset();
  if (s.couplings.mode == CouplingSource::calibrated) {
    s.couplings.mode = CouplingSource::first_principles;
  }
  const auto sys = resolve(s);
  const auto h = cavity_hamiltonian(sys);
  const auto h0 = bare_hamiltonian(sys);
  const auto channels = standard_channels(h, ChannelSet::with_emitter);
  const auto channels0 = standard_channels(h0, ChannelSet::with_emitter);

  EnhancementCell cell;
  cell.d_nm = d_nm;
  cell.q_factor = q_factor;
  cell.delta0 = fano_detuning(sys.couplings.J, sys.couplings.g1, sys.couplings.G).value;
  const DriveSpec drive{ModeLabel::emitter, 1.0,
                        Energy{cell.delta0} + s.cavity.detuning_ce};
  const auto st = steady_state(h, channels, drive);
  const auto st0 = steady_state(h0, channels0, drive);
  cell.yield_cavity = quantum_yield(st);
  cell.yield_bare = quantum_yield(st0);
  cell.yield_enhancement = cell.yield_cavity / cell.yield_bare;
  cell.power_enhancement = total_radiative(st) / total_radiative(st0);
  return cell;
}

EnhancementMap enhancement_map(const Scenario& base, const std::vector<double>& d_nm,
                               const std::vector<double>& q_factors) {
  const auto check = [](const std::vector<double>& g, const char* what) {
    if (g.empty()) throw DomainError(fmt::format("{} grid is empty", what));
    for (std::size_t i = 0; i < g.size(); ++i) {
      require_positive(g[i], what);
      if (i > 0 && !(g[i] > g[i - 1])) {
        throw DomainError(fmt::format("{} grid must be strictly increasing", what));
      }
    }
  };
  check(d_nm, "distance");
  check(q_factors, "Q");
  EnhancementMap map;
  map.d_nm = d_nm;
  map.q_factors = q_factors;
  map.cells.resize(d_nm.size() * q_factors.size());
  parallel_for(map.cells.size(), [&](std::size_t k) {
    map.cells[k] = enhancement_cell(base, d_nm[k / q_factors.size()], q_factors[k % q_factors.size()]);
  });
  return map;
}

std::string_view to_string(Objective objective) {
  return objective == Objective::yield ? "yield" : "power";
}

OptimalQ optimal_q(const Scenario& base, double d_nm, Objective objective, double q_min,
                   double q_max, int coarse_points) {
  if (coarse_points < 3) throw DomainError("optimal_q needs at least 3 coarse points");
  const auto value_at = [&](double q) {
    const auto cell = enhancement_cell(base, d_nm, q);
    return objective == Objective::yield ? cell.yield_enhancement : cell.power_enhancement;
  };
  OptimalQ out;
  out.objective = objective;
  out.d_nm = d_nm;
  out.coarse_q = log_grid(q_min, q_max, coarse_points);
  out.coarse_values.resize(out.coarse_q.size());
  parallel_for(out.coarse_q.size(),
               [&](std::size_t i) { out.coarse_values[i] = value_at(out.coarse_q[i]); });
  const auto best = static_cast<std::size_t>(
      std::max_element(out.coarse_values.begin(), out.coarse_values.end()) -
      out.coarse_values.begin());
  if (best == 0 || best + 1 == out.coarse_q.size()) {
    out.interior = false;
    out.q_opt = out.coarse_q[best];
    out.value = out.coarse_values[best];
    return out;
  }
  out.interior = true;
  double a = std::log(out.coarse_q[best - 1]);
  double b = std::log(out.coarse_q[best + 1]);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = value_at(std::exp(c));
  double fd = value_at(std::exp(d));
  const double tolerance = std::log1p(1e-3);
  while (b - a > tolerance) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = value_at(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = value_at(std::exp(d));
    }
  }
  const double q = std::exp(0.5 * (a + b));
  out.q_opt = q;
  out.value = value_at(q);
  if (out.value < out.coarse_values[best]) {
    out.q_opt = out.coarse_q[best];
    out.value = out.coarse_values[best];
  }
  return out;
}

namespace {

std::vector<double> two_strongest_peaks(const std::vector<double>& x, const std::vector<double>& y) {
  auto peaks = local_maxima(y);
  std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });
  if (peaks.size() > 2) peaks.resize(2);
  std::vector<double> out;
  for (auto i : peaks) out.push_back(x[i]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Fig3Result run_fig3(const Scenario& scenario, std::optional<int> grid) {
  if (!scenario.emitter.present || !scenario.cavity.present) {
    throw DomainError("fig3 needs a cavity and an emitter");
  }
  Fig3Result out;
  out.system = resolve(scenario);
  const auto& sys = out.system;

  std::vector<double> qs = scenario.sweep.trace_q_factors;
  if (qs.empty()) qs = {1e3, 1e4, 1e5};
  std::vector<EffectiveHamiltonian> hs;
  for (double q : qs) {
    require_positive(q, "trace Q factor");
    ResolvedSystem variant = sys;
    variant.gamma_c = sys.omega_c / q;
    hs.push_back(cavity_hamiltonian(variant));
  }
  hs.push_back(bare_hamiltonian(sys));

  const auto& sw = scenario.sweep;
  const int points = sw.t_points.value_or(4096);
  if (sw.t_stop_fs) {
    out.times_fs = linear_grid(0.0, *sw.t_stop_fs, points);
  } else {
    const auto slowest = std::max_element(qs.begin(), qs.end()) - qs.begin();
    out.times_fs = default_time_grid(hs[static_cast<std::size_t>(slowest)], points);
  }

  Eigen::VectorXcd initial;
  out.traces.resize(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const auto& h = hs[i];
    initial = Eigen::VectorXcd::Zero(h.size());
    initial(h.require_index(ModeLabel::emitter)) = 1.0;
    const auto trace = evolve(h, initial, out.times_fs);
    auto& tc = out.traces[i];
    if (i < qs.size()) {
      tc.q_factor = qs[i];
      tc.label = fmt::format("q_{:g}", qs[i]);
    } else {
      tc.label = "no_cavity";
    }
    tc.population = trace.population(ModeLabel::emitter);
    tc.skip_fs = inverse_ev_to_fs(10.0 / fastest_decay(h));
    tc.maxima = count_oscillation_maxima(trace, ModeLabel::emitter, 1e-3, tc.skip_fs);
  }

  out.detunings = pump_grid(scenario, 15e-3, 3001, grid);
  const auto h = cavity_hamiltonian(sys);
  const auto h0 = bare_hamiltonian(sys);
  out.cavity = emission_spectrum(h, standard_channels(h, ChannelSet::with_emitter),
                                 ModeLabel::emitter, out.detunings);
  out.bare = emission_spectrum(h0, standard_channels(h0, ChannelSet::with_emitter),
                               ModeLabel::emitter, out.detunings);
  out.peaks = two_strongest_peaks(out.detunings, out.cavity.radiative);
  out.doublet_separation = out.peaks.size() == 2 ? out.peaks[1] - out.peaks[0] : 0.0;
  return out;
}

EigenBranchSet eigen_sweep(const ResolvedSystem& system, std::span<const double> detunings_ec) {
  return eigen_branches(
      [&](double ec) { return cavity_hamiltonian(system, Energy{-ec}); }, detunings_ec);
}

Fig4Result run_fig4(const Scenario& scenario, std::optional<int> grid) {
  if (!scenario.emitter.present || !scenario.cavity.present) {
    throw DomainError("fig4 needs a cavity and an emitter");
  }
  Fig4Result out;
  out.system = resolve(scenario);
  const auto& sys = out.system;
  const auto& sw = scenario.sweep;
  const double lo = sw.ec_start ? sw.ec_start->value : -10e-3;
  const double hi = sw.ec_stop ? sw.ec_stop->value : 10e-3;

  out.spectra_ec = stepped_grid(lo, hi, sw.spectra_ec_step ? sw.spectra_ec_step->value : 2e-3);
  out.pump_detunings = pump_grid(scenario, 15e-3, 3001, grid);
  out.spectra.resize(out.spectra_ec.size());
  for (std::size_t i = 0; i < out.spectra_ec.size(); ++i) {
    const Energy ce{-out.spectra_ec[i]};
    const auto h = cavity_hamiltonian(sys, ce);
    out.spectra[i] = emission_spectrum(h, standard_channels(h, ChannelSet::with_emitter),
                                       ModeLabel::emitter, shifted(out.pump_detunings, ce.value));
    out.spectra[i].detunings = out.pump_detunings;
  }

  const auto sweep = stepped_grid(lo, hi, sw.ec_step ? sw.ec_step->value : 0.1e-3);
  out.branches = eigen_sweep(sys, sweep);
  out.summary = summarize_strong_branches(out.branches);
  out.at_zero = strong_pair(cavity_hamiltonian(sys, Energy{0.0}));
  return out;
}

}  // namespace plasmon
