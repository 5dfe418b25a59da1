#include "plasmon_cli/cli.hpp"

#include <charconv>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "plasmon/config.hpp"
#include "plasmon/errors.hpp"
#include "plasmon/experiments.hpp"
#include "plasmon/parallel.hpp"
#include "plasmon/result_table.hpp"

namespace plasmon::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command;
  std::string config;
  std::string positional_config;
  std::string out_dir = "out";
  std::optional<int> grid;
  std::string format = "csv";
  std::string sweep;
  bool seedless = false;
  std::optional<int> threads;
  std::optional<double> distance_nm;
  std::string objective = "yield";
  std::optional<double> at_ev;
};

struct SweepRange {
  double start;
  double stop;
  double step;
};

const std::map<std::string, std::string, std::less<>> kDefaultConfig = {
    {"fig1c", "fig1c"}, {"fig2", "fig2"},   {"fig3", "fig3"},   {"fig4", "fig4"},
    {"spectrum", "fig2"}, {"yield", "fig2"}, {"evolve", "fig3"}, {"eigen", "fig4"},
    {"map", "fig2"},     {"optq", "fig2"},  {"validate", ""}};

SweepRange parse_sweep(std::string_view text) {
  std::array<double, 3> v{};
  std::size_t field = 0;
  std::string_view rest = text;
  while (true) {
    const auto colon = rest.find(':');
    const auto item = rest.substr(0, colon);
    if (field >= 3) break;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v[field]);
    if (ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(v[field])) {
      throw UsageError(fmt::format("--sweep expects start:stop:step, got '{}'", text));
    }
    ++field;
    if (colon == std::string_view::npos) break;
    rest = rest.substr(colon + 1);
  }
  if (field != 3) throw UsageError(fmt::format("--sweep expects start:stop:step, got '{}'", text));
  if (!(v[2] > 0.0) || !(v[1] >= v[0])) {
    throw UsageError(fmt::format("--sweep needs start <= stop and step > 0, got '{}'", text));
  }
  return {v[0], v[1], v[2]};
}

class Runner {
 public:
  Runner(Options opts, std::ostream& out) : opts_(std::move(opts)), out_(out) {
    format_ = opts_.format == "json" ? OutputFormat::json : OutputFormat::csv;
  }

  void run() {
    struct WorkerReset {
      bool active;
      ~WorkerReset() {
        if (active) set_worker_count(0);
      }
    } reset{opts_.threads.has_value()};
    if (opts_.threads) set_worker_count(static_cast<std::size_t>(*opts_.threads));
    if (opts_.grid && *opts_.grid < 2) throw UsageError("--grid needs at least 2 points");
    const std::string& c = opts_.command;
    if (!opts_.sweep.empty() && c != "spectrum" && c != "eigen") {
      throw UsageError(fmt::format("--sweep is not used by '{}'", c));
    }
    if (c == "validate") return validate();
    if (c == "fig1c") return fig1c();
    if (c == "fig2") return fig2();
    if (c == "fig3") return fig3();
    if (c == "fig4") return fig4();
    if (c == "spectrum") return spectrum();
    if (c == "yield") return yield();
    if (c == "evolve") return evolve();
    if (c == "eigen") return eigen();
    if (c == "map") return map();
    if (c == "optq") return optq();
    throw UsageError(fmt::format("unknown command '{}'", c));
  }

 private:
  Scenario scenario() const {
    std::string source = opts_.config;
    if (source.empty()) source = opts_.positional_config;
    if (source.empty()) source = kDefaultConfig.at(opts_.command);
    if (source.empty()) throw UsageError("validate needs a config name or path");
    return load_scenario(source);
  }

  void emit(const ResultTable& table) {
    const auto path = write_table(table, opts_.out_dir, format_);
    fmt::print(out_, "wrote {} ({} rows)\n", path.string(), table.rows().size());
  }

  static void add_spectrum_meta(ResultTable& t, const ResolvedSystem& s) {
    t.add_meta("frame_reference_ev", s.has_emitter() ? s.omega_e.value : s.omega_c.value);
  }

  void validate() {
    const auto s = scenario();
    const auto sys = resolve(s);
    fmt::print(out_, "scenario: {}\n", sys.scenario.name);
    fmt::print(out_, "coupling_mode: {}\n", to_string(sys.scenario.couplings.mode));
    for (const auto& p : sys.parameters) {
      fmt::print(out_, "{} = {} [{}]\n", p.name, format_number(p.value), to_string(p.provenance));
    }
    for (const auto& w : sys.warnings) fmt::print(out_, "warning: {}\n", w);
    fmt::print(out_, "config ok\n");
  }

  void fig1c() {
    const auto r = run_fig1c(scenario(), opts_.grid);
    ResultTable t("fig1c",
                  {"detuning_ev", "phi_rad_cavity", "phi_rad_bare", "phi_abs_cavity", "phi_abs_bare"});
    t.describe(r.system);
    t.add_meta("axis", "pump - cavity detuning");
    for (std::size_t i = 0; i < r.detunings.size(); ++i) {
      t.add_row({r.detunings[i], r.cavity.radiative[i], r.bare.radiative[i], r.cavity.ohmic[i],
                 r.bare.ohmic[i]});
    }
    emit(t);
  }

  static std::vector<double> channel_column(const SpectrumResult& s, std::string_view id) {
    std::vector<double> out(s.detunings.size(), 0.0);
    for (std::size_t c = 0; c < s.channel_ids.size(); ++c) {
      if (s.channel_ids[c] != id) continue;
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = s.channel_power(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
      }
    }
    return out;
  }

  void fig2() {
    const auto r = run_fig2(scenario(), opts_.grid);
    const auto add_common = [&](ResultTable& t) {
      t.describe(r.system);
      t.add_meta("axis", "pump - cavity detuning");
      t.add_meta("delta0_ev", r.delta0.value);
      t.add_meta("yield_at_delta0", r.yield_at_delta0);
      t.add_meta("bare_yield_at_delta0", r.bare_yield_at_delta0);
      t.add_meta("power_enhancement_at_delta0", r.power_enhancement_at_delta0);
      t.add_meta("yield_argmax_ev", r.yield_argmax);
    };
    const auto yc = r.cavity.yield();
    const auto yb = r.bare.yield();
    const auto abs_c = channel_column(r.cavity, "ohm1");
    const auto abs_b = channel_column(r.bare, "ohm1");
    const double abs_max = *std::max_element(abs_c.begin(), abs_c.end());

    ResultTable y("fig2_yield", {"detuning_ev", "yield_cavity", "yield_bare", "absorption_cavity",
                                 "absorption_cavity_norm", "absorption_bare"});
    add_common(y);
    for (std::size_t i = 0; i < r.detunings.size(); ++i) {
      y.add_row({r.detunings[i], yc[i], yb[i], abs_c[i], abs_max > 0 ? abs_c[i] / abs_max : 0.0,
                 abs_b[i]});
    }
    emit(y);

    const auto rad1 = channel_column(r.cavity, "rad1");
    const auto rad2 = channel_column(r.cavity, "rad2");
    ResultTable p("fig2_power", {"detuning_ev", "rad_power_cavity", "rad_power_bare", "rad1_cavity",
                                 "rad2_cavity"});
    add_common(p);
    for (std::size_t i = 0; i < r.detunings.size(); ++i) {
      p.add_row({r.detunings[i], r.cavity.radiative[i], r.bare.radiative[i], rad1[i], rad2[i]});
    }
    emit(p);
  }

  void fig3() {
    const auto r = run_fig3(scenario(), opts_.grid);
    std::vector<std::string> cols{"t_fs"};
    for (const auto& tc : r.traces) cols.push_back("emitter_population_" + tc.label);
    ResultTable t("fig3_traces", cols);
    t.describe(r.system);
    for (const auto& tc : r.traces) {
      t.add_meta("maxima_" + tc.label, std::to_string(tc.maxima));
      t.add_meta("skip_fs_" + tc.label, tc.skip_fs);
    }
    for (std::size_t k = 0; k < r.times_fs.size(); ++k) {
      std::vector<double> row{r.times_fs[k]};
      for (const auto& tc : r.traces) row.push_back(tc.population[k]);
      t.add_row(std::move(row));
    }
    emit(t);

    ResultTable s("fig3_spectrum", {"detuning_ev", "rad_power_cavity", "rad_power_bare",
                                    "rad1_cavity", "rad2_cavity"});
    s.describe(r.system);
    s.add_meta("axis", "pump - emitter detuning");
    for (std::size_t i = 0; i < r.peaks.size(); ++i) {
      s.add_meta(fmt::format("peak{}_ev", i), r.peaks[i]);
    }
    s.add_meta("doublet_separation_ev", r.doublet_separation);
    const auto rad1 = channel_column(r.cavity, "rad1");
    const auto rad2 = channel_column(r.cavity, "rad2");
    for (std::size_t i = 0; i < r.detunings.size(); ++i) {
      s.add_row({r.detunings[i], r.cavity.radiative[i], r.bare.radiative[i], rad1[i], rad2[i]});
    }
    emit(s);
  }

  static ResultTable branch_table(std::string name, const EigenBranchSet& set) {
    std::vector<std::string> cols{"detuning_ec_ev"};
    for (std::size_t b = 0; b < set.branches.size(); ++b) {
      cols.push_back(fmt::format("branch{}_re_ev", b));
      cols.push_back(fmt::format("branch{}_width_ev", b));
    }
    ResultTable t(std::move(name), cols);
    for (std::size_t k = 0; k < set.sweep.size(); ++k) {
      std::vector<double> row{set.sweep[k]};
      for (const auto& branch : set.branches) {
        row.push_back(branch[k].real());
        row.push_back(-2.0 * branch[k].imag());
      }
      t.add_row(std::move(row));
    }
    return t;
  }

  static void add_branch_meta(ResultTable& t, const EigenBranchSet& set) {
    t.add_meta("ambiguous_steps", std::to_string(set.ambiguous_steps));
    if (set.branches.size() < 2) return;
    const auto s = summarize_strong_branches(set);
    t.add_meta("strong_branches", fmt::format("{},{}", s.first, s.second));
    t.add_meta("min_re_separation_ev", s.min_re_separation);
    t.add_meta("min_width_separation_ev", 2.0 * s.min_im_separation);
    t.add_meta("real_parts_cross", s.real_parts_cross ? "true" : "false");
    t.add_meta("linewidths_cross", s.linewidths_cross ? "true" : "false");
  }

  void fig4() {
    const auto r = run_fig4(scenario(), opts_.grid);
    ResultTable s("fig4_spectra", {"detuning_ec_ev", "detuning_pc_ev", "rad_power"});
    s.describe(r.system);
    for (std::size_t j = 0; j < r.spectra_ec.size(); ++j) {
      for (std::size_t i = 0; i < r.pump_detunings.size(); ++i) {
        s.add_row({r.spectra_ec[j], r.pump_detunings[i], r.spectra[j].radiative[i]});
      }
    }
    emit(s);

    auto b = branch_table("fig4_branches", r.branches);
    b.describe(r.system);
    add_branch_meta(b, r.branches);
    b.add_meta("splitting_at_zero_ev", r.at_zero.splitting);
    b.add_meta("kappa_1_at_zero_ev", r.at_zero.kappa_broad);
    b.add_meta("kappa_2_at_zero_ev", r.at_zero.kappa_narrow);
    b.add_meta("cooperativity_at_zero", r.at_zero.cooperativity());
    emit(b);
  }

  void spectrum() {
    const auto sc = scenario();
    const auto sys = resolve(sc);
    std::vector<double> axis;
    if (!opts_.sweep.empty()) {
      const auto range = parse_sweep(opts_.sweep);
      axis = stepped_grid(range.start, range.stop, range.step);
    } else {
      const double lo = sc.sweep.pump_start ? sc.sweep.pump_start->value : -10e-3;
      const double hi = sc.sweep.pump_stop ? sc.sweep.pump_stop->value : 10e-3;
      axis = linear_grid(lo, hi, opts_.grid.value_or(sc.sweep.pump_points.value_or(2001)));
    }
    const auto set = sys.has_emitter() ? ChannelSet::with_emitter : ChannelSet::mnp_only;
    const auto h0 = bare_hamiltonian(sys);
    const auto bare = emission_spectrum(h0, standard_channels(h0, set), driven_mode(sys), axis);
    std::optional<SpectrumResult> cav;
    if (sys.has_cavity()) {
      const auto h = cavity_hamiltonian(sys);
      cav = emission_spectrum(h, standard_channels(h, set), driven_mode(sys), axis);
    }
    const auto& main = cav ? *cav : bare;
    std::vector<std::string> cols{"detuning_ev", "rad_power", "ohmic_power", "yield"};
    for (const auto& id : main.channel_ids) cols.push_back("power_" + id);
    if (cav) {
      cols.insert(cols.end(), {"rad_power_bare", "ohmic_power_bare", "yield_bare"});
    }
    ResultTable t("spectrum", cols);
    t.describe(sys);
    t.add_meta("axis", "pump detuning from the frame reference");
    t.add_meta("driven_mode", std::string(to_string(driven_mode(sys))));
    add_spectrum_meta(t, sys);
    const auto y = main.yield();
    const auto yb = bare.yield();
    for (std::size_t i = 0; i < axis.size(); ++i) {
      std::vector<double> row{axis[i], main.radiative[i], main.ohmic[i], y[i]};
      for (Eigen::Index c = 0; c < main.channel_power.cols(); ++c) {
        row.push_back(main.channel_power(static_cast<Eigen::Index>(i), c));
      }
      if (cav) row.insert(row.end(), {bare.radiative[i], bare.ohmic[i], yb[i]});
      t.add_row(std::move(row));
    }
    emit(t);
  }

  void yield() {
    const auto sys = resolve(scenario());
    double detuning = 0.0;
    std::string where = "frame reference";
    if (opts_.at_ev) {
      detuning = *opts_.at_ev;
      where = "--at";
    } else if (sys.has_emitter() && sys.has_cavity() && sys.couplings.G.value != 0.0) {
      detuning = fano_detuning(sys.couplings.J, sys.couplings.g1, sys.couplings.G).value +
                 sys.scenario.cavity.detuning_ce.value;
      where = "fano detuning";
    }
    const auto set = sys.has_emitter() ? ChannelSet::with_emitter : ChannelSet::mnp_only;
    const DriveSpec drive{driven_mode(sys), 1.0, Energy{detuning}};
    const auto h0 = bare_hamiltonian(sys);
    const auto s0 = steady_state(h0, standard_channels(h0, set), drive);
    ResultTable t("yield", {"detuning_ev", "yield_cavity", "yield_bare", "yield_enhancement",
                            "power_enhancement"});
    t.describe(sys);
    t.add_meta("evaluated_at", where);
    add_spectrum_meta(t, sys);
    double yc = quantum_yield(s0);
    double pe = 1.0;
    if (sys.has_cavity()) {
      const auto h = cavity_hamiltonian(sys);
      const auto s = steady_state(h, standard_channels(h, set), drive);
      yc = quantum_yield(s);
      pe = s.radiative_power() / s0.radiative_power();
    }
    const double yb = quantum_yield(s0);
    t.add_row({detuning, yc, yb, yc / yb, pe});
    fmt::print(out_, "yield {} (bare {}), enhancement {}, power enhancement {}\n",
               format_number(yc), format_number(yb), format_number(yc / yb), format_number(pe));
    emit(t);
  }

  void evolve() {
    const auto sc = scenario();
    const auto sys = resolve(sc);
    const auto h = sys.has_cavity() ? cavity_hamiltonian(sys) : bare_hamiltonian(sys);
    const int points = opts_.grid.value_or(sc.sweep.t_points.value_or(4096));
    const auto times = sc.sweep.t_stop_fs ? linear_grid(0.0, *sc.sweep.t_stop_fs, points)
                                          : default_time_grid(h, points);
    Eigen::VectorXcd initial = Eigen::VectorXcd::Zero(h.size());
    initial(h.require_index(driven_mode(sys))) = 1.0;
    const auto trace = plasmon::evolve(h, initial, times);
    std::vector<std::string> cols{"t_fs"};
    for (auto m : trace.modes) cols.push_back(fmt::format("population_{}", to_string(m)));
    cols.push_back("population_total");
    ResultTable t("evolve", cols);
    t.describe(sys);
    t.add_meta("initial_mode", std::string(to_string(driven_mode(sys))));
    const auto total = trace.total();
    for (std::size_t k = 0; k < times.size(); ++k) {
      std::vector<double> row{trace.times_fs[k]};
      for (Eigen::Index m = 0; m < trace.populations.cols(); ++m) {
        row.push_back(trace.populations(static_cast<Eigen::Index>(k), m));
      }
      row.push_back(total[k]);
      t.add_row(std::move(row));
    }
    emit(t);
  }

  void eigen() {
    const auto sc = scenario();
    const auto sys = resolve(sc);
    std::vector<double> sweep;
    if (!opts_.sweep.empty()) {
      const auto range = parse_sweep(opts_.sweep);
      sweep = stepped_grid(range.start, range.stop, range.step);
    } else {
      const double lo = sc.sweep.ec_start ? sc.sweep.ec_start->value : -10e-3;
      const double hi = sc.sweep.ec_stop ? sc.sweep.ec_stop->value : 10e-3;
      if (opts_.grid) {
        sweep = linear_grid(lo, hi, *opts_.grid);
      } else {
        sweep = stepped_grid(lo, hi, sc.sweep.ec_step ? sc.sweep.ec_step->value : 0.1e-3);
      }
    }
    const auto set = eigen_sweep(sys, sweep);
    auto t = branch_table("eigen_branches", set);
    t.describe(sys);
    add_branch_meta(t, set);
    emit(t);
  }

  void map() {
    const auto sc = scenario();
    const auto& sw = sc.sweep;
    const int nd = opts_.grid.value_or(sw.d_points.value_or(61));
    const int nq = opts_.grid.value_or(sw.q_points.value_or(61));
    const auto d = log_grid(sw.d_min_nm.value_or(2.0), sw.d_max_nm.value_or(30.0), nd);
    const auto q = log_grid(sw.q_min.value_or(1e2), sw.q_max.value_or(1e7), nq);
    const auto m = enhancement_map(sc, d, q);
    ResultTable t("map", {"d_nm", "q_factor", "delta0_ev", "yield_cavity", "yield_bare",
                          "yield_enhancement", "power_enhancement"});
    t.set_scenario(sc);
    t.add_meta("note", "G and gamma_m recomputed per distance; pump at each cell's fano detuning");
    for (const auto& c : m.cells) {
      t.add_row({c.d_nm, c.q_factor, c.delta0, c.yield_cavity, c.yield_bare, c.yield_enhancement,
                 c.power_enhancement});
    }
    emit(t);
  }

  void optq() {
    const auto sc = scenario();
    Objective objective;
    if (opts_.objective == "yield") {
      objective = Objective::yield;
    } else if (opts_.objective == "power") {
      objective = Objective::power;
    } else {
      throw UsageError(fmt::format("--objective must be yield or power, got '{}'", opts_.objective));
    }
    const double d = opts_.distance_nm.value_or(sc.emitter.distance.value);
    const auto r = optimal_q(sc, d, objective, sc.sweep.q_min.value_or(1e2),
                             sc.sweep.q_max.value_or(1e7), opts_.grid.value_or(61));
    ResultTable t("optq", {"q_factor", "enhancement"});
    t.set_scenario(sc);
    t.add_meta("objective", std::string(to_string(objective)));
    t.add_meta("d_nm", d);
    t.add_meta("q_opt", r.q_opt);
    t.add_meta("value", r.value);
    t.add_meta("interior", r.interior ? "true" : "false");
    for (std::size_t i = 0; i < r.coarse_q.size(); ++i) t.add_row({r.coarse_q[i], r.coarse_values[i]});
    fmt::print(out_, "Q_opt {} ({} enhancement {}){}\n", format_number(r.q_opt),
               to_string(objective), format_number(r.value),
               r.interior ? "" : " at the boundary of the search interval");
    emit(t);
  }

  Options opts_;
  std::ostream& out_;
  OutputFormat format_;
};

void error_line(std::ostream& err, std::string_view code, std::string_view message) {
  fmt::print(err, "ERROR[{}]: {}\n", code, message);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cavity-engineered plasmonic nanoparticle simulator", "plasmon-sim"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  Options opts;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"fig1c", "Particle in a cavity: radiation and absorption vs pump detuning"},
      {"fig2", "Quantum yield and radiated power with and without the cavity"},
      {"fig3", "Emitter population dynamics and emission doublet"},
      {"fig4", "Emission spectra and eigen-branches vs emitter-cavity detuning"},
      {"spectrum", "Steady-state channel powers over a pump sweep"},
      {"yield", "Quantum yield at one pump detuning (default: the fano detuning)"},
      {"evolve", "Population dynamics from a single excitation"},
      {"eigen", "Eigenvalue branches vs emitter-cavity detuning"},
      {"map", "Yield and power enhancement over distance and Q"},
      {"optq", "Q factor that maximizes the enhancement at one distance"},
      {"validate", "Parse a config, print the resolved parameters, run nothing"},
  };
  for (const auto& [name, description] : commands) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("--config", opts.config, "Built-in scenario name or config file path");
    sub->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--grid", opts.grid, "Number of grid points");
    sub->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_flag("--seedless", opts.seedless, "Accepted for compatibility; runs are always deterministic");
    sub->add_option("--threads", opts.threads, "Worker threads (overrides PLASMON_SIM_THREADS)")
        ->check(CLI::PositiveNumber);
    if (name == "spectrum" || name == "eigen") {
      sub->add_option("--sweep", opts.sweep, "start:stop:step in eV");
    }
    if (name == "yield") sub->add_option("--at", opts.at_ev, "Pump detuning in eV");
    if (name == "optq") {
      sub->add_option("--distance", opts.distance_nm, "Emitter distance in nm")
          ->check(CLI::PositiveNumber);
      sub->add_option("--objective", opts.objective, "yield or power")->capture_default_str();
    }
    if (name == "validate") sub->add_option("config_path", opts.positional_config, "Config name or path");
    sub->callback([&opts, name = name] { opts.command = name; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    error_line(err, "usage", e.what());
    return kConfigError;
  }

  try {
    Runner(opts, out).run();
    return kOk;
  } catch (const ConfigError& e) {
    for (const auto& p : e.problems()) error_line(err, "config", p);
    return kConfigError;
  } catch (const UsageError& e) {
    error_line(err, "usage", e.what());
    return kConfigError;
  } catch (const DomainError& e) {
    error_line(err, "domain", e.what());
    return kConfigError;
  } catch (const NumericalError& e) {
    error_line(err, "numerical", e.what());
    return kNumericalError;
  } catch (const std::filesystem::filesystem_error& e) {
    error_line(err, "io", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    error_line(err, "internal", e.what());
    return kNumericalError;
  }
}

}  // namespace plasmon::cli
