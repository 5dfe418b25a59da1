#include "plasmon/dynamics.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "plasmon/errors.hpp"
#include "plasmon/linalg.hpp"
#include "plasmon/parallel.hpp"

namespace plasmon {

namespace {

constexpr double kSingularRcond = 1e-14;

void check_time_grid(std::span<const double> times_fs) {
  if (times_fs.empty()) throw DomainError("time grid is empty");
  if (times_fs.front() < 0.0) throw DomainError("time grid must start at t >= 0");
  for (std::size_t i = 0; i < times_fs.size(); ++i) {
    require_finite(times_fs[i], "time");
    if (i > 0 && !(times_fs[i] > times_fs[i - 1])) {
      throw DomainError("time grid must be strictly increasing");
    }
  }
}

std::vector<ModeLabel> labels_of(const EffectiveHamiltonian& h) {
  std::vector<ModeLabel> out;
  for (const auto& m : h.modes()) out.push_back(m.label);
  return out;
}

Eigen::VectorXcd eigenvalues_of(const EffectiveHamiltonian& h) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h.matrix(), false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed");
  return solver.eigenvalues();
}

}  // namespace

double SteadyState::radiative_power() const {
  double total = 0.0;
  for (const auto& p : powers) {
    if (p.kind == ChannelKind::radiative) total += p.power;
  }
  return total;
}

double SteadyState::ohmic_power() const {
  double total = 0.0;
  for (const auto& p : powers) {
    if (p.kind == ChannelKind::ohmic) total += p.power;
  }
  return total;
}

double SteadyState::channel(std::string_view id) const {
  for (const auto& p : powers) {
    if (p.id == id) return p.power;
  }
  return 0.0;
}

SteadyState steady_state(const EffectiveHamiltonian& h, const std::vector<OutputChannel>& channels,
                         const DriveSpec& drive) {
  require_finite(drive.detuning.value, "pump detuning");
  require_finite(drive.amplitude, "drive amplitude");
  const auto n = h.size();
  const auto driven = h.require_index(drive.mode);

  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(n);
  f(driven) = drive.amplitude;

  const Eigen::MatrixXcd m =
      drive.detuning.value * Eigen::MatrixXcd::Identity(n, n) - h.matrix();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  if (!(lu.rcond() > kSingularRcond)) {
    throw NumericalError("steady-state system is singular (lossless mode on resonance?)");
  }

  SteadyState state;
  state.detuning = drive.detuning;
  state.amplitudes = lu.solve(f);
  for (const auto& channel : channels) {
    double power = 0.0;
    if (channel.combine == Combine::coherent) {
      std::complex<double> field = 0.0;
      for (const auto& term : channel.terms) {
        field += term.amplitude_rate * state.amplitudes(h.require_index(term.mode));
      }
      power = std::norm(field);
    } else {
      for (const auto& term : channel.terms) {
        power += term.amplitude_rate * term.amplitude_rate *
                 std::norm(state.amplitudes(h.require_index(term.mode)));
      }
    }
    state.powers.push_back({channel.id, channel.kind, power});
  }
  return state;
}

PowerBalance power_balance(const EffectiveHamiltonian& h, const SteadyState& state,
                           const DriveSpec& drive) {
  const auto widths = h.widths();
  PowerBalance balance;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    balance.dissipated += widths(i) * std::norm(state.amplitudes(i));
  }
  const auto driven = h.require_index(drive.mode);
  balance.injected = 2.0 * std::imag(std::conj(state.amplitudes(driven)) * drive.amplitude);
  return balance;
}

double quantum_yield(const SteadyState& state) {
  const double rad = state.radiative_power();
  const double total = rad + state.ohmic_power();
  if (!(total > 0.0)) throw NumericalError("quantum yield undefined: all channel powers are zero");
  return rad / total;
}

Energy fano_detuning(Energy J, Energy g1, Energy G) {
  require_finite(J.value, "J");
  require_finite(g1.value, "g1");
  require_finite(G.value, "G");
  if (G.value == 0.0) throw DomainError("Fano detuning needs a non-zero plasmon-emitter coupling");
  return Energy{-J.value * g1.value / G.value};
}

std::vector<double> TimeTrace::population(ModeLabel label) const {
  const auto it = std::find(modes.begin(), modes.end(), label);
  if (it == modes.end()) throw DomainError("mode not present in trace");
  const auto col = static_cast<Eigen::Index>(it - modes.begin());
  std::vector<double> out(static_cast<std::size_t>(populations.rows()));
  for (Eigen::Index r = 0; r < populations.rows(); ++r) out[static_cast<std::size_t>(r)] = populations(r, col);
  return out;
}

std::vector<double> TimeTrace::total() const {
  std::vector<double> out(static_cast<std::size_t>(populations.rows()));
  for (Eigen::Index r = 0; r < populations.rows(); ++r) {
    out[static_cast<std::size_t>(r)] = populations.row(r).sum();
  }
  return out;
}

TimeTrace evolve(const EffectiveHamiltonian& h, const Eigen::VectorXcd& initial,
                 std::span<const double> times_fs) {
  check_time_grid(times_fs);
  if (initial.size() != h.size()) throw DomainError("initial state has wrong dimension");
  if (!initial.allFinite()) throw DomainError("initial state must be finite");

  TimeTrace trace;
  trace.times_fs.assign(times_fs.begin(), times_fs.end());
  trace.modes = labels_of(h);
  trace.populations.resize(static_cast<Eigen::Index>(times_fs.size()), h.size());

  const std::complex<double> minus_i{0.0, -1.0};
  parallel_for(times_fs.size(), [&](std::size_t k) {
    const double t = fs_to_inverse_ev(times_fs[k]);
    const Eigen::VectorXcd v = expm(minus_i * t * h.matrix()) * initial;
    trace.populations.row(static_cast<Eigen::Index>(k)) = v.cwiseAbs2().transpose();
  });
  return trace;
}

TimeTrace evolve_adaptive(const EffectiveHamiltonian& h, const Eigen::VectorXcd& initial,
                          std::span<const double> times_fs, double tolerance) {
  namespace ode = boost::numeric::odeint;
  using State = std::vector<std::complex<double>>;

  check_time_grid(times_fs);
  if (initial.size() != h.size()) throw DomainError("initial state has wrong dimension");

  const Eigen::MatrixXcd minus_i_h = std::complex<double>{0.0, -1.0} * h.matrix();
  const auto n = static_cast<std::size_t>(h.size());
  auto rhs = [&](const State& x, State& dxdt, double /*t*/) {
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        acc += minus_i_h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * x[j];
      }
      dxdt[i] = acc;
    }
  };

  std::vector<double> times(times_fs.size());
  std::transform(times_fs.begin(), times_fs.end(), times.begin(), fs_to_inverse_ev);

  TimeTrace trace;
  trace.times_fs.assign(times_fs.begin(), times_fs.end());
  trace.modes = labels_of(h);
  trace.populations.resize(static_cast<Eigen::Index>(times.size()), h.size());

  State x(initial.data(), initial.data() + initial.size());
  std::size_t row = 0;
  auto observer = [&](const State& s, double /*t*/) {
    for (std::size_t i = 0; i < n; ++i) {
      trace.populations(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(i)) =
          std::norm(s[i]);
    }
    ++row;
  };

  const double scale = std::max(1e-300, h.matrix().cwiseAbs().maxCoeff());
  const double dt0 = 1e-3 / scale;
  auto stepper = ode::make_dense_output(tolerance, tolerance, ode::runge_kutta_dopri5<State>());
  ode::integrate_times(stepper, rhs, x, times.begin(), times.end(), dt0, observer);
  if (row != times.size()) throw NumericalError("adaptive integration stopped early");
  return trace;
}

double slowest_decay(const EffectiveHamiltonian& h) {
  const auto ev = eigenvalues_of(h);
  double slowest = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) slowest = std::min(slowest, -2.0 * ev(i).imag());
  return slowest;
}

double fastest_decay(const EffectiveHamiltonian& h) {
  const auto ev = eigenvalues_of(h);
  double fastest = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) fastest = std::max(fastest, -2.0 * ev(i).imag());
  return fastest;
}

std::vector<double> default_time_grid(const EffectiveHamiltonian& h, int points,
                                      double span_factor) {
  if (points < 2) throw DomainError("time grid needs at least 2 points");
  const double slowest = slowest_decay(h);
  if (!(slowest > 0.0)) throw NumericalError("a lossless eigenmode has no natural time scale");
  const double stop_fs = inverse_ev_to_fs(span_factor / slowest);
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) grid[static_cast<std::size_t>(k)] = stop_fs * k / (points - 1);
  return grid;
}

int count_oscillation_maxima(const TimeTrace& trace, ModeLabel label, double threshold,
                             double skip_fs) {
  const auto p = trace.population(label);
  int count = 0;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (trace.times_fs[i] < skip_fs) continue;
    if (p[i] > p[i - 1] && p[i] > p[i + 1] && p[i] > threshold) ++count;
  }
  return count;
}

std::vector<double> SpectrumResult::yield() const {
  std::vector<double> out(radiative.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double total = radiative[i] + ohmic[i];
    out[i] = total > 0.0 ? radiative[i] / total : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

SpectrumResult emission_spectrum(const EffectiveHamiltonian& h,
                                 const std::vector<OutputChannel>& channels, ModeLabel driven,
                                 std::span<const double> detunings, double amplitude) {
  if (detunings.empty()) throw DomainError("spectrum sweep grid is empty");
  const auto rows = static_cast<Eigen::Index>(detunings.size());

  SpectrumResult result;
  result.detunings.assign(detunings.begin(), detunings.end());
  for (const auto& c : channels) result.channel_ids.push_back(c.id);
  result.channel_power.resize(rows, static_cast<Eigen::Index>(channels.size()));
  result.mode_population.resize(rows, h.size());
  result.radiative.resize(detunings.size());
  result.ohmic.resize(detunings.size());

  parallel_for(detunings.size(), [&](std::size_t k) {
    const auto state = steady_state(h, channels, DriveSpec{driven, amplitude, Energy{detunings[k]}});
    const auto r = static_cast<Eigen::Index>(k);
    for (std::size_t c = 0; c < state.powers.size(); ++c) {
      result.channel_power(r, static_cast<Eigen::Index>(c)) = state.powers[c].power;
    }
    result.mode_population.row(r) = state.amplitudes.cwiseAbs2().transpose();
    result.radiative[k] = state.radiative_power();
    result.ohmic[k] = state.ohmic_power();
  });
  return result;
}

std::vector<std::size_t> local_maxima(std::span<const double> values) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] > values[i + 1]) out.push_back(i);
  }
  return out;
}

std::vector<double> EigenBranchSet::detunings(std::size_t branch) const {
  std::vector<double> out;
  for (const auto& z : branches.at(branch)) out.push_back(z.real());
  return out;
}

std::vector<double> EigenBranchSet::linewidths(std::size_t branch) const {
  std::vector<double> out;
  for (const auto& z : branches.at(branch)) out.push_back(-2.0 * z.imag());
  return out;
}

EigenBranchSet eigen_branches(const std::function<EffectiveHamiltonian(double)>& family,
                              std::span<const double> sweep) {
  if (sweep.empty()) throw DomainError("eigen-branch sweep grid is empty");

  struct Decomposition {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;
  };
  std::vector<Decomposition> points(sweep.size());
  parallel_for(sweep.size(), [&](std::size_t k) {
    const auto h = family(sweep[k]);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h.matrix(), true);
    if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed");
    points[k].values = solver.eigenvalues();
    points[k].vectors = solver.eigenvectors().colwise().normalized();
  });

  const auto n = static_cast<std::size_t>(points.front().values.size());
  for (const auto& p : points) {
    if (static_cast<std::size_t>(p.values.size()) != n) {
      throw DomainError("branch count changes over the sweep");
    }
  }

  EigenBranchSet set;
  set.sweep.assign(sweep.begin(), sweep.end());
  set.branches.assign(n, std::vector<std::complex<double>>(sweep.size()));

  // order[b] = column of the current decomposition that carries branch b.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& v = points.front().values;
    return v(static_cast<Eigen::Index>(a)).real() < v(static_cast<Eigen::Index>(b)).real();
  });

  for (std::size_t k = 0; k < sweep.size(); ++k) {
    if (k > 0) {
      const auto& prev = points[k - 1];
      const auto& cur = points[k];
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::vector<std::size_t> best;
      double best_overlap = -1.0;
      double best_distance = std::numeric_limits<double>::infinity();
      bool tie = false;
      do {
        double overlap = 0.0;
        double distance = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
          const auto pc = static_cast<Eigen::Index>(order[b]);
          const auto cc = static_cast<Eigen::Index>(perm[b]);
          overlap += std::abs(prev.vectors.col(pc).dot(cur.vectors.col(cc)));
          distance += std::abs(prev.values(pc) - cur.values(cc));
        }
        const double tol = 1e-9 * static_cast<double>(n);
        if (overlap > best_overlap + tol) {
          best = perm;
          best_overlap = overlap;
          best_distance = distance;
          tie = false;
        } else if (std::abs(overlap - best_overlap) <= tol) {
          tie = true;
          if (distance < best_distance) {
            best = perm;
            best_overlap = std::max(best_overlap, overlap);
            best_distance = distance;
          }
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (tie) ++set.ambiguous_steps;
      order = best;
    }
    for (std::size_t b = 0; b < n; ++b) {
      set.branches[b][k] = points[k].values(static_cast<Eigen::Index>(order[b]));
    }
  }
  return set;
}

double StrongPair::cooperativity() const {
  return splitting * splitting / (kappa_broad * kappa_narrow);
}

StrongPair strong_pair(const EffectiveHamiltonian& h) {
  if (h.size() < 2) throw DomainError("strong-pair analysis needs at least two modes");
  const auto ev = eigenvalues_of(h);
  std::vector<std::complex<double>> values(ev.data(), ev.data() + ev.size());
  std::sort(values.begin(), values.end(),
            [](auto a, auto b) { return -a.imag() < -b.imag(); });
  auto a = values[0];
  auto b = values[1];
  if (a.real() > b.real()) std::swap(a, b);
  StrongPair pair;
  pair.lower = a;
  pair.upper = b;
  pair.splitting = b.real() - a.real();
  pair.kappa_broad = std::max(-2.0 * a.imag(), -2.0 * b.imag());
  pair.kappa_narrow = std::min(-2.0 * a.imag(), -2.0 * b.imag());
  return pair;
}

BranchPairSummary summarize_strong_branches(const EigenBranchSet& set) {
  if (set.branches.size() < 2) throw DomainError("need at least two branches");
  std::vector<std::pair<double, std::size_t>> mean_width;
  for (std::size_t b = 0; b < set.branches.size(); ++b) {
    const auto w = set.linewidths(b);
    mean_width.emplace_back(std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size()), b);
  }
  std::sort(mean_width.begin(), mean_width.end());

  BranchPairSummary s;
  s.first = std::min(mean_width[0].second, mean_width[1].second);
  s.second = std::max(mean_width[0].second, mean_width[1].second);
  const auto& a = set.branches[s.first];
  const auto& b = set.branches[s.second];
  s.min_re_separation = std::numeric_limits<double>::infinity();
  s.min_im_separation = std::numeric_limits<double>::infinity();
  int re_sign = 0;
  int im_sign = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double dre = b[k].real() - a[k].real();
    const double dim = b[k].imag() - a[k].imag();
    s.min_re_separation = std::min(s.min_re_separation, std::abs(dre));
    s.min_im_separation = std::min(s.min_im_separation, std::abs(dim));
    const int rs = dre > 0 ? 1 : (dre < 0 ? -1 : 0);
    const int is = dim > 0 ? 1 : (dim < 0 ? -1 : 0);
    if (k > 0 && rs != re_sign) s.real_parts_cross = true;
    if (k > 0 && is != im_sign) s.linewidths_cross = true;
    re_sign = rs;
    im_sign = is;
  }
  return s;
}

}  // namespace plasmon
