#include "plasmon/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "plasmon/errors.hpp"

namespace plasmon {

namespace {

enum class Kind { number, integer, boolean, word, number_list };

struct KeyDef {
  std::string_view key;
  Kind kind;
};

struct SectionDef {
  std::string_view name;
  bool required;
  std::vector<KeyDef> keys;
};

const std::vector<SectionDef>& schema() {
  using enum Kind;
  static const std::vector<SectionDef> sections = {
      {"run", true, {{"name", word}}},
      {"metal", true, {{"eps_inf", number}, {"omega_p_ev", number}, {"gamma_o_ev", number}}},
      {"environment", true, {{"eps_b", number}}},
      {"particle",
       true,
       {{"shape", word}, {"radius_nm", number}, {"a1_nm", number}, {"a2_nm", number}, {"a3_nm", number}}},
      {"emitter",
       true,
       {{"present", boolean},
        {"mu_e_nm", number},
        {"distance_nm", number},
        {"orientation", word},
        {"detuning_1e_ev", number},
        {"theta_deg", number},
        {"cavity_angle_deg", number}}},
      {"cavity",
       true,
       {{"present", boolean},
        {"q_factor", number},
        {"vc_um3", number},
        {"detuning_ce_ev", number},
        {"detuning_1c_ev", number}}},
      {"couplings",
       true,
       {{"mode", word},
        {"g1_mev", number},
        {"G_mev", number},
        {"J_uev", number},
        {"gamma_1r_mev", number},
        {"gamma_s_uev", number},
        {"gamma_m_uev", number},
        {"g1_sign", number},
        {"G_sign", number},
        {"J_sign", number},
        {"quench_ref_distance_nm", number},
        {"quench_ref_rate_uev", number},
        {"target_splitting_mev", number},
        {"target_narrow_width_mev", number}}},
      {"sweep",
       false,
       {{"pump_start_ev", number},
        {"pump_stop_ev", number},
        {"pump_points", integer},
        {"ec_start_ev", number},
        {"ec_stop_ev", number},
        {"ec_step_ev", number},
        {"spectra_ec_step_ev", number},
        {"d_min_nm", number},
        {"d_max_nm", number},
        {"d_points", integer},
        {"q_min", number},
        {"q_max", number},
        {"q_points", integer},
        {"t_stop_fs", number},
        {"t_points", integer},
        {"trace_q_factors", number_list}}},
  };
  return sections;
}

const SectionDef* find_section(std::string_view name) {
  for (const auto& s : schema()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const KeyDef* find_key(const SectionDef& section, std::string_view key) {
  for (const auto& k : section.keys) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string suggestion(std::string_view word, const std::vector<std::string_view>& candidates) {
  std::string_view best;
  std::size_t best_distance = std::string_view::npos;
  for (auto c : candidates) {
    const auto d = edit_distance(word, c);
    if (d < best_distance) {
      best_distance = d;
      best = c;
    }
  }
  const std::size_t limit = std::max<std::size_t>(2, word.size() / 3);
  if (best.empty() || best_distance > limit) return {};
  return fmt::format("; did you mean '{}'?", best);
}

struct Entry {
  std::string value;
  int line = 0;
};

using Table = std::map<std::string, std::map<std::string, Entry, std::less<>>, std::less<>>;

struct Lexed {
  Table table;
  std::map<std::string, int, std::less<>> section_lines;
};

Lexed lex(std::string_view text, std::vector<std::string>& problems) {
  Lexed out;
  const SectionDef* current = nullptr;
  bool in_unknown_section = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        problems.push_back(fmt::format("line {}: malformed section header '{}'", line_no, line));
        current = nullptr;
        in_unknown_section = true;
        continue;
      }
      const auto name = trim(line.substr(1, line.size() - 2));
      current = find_section(name);
      in_unknown_section = current == nullptr;
      if (!current) {
        std::vector<std::string_view> names;
        for (const auto& s : schema()) names.push_back(s.name);
        problems.push_back(
            fmt::format("line {}: unknown section [{}]{}", line_no, name, suggestion(name, names)));
        continue;
      }
      if (auto it = out.section_lines.find(name); it != out.section_lines.end()) {
        problems.push_back(fmt::format("line {}: section [{}] repeated (first at line {})", line_no,
                                       name, it->second));
      } else {
        out.section_lines.emplace(std::string(name), line_no);
        out.table[std::string(name)];
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back(fmt::format("line {}: expected 'key = value', got '{}'", line_no, line));
      continue;
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) {
      problems.push_back(fmt::format("line {}: missing key before '='", line_no));
      continue;
    }
    if (in_unknown_section) continue;
    if (!current) {
      problems.push_back(fmt::format("line {}: key '{}' appears before any section", line_no, key));
      continue;
    }
    if (!find_key(*current, key)) {
      std::vector<std::string_view> keys;
      for (const auto& k : current->keys) keys.push_back(k.key);
      std::string hint = suggestion(key, keys);
      if (hint.empty()) {
        for (const auto& s : schema()) {
          if (&s != current && find_key(s, key)) {
            hint = fmt::format("; it belongs in [{}]", s.name);
            break;
          }
        }
      }
      problems.push_back(
          fmt::format("line {}: unknown key '{}' in [{}]{}", line_no, key, current->name, hint));
      continue;
    }
    if (value.empty()) {
      problems.push_back(fmt::format("line {}: key '{}' has no value", line_no, key));
      continue;
    }
    auto& section = out.table[std::string(current->name)];
    if (auto it = section.find(key); it != section.end()) {
      problems.push_back(fmt::format("line {}: duplicate key '{}' in [{}] (first at line {})",
                                     line_no, key, current->name, it->second.line));
      continue;
    }
    section.emplace(std::string(key), Entry{std::string(value), line_no});
  }
  return out;
}

std::optional<double> to_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Typed access to the lexed table; conversion problems are collected, never
// thrown, so one pass reports everything.
class Reader {
 public:
  Reader(const Table& table, std::vector<std::string>& problems)
      : table_(table), problems_(problems) {}

  bool has_section(std::string_view section) const { return table_.contains(section); }

  const Entry* entry(std::string_view section, std::string_view key) const {
    const auto s = table_.find(section);
    if (s == table_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  bool has(std::string_view section, std::string_view key) const { return entry(section, key); }

  void require(std::string_view section, std::string_view key) {
    if (has_section(section) && !has(section, key)) {
      problems_.push_back(fmt::format("missing key '{}' in [{}]", key, section));
    }
  }

  void forbid(std::string_view section, std::string_view key, std::string_view why) {
    if (const auto* e = entry(section, key)) {
      problems_.push_back(fmt::format("line {}: key '{}' in [{}] {}", e->line, key, section, why));
    }
  }

  std::optional<double> number(std::string_view section, std::string_view key) {
    const auto* e = entry(section, key);
    if (!e) return std::nullopt;
    auto v = to_number(e->value);
    if (!v) {
      problems_.push_back(fmt::format("line {}: '{}' is not a finite number (key '{}')", e->line,
                                      e->value, key));
    }
    return v;
  }

  std::optional<int> integer(std::string_view section, std::string_view key) {
    const auto* e = entry(section, key);
    if (!e) return std::nullopt;
    int v = 0;
    const auto& s = e->value;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      problems_.push_back(
          fmt::format("line {}: '{}' is not an integer (key '{}')", e->line, s, key));
      return std::nullopt;
    }
    return v;
  }

  std::optional<bool> boolean(std::string_view section, std::string_view key) {
    const auto* e = entry(section, key);
    if (!e) return std::nullopt;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    problems_.push_back(
        fmt::format("line {}: '{}' must be true or false (key '{}')", e->line, e->value, key));
    return std::nullopt;
  }

  std::optional<std::string> word(std::string_view section, std::string_view key) {
    const auto* e = entry(section, key);
    if (!e) return std::nullopt;
    return e->value;
  }

  template <class T>
  std::optional<T> choice(std::string_view section, std::string_view key,
                          std::initializer_list<std::pair<std::string_view, T>> options) {
    const auto* e = entry(section, key);
    if (!e) return std::nullopt;
    std::vector<std::string_view> names;
    for (const auto& [name, value] : options) {
      if (e->value == name) return value;
      names.push_back(name);
    }
    problems_.push_back(fmt::format("line {}: '{}' is not a valid {}{}", e->line, e->value, key,
                                    suggestion(e->value, names)));
    return std::nullopt;
  }

  std::vector<double> number_list(std::string_view section, std::string_view key) {
    std::vector<double> out;
    const auto* e = entry(section, key);
    if (!e) return out;
    std::string_view rest = e->value;
    while (true) {
      const auto comma = rest.find(',');
      const auto item = trim(rest.substr(0, comma));
      auto v = to_number(item);
      if (!v) {
        problems_.push_back(fmt::format("line {}: '{}' is not a finite number (list '{}')",
                                        e->line, item, key));
        return {};
      }
      out.push_back(*v);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return out;
  }

  void check(bool ok, std::string_view section, std::string_view key, std::string_view rule) {
    if (ok) return;
    const auto* e = entry(section, key);
    if (e) {
      problems_.push_back(fmt::format("line {}: {} ({} = {})", e->line, rule, key, e->value));
    } else {
      problems_.push_back(fmt::format("[{}]: {} ({})", section, rule, key));
    }
  }

 private:
  const Table& table_;
  std::vector<std::string>& problems_;
};

template <class T>
void assign(T& target, const std::optional<T>& v) {
  if (v) target = *v;
}

Scenario build(Reader& r) {
  Scenario s;

  r.require("run", "name");
  if (auto name = r.word("run", "name")) s.name = *name;

  for (auto key : {"eps_inf", "omega_p_ev", "gamma_o_ev"}) r.require("metal", key);
  DrudeMetal metal;
  assign(metal.eps_inf, r.number("metal", "eps_inf"));
  if (auto v = r.number("metal", "omega_p_ev")) metal.omega_p = Energy{*v};
  if (auto v = r.number("metal", "gamma_o_ev")) metal.gamma_o = Energy{*v};
  r.check(metal.eps_inf > 0.0, "metal", "eps_inf", "must be positive");
  r.check(metal.omega_p.value > 0.0, "metal", "omega_p_ev", "must be positive");
  r.check(metal.gamma_o.value > 0.0, "metal", "gamma_o_ev", "must be positive");

  r.require("environment", "eps_b");
  assign(s.environment.eps_b, r.number("environment", "eps_b"));
  r.check(s.environment.eps_b > 0.0, "environment", "eps_b", "must be positive");

  r.require("particle", "shape");
  const auto shape = r.choice<int>("particle", "shape", {{"sphere", 0}, {"ellipsoid", 1}});
  if (shape.value_or(0) == 0) {
    if (shape) r.require("particle", "radius_nm");
    Sphere sphere{Length{10.0}};
    if (auto v = r.number("particle", "radius_nm")) sphere.radius = Length{*v};
    r.check(sphere.radius.value > 0.0, "particle", "radius_nm", "must be positive");
    for (auto key : {"a1_nm", "a2_nm", "a3_nm"}) r.forbid("particle", key, "requires shape = ellipsoid");
    s.particle = Nanoparticle{sphere, metal};
  } else {
    Ellipsoid e{Length{1.0}, Length{1.0}, Length{1.0}};
    const std::array<std::pair<const char*, Length*>, 3> axes = {
        {{"a1_nm", &e.a1}, {"a2_nm", &e.a2}, {"a3_nm", &e.a3}}};
    for (auto [key, target] : axes) {
      r.require("particle", key);
      if (auto v = r.number("particle", key)) *target = Length{*v};
      r.check(target->value > 0.0, "particle", key, "must be positive");
    }
    r.forbid("particle", "radius_nm", "requires shape = sphere");
    s.particle = Nanoparticle{e, metal};
  }

  auto& em = s.emitter;
  r.require("emitter", "present");
  assign(em.present, r.boolean("emitter", "present"));
  if (em.present && r.has("emitter", "present")) {
    for (auto key : {"mu_e_nm", "distance_nm", "orientation", "detuning_1e_ev"}) {
      r.require("emitter", key);
    }
  }
  if (auto v = r.number("emitter", "mu_e_nm")) em.mu = DipoleMoment{*v};
  if (auto v = r.number("emitter", "distance_nm")) em.distance = Length{*v};
  assign(em.orientation, r.choice<Orientation>("emitter", "orientation",
                                               {{"radial", Orientation::radial},
                                                {"tangential", Orientation::tangential}}));
  if (auto v = r.number("emitter", "detuning_1e_ev")) em.detuning_1e = Energy{*v};
  em.theta_deg = r.number("emitter", "theta_deg");
  assign(em.cavity_angle_deg, r.number("emitter", "cavity_angle_deg"));
  r.check(em.mu.value > 0.0, "emitter", "mu_e_nm", "must be positive");
  r.check(em.distance.value > 0.0, "emitter", "distance_nm", "must be positive");

  auto& cav = s.cavity;
  r.require("cavity", "present");
  assign(cav.present, r.boolean("cavity", "present"));
  if (cav.present && r.has("cavity", "present")) {
    r.require("cavity", "q_factor");
    r.require("cavity", "vc_um3");
    r.require("cavity", em.present ? "detuning_ce_ev" : "detuning_1c_ev");
  }
  assign(cav.q_factor, r.number("cavity", "q_factor"));
  assign(cav.volume_um3, r.number("cavity", "vc_um3"));
  if (auto v = r.number("cavity", "detuning_ce_ev")) cav.detuning_ce = Energy{*v};
  if (auto v = r.number("cavity", "detuning_1c_ev")) cav.detuning_1c = Energy{*v};
  r.check(cav.q_factor > 0.0, "cavity", "q_factor", "must be positive");
  r.check(cav.volume_um3 > 0.0, "cavity", "vc_um3", "must be positive");

  auto& c = s.couplings;
  r.require("couplings", "mode");
  assign(c.mode, r.choice<CouplingSource>("couplings", "mode",
                                          {{"first_principles", CouplingSource::first_principles},
                                           {"paper_exact", CouplingSource::paper_exact},
                                           {"calibrated", CouplingSource::calibrated}}));
  c.g1_mev = r.number("couplings", "g1_mev");
  c.G_mev = r.number("couplings", "G_mev");
  c.J_uev = r.number("couplings", "J_uev");
  c.gamma_1r_mev = r.number("couplings", "gamma_1r_mev");
  c.gamma_s_uev = r.number("couplings", "gamma_s_uev");
  c.gamma_m_uev = r.number("couplings", "gamma_m_uev");
  for (auto [key, target] : {std::pair{"g1_sign", &c.g1_sign}, std::pair{"G_sign", &c.G_sign},
                             std::pair{"J_sign", &c.J_sign}}) {
    assign(*target, r.number("couplings", key));
    r.check(*target == 1.0 || *target == -1.0, "couplings", key, "must be +1 or -1");
  }
  for (auto [key, target] : {std::pair{"gamma_1r_mev", c.gamma_1r_mev},
                             std::pair{"gamma_s_uev", c.gamma_s_uev},
                             std::pair{"gamma_m_uev", c.gamma_m_uev}}) {
    r.check(!target || *target >= 0.0, "couplings", key, "must not be negative");
  }
  assign(c.quench_ref_distance_nm, r.number("couplings", "quench_ref_distance_nm"));
  assign(c.quench_ref_rate_uev, r.number("couplings", "quench_ref_rate_uev"));
  assign(c.target_splitting_mev, r.number("couplings", "target_splitting_mev"));
  assign(c.target_narrow_width_mev, r.number("couplings", "target_narrow_width_mev"));
  r.check(c.quench_ref_distance_nm > 0.0, "couplings", "quench_ref_distance_nm", "must be positive");
  r.check(c.quench_ref_rate_uev > 0.0, "couplings", "quench_ref_rate_uev", "must be positive");
  r.check(c.target_splitting_mev > 0.0, "couplings", "target_splitting_mev", "must be positive");
  r.check(c.target_narrow_width_mev > 0.0, "couplings", "target_narrow_width_mev",
          "must be positive");
  if (c.mode == CouplingSource::paper_exact) {
    const bool needs_emitter = em.present;
    auto need = [&](bool ok, const char* key) {
      if (!ok) r.check(false, "couplings", key, "required when mode = paper_exact");
    };
    if (cav.present) need(c.g1_mev.has_value(), "g1_mev");
    need(c.gamma_1r_mev.has_value(), "gamma_1r_mev");
    if (needs_emitter) {
      need(c.G_mev.has_value(), "G_mev");
      need(c.gamma_s_uev.has_value(), "gamma_s_uev");
      need(c.gamma_m_uev.has_value(), "gamma_m_uev");
      if (cav.present) need(c.J_uev.has_value(), "J_uev");
    }
  }

  auto& sw = s.sweep;
  if (auto v = r.number("sweep", "pump_start_ev")) sw.pump_start = Energy{*v};
  if (auto v = r.number("sweep", "pump_stop_ev")) sw.pump_stop = Energy{*v};
  sw.pump_points = r.integer("sweep", "pump_points");
  if (auto v = r.number("sweep", "ec_start_ev")) sw.ec_start = Energy{*v};
  if (auto v = r.number("sweep", "ec_stop_ev")) sw.ec_stop = Energy{*v};
  if (auto v = r.number("sweep", "ec_step_ev")) sw.ec_step = Energy{*v};
  if (auto v = r.number("sweep", "spectra_ec_step_ev")) sw.spectra_ec_step = Energy{*v};
  sw.d_min_nm = r.number("sweep", "d_min_nm");
  sw.d_max_nm = r.number("sweep", "d_max_nm");
  sw.d_points = r.integer("sweep", "d_points");
  sw.q_min = r.number("sweep", "q_min");
  sw.q_max = r.number("sweep", "q_max");
  sw.q_points = r.integer("sweep", "q_points");
  sw.t_stop_fs = r.number("sweep", "t_stop_fs");
  sw.t_points = r.integer("sweep", "t_points");
  sw.trace_q_factors = r.number_list("sweep", "trace_q_factors");

  auto ordered = [&](const auto& lo, const auto& hi, const char* lo_key) {
    if (lo && hi) r.check(lo->value < hi->value, "sweep", lo_key, "sweep start must be below stop");
  };
  ordered(sw.pump_start, sw.pump_stop, "pump_start_ev");
  ordered(sw.ec_start, sw.ec_stop, "ec_start_ev");
  if (sw.ec_step) r.check(sw.ec_step->value > 0.0, "sweep", "ec_step_ev", "must be positive");
  if (sw.spectra_ec_step) {
    r.check(sw.spectra_ec_step->value > 0.0, "sweep", "spectra_ec_step_ev", "must be positive");
  }
  for (auto [key, v] : {std::pair{"pump_points", sw.pump_points}, std::pair{"d_points", sw.d_points},
                        std::pair{"q_points", sw.q_points}, std::pair{"t_points", sw.t_points}}) {
    r.check(!v || *v >= 2, "sweep", key, "needs at least 2 points");
  }
  if (sw.d_min_nm) r.check(*sw.d_min_nm > 0.0, "sweep", "d_min_nm", "must be positive");
  if (sw.d_min_nm && sw.d_max_nm) {
    r.check(*sw.d_min_nm < *sw.d_max_nm, "sweep", "d_min_nm", "must be below d_max_nm");
  }
  if (sw.q_min) r.check(*sw.q_min > 0.0, "sweep", "q_min", "must be positive");
  if (sw.q_min && sw.q_max) r.check(*sw.q_min < *sw.q_max, "sweep", "q_min", "must be below q_max");
  if (sw.t_stop_fs) r.check(*sw.t_stop_fs > 0.0, "sweep", "t_stop_fs", "must be positive");
  for (double q : sw.trace_q_factors) {
    r.check(q > 0.0, "sweep", "trace_q_factors", "entries must be positive");
  }
  return s;
}

std::string num(double v) { return fmt::format("{}", v); }

constexpr std::string_view kFig1c = R"(# Bare R = 10 nm gold sphere in a resonant cavity, pumped from free space.
[run]
name = fig1c

[metal]
eps_inf = 1
omega_p_ev = 4
gamma_o_ev = 0.2

[environment]
eps_b = 1

[particle]
shape = sphere
radius_nm = 10

[emitter]
present = false

[cavity]
present = true
q_factor = 1e5
vc_um3 = 1
detuning_1c_ev = 0

[couplings]
mode = paper_exact
gamma_1r_mev = 2.45
g1_mev = -2.9

[sweep]
pump_start_ev = -10e-3
pump_stop_ev = 10e-3
pump_points = 2001
)";

constexpr std::string_view kFig2 = R"(# Emitter 10 nm from an R = 10 nm sphere; cavity, emitter and dipole mode resonant.
[run]
name = fig2

[metal]
eps_inf = 1
omega_p_ev = 4
gamma_o_ev = 0.2

[environment]
eps_b = 1

[particle]
shape = sphere
radius_nm = 10

[emitter]
present = true
mu_e_nm = 1
distance_nm = 10
orientation = radial
detuning_1e_ev = 0

[cavity]
present = true
q_factor = 1e5
vc_um3 = 1
detuning_ce_ev = 0

[couplings]
mode = paper_exact
gamma_1r_mev = 2.45
g1_mev = -2.9
G_mev = -7.2
J_uev = -144
gamma_s_uev = 3
gamma_m_uev = 83

[sweep]
pump_start_ev = -10e-3
pump_stop_ev = 10e-3
pump_points = 2001
d_min_nm = 2
d_max_nm = 30
d_points = 61
q_min = 1e2
q_max = 1e7
q_points = 61
)";

// G and g1 for the ellipsoid scenarios are calibrated against the splitting
// and narrow linewidth, with an assumed emitter loss.
constexpr std::string_view kFig3 = R"(# Prolate gold ellipsoid, tip emitter, theta = 60 deg.
[run]
name = fig3

[metal]
eps_inf = 1
omega_p_ev = 4
gamma_o_ev = 0.2

[environment]
eps_b = 1

[particle]
shape = ellipsoid
a1_nm = 33
a2_nm = 5.5
a3_nm = 5.5

[emitter]
present = true
mu_e_nm = 1
distance_nm = 5
orientation = radial
detuning_1e_ev = 0.6
theta_deg = 60

[cavity]
present = true
q_factor = 1e4
vc_um3 = 0.1
detuning_ce_ev = 1.5e-3

[couplings]
mode = calibrated
J_uev = 0
gamma_m_uev = 200
target_splitting_mev = 3.5
target_narrow_width_mev = 0.11

[sweep]
pump_start_ev = -15e-3
pump_stop_ev = 15e-3
pump_points = 3001
trace_q_factors = 1e3, 1e4, 1e5
)";

constexpr std::string_view kFig4 = R"(# fig3 system with the cavity swept through the emitter.
[run]
name = fig4

[metal]
eps_inf = 1
omega_p_ev = 4
gamma_o_ev = 0.2

[environment]
eps_b = 1

[particle]
shape = ellipsoid
a1_nm = 33
a2_nm = 5.5
a3_nm = 5.5

[emitter]
present = true
mu_e_nm = 1
distance_nm = 5
orientation = radial
detuning_1e_ev = 0.6
theta_deg = 60

[cavity]
present = true
q_factor = 1e4
vc_um3 = 0.1
detuning_ce_ev = 0

[couplings]
mode = calibrated
J_uev = 0
gamma_m_uev = 200
target_splitting_mev = 3.5
target_narrow_width_mev = 0.11

[sweep]
pump_start_ev = -15e-3
pump_stop_ev = 15e-3
pump_points = 3001
ec_start_ev = -10e-3
ec_stop_ev = 10e-3
ec_step_ev = 0.1e-3
spectra_ec_step_ev = 2e-3
)";

}  // namespace

Scenario parse_config_text(std::string_view text) {
  std::vector<std::string> problems;
  auto lexed = lex(text, problems);
  for (const auto& section : schema()) {
    if (section.required && !lexed.table.contains(section.name)) {
      std::string keys;
      for (const auto& k : section.keys) {
        if (!keys.empty()) keys += ", ";
        keys += k.key;
      }
      problems.push_back(fmt::format("missing section [{}] (keys: {})", section.name, keys));
    }
  }
  Reader reader(lexed.table, problems);
  Scenario scenario = build(reader);
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return scenario;
}

Scenario parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({fmt::format("cannot read config file '{}'", path.string())});
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string serialize_config(const Scenario& s) {
  std::string out;
  auto section = [&](std::string_view name) {
    if (!out.empty()) out += '\n';
    out += fmt::format("[{}]\n", name);
  };
  auto kv = [&](std::string_view key, std::string_view value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  auto opt = [&](std::string_view key, const std::optional<double>& v) {
    if (v) kv(key, num(*v));
  };
  auto opt_e = [&](std::string_view key, const std::optional<Energy>& v) {
    if (v) kv(key, num(v->value));
  };
  auto opt_i = [&](std::string_view key, const std::optional<int>& v) {
    if (v) kv(key, std::to_string(*v));
  };
  auto flag = [](bool b) { return b ? "true" : "false"; };

  section("run");
  kv("name", s.name);

  const auto& m = s.particle.metal;
  section("metal");
  kv("eps_inf", num(m.eps_inf));
  kv("omega_p_ev", num(m.omega_p.value));
  kv("gamma_o_ev", num(m.gamma_o.value));

  section("environment");
  kv("eps_b", num(s.environment.eps_b));

  section("particle");
  if (const auto* sphere = std::get_if<Sphere>(&s.particle.shape)) {
    kv("shape", "sphere");
    kv("radius_nm", num(sphere->radius.value));
  } else {
    const auto& e = std::get<Ellipsoid>(s.particle.shape);
    kv("shape", "ellipsoid");
    kv("a1_nm", num(e.a1.value));
    kv("a2_nm", num(e.a2.value));
    kv("a3_nm", num(e.a3.value));
  }

  const auto& em = s.emitter;
  section("emitter");
  kv("present", flag(em.present));
  kv("mu_e_nm", num(em.mu.value));
  kv("distance_nm", num(em.distance.value));
  kv("orientation", to_string(em.orientation));
  kv("detuning_1e_ev", num(em.detuning_1e.value));
  opt("theta_deg", em.theta_deg);
  kv("cavity_angle_deg", num(em.cavity_angle_deg));

  const auto& cav = s.cavity;
  section("cavity");
  kv("present", flag(cav.present));
  kv("q_factor", num(cav.q_factor));
  kv("vc_um3", num(cav.volume_um3));
  kv("detuning_ce_ev", num(cav.detuning_ce.value));
  kv("detuning_1c_ev", num(cav.detuning_1c.value));

  const auto& c = s.couplings;
  section("couplings");
  kv("mode", to_string(c.mode));
  opt("g1_mev", c.g1_mev);
  opt("G_mev", c.G_mev);
  opt("J_uev", c.J_uev);
  opt("gamma_1r_mev", c.gamma_1r_mev);
  opt("gamma_s_uev", c.gamma_s_uev);
  opt("gamma_m_uev", c.gamma_m_uev);
  kv("g1_sign", num(c.g1_sign));
  kv("G_sign", num(c.G_sign));
  kv("J_sign", num(c.J_sign));
  kv("quench_ref_distance_nm", num(c.quench_ref_distance_nm));
  kv("quench_ref_rate_uev", num(c.quench_ref_rate_uev));
  kv("target_splitting_mev", num(c.target_splitting_mev));
  kv("target_narrow_width_mev", num(c.target_narrow_width_mev));

  const auto& sw = s.sweep;
  section("sweep");
  opt_e("pump_start_ev", sw.pump_start);
  opt_e("pump_stop_ev", sw.pump_stop);
  opt_i("pump_points", sw.pump_points);
  opt_e("ec_start_ev", sw.ec_start);
  opt_e("ec_stop_ev", sw.ec_stop);
  opt_e("ec_step_ev", sw.ec_step);
  opt_e("spectra_ec_step_ev", sw.spectra_ec_step);
  opt("d_min_nm", sw.d_min_nm);
  opt("d_max_nm", sw.d_max_nm);
  opt_i("d_points", sw.d_points);
  opt("q_min", sw.q_min);
  opt("q_max", sw.q_max);
  opt_i("q_points", sw.q_points);
  opt("t_stop_fs", sw.t_stop_fs);
  opt_i("t_points", sw.t_points);
  if (!sw.trace_q_factors.empty()) {
    kv("trace_q_factors", fmt::format("{}", fmt::join(sw.trace_q_factors, ", ")));
  }
  return out;
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"fig1c", "fig2", "fig3", "fig4"};
  return names;
}

std::string_view builtin_config(std::string_view name) {
  if (name == "fig1c") return kFig1c;
  if (name == "fig2") return kFig2;
  if (name == "fig3") return kFig3;
  if (name == "fig4") return kFig4;
  std::vector<std::string_view> names(builtin_names().begin(), builtin_names().end());
  throw ConfigError({fmt::format("unknown built-in scenario '{}'{}", name, suggestion(name, names))});
}

Scenario load_scenario(std::string_view name_or_path) {
  const auto& names = builtin_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    return parse_config_text(builtin_config(name_or_path));
  }
  const std::filesystem::path path{std::string(name_or_path)};
  if (!std::filesystem::exists(path)) {
    std::vector<std::string_view> candidates(names.begin(), names.end());
    throw ConfigError({fmt::format("'{}' is neither a built-in scenario nor a readable file{}",
                                   name_or_path, suggestion(name_or_path, candidates))});
  }
  return parse_config(path);
}

Scenario parse_metadata(std::string_view result_text) {
  std::string config;
  bool inside = false;
  bool found = false;
  std::size_t pos = 0;
  while (pos < result_text.size()) {
    auto end = result_text.find('\n', pos);
    if (end == std::string_view::npos) end = result_text.size();
    std::string_view line = result_text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty() || line.front() != '#') {
      if (inside) break;
      continue;
    }
    line.remove_prefix(1);
    if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (line == "config-begin") {
      inside = true;
      continue;
    }
    if (line == "config-end") {
      found = inside;
      break;
    }
    if (inside) {
      config += line;
      config += '\n';
    }
  }
  if (!found) throw ConfigError({"result file has no '# config-begin' ... '# config-end' block"});
  return parse_config_text(config);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diagonal + cost});
      diagonal = above;
    }
  }
  return row[b.size()];
}

}  // namespace plasmon
