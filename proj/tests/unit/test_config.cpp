#include <doctest.h>

#include <algorithm>
#include <string>

#include "plasmon/config.hpp"
#include "plasmon/errors.hpp"
#include "plasmon/result_table.hpp"

using namespace plasmon;

namespace {

std::vector<std::string> problems_of(std::string_view text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

bool any_contains(const std::vector<std::string>& problems, std::string_view needle) {
  return std::any_of(problems.begin(), problems.end(),
                     [&](const std::string& p) { return p.find(needle) != std::string::npos; });
}

std::string replace_once(std::string text, std::string_view from, std::string_view to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  text.replace(at, from.size(), to);
  return text;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("fig2 built-in carries the reference values") {
    const auto s = load_scenario("fig2");
    CHECK(s.name == "fig2");
    const auto& sphere = std::get<Sphere>(s.particle.shape);
    CHECK(sphere.radius.value == 10.0);
    CHECK(s.particle.metal.omega_p.value == 4.0);
    CHECK(s.particle.metal.gamma_o.value == 0.2);
    CHECK(s.particle.metal.eps_inf == 1.0);
    CHECK(s.environment.eps_b == 1.0);
    CHECK(s.emitter.distance.value == 10.0);
    CHECK(s.emitter.mu.value == 1.0);
    CHECK(s.emitter.orientation == Orientation::radial);
    CHECK(s.cavity.q_factor == 1e5);
    CHECK(s.cavity.volume_um3 == 1.0);
    CHECK(s.couplings.mode == CouplingSource::paper_exact);
    CHECK(*s.couplings.g1_mev == -2.9);
    CHECK(*s.couplings.G_mev == -7.2);
    CHECK(*s.couplings.J_uev == -144);
    CHECK(*s.couplings.gamma_s_uev == 3);
    CHECK(*s.couplings.gamma_m_uev == 83);
    CHECK(*s.couplings.gamma_1r_mev == 2.45);
  }

  TEST_CASE("every built-in round-trips through text") {
    for (const auto& name : builtin_names()) {
      CAPTURE(name);
      const auto s = load_scenario(name);
      const auto text = serialize_config(s);
      CHECK(parse_config_text(text) == s);
      CHECK(serialize_config(parse_config_text(text)) == text);
    }
  }

  TEST_CASE("metadata block rebuilds the scenario") {
    const auto s = load_scenario("fig3");
    ResultTable t("demo", {"x"});
    t.set_scenario(s);
    t.add_row({1.0});
    CHECK(parse_metadata(t.to_csv()) == s);
    CHECK_THROWS_AS(parse_metadata("x\n1\n"), ConfigError);
  }

  TEST_CASE("empty file lists every required section") {
    const auto p = problems_of("");
    for (const char* section : {"[metal]", "[environment]", "[particle]", "[emitter]", "[cavity]",
                                "[couplings]"}) {
      CAPTURE(section);
      CHECK(any_contains(p, std::string("missing section ") + section));
    }
    CHECK(any_contains(p, "omega_p_ev"));
  }

  TEST_CASE("typo gets a suggestion with its line number") {
    const auto text = replace_once(std::string(builtin_config("fig2")), "q_factor = 1e5", "qfactor = 1e5");
    const auto p = problems_of(text);
    REQUIRE(p.size() == 2);
    CHECK(any_contains(p, "unknown key 'qfactor' in [cavity]; did you mean 'q_factor'?"));
    CHECK(any_contains(p, "missing key 'q_factor' in [cavity]"));
    CHECK(any_contains(p, "line 26:"));
  }

  TEST_CASE("key in the wrong section is pointed at its home") {
    const auto text = replace_once(std::string(builtin_config("fig2")), "eps_b = 1", "eps_b = 1\nq_min = 3");
    CHECK(any_contains(problems_of(text), "it belongs in [sweep]"));
  }

  TEST_CASE("all problems are reported together") {
    auto text = std::string(builtin_config("fig2"));
    text = replace_once(text, "omega_p_ev = 4", "omega_p_ev = 4\nomega_p_ev = 5");
    text = replace_once(text, "radius_nm = 10", "radius_nm = nan");
    text = replace_once(text, "[environment]", "[environment]\n[environment]");
    text = replace_once(text, "q_factor = 1e5", "q_factor = -3");
    text = replace_once(text, "orientation = radial", "orientation = sideways");
    text += "this line is junk\n";
    const auto p = problems_of(text);
    CHECK(p.size() >= 6);
    CHECK(any_contains(p, "duplicate key 'omega_p_ev'"));
    CHECK(any_contains(p, "not a finite number"));
    CHECK(any_contains(p, "section [environment] repeated"));
    CHECK(any_contains(p, "q_factor"));
    CHECK(any_contains(p, "sideways"));
    CHECK(any_contains(p, "expected 'key = value'"));
  }

  TEST_CASE("infinite and huge values are rejected") {
    auto text = replace_once(std::string(builtin_config("fig2")), "vc_um3 = 1", "vc_um3 = inf");
    CHECK(any_contains(problems_of(text), "vc_um3"));
    text = replace_once(std::string(builtin_config("fig2")), "vc_um3 = 1", "vc_um3 = 1e400");
    CHECK(any_contains(problems_of(text), "vc_um3"));
  }

  TEST_CASE("exact mode requires explicit couplings") {
    const auto text = replace_once(std::string(builtin_config("fig2")), "G_mev = -7.2\n", "");
    CHECK(any_contains(problems_of(text), "G_mev"));
  }

  TEST_CASE("ellipsoid needs all three semi-axes") {
    auto text = std::string(builtin_config("fig3"));
    const auto at = text.find("a3_nm");
    REQUIRE(at != std::string::npos);
    text.erase(at, text.find('\n', at) - at + 1);
    CHECK(any_contains(problems_of(text), "missing key 'a3_nm' in [particle]"));
  }

  TEST_CASE("unknown built-in and unreadable file") {
    CHECK_THROWS_AS(builtin_config("fig5"), ConfigError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/file.conf"), ConfigError);
  }

  TEST_CASE("edit distance") {
    CHECK(edit_distance("", "") == 0);
    CHECK(edit_distance("kitten", "sitting") == 3);
    CHECK(edit_distance("qfactor", "q_factor") == 1);
  }

  TEST_CASE("comments and blank lines are ignored") {
    auto text = "# leading\n\n" + std::string(builtin_config("fig2"));
    text = replace_once(text, "[metal]", "  [metal]   # trailing comment");
    CHECK(parse_config_text(text) == load_scenario("fig2"));
  }
}
