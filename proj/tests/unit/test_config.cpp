#include <doctest.h>

#include <fockbarrier/config.hpp>
#include <fockbarrier/errors.hpp>
#include <fockbarrier/presets.hpp>
#include <string>

using namespace fockbarrier;

namespace {

const char* kMinimal = R"({
  // comments are allowed
  "name": "mini",
  "scenario": "fock-kerr",
  "hamiltonian": {"model": "kerr", "epsilon2": 0.5, "K": 0.01, "n_max": 120},
  "states": [{"n": 1, "q_bar": -3, "p_bar": 2.395}],
  "time": {"t_max": 1.0, "dt": 0.05},
  "grid": {"q_min": -20, "q_max": 20, "n_q": 201, "p_min": -20, "p_max": 20, "n_p": 201},
  "twa": {"N": 500, "seed": 3, "calibrate": true},
  "wigner": {"snapshot_times": [0.5], "diagnostics_dt": 0.5}
})";

std::string path_of(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<accepted>";
}

std::string edit(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("parse a minimal config") {
  const auto c = parse_config(kMinimal);
  CHECK(c.name == "mini");
  CHECK(c.scenario == Scenario::FockKerr);
  CHECK(c.hamiltonian.kind == ModelKind::KerrInverted);
  CHECK(c.hamiltonian.n_max == 120);
  REQUIRE(c.states.size() == 1);
  CHECK(c.states[0].p_bar == 2.395);
  CHECK(c.twa.N == 500);
  CHECK(c.twa.calibrate);
  CHECK(c.time.exact_horizon() == 1.0);
  CHECK(c.output_dir.empty());
}

TEST_CASE("errors name the offending field") {
  const std::string m = kMinimal;
  CHECK(path_of(edit(m, "\"n_max\": 120", "\"n_max\": 120, \"colour\": 1")) == "hamiltonian.colour");
  CHECK(path_of(edit(m, "\"dt\": 0.05", "\"dt\": \"small\"")) == "time.dt");
  CHECK(path_of(edit(m, "\"t_max\": 1.0", "\"t_max\": 0")) == "time.t_max");
  CHECK(path_of(edit(m, "\"t_max\": 1.0", "\"t_max\": 1.02")) == "time.t_max");
  CHECK(path_of(edit(m, "\"K\": 0.01", "\"K\": 0")) == "hamiltonian.K");
  CHECK(path_of(edit(m, "\"model\": \"kerr\", \"epsilon2\": 0.5, \"K\": 0.01",
                     "\"model\": \"inverted-oscillator\"")) == "hamiltonian.model");
  CHECK(path_of(edit(m, "\"fock-kerr\"", "\"fig-9\"")) == "scenario");
  CHECK(path_of(edit(m, "\"N\": 500", "\"N\": 5")) == "twa.N");
  CHECK(path_of(edit(m, "[0.5]", "[0.5, 2.0]")) == "wigner.snapshot_times[1]");
  CHECK(path_of(edit(m, "{\"n\": 1, \"q_bar\": -3, \"p_bar\": 2.395}", "{\"n\": 1, \"q_bar\": -3}")) ==
        "states[0].p_bar");
  CHECK(path_of(edit(m, "{\"n\": 1, \"q_bar\": -3, \"p_bar\": 2.395}", "")) == "states");
  CHECK(path_of(edit(m, "\"n_p\": 201", "\"n_p\": 200")) == "grid.n_p");
  CHECK(path_of("{\"scenario\": ") == "config");
  CHECK(path_of("[]") == "<root>");
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("canonical JSON round trip and hashing") {
  auto c = parse_config(kMinimal);
  const auto again = parse_config(config_to_json(c));
  CHECK(config_to_json(again) == config_to_json(c));
  CHECK(config_hash(again) == config_hash(c));
  CHECK(config_hash(c).size() == 64);
  c.output_dir = "elsewhere";
  CHECK(config_hash(c) == config_hash(again));
  c.twa.seed = 4;
  CHECK(config_hash(c) != config_hash(again));
}

TEST_CASE("presets are valid and round-trip") {
  const auto list = list_presets();
  CHECK(list.size() == 8);
  for (const auto& p : list) {
    CAPTURE(p.name);
    const auto c = preset(p.name);
    CHECK(c.output_dir == p.name);
    CHECK(config_to_json(parse_config(config_to_json(c))) == config_to_json(c));
  }
  CHECK_THROWS_AS(preset("nope"), ConfigError);
  const auto k = preset("fock-kerr");
  REQUIRE(k.states.size() == 4);
  CHECK(k.states[2].p_bar == 2.285);
  CHECK(k.hamiltonian.kerr_K == 0.01);
  CHECK(preset("coherent-io").time.t_max == 4.0);
}
