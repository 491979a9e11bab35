#include "fockbarrier/presets.hpp"

#include <functional>
#include <numbers>

#include "fockbarrier/errors.hpp"

namespace fockbarrier {

namespace {

// Inverted oscillator: squeezing along p = q fills high Fock levels, pushes
// |psi| outward and thins the Wigner lobes across the diagonal, hence the wide
// box, the large basis and the fine (h = 0.02) grid.
ExperimentConfig io_base(const std::string& name, Scenario scenario) {
  ExperimentConfig c;
  c.name = name;
  c.scenario = scenario;
  c.hamiltonian = HamiltonianSpec::inverted_oscillator(400);
  c.time.t_max = 1.5;
  c.time.dt = 0.05;
  c.grid = GridSpec{-30.0, 30.0, 3001, -30.0, 30.0, 3001, 1e-8};
  c.wigner.dump_stride = 12;
  c.output_dir = name;
  return c;
}

ExperimentConfig kerr_base(const std::string& name, Scenario scenario) {
  ExperimentConfig c;
  c.name = name;
  c.scenario = scenario;
  c.hamiltonian = HamiltonianSpec::kerr(0.5, 0.01, 200);
  c.time.t_max = 3.0;
  c.time.dt = 0.05;
  c.grid = GridSpec{-20.0, 20.0, 801, -20.0, 20.0, 801, 1e-8};
  c.twa.calibrate = true;
  c.output_dir = name;
  return c;
}

std::vector<InitialState> kerr_family() {
  return {{0, -3.0, 2.5}, {1, -3.0, 2.395}, {2, -3.0, 2.285}, {3, -3.0, 2.17}};
}

struct Entry {
  const char* name;
  const char* summary;
  std::function<ExperimentConfig()> make;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {"coherent-io", "coherent state over the inverted oscillator: exact, TWA and analytic, t <= 4",
       [] {
         ExperimentConfig c = io_base("coherent-io", Scenario::CoherentIo);
         c.states = {{0, -3.0, 2.5}};
         c.time.t_max = 4.0;
         c.time.exact_t_max = 1.5;
         c.wigner.snapshot_times = {0.0, 1.5};
         c.wigner.diagnostics_dt = 0.25;
         return c;
       }},
      {"fock-snapshots-io", "D(-1+i)|1> in the inverted oscillator: Wigner grids and TWA ensembles",
       [] {
         ExperimentConfig c = io_base("fock-snapshots-io", Scenario::FockIo);
         c.states = {{1, -std::numbers::sqrt2, std::numbers::sqrt2}};
         c.wigner.snapshot_times = {0.0, 0.5, 1.0, 1.5};
         c.twa.dump_ensembles = true;
         return c;
       }},
      {"fock-io", "displaced Fock n = 0..3 over the inverted oscillator, plateaus and negativity",
       [] {
         ExperimentConfig c = io_base("fock-io", Scenario::FockIo);
         c.states = {{0, -3.0, 2.5}, {1, -3.0, 2.5}, {2, -3.0, 2.5}, {3, -3.0, 2.5}};
         c.wigner.snapshot_times = {0.0, 0.75, 1.5};
         c.wigner.diagnostics_dt = 0.25;
         return c;
       }},
      {"fock-kerr", "displaced Fock n = 0..3 in the Kerr barrier at mean energy -0.79, t <= 3",
       [] {
         ExperimentConfig c = kerr_base("fock-kerr", Scenario::FockKerr);
         c.states = kerr_family();
         c.wigner.snapshot_times = {0.0, 3.0};
         c.wigner.diagnostics_dt = 0.5;
         return c;
       }},
      {"kerr-snapshots", "D(alpha)|1> in the Kerr barrier: Wigner grids and a 10^4-point ensemble",
       [] {
         ExperimentConfig c = kerr_base("kerr-snapshots", Scenario::FockKerr);
         c.states = {{1, -3.0, 2.395}};
         c.twa.N = 10000;
         c.twa.dump_ensembles = true;
         c.wigner.snapshot_times = {0.0, 1.0, 2.0, 3.0};
         return c;
       }},
      {"energy-sweep", "P(q > 0, t = 3) against mean energy for n = 1, 12 targets in [-1.6, -0.05]",
       [] {
         ExperimentConfig c = kerr_base("energy-sweep", Scenario::EnergySweep);
         c.sweep.n = 1;
         return c;
       }},
      {"fock-sweep", "P(q > 0, t = 3), P0(E > 0) and sigma_H against n at mean energy -0.79",
       [] { return kerr_base("fock-sweep", Scenario::FockSweep); }},
      {"forbidden-diagnostics",
       "forbidden-lobe Wigner volume, fringe counts and TWA occupancy, n = 0..3, t <= 3",
       [] {
         ExperimentConfig c = kerr_base("forbidden-diagnostics", Scenario::ForbiddenDiagnostics);
         c.states = kerr_family();
         c.wigner.diagnostics_dt = 0.1;
         c.wigner.snapshot_times = {1.5, 3.0};
         return c;
       }},
  };
  return entries;
}

}  // namespace

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& e : registry()) out.push_back({e.name, e.summary});
  return out;
}

ExperimentConfig preset(const std::string& name) {
  for (const auto& e : registry()) {
    if (name == e.name) {
      ExperimentConfig c = e.make();
      c.validate();
      return c;
    }
  }
  throw ConfigError("preset", "unknown preset \"" + name + "\"");
}

}  // namespace fockbarrier
