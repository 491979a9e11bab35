#include "fockbarrier/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "fockbarrier/analytic.hpp"
#include "fockbarrier/errors.hpp"
#include "fockbarrier/exact_evolution.hpp"
#include "fockbarrier/twa.hpp"

#ifndef FOCKBARRIER_VERSION
#define FOCKBARRIER_VERSION "0.0.0"
#endif

namespace fockbarrier {

std::string library_version() { return FOCKBARRIER_VERSION; }

double solve_im_alpha(const HamiltonianSpec& spec, int n, double q_bar, double target, double lo,
                      double hi, double tol) {
  const double re = q_bar / std::numbers::sqrt2;
  auto f = [&](double im) { return displaced_fock_energy(spec, {re, im}, n) - target; };
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) {
    throw NumericError("no Im alpha in [" + format_number(lo) + ", " + format_number(hi) +
                       "] gives mean energy " + format_number(target) + " for n = " +
                       std::to_string(n));
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

using Clock = std::chrono::steady_clock;

// Rethrows numeric failures with the scenario/state prefixed, keeping the type.
template <typename F>
auto with_context(const std::string& where, F&& body) {
  try {
    return body();
  } catch (const IntegrationError& e) {
    throw IntegrationError(where + ": " + e.what(), e.trajectory());
  } catch (const CalibrationError& e) {
    throw CalibrationError(where + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(where + ": " + e.what());
  } catch (const TruncationError& e) {
    throw TruncationError(where + ": " + e.what(), e.deficit());
  } catch (const DomainError& e) {
    throw DomainError(where + ": " + e.what());
  }
}

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t%.2f", t);
  return buf;
}

std::size_t step_index(double t, double dt) { return static_cast<std::size_t>(std::llround(t / dt)); }

bool is_kerr(const ExperimentConfig& cfg) { return cfg.hamiltonian.kind == ModelKind::KerrInverted; }

std::vector<std::string> state_labels(const std::vector<InitialState>& states) {
  std::map<int, int> count;
  for (const auto& s : states) ++count[s.n];
  std::vector<std::string> out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string base = "n" + std::to_string(states[i].n);
    out.push_back(count[states[i].n] > 1 ? "s" + std::to_string(i) + "_" + base : base);
  }
  return out;
}

class Runner {
 public:
  Runner(const ExperimentConfig& cfg, OutputSink& sink, RunManifest& manifest)
      : cfg_(cfg),
        sink_(sink),
        manifest_(manifest),
        grid_(cfg.grid.make()),
        prop_(make_propagator(cfg.hamiltonian)),
        synth_(cfg.hamiltonian.n_max, grid_.q_axis(), cfg.grid.boundary_tolerance) {}

  const HamiltonianSpec& spec() const { return cfg_.hamiltonian; }
  TruncationPolicy policy() const {
    return cfg_.strict ? TruncationPolicy::Strict : TruncationPolicy::Lenient;
  }

  // Boundary check honouring strict mode; lenient runs record the amplitude.
  WavefunctionGrid synthesize(const FockState& state, TruncationRecord& record) const {
    WavefunctionGrid wf = synth_.unchecked(state);
    const double edge = wf.boundary_amplitude();
    record.max_boundary_amplitude = std::max(record.max_boundary_amplitude, edge);
    if (edge > cfg_.grid.boundary_tolerance) {
      if (cfg_.strict) {
        throw DomainError("wavefunction reaches the q boundary: |psi| = " + format_number(edge));
      }
      record.adequate = false;
    }
    return wf;
  }

  StateResult run_state(const InitialState& st, const std::string& label) {
    StateResult r;
    r.state = st;
    r.label = label;
    r.truncation.label = label;
    r.truncation.n_max = spec().n_max;
    const ComplexAmplitude alpha = st.alpha();
    const FockState psi0 = displaced_fock(alpha, st.n, spec().n_max);
    r.energy_closed_form = displaced_fock_energy(spec(), alpha, st.n);
    r.energy_matrix = mean_energy(spec(), psi0);
    try {
      r.sigma_h = energy_variance(spec(), psi0);
    } catch (const TruncationError& e) {
      if (cfg_.strict) throw;
      r.sigma_h = std::numeric_limits<double>::quiet_NaN();
      manifest_.notes.push_back(label + ": energy variance unavailable: " + e.what());
    }

    const double dt = cfg_.time.dt;
    const std::vector<double> exact_times = time_grid(cfg_.time.exact_horizon(), dt);
    std::set<std::size_t> field_steps{0};
    std::set<std::size_t> dump_steps;
    for (double t : cfg_.wigner.snapshot_times) {
      field_steps.insert(step_index(t, dt));
      dump_steps.insert(step_index(t, dt));
    }
    if (cfg_.wigner.diagnostics_dt > 0.0) {
      const std::size_t stride = step_index(cfg_.wigner.diagnostics_dt, dt);
      for (std::size_t k = 0; k < exact_times.size(); k += stride) field_steps.insert(k);
    }

    r.exact.method = SeriesMethod::Exact;
    bool trusted = true;
    for (std::size_t k = 0; k < exact_times.size(); ++k) {
      const double t = exact_times[k];
      const FockState psi = evolve(prop_, psi0, t, policy());
      const double tail = tail_mass(psi);
      r.truncation.max_tail_mass = std::max(r.truncation.max_tail_mass, tail);
      if (tail > kEvolutionTailLimit) {
        trusted = false;
        r.truncation.adequate = false;
      }
      if (trusted) r.truncation.trusted_until = t;
      const WavefunctionGrid wf = synthesize(psi, r.truncation);
      const double p_marginal = transmission_marginal(wf);
      r.exact.push(t, p_marginal);
      if (!field_steps.count(k)) continue;

      const WignerField field = wigner_from_wavefunction(wf, grid_.p_axis(), t, label);
      DiagnosticsRow d;
      d.t = t;
      d.negativity = negativity(field).delta;
      d.p_wigner = transmission_wigner(field);
      d.p_marginal = p_marginal;
      d.wigner_norm = integrate_2d(field.grid);
      const std::vector<double> marg = marginal_q(field);
      const std::vector<double> dens = wf.density();
      for (std::size_t i = 0; i < marg.size(); ++i) {
        d.marginal_error = std::max(d.marginal_error, std::abs(marg[i] - dens[i]));
      }
      if (is_kerr(cfg_)) {
        d.forbidden_volume = forbidden_volume(field, spec());
        d.fringes = fringe_count(field, spec(), cfg_.wigner.fringe_threshold).n_sign_changes;
      }
      if (k == 0) r.p0_reference = positive_energy_fraction(field, spec());
      r.diagnostics.push_back(d);
      if (dump_steps.count(k)) {
        std::ostringstream out;
        write_wigner_dump(out, field, cfg_.wigner.dump_stride);
        sink_.write("wigner/" + label + "_" + time_tag(t) + ".dat", out.str());
      }
    }
    if (r.exact.size() >= 5) r.plateaus = detect_plateaus(r.exact, cfg_.plateau);

    const std::vector<double> times = time_grid(cfg_.time.t_max, dt);
    if (spec().kind == ModelKind::InvertedOscillator && st.n == 0) {
      const CoherentIOBenchmark bench = CoherentIOBenchmark::from_alpha(alpha);
      r.analytic.method = SeriesMethod::Analytic;
      for (double t : times) r.analytic.push(t, coherent_transmission(bench, t));
    }

    if (cfg_.twa.enabled) {
      const SamplerSpec sampler = SamplerSpec::for_fock(st.n, alpha, cfg_.twa.N);
      TwaOptions opt;
      opt.seed = cfg_.twa.seed;
      if (cfg_.twa.calibrate) opt.calibrate_to = r.energy_closed_form;
      std::vector<double> snaps;
      if (cfg_.twa.dump_ensembles) snaps = cfg_.wigner.snapshot_times;
      std::vector<double> snap_times;
      for (double t : snaps) snap_times.push_back(times[step_index(t, dt)]);
      TwaRun run = twa_series(sampler, spec(), times, opt, snap_times);
      r.twa = std::move(run.series);
      r.twa_delta_p = run.delta_p;
      r.twa_initial_energy = ensemble_mean_energy(run.initial);
      r.forbidden_occupancy = std::move(run.forbidden_occupancy);
      r.sub_barrier_left = run.sub_barrier_left;
      for (const auto& ens : run.snapshots) {
        std::ostringstream out;
        write_ensemble_csv(out, ens);
        sink_.write("ensembles/" + label + "_" + time_tag(ens.time) + ".csv", out.str());
      }
    }
    return r;
  }

  void write_transmission(const StateResult& r) {
    CsvTable table({"t", "P_exact", "P_twa", "sigma_twa", "P_analytic", "P0_reference", "P_wigner"});
    const double dt = cfg_.time.dt;
    std::map<std::size_t, double> wigner_at;
    for (const auto& d : r.diagnostics) wigner_at[step_index(d.t, dt)] = d.p_wigner;
    const std::vector<double> times = time_grid(cfg_.time.t_max, dt);
    for (std::size_t k = 0; k < times.size(); ++k) {
      auto pick = [k](const TransmissionSeries& s) -> std::optional<double> {
        return k < s.size() ? std::optional<double>(s.estimates[k]) : std::nullopt;
      };
      std::optional<double> sigma;
      if (k < r.twa.size()) sigma = r.twa.sigma[k];
      std::optional<double> pw;
      if (auto it = wigner_at.find(k); it != wigner_at.end()) pw = it->second;
      table.add_row({format_number(times[k]), format_number(pick(r.exact)), format_number(pick(r.twa)),
                     format_number(sigma), format_number(pick(r.analytic)),
                     format_number(r.p0_reference), format_number(pw)});
    }
    sink_.write("transmission_" + r.label + ".csv", table.str());
  }

  void write_state_tables(const std::vector<StateResult>& results) {
    CsvTable states({"state", "n", "q_bar", "p_bar", "im_alpha", "E_closed_form", "E_matrix",
                     "sigma_H", "P0_reference", "twa_delta_p", "twa_mean_energy",
                     "max_tail_mass", "trusted_until"});
    CsvTable plateaus({"state", "n", "start", "end", "first_index", "last_index", "interior"});
    CsvTable diagnostics({"state", "n", "t", "negativity", "forbidden_volume", "fringes",
                          "P_wigner", "P_marginal", "marginal_error", "wigner_norm"});
    CsvTable occupancy({"state", "n", "t", "sub_barrier_left", "forbidden_occupancy"});
    const std::vector<double> times = time_grid(cfg_.time.t_max, cfg_.time.dt);
    for (const auto& r : results) {
      const std::string n = std::to_string(r.state.n);
      states.add_row({r.label, n, format_number(r.state.q_bar), format_number(r.state.p_bar),
                      format_number(r.state.alpha().imag()), format_number(r.energy_closed_form),
                      format_number(r.energy_matrix), format_number(r.sigma_h),
                      format_number(r.p0_reference), format_number(r.twa_delta_p),
                      format_number(r.twa_initial_energy), format_number(r.truncation.max_tail_mass),
                      format_number(r.truncation.trusted_until)});
      for (const auto& p : r.plateaus) {
        plateaus.add_row({r.label, n, format_number(p.start), format_number(p.end),
                          std::to_string(p.first), std::to_string(p.last),
                          p.interior(r.exact.size()) ? "1" : "0"});
      }
      for (const auto& d : r.diagnostics) {
        diagnostics.add_row({r.label, n, format_number(d.t), format_number(d.negativity),
                             format_number(d.forbidden_volume),
                             d.fringes ? std::to_string(*d.fringes) : std::string(),
                             format_number(d.p_wigner), format_number(d.p_marginal),
                             format_number(d.marginal_error), format_number(d.wigner_norm)});
      }
      for (std::size_t k = 0; k < r.forbidden_occupancy.size(); ++k) {
        occupancy.add_row({r.label, n, format_number(times[k]), std::to_string(r.sub_barrier_left),
                           std::to_string(r.forbidden_occupancy[k])});
      }
    }
    sink_.write("states.csv", states.str());
    sink_.write("plateaus.csv", plateaus.str());
    sink_.write("diagnostics.csv", diagnostics.str());
    if (is_kerr(cfg_) && cfg_.twa.enabled) sink_.write("occupancy.csv", occupancy.str());
  }

  // Separatrix curve and a handful of classical orbits on either side of it.
  void write_phase_portrait() {
    const Separatrix sep = separatrix(spec());
    CsvTable curve({"lobe", "q", "p"});
    const std::vector<PhasePoint> pts = sep.sample(400);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      curve.add_row({i < pts.size() / 2 ? "left" : "right", format_number(pts[i].q),
                     format_number(pts[i].p)});
    }
    sink_.write("separatrix.csv", curve.str());

    const double w = sep.well_q;
    const std::vector<PhasePoint> starts = {
        {-0.3 * w, 0.0}, {-0.6 * w, 0.0}, {-0.85 * w, 0.0}, {0.3 * w, 0.0}, {0.6 * w, 0.0},
        {0.0, 0.1 * w},  {0.0, 0.3 * w},  {0.0, 0.5 * w},   {-1.3 * w, 0.0}};
    const std::vector<double> times = time_grid(12.0, 0.02);
    CsvTable orbits({"orbit", "energy", "t", "q", "p"});
    for (std::size_t o = 0; o < starts.size(); ++o) {
      const double e = classical_hamiltonian(spec(), starts[o]);
      integrate_trajectory(spec(), starts[o], times, IntegratorOptions{},
                           [&](std::size_t k, PhasePoint pt) {
                             orbits.add_row({std::to_string(o), format_number(e),
                                             format_number(times[k]), format_number(pt.q),
                                             format_number(pt.p)});
                           });
    }
    sink_.write("phase_portrait.csv", orbits.str());
  }

  double exact_transmission_at(const FockState& psi0, double t, TruncationRecord& record) const {
    const FockState psi = evolve(prop_, psi0, t, policy());
    record.max_tail_mass = std::max(record.max_tail_mass, tail_mass(psi));
    if (record.max_tail_mass > kEvolutionTailLimit) record.adequate = false;
    return transmission_marginal(synthesize(psi, record));
  }

  TransmissionEstimate twa_at(int n, ComplexAmplitude alpha, double target, double t) const {
    const SamplerSpec sampler = SamplerSpec::for_fock(n, alpha, cfg_.twa.N);
    TwaOptions opt;
    opt.seed = cfg_.twa.seed;
    opt.calibrate_to = target;
    const double times[] = {t};
    const TwaRun run = twa_series(sampler, spec(), times, opt);
    return {run.series.estimates[0], run.series.sigma[0]};
  }

  std::vector<EnergySweepRow> energy_sweep() {
    const SweepSpec& s = cfg_.sweep;
    std::vector<EnergySweepRow> rows;
    CsvTable table({"E_target", "im_alpha", "p_bar", "E_check", "P_exact", "P_twa", "sigma_twa",
                    "discrepancy", "note"});
    TruncationRecord record{"energy-sweep", spec().n_max, 0.0, 0.0, s.t, true};
    for (std::size_t i = 0; i < s.points; ++i) {
      EnergySweepRow row;
      row.target_energy =
          s.energy_min + (s.energy_max - s.energy_min) * static_cast<double>(i) /
                             static_cast<double>(s.points - 1);
      if (row.target_energy >= 0.0) {
        row.note = "skipped: above the barrier top";
      } else {
        with_context("energy-sweep row " + std::to_string(i), [&] {
          const double im = solve_im_alpha(spec(), s.n, s.q_bar, row.target_energy, s.im_alpha_lo,
                                           s.im_alpha_hi, s.im_alpha_tol);
          const ComplexAmplitude alpha{s.q_bar / std::numbers::sqrt2, im};
          row.im_alpha = im;
          row.energy_check = displaced_fock_energy(spec(), alpha, s.n);
          row.p_exact = exact_transmission_at(displaced_fock(alpha, s.n, spec().n_max), s.t, record);
          if (cfg_.twa.enabled) {
            const TransmissionEstimate est = twa_at(s.n, alpha, row.target_energy, s.t);
            row.p_twa = est.probability;
            row.sigma_twa = est.sigma;
          }
          return 0;
        });
      }
      std::optional<double> p_bar;
      if (row.im_alpha) p_bar = *row.im_alpha * std::numbers::sqrt2;
      table.add_row({format_number(row.target_energy), format_number(row.im_alpha),
                     format_number(p_bar), format_number(row.energy_check),
                     format_number(row.p_exact), format_number(row.p_twa),
                     format_number(row.sigma_twa), format_number(row.discrepancy()), row.note});
      rows.push_back(row);
    }
    manifest_.truncation.push_back(record);
    sink_.write("energy_sweep.csv", table.str());
    return rows;
  }

  std::vector<FockSweepRow> fock_sweep() {
    const SweepSpec& s = cfg_.sweep;
    std::vector<FockSweepRow> rows;
    CsvTable table({"n", "im_alpha", "P_exact", "P_twa", "sigma_twa", "P0_reference", "sigma_H"});
    TruncationRecord record{"fock-sweep", spec().n_max, 0.0, 0.0, s.t, true};
    for (int n : s.n_values) {
      FockSweepRow row;
      row.n = n;
      with_context("fock-sweep n = " + std::to_string(n), [&] {
        row.im_alpha = solve_im_alpha(spec(), n, s.q_bar, s.energy, s.im_alpha_lo, s.im_alpha_hi,
                                      s.im_alpha_tol);
        const ComplexAmplitude alpha{s.q_bar / std::numbers::sqrt2, row.im_alpha};
        const FockState psi0 = displaced_fock(alpha, n, spec().n_max);
        row.sigma_h = energy_variance(spec(), psi0);
        const WignerField w0 =
            wigner_from_wavefunction(synthesize(psi0, record), grid_.p_axis(), 0.0);
        row.p0_reference = positive_energy_fraction(w0, spec());
        row.p_exact = exact_transmission_at(psi0, s.t, record);
        if (cfg_.twa.enabled) {
          const TransmissionEstimate est = twa_at(n, alpha, s.energy, s.t);
          row.p_twa = est.probability;
          row.sigma_twa = est.sigma;
        }
        return 0;
      });
      table.add_row({std::to_string(n), format_number(row.im_alpha), format_number(row.p_exact),
                     cfg_.twa.enabled ? format_number(row.p_twa) : std::string(),
                     cfg_.twa.enabled ? format_number(row.sigma_twa) : std::string(),
                     format_number(row.p0_reference), format_number(row.sigma_h)});
      rows.push_back(row);
    }
    manifest_.truncation.push_back(record);
    sink_.write("fock_sweep.csv", table.str());
    return rows;
  }

 private:
  const ExperimentConfig& cfg_;
  OutputSink& sink_;
  RunManifest& manifest_;
  PhaseGrid grid_;
  Propagator prop_;
  WavefunctionSynthesizer synth_;
};

}  // namespace

RunResult run(const ExperimentConfig& config) {
  config.validate();
  const auto start = Clock::now();
  RunResult result;
  RunManifest& m = result.manifest;
  m.name = config.name;
  m.scenario = to_string(config.scenario);
  m.config_hash = config_hash(config);
  m.version = library_version();

  OutputSink sink(config.output_dir);
  sink.write("config.json", config_to_json(config, false));
  const std::string where = m.scenario;
  with_context(where, [&] {
    Runner runner(config, sink, m);
    switch (config.scenario) {
      case Scenario::EnergySweep:
        result.energy_rows = runner.energy_sweep();
        break;
      case Scenario::FockSweep:
        result.fock_rows = runner.fock_sweep();
        break;
      default: {
        const auto labels = state_labels(config.states);
        for (std::size_t i = 0; i < config.states.size(); ++i) {
          result.states.push_back(with_context(
              labels[i], [&] { return runner.run_state(config.states[i], labels[i]); }));
          runner.write_transmission(result.states.back());
          m.truncation.push_back(result.states.back().truncation);
        }
        runner.write_state_tables(result.states);
        if (config.hamiltonian.kind == ModelKind::KerrInverted) runner.write_phase_portrait();
      }
    }
    return 0;
  });
  for (const auto& t : m.truncation) {
    if (!t.adequate) {
      std::string note = t.label + ": truncation check failed (Fock tail " +
                         format_number(t.max_tail_mass) + ", boundary |psi| " +
                         format_number(t.max_boundary_amplitude) + ")";
      if (t.max_tail_mass > kEvolutionTailLimit) {
        note += "; exact values after t = " + format_number(t.trusted_until) + " are untrusted";
      }
      m.notes.push_back(note);
    }
  }
  m.wall_clock_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  m.outputs = sink.records();
  sink.finish(m);
  return result;
}

}  // namespace fockbarrier
