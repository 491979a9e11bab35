#include "fockbarrier/twa.hpp"

#include <algorithm>
#include <array>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <ostream>

#include "fockbarrier/analytic.hpp"
#include "fockbarrier/errors.hpp"
#include "fockbarrier/parallel.hpp"
#include "fockbarrier/rng.hpp"

namespace fockbarrier {

namespace odeint = boost::numeric::odeint;

SamplerSpec SamplerSpec::for_fock(int n, ComplexAmplitude alpha, std::size_t N) {
  return SamplerSpec{n == 0 ? SamplerKind::CoherentGaussian : SamplerKind::FockRing, n, alpha, N};
}

void SamplerSpec::validate() const {
  if (N < 100) throw ParameterError("ensemble size must be at least 100");
  if (kind == SamplerKind::FockRing && n < 1) {
    throw ParameterError("ring sampler needs n >= 1; use the coherent sampler for n = 0");
  }
  if (kind == SamplerKind::CoherentGaussian && n != 0) {
    throw ParameterError("coherent sampler describes n = 0 only");
  }
}

TrajectoryEnsemble sample_initial(const SamplerSpec& sampler, const HamiltonianSpec& spec,
                                  std::uint64_t seed) {
  sampler.validate();
  const double q0 = mean_position(sampler.alpha);
  const double p0 = mean_momentum(sampler.alpha);
  TrajectoryEnsemble out{std::vector<PhasePoint>(sampler.N), seed, 0.0, spec};
  parallel_for(sampler.N, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RngStream rng(seed, i);
      if (sampler.kind == SamplerKind::CoherentGaussian) {
        const double q = rng.gaussian(q0, std::numbers::sqrt2 / 2.0);
        const double p = rng.gaussian(p0, std::numbers::sqrt2 / 2.0);
        out.points[i] = {q, p};
      } else {
        double s = 0.0;
        do {
          s = rng.gaussian(sampler.n + 0.5, 0.5);
        } while (s <= 0.0);
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double r = std::sqrt(2.0 * s);
        out.points[i] = {q0 + r * std::cos(theta), p0 + r * std::sin(theta)};
      }
    }
  });
  return out;
}

double ensemble_mean_energy(const TrajectoryEnsemble& ensemble) {
  if (ensemble.points.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& pt : ensemble.points) sum += classical_hamiltonian(ensemble.spec, pt);
  return sum / static_cast<double>(ensemble.points.size());
}

namespace {

double shifted_mean_energy(const TrajectoryEnsemble& ensemble, double dp) {
  double sum = 0.0;
  for (const auto& pt : ensemble.points) {
    sum += classical_hamiltonian(ensemble.spec, {pt.q, pt.p + dp});
  }
  return sum / static_cast<double>(ensemble.points.size());
}

}  // namespace

Calibration calibrate_energy(const TrajectoryEnsemble& ensemble, double target, double bracket,
                             double tolerance) {
  if (ensemble.points.empty()) throw UsageError("cannot calibrate an empty ensemble");
  auto f = [&](double dp) { return shifted_mean_energy(ensemble, dp) - target; };
  const double flo = f(-bracket);
  const double fhi = f(bracket);
  double dp = 0.0;
  if (f(0.0) != 0.0) {
    if (flo * fhi > 0.0) {
      throw CalibrationError("no momentum shift in [-" + std::to_string(bracket) + ", " +
                             std::to_string(bracket) + "] reaches mean energy " +
                             std::to_string(target));
    }
    std::uintmax_t iterations = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        f, -bracket, bracket, flo, fhi, boost::math::tools::eps_tolerance<double>(50),
        iterations);
    dp = 0.5 * (a + b);
  }
  Calibration out{ensemble, dp, 0.0};
  for (auto& pt : out.ensemble.points) pt.p += dp;
  out.mean_energy = ensemble_mean_energy(out.ensemble);
  if (std::abs(out.mean_energy - target) > tolerance) {
    throw CalibrationError("calibrated mean energy " + std::to_string(out.mean_energy) +
                           " misses target " + std::to_string(target));
  }
  return out;
}

namespace {

using State = std::array<double, 2>;

struct HamiltonFlow {
  double eps;
  double K;
  void operator()(const State& x, State& dxdt, double /*t*/) const {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    dxdt[0] = 2.0 * eps * x[1] + K * r2 * x[1];
    dxdt[1] = 2.0 * eps * x[0] - K * r2 * x[0];
  }
};

bool use_closed_form(const HamiltonianSpec& spec, const IntegratorOptions& options) {
  return options.closed_form_io && spec.kind == ModelKind::InvertedOscillator;
}

}  // namespace

void integrate_trajectory(const HamiltonianSpec& spec, PhasePoint start,
                          std::span<const double> times, const IntegratorOptions& options,
                          const std::function<void(std::size_t, PhasePoint)>& observer,
                          std::size_t index) {
  if (times.empty()) return;
  if (times.front() < 0.0) throw UsageError("output times must be non-negative");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw UsageError("output times must increase");
  }
  if (use_closed_form(spec, options)) {
    for (std::size_t k = 0; k < times.size(); ++k) observer(k, io_flow(start, times[k]));
    return;
  }
  // odeint observes at the start time; prepend t = 0 when it is not requested.
  std::vector<double> grid;
  grid.reserve(times.size() + 1);
  const bool prepended = times.front() > 0.0;
  if (prepended) grid.push_back(0.0);
  grid.insert(grid.end(), times.begin(), times.end());

  State x{start.q, start.p};
  auto stepper = odeint::make_dense_output(options.abs_tol, options.rel_tol,
                                           odeint::runge_kutta_dopri5<State>());
  const HamiltonFlow flow{spec.drive(), spec.kerr()};
  std::size_t k = 0;
  try {
    odeint::integrate_times(
        stepper, flow, x, grid.begin(), grid.end(), options.initial_dt,
        [&](const State& s, double) {
          if (!(std::isfinite(s[0]) && std::isfinite(s[1]))) {
            throw IntegrationError("trajectory left the finite domain", index);
          }
          if (!(prepended && k == 0)) observer(prepended ? k - 1 : k, PhasePoint{s[0], s[1]});
          ++k;
        },
        odeint::max_step_checker(static_cast<int>(options.max_steps)));
  } catch (const odeint::odeint_error& e) {
    throw IntegrationError(std::string("step-size control failed: ") + e.what(), index);
  }
}

PhasePoint integrate_point(const HamiltonianSpec& spec, PhasePoint start, double t,
                           const IntegratorOptions& options) {
  if (t == 0.0) return start;
  PhasePoint out = start;
  const double times[] = {t};
  integrate_trajectory(spec, start, times, options, [&](std::size_t, PhasePoint pt) { out = pt; });
  return out;
}

TrajectoryEnsemble propagate(const TrajectoryEnsemble& ensemble, double t_final,
                             const IntegratorOptions& options) {
  if (!(t_final >= 0.0)) throw UsageError("t_final must be non-negative");
  TrajectoryEnsemble out = ensemble;
  out.time = ensemble.time + t_final;
  if (t_final == 0.0) return out;
  const double times[] = {t_final};
  parallel_for(ensemble.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      integrate_trajectory(ensemble.spec, ensemble.points[i], times, options,
                           [&](std::size_t, PhasePoint pt) { out.points[i] = pt; }, i);
    }
  });
  return out;
}

double binomial_sigma(double p, std::size_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

TransmissionEstimate estimate_transmission(const TrajectoryEnsemble& ensemble, double q1,
                                           double q2) {
  if (ensemble.points.empty()) throw UsageError("empty ensemble");
  std::size_t above1 = 0;
  std::size_t above2 = 0;
  for (const auto& pt : ensemble.points) {
    if (pt.q >= q1) ++above1;
    if (pt.q >= q2) ++above2;
  }
  const double n = static_cast<double>(ensemble.points.size());
  const double p = (static_cast<double>(above1) - static_cast<double>(above2)) / n;
  return {p, binomial_sigma(p, ensemble.points.size())};
}

TwaRun twa_series(const SamplerSpec& sampler, const HamiltonianSpec& spec,
                  std::span<const double> times, const TwaOptions& options,
                  std::span<const double> snapshot_times) {
  spec.validate();
  if (times.empty()) throw UsageError("TWA series needs at least one output time");
  TwaRun run;
  run.initial = sample_initial(sampler, spec, options.seed);
  if (options.calibrate_to) {
    Calibration cal = calibrate_energy(run.initial, *options.calibrate_to);
    run.initial = std::move(cal.ensemble);
    run.delta_p = cal.delta_p;
  }

  std::vector<std::ptrdiff_t> snapshot_slot(times.size(), -1);
  for (std::size_t s = 0; s < snapshot_times.size(); ++s) {
    const auto it = std::find_if(times.begin(), times.end(), [&](double t) {
      return std::abs(t - snapshot_times[s]) <= 1e-12 * std::max(1.0, std::abs(t));
    });
    if (it == times.end()) throw UsageError("snapshot time is not an output time");
    snapshot_slot[static_cast<std::size_t>(it - times.begin())] = static_cast<std::ptrdiff_t>(s);
  }
  run.snapshots.resize(snapshot_times.size());
  for (std::size_t s = 0; s < snapshot_times.size(); ++s) {
    run.snapshots[s] = TrajectoryEnsemble{std::vector<PhasePoint>(run.initial.size()),
                                          options.seed, snapshot_times[s], spec};
  }

  const bool kerr = spec.kind == ModelKind::KerrInverted;
  const std::size_t n_times = times.size();
  std::vector<std::size_t> transmitted(n_times, 0);
  std::vector<std::size_t> forbidden(n_times, 0);
  std::size_t sub_barrier_left = 0;
  std::mutex merge;

  parallel_for(run.initial.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> local_tx(n_times, 0);
    std::vector<std::size_t> local_forbidden(n_times, 0);
    std::size_t local_left = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const PhasePoint start = run.initial.points[i];
      const bool left_bound = kerr && start.q < 0.0 && classical_hamiltonian(spec, start) < 0.0;
      if (left_bound) ++local_left;
      integrate_trajectory(
          spec, start, times, options.integrator,
          [&](std::size_t k, PhasePoint pt) {
            if (pt.q >= options.q1 && !(pt.q >= options.q2)) ++local_tx[k];
            if (left_bound && pt.q > 0.0 && classical_hamiltonian(spec, pt) < 0.0) {
              ++local_forbidden[k];
            }
            if (snapshot_slot[k] >= 0) {
              run.snapshots[static_cast<std::size_t>(snapshot_slot[k])].points[i] = pt;
            }
          },
          i);
    }
    // Integer counts: the merge order does not affect the result.
    std::lock_guard lock(merge);
    for (std::size_t k = 0; k < n_times; ++k) {
      transmitted[k] += local_tx[k];
      forbidden[k] += local_forbidden[k];
    }
    sub_barrier_left += local_left;
  });

  const std::size_t n = run.initial.size();
  run.series.method = SeriesMethod::Twa;
  for (std::size_t k = 0; k < n_times; ++k) {
    const double p = static_cast<double>(transmitted[k]) / static_cast<double>(n);
    run.series.push(times[k], p, binomial_sigma(p, n));
  }
  if (kerr) run.forbidden_occupancy = std::move(forbidden);
  run.sub_barrier_left = sub_barrier_left;
  return run;
}

std::string spec_hash(const HamiltonianSpec& spec) {
  char text[160];
  std::snprintf(text, sizeof text, "%s|%.17g|%.17g|%d", to_string(spec.kind).c_str(),
                spec.drive(), spec.kerr(), spec.n_max);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char* c = text; *c != '\0'; ++c) {
    h ^= static_cast<unsigned char>(*c);
    h *= 0x100000001b3ull;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

void write_ensemble_csv(std::ostream& out, const TrajectoryEnsemble& ensemble) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g", ensemble.time);
  out << "# seed=" << ensemble.seed << " t=" << buf << " spec=" << spec_hash(ensemble.spec)
      << '\n';
  out << "idx,q,p\n";
  for (std::size_t i = 0; i < ensemble.points.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, ensemble.points[i].q,
                  ensemble.points[i].p);
    out << buf;
  }
}

}  // namespace fockbarrier
