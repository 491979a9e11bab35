#include <doctest.h>

#include <cmath>
#include <fockbarrier/analytic.hpp>
#include <fockbarrier/errors.hpp>
#include <fockbarrier/parallel.hpp>
#include <fockbarrier/rng.hpp>
#include <fockbarrier/twa.hpp>
#include <numbers>
#include <sstream>

using namespace fockbarrier;

namespace {
const auto kKerr = HamiltonianSpec::kerr(0.5, 0.01, 200);
const auto kIo = HamiltonianSpec::inverted_oscillator(100);
}  // namespace

TEST_CASE("sampler validation") {
  CHECK_THROWS_AS(SamplerSpec::for_fock(1, {0, 0}, 99).validate(), ParameterError);
  SamplerSpec ring{SamplerKind::FockRing, 0, {0, 0}, 1000};
  CHECK_THROWS_AS(ring.validate(), ParameterError);
  CHECK(SamplerSpec::for_fock(0, {0, 0}).kind == SamplerKind::CoherentGaussian);
  CHECK(SamplerSpec::for_fock(2, {0, 0}).kind == SamplerKind::FockRing);
}

TEST_CASE("initial sampling") {
  SUBCASE("ring action mean, N = 1e6") {
    const auto e = sample_initial(SamplerSpec::for_fock(1, {0, 0}, 1000000), kIo, 3);
    double s = 0;
    for (const auto& pt : e.points) s += (pt.q * pt.q + pt.p * pt.p) / 2;
    CHECK(std::abs(s / e.size() - 1.5) < 0.005);
  }
  SUBCASE("coherent centre and width") {
    const std::size_t N = 200000;
    const auto e = sample_initial(SamplerSpec::for_fock(0, amplitude_from_phase(-3, 2.5), N), kIo, 4);
    double mq = 0, mp = 0, vq = 0;
    for (const auto& pt : e.points) {
      mq += pt.q;
      mp += pt.p;
    }
    mq /= N;
    mp /= N;
    for (const auto& pt : e.points) vq += (pt.q - mq) * (pt.q - mq);
    const double band = 5 * std::sqrt(0.5 / N);
    CHECK(std::abs(mq + 3.0) < band);
    CHECK(std::abs(mp - 2.5) < band);
    CHECK(std::abs(vq / N - 0.5) < 5 * 0.5 * std::sqrt(2.0 / N));
  }
  SUBCASE("determinism and thread independence") {
    const auto spec = SamplerSpec::for_fock(2, amplitude_from_phase(-1, 1), 5000);
    set_thread_count(1);
    const auto a = sample_initial(spec, kKerr, 9);
    set_thread_count(4);
    const auto b = sample_initial(spec, kKerr, 9);
    set_thread_count(0);
    const auto c = sample_initial(spec, kKerr, 10);
    CHECK(a.points == b.points);
    CHECK(a.points != c.points);
  }
}

TEST_CASE("energy calibration") {
  const auto alpha = amplitude_from_phase(-3, 2.395);
  const auto e = sample_initial(SamplerSpec::for_fock(1, alpha, 100000), kKerr, 20240917);
  SUBCASE("Kerr n = 1 target") {
    const auto cal = calibrate_energy(e, -0.79);
    CHECK(std::abs(ensemble_mean_energy(cal.ensemble) + 0.79) < 1e-4);
    CHECK(std::abs(cal.mean_energy + 0.79) < 1e-4);
    // Regression fixture for this seed and ensemble size.
    CHECK(cal.delta_p == doctest::Approx(-0.0548).epsilon(0.02));
  }
  SUBCASE("fixed point") {
    const auto cal = calibrate_energy(e, ensemble_mean_energy(e));
    CHECK(std::abs(cal.delta_p) < 1e-4);
  }
  SUBCASE("monotone in the shift for p > 0") {
    auto shifted = [&](double dp) {
      auto c = e;
      for (auto& pt : c.points) pt.p += dp;
      return ensemble_mean_energy(c);
    };
    double prev = shifted(-0.2);
    for (double dp = -0.15; dp <= 0.2; dp += 0.05) {
      const double cur = shifted(dp);
      CHECK(cur > prev);
      prev = cur;
    }
  }
  SUBCASE("no bracket") {
    CHECK_THROWS_AS(calibrate_energy(e, 500.0), CalibrationError);
  }
}

TEST_CASE("trajectory integration") {
  SUBCASE("IO closed form") {
    const auto q = integrate_point(kIo, {1, 0}, 1.0);
    CHECK(q.q == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
    CHECK(q.p == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));
    const auto s = io_flow({1, -1}, 2.0);
    CHECK(s.q == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(s.p == doctest::Approx(-std::exp(-2.0)).epsilon(1e-12));
    const auto back = io_flow(io_flow({0.3, -1.7}, 1.3), -1.3);
    CHECK(std::abs(back.q - 0.3) < 1e-12);
    CHECK(std::abs(back.p + 1.7) < 1e-12);
  }
  SUBCASE("adaptive RK agrees with the IO closed form to 1e-8") {
    // Default tolerances accumulate ~6e-8 over t = 1.5 on this hyperbolic
    // flow; the comparison uses a tighter per-step tolerance.
    IntegratorOptions rk;
    rk.closed_form_io = false;
    rk.rel_tol = 1e-11;
    rk.abs_tol = 1e-13;
    RngStream rng(42, 0);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      const PhasePoint x{sample_uniform(rng, -5, 5), sample_uniform(rng, -5, 5)};
      const auto a = integrate_point(kIo, x, 1.5, rk);
      const auto b = io_flow(x, 1.5);
      worst = std::max({worst, std::abs(a.q - b.q), std::abs(a.p - b.p)});
    }
    CHECK(worst < 1e-8);
  }
  SUBCASE("Kerr energy drift below 1e-6 per unit time, t <= 5") {
    RngStream rng(43, 0);
    for (int i = 0; i < 100; ++i) {
      const PhasePoint x{sample_uniform(rng, -6, 2), sample_uniform(rng, -1, 5)};
      const double e0 = classical_hamiltonian(kKerr, x);
      const std::vector<double> times{1, 2, 3, 4, 5};
      integrate_trajectory(kKerr, x, times, {}, [&](std::size_t k, PhasePoint pt) {
        REQUIRE(std::abs(classical_hamiltonian(kKerr, pt) - e0) < 1e-6 * times[k]);
      });
    }
  }
  SUBCASE("orbit about the well returns after one period") {
    // Start right of the well bottom (q = 10); p first turns negative, so the
    // return to q > 10 is a downward crossing of p = 0. Refine linearly.
    const PhasePoint x{11.0, 0.0};
    std::vector<double> times;
    for (int k = 1; k <= 4000; ++k) times.push_back(k * 1e-3);
    std::vector<PhasePoint> path(times.size());
    integrate_trajectory(kKerr, x, times, {}, [&](std::size_t k, PhasePoint pt) { path[k] = pt; });
    double period = -1;
    for (std::size_t k = 1; k < path.size(); ++k) {
      if (path[k - 1].p > 0 && path[k].p <= 0 && path[k].q > 10.0) {
        const double f = -path[k - 1].p / (path[k].p - path[k - 1].p);
        period = times[k - 1] + f * 1e-3;
        break;
      }
    }
    REQUIRE(period > 0);
    const auto y = integrate_point(kKerr, x, period);
    CHECK(std::hypot(y.q - x.q, y.p - x.p) < 1e-3);
    CHECK(integrate_point(kKerr, {10.0, 0.0}, 3.0) == PhasePoint{10.0, 0.0});
  }
  SUBCASE("failure carries the trajectory index") {
    IntegratorOptions opt;
    opt.max_steps = 2;
    opt.rel_tol = 1e-14;
    opt.abs_tol = 1e-16;
    const std::vector<double> times{5.0};
    try {
      integrate_trajectory(kKerr, {-3, 2.4}, times, opt, [](std::size_t, PhasePoint) {}, 17);
      FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
      CHECK(e.trajectory() == 17);
    }
  }
}

TEST_CASE("counting estimator") {
  TrajectoryEnsemble e;
  e.points.assign(1000, PhasePoint{-3, 0});
  auto est = estimate_transmission(e);
  CHECK(est.probability == 0.0);
  CHECK(est.sigma == 0.0);
  CHECK(binomial_sigma(0.5, 100000) == doctest::Approx(1.58113883e-3).epsilon(1e-8));
  RngStream rng(1, 2);
  for (auto& pt : e.points) pt.q = sample_gaussian(rng, 0, 1);
  double prev = 1.0;
  for (double q1 = -3; q1 <= 3; q1 += 0.25) {
    const double p = estimate_transmission(e, q1).probability;
    CHECK(p <= prev);
    prev = p;
  }
  CHECK(estimate_transmission(e, 0.0, 1.0).probability ==
        doctest::Approx(estimate_transmission(e, 0.0).probability - estimate_transmission(e, 1.0).probability));
}

TEST_CASE("series") {
  SUBCASE("coherent IO within 3 sigma of the erf law at 20 times") {
    const auto alpha = amplitude_from_phase(-3, 2.5);
    std::vector<double> times;
    for (int k = 0; k <= 20; ++k) times.push_back(0.2 * k);
    TwaOptions opt;
    opt.seed = 20240917;
    const auto run = twa_series(SamplerSpec::for_fock(0, alpha, 100000), kIo, times, opt);
    const CoherentIOBenchmark b{-3.0, 2.5};
    CHECK(run.series.estimates[0] == estimate_transmission(run.initial).probability);
    for (std::size_t k = 1; k < times.size(); ++k) {
      CAPTURE(times[k]);
      CHECK(std::abs(run.series.estimates[k] - coherent_transmission(b, times[k])) <=
            3 * run.series.sigma[k]);
    }
  }
  SUBCASE("Kerr: no left-lobe sub-barrier point enters the right lobe") {
    std::vector<double> times;
    for (int k = 0; k <= 60; ++k) times.push_back(0.05 * k);
    TwaOptions opt;
    opt.seed = 77;
    opt.calibrate_to = -0.79;
    const std::vector<double> snaps{3.0};
    const auto run = twa_series(SamplerSpec::for_fock(3, amplitude_from_phase(-3, 2.17), 20000), kKerr,
                                times, opt, snaps);
    CHECK(run.sub_barrier_left > 1000);
    for (auto c : run.forbidden_occupancy) CHECK(c == 0);
    REQUIRE(run.snapshots.size() == 1);
    CHECK(run.snapshots[0].time == 3.0);
    CHECK(estimate_transmission(run.snapshots[0]).probability == run.series.estimates.back());
  }
  SUBCASE("identical under any thread count") {
    const std::vector<double> times{0.0, 0.5, 1.0};
    TwaOptions opt;
    set_thread_count(1);
    const auto a = twa_series(SamplerSpec::for_fock(1, amplitude_from_phase(-3, 2.4), 3000), kKerr, times, opt);
    set_thread_count(3);
    const auto b = twa_series(SamplerSpec::for_fock(1, amplitude_from_phase(-3, 2.4), 3000), kKerr, times, opt);
    set_thread_count(0);
    CHECK(a.series.estimates == b.series.estimates);
  }
}

TEST_CASE("ensemble CSV") {
  TrajectoryEnsemble e;
  e.points = {{1.5, -2}, {0.1, 3}};
  e.seed = 5;
  e.time = 0.5;
  e.spec = kKerr;
  std::ostringstream out;
  write_ensemble_csv(out, e);
  const std::string expected =
      "# seed=5 t=0.5 spec=" + spec_hash(kKerr) + "\nidx,q,p\n0,1.5,-2\n1,0.10000000000000001,3\n";
  CHECK(out.str() == expected);
  CHECK(spec_hash(kKerr) != spec_hash(kIo));
  CHECK(spec_hash(kKerr).size() == 16);
}
