#include <doctest.h>

#include <cmath>
#include <fockbarrier/analytic.hpp>
#include <fockbarrier/errors.hpp>
#include <fockbarrier/exact_evolution.hpp>
#include <fockbarrier/rng.hpp>
#include <fockbarrier/wigner.hpp>
#include <numbers>
#include <sstream>

#include "oracles.hpp"

using namespace fockbarrier;

namespace {

const double kPi = std::numbers::pi;

WignerField field_of(const FockState& s, const PhaseGrid& g, double t = 0.0) {
  return wigner_from_state(s, g, t, "test");
}

}  // namespace

TEST_CASE("Laguerre-Gaussian oracle suite, n = 0..5") {
  // The q axis is wide so the y integral sees the whole wavefunction; the
  // comparison uses nodes inside [-6, 6]^2.
  const PhaseGrid g(-12, 12, 481, -6, 6, 241);
  for (int n = 0; n <= 5; ++n) {
    const auto W = field_of(fock_state(n, 5), g);
    double worst = 0;
    for (std::size_t i = 0; i < g.n_q(); ++i) {
      const double q = g.q(i);
      if (std::abs(q) > 6.0 + 1e-12) continue;
      for (std::size_t j = 0; j < g.n_p(); ++j)
        worst = std::max(worst, std::abs(W.grid.value(i, j) - oracle::fock_wigner(n, q, g.p(j))));
    }
    CAPTURE(n);
    CHECK(worst < 1e-6);
    const double w00 = W.grid.value(g.q_axis().index_of(0), g.p_axis().index_of(0));
    CHECK(w00 == doctest::Approx((n % 2 ? -1.0 : 1.0) / kPi).epsilon(1e-10));
  }
}

TEST_CASE("coherent states") {
  const PhaseGrid g(-10, 10, 401, -8, 8, 321);
  const auto s = displaced_fock(amplitude_from_phase(-3, 2.5), 0, 80);
  const auto W = field_of(s, g);
  double worst = 0, lowest = 1;
  for (std::size_t i = 0; i < g.n_q(); ++i)
    for (std::size_t j = 0; j < g.n_p(); ++j) {
      worst = std::max(worst, std::abs(W.grid.value(i, j) - oracle::gaussian_wigner(g.q(i), g.p(j), -3, 2.5)));
      lowest = std::min(lowest, W.grid.value(i, j));
    }
  CHECK(worst < 1e-10);
  CHECK(lowest > -1e-12);
  CHECK(negativity(W).delta < 1e-6);
}

TEST_CASE("marginals") {
  const PhaseGrid g(-10, 10, 401, -10, 10, 401);
  SUBCASE("vacuum") {
    const auto m = marginal_q(field_of(fock_state(0, 4), g));
    CHECK(m[200] == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-8));
    CHECK(integrate_1d(m, g.q_axis().step()) == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("node of phi_1") {
    const auto m = marginal_q(field_of(fock_state(1, 4), g));
    CHECK(std::abs(m[200]) < 1e-12);
  }
  SUBCASE("p-integral of W equals |psi|^2 after IO evolution") {
    const auto io = HamiltonianSpec::inverted_oscillator(200);
    const auto prop = make_propagator(io);
    const PhaseGrid wide(-20, 20, 801, -20, 20, 801);
    const auto st = evolve(prop, displaced_fock(amplitude_from_phase(-3, 2.5), 2, 200), 1.0);
    const auto W = field_of(st, wide, 1.0);
    const auto m = marginal_q(W);
    const auto d = wavefunction_on_grid(st, wide.q_axis()).density();
    double worst = 0;
    for (std::size_t i = 0; i < m.size(); ++i) worst = std::max(worst, std::abs(m[i] - d[i]));
    CHECK(worst < 1e-6);
    const double pw = transmission_wigner(W);
    const double pm = transmission_marginal(wavefunction_on_grid(st, wide.q_axis()));
    CHECK(std::abs(pw - pm) < 1e-6);
  }
}

TEST_CASE("transmission over the Wigner field") {
  SUBCASE("parity") {
    const PhaseGrid g(-10, 10, 401, -10, 10, 401);
    for (int n = 0; n <= 3; ++n)
      CHECK(std::abs(transmission_wigner(field_of(fock_state(n, 3), g)) - 0.5) < 1e-6);
  }
  SUBCASE("coherent IO benchmark against the erf law, t <= 1.5") {
    const auto io = HamiltonianSpec::inverted_oscillator(300);
    const auto prop = make_propagator(io);
    const auto s0 = displaced_fock(amplitude_from_phase(-3, 2.5), 0, 300);
    const PhaseGrid g(-30, 30, 1201, -30, 30, 1201);
    const auto bench = CoherentIOBenchmark{-3.0, 2.5};
    for (double t : {0.5, 1.0, 1.5}) {
      const double p = transmission_wigner(field_of(evolve(prop, s0, t), g, t));
      CHECK(std::abs(p - coherent_transmission(bench, t)) < 1e-4);
    }
  }
  SUBCASE("analytic Wigner flow matches the exact track on a 41 x 41 probe") {
    const auto io = HamiltonianSpec::inverted_oscillator(300);
    const auto prop = make_propagator(io);
    const auto st = evolve(prop, displaced_fock(amplitude_from_phase(-3, 2.5), 0, 300), 1.0);
    const PhaseGrid g(-30, 30, 1201, -10, 10, 41);
    const auto W = field_of(st, g, 1.0);
    const auto bench = CoherentIOBenchmark{-3.0, 2.5};
    double worst = 0;
    for (std::size_t i = 300; i <= 900; i += 25)
      for (std::size_t j = 0; j < 41; ++j)
        worst = std::max(worst, std::abs(W.grid.value(i, j) - coherent_wigner_t(bench, g.q(i), g.p(j), 1.0)));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("positive-energy fraction") {
  const auto io = HamiltonianSpec::inverted_oscillator(150);
  const PhaseGrid g(-15, 15, 601, -15, 15, 601);
  CHECK(std::abs(positive_energy_fraction(field_of(displaced_fock(amplitude_from_phase(-3, 2.5), 0, 150), g), io) -
                 0.308) < 0.002);
  CHECK(positive_energy_fraction(field_of(displaced_fock(amplitude_from_phase(-6, 0), 0, 150), g), io) < 1e-3);
  CHECK(std::abs(positive_energy_fraction(field_of(fock_state(0, 4), g), io) - 0.5) < 1e-4);
}

TEST_CASE("negativity") {
  SUBCASE("Fock |1> against the closed-form negative lobe") {
    const PhaseGrid g(-8, 8, 321, -8, 8, 321);
    CHECK(negativity(field_of(fock_state(1, 1), g)).delta ==
          doctest::Approx(oracle::fock1_negativity()).epsilon(1e-5));
  }
  SUBCASE("positive field and floor clipping") {
    auto g = PhaseGrid::square(2, 41).sampled([](PhasePoint pt) { return std::exp(-pt.q * pt.q) - 1e-9; });
    CHECK(negativity(WignerField{g, 0.0, ""}).delta == 0.0);
  }
  SUBCASE("IO evolution keeps delta within 1e-4") {
    const auto io = HamiltonianSpec::inverted_oscillator(300);
    const auto prop = make_propagator(io);
    const auto s0 = displaced_fock(amplitude_from_phase(-3, 2.5), 1, 300);
    const PhaseGrid g(-20, 20, 2001, -20, 20, 2001);
    const double d0 = negativity(field_of(s0, g)).delta;
    const double d1 = negativity(field_of(evolve(prop, s0, 0.75), g, 0.75)).delta;
    CHECK(std::abs(d0 - oracle::fock1_negativity()) < 1e-5);
    CHECK(std::abs(d1 - d0) < 1e-4);
  }
  SUBCASE("Kerr dynamics creates negativity from a coherent state") {
    const auto kerr = HamiltonianSpec::kerr(0.5, 0.01, 200);
    const auto st = evolve(make_propagator(kerr), displaced_fock(amplitude_from_phase(-3, 2.5), 0, 200), 2.0);
    CHECK(negativity(field_of(st, PhaseGrid(-20, 20, 801, -20, 20, 801), 2.0)).delta > 1e-3);
  }
}

TEST_CASE("forbidden-lobe volume") {
  const auto kerr = HamiltonianSpec::kerr(0.5, 0.01, 200);
  const PhaseGrid g(-20, 20, 801, -20, 20, 801);
  for (int n = 0; n <= 3; ++n) {
    const auto W = field_of(displaced_fock(amplitude_from_phase(-3, 2.4), n, 200), g);
    CHECK(forbidden_volume(W, kerr) < 1e-4);
  }
  SUBCASE("positive field equals its region integral") {
    auto pos = g.sampled([](PhasePoint pt) { return oracle::gaussian_wigner(pt.q, pt.p, 8, 0); });
    WignerField f{pos, 0.0, ""};
    CHECK(forbidden_volume(f, kerr) == doctest::Approx(integrate_region(pos, right_lobe(kerr))).epsilon(1e-12));
    CHECK(forbidden_volume(f, kerr) == doctest::Approx(1.0).epsilon(1e-4));
  }
  CHECK_THROWS_AS(forbidden_volume(field_of(fock_state(0, 2), g), HamiltonianSpec::inverted_oscillator()),
                  UnsupportedError);
}

TEST_CASE("fringe counting") {
  const auto kerr = HamiltonianSpec::kerr(0.5, 0.01);
  // sin(5 pi q) vanishes at q = k/5; Omega_r on p = 0 is 0 < q < sqrt(200),
  // holding the zeros k = 1..70.
  const PhaseGrid base(-16, 16, 3201, -1, 1, 21);
  SUBCASE("synthetic field") {
    auto g = base.sampled([](PhasePoint pt) { return std::sin(5 * kPi * pt.q); });
    CHECK(fringe_count(WignerField{g, 0.0, ""}, kerr).n_sign_changes == 70);
  }
  SUBCASE("noise below the threshold changes nothing") {
    RngStream rng(5, 0);
    std::vector<double> v;
    for (std::size_t i = 0; i < base.n_q(); ++i)
      for (std::size_t j = 0; j < base.n_p(); ++j)
        v.push_back(std::sin(5 * kPi * base.q(i)) + sample_uniform(rng, -1e-7, 1e-7));
    CHECK(fringe_count(WignerField{base.with_values(v), 0.0, ""}, kerr, 1e-6).n_sign_changes == 70);
  }
  SUBCASE("left-lobe coherent state") {
    const PhaseGrid g(-20, 20, 801, -20, 20, 801);
    CHECK(fringe_count(field_of(displaced_fock(amplitude_from_phase(-3, 2.5), 0, 200), g), kerr)
              .n_sign_changes == 0);
  }
  SUBCASE("needs p = 0 on the grid") {
    auto g = PhaseGrid(-16, 16, 101, -1, 1, 20).sampled([](PhasePoint) { return 1.0; });
    CHECK_THROWS_AS(fringe_count(WignerField{g, 0.0, ""}, kerr), UsageError);
  }
}

TEST_CASE("plateau detection") {
  auto series_of = [](auto f, double dt, int n) {
    TransmissionSeries s;
    for (int k = 0; k < n; ++k) s.push(k * dt, f(k * dt));
    return s;
  };
  SUBCASE("constant series is one plateau") {
    const auto p = detect_plateaus(series_of([](double) { return 0.3; }, 0.05, 40));
    REQUIRE(p.size() == 1);
    CHECK(p[0].first == 0);
    CHECK(p[0].last == 39);
    CHECK_FALSE(p[0].interior(40));
  }
  SUBCASE("erf law has no interior plateau") {
    const CoherentIOBenchmark b{-3.0, 2.5};
    const auto s = series_of([&](double t) { return coherent_transmission(b, t); }, 0.05, 81);
    for (const auto& p : detect_plateaus(s)) CHECK_FALSE(p.interior(s.size()));
  }
  SUBCASE("a stalled ramp") {
    const auto s = series_of(
        [](double t) { return t < 1.0 ? t : (t < 1.5 ? 1.0 : 1.0 + (t - 1.5)); }, 0.05, 61);
    const auto p = detect_plateaus(s);
    REQUIRE(p.size() == 1);
    CHECK(p[0].interior(s.size()));
    CHECK(p[0].start >= 1.0 - 1e-12);
    CHECK(p[0].end <= 1.5 + 1e-12);
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(detect_plateaus(series_of([](double t) { return t; }, 0.1, 4)), UsageError);
    TransmissionSeries s;
    for (double t : {0.0, 0.1, 0.2, 0.35, 0.4, 0.5}) s.push(t, t);
    CHECK_THROWS_AS(detect_plateaus(s), UsageError);
  }
}

TEST_CASE("grid dump round trip") {
  const PhaseGrid g(-2, 2, 21, -1, 1, 11);
  const auto f = g.sampled([](PhasePoint pt) { return std::sin(pt.q) * std::cos(3 * pt.p) / 7.0; });
  const WignerField w{f, 1.25, "x"};
  std::stringstream full;
  write_wigner_dump(full, w);
  const auto first = full.str().substr(0, full.str().find('\n'));
  CHECK(first == "# wigner t=1.25 -2 2 -1 1 21 11");
  const auto back = read_wigner_dump(full);
  CHECK(back.time == 1.25);
  CHECK(back.grid.q_axis() == g.q_axis());
  CHECK(back.grid.p_axis() == g.p_axis());
  for (std::size_t k = 0; k < f.values().size(); ++k) REQUIRE(back.grid.values()[k] == f.values()[k]);

  std::stringstream strided;
  write_wigner_dump(strided, w, 5);
  const auto sub = read_wigner_dump(strided);
  CHECK(sub.grid.n_q() == 5);
  CHECK(sub.grid.n_p() == 3);
  CHECK(sub.grid.value(4, 2) == f.value(20, 10));

  std::stringstream bad("# nonsense\n");
  CHECK_THROWS(read_wigner_dump(bad));
}
