#include <doctest.h>

#include <cmath>
#include <fockbarrier/errors.hpp>
#include <fockbarrier/phase_core.hpp>
#include <fockbarrier/rng.hpp>
#include <numbers>
#include <vector>

#include "oracles.hpp"

using namespace fockbarrier;

TEST_CASE("amplitude convention") {
  const auto a = amplitude_from_phase(-3.0, 2.5);
  CHECK(a.real() == doctest::Approx(-3.0 / std::numbers::sqrt2));
  CHECK(a.imag() == doctest::Approx(2.5 / std::numbers::sqrt2));
  CHECK(mean_position(a) == doctest::Approx(-3.0));
  CHECK(mean_momentum(a) == doctest::Approx(2.5));
}

TEST_CASE("uniform axis") {
  UniformAxis ax(-1.0, 1.0, 21);
  CHECK(ax.step() == doctest::Approx(0.1));
  CHECK(ax.node(0) == -1.0);
  CHECK(ax.node(20) == 1.0);
  CHECK(ax.index_of(0.0) == 10);
  CHECK(ax.index_of(0.05) == UniformAxis::npos);
  CHECK_THROWS_AS(UniformAxis(1.0, 1.0, 5), ParameterError);
  CHECK_THROWS_AS(UniformAxis(0.0, 1.0, 1), ParameterError);
}

TEST_CASE("phase grid storage") {
  PhaseGrid g(0.0, 1.0, 3, 0.0, 2.0, 5);
  CHECK_THROWS_AS(integrate_2d(g), UsageError);
  CHECK_THROWS_AS(g.set_values(std::vector<double>(14)), UsageError);
  auto s = g.sampled([](PhasePoint pt) { return 10 * pt.q + pt.p; });
  CHECK(s.value(2, 4) == doctest::Approx(12.0));
  CHECK(s.value(1, 0) == doctest::Approx(5.0));
}

TEST_CASE("integrate_2d") {
  SUBCASE("constant on the unit square") {
    auto g = PhaseGrid(0.0, 1.0, 101, 0.0, 1.0, 101).sampled([](PhasePoint) { return 1.0; });
    CHECK(std::abs(integrate_2d(g) - 1.0) < 1e-12);
  }
  SUBCASE("odd field on a symmetric grid") {
    auto g = PhaseGrid::square(3.0, 61).sampled([](PhasePoint pt) { return pt.q; });
    CHECK(std::abs(integrate_2d(g)) < 1e-12);
  }
  SUBCASE("vacuum Wigner normalisation") {
    auto g = PhaseGrid::square(15.0, 601).sampled(
        [](PhasePoint pt) { return oracle::gaussian_wigner(pt.q, pt.p, 0, 0); });
    CHECK(std::abs(integrate_2d(g) - 1.0) < 1e-6);
  }
  SUBCASE("even number of intervals and the 3/8 closure agree on cubics") {
    for (std::size_t n : {10u, 11u, 4u}) {
      auto g = PhaseGrid(0.0, 2.0, n, 0.0, 1.0, n).sampled(
          [](PhasePoint pt) { return pt.q * pt.q * pt.q + pt.p; });
      CHECK(integrate_2d(g) == doctest::Approx(4.0 + 1.0).epsilon(1e-12));
    }
  }
  SUBCASE("linearity") {
    auto base = PhaseGrid::square(2.0, 41);
    auto f = base.sampled([](PhasePoint pt) { return std::sin(pt.q) * pt.p * pt.p; });
    auto h = base.sampled([](PhasePoint pt) { return std::exp(-pt.q * pt.q); });
    auto combo = base.sampled([](PhasePoint pt) {
      return 2.5 * std::sin(pt.q) * pt.p * pt.p - 0.75 * std::exp(-pt.q * pt.q);
    });
    CHECK(integrate_2d(combo) ==
          doctest::Approx(2.5 * integrate_2d(f) - 0.75 * integrate_2d(h)).epsilon(1e-13));
  }
}

TEST_CASE("integrate_region") {
  SUBCASE("constant, q > 0 on [-1,1]^2 is half the box") {
    auto g = PhaseGrid::square(1.0, 201).sampled([](PhasePoint) { return 1.0; });
    CHECK(integrate_region(g, Region::q_above(0.0)) == doctest::Approx(2.0).epsilon(1e-3 / 2));
  }
  SUBCASE("centred vacuum, q > 0") {
    auto g = PhaseGrid::square(15.0, 601).sampled(
        [](PhasePoint pt) { return oracle::gaussian_wigner(pt.q, pt.p, 0, 0); });
    CHECK(std::abs(integrate_region(g, Region::q_above(0.0)) - 0.5) < 1e-4);
  }
  SUBCASE("displaced vacuum tail against erf") {
    auto g = PhaseGrid::square(15.0, 601).sampled(
        [](PhasePoint pt) { return oracle::gaussian_wigner(pt.q, pt.p, -3, 0); });
    const double expected = 0.5 * (1.0 - std::erf(3.0));
    CHECK(integrate_region(g, Region::q_above(0.0)) == doctest::Approx(expected).epsilon(1e-6));
  }
  SUBCASE("off-node bounds use fractional cells") {
    auto g = PhaseGrid(0.0, 1.0, 11, 0.0, 1.0, 11).sampled([](PhasePoint) { return 1.0; });
    CHECK(integrate_region(g, Region::q_interval(0.23, 0.71)) == doctest::Approx(0.48));
  }
  SUBCASE("level-set region converges to the disc area") {
    auto g = PhaseGrid::square(1.5, 301).sampled([](PhasePoint) { return 1.0; });
    auto disc = Region::predicate([](PhasePoint pt) { return pt.q * pt.q + pt.p * pt.p < 1.0; });
    CHECK(integrate_region(g, disc) == doctest::Approx(std::numbers::pi).epsilon(1e-4));
  }
}

TEST_CASE("1-D Simpson weights") {
  const auto w = simpson_weights(5, 0.5);
  REQUIRE(w.size() == 5);
  CHECK(w[0] == doctest::Approx(0.5 / 3));
  CHECK(w[1] == doctest::Approx(2.0 / 3));
  CHECK(w[2] == doctest::Approx(1.0 / 3));
  std::vector<double> x2;
  UniformAxis ax(0.0, 3.0, 31);
  for (double x : ax.nodes()) x2.push_back(x * x);
  CHECK(integrate_1d_interval(x2, ax, 1.0, 2.0) == doctest::Approx(7.0 / 3).epsilon(1e-12));
  CHECK(integrate_1d_interval(x2, ax, -5.0, 10.0) == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("rng streams") {
  SUBCASE("determinism per (seed, stream)") {
    RngStream a(1, 0), b(1, 0), c(1, 1);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
      const auto x = a.next_u64();
      CHECK(x == b.next_u64());
      differs |= (x != c.next_u64());
    }
    CHECK(differs);
  }
  SUBCASE("gaussian moments, N = 1e6") {
    RngStream r(7, 3);
    const int N = 1000000;
    double s = 0, s2 = 0;
    for (int i = 0; i < N; ++i) {
      const double x = sample_gaussian(r, 0.0, 1.0);
      s += x;
      s2 += x * x;
    }
    CHECK(std::abs(s / N) < 0.005);
    CHECK(std::abs(s2 / N - 1.0) < 5.0 * std::sqrt(2.0 / N));
  }
  SUBCASE("uniform on [0, 2pi), N = 1e6") {
    RngStream r(11, 0);
    const int N = 1000000;
    double s = 0;
    for (int i = 0; i < N; ++i) {
      const double x = sample_uniform(r, 0.0, 2 * std::numbers::pi);
      REQUIRE(x >= 0.0);
      REQUIRE(x < 2 * std::numbers::pi);
      s += x;
    }
    const double band = 5.0 * (2 * std::numbers::pi / std::sqrt(12.0)) / std::sqrt(double(N));
    CHECK(std::abs(s / N - std::numbers::pi) < band);
  }
  SUBCASE("sigma <= 0 rejected") {
    RngStream r(1, 0);
    CHECK_THROWS_AS(sample_gaussian(r, 0.0, 0.0), ParameterError);
    CHECK_THROWS_AS(sample_gaussian(r, 0.0, -1.0), ParameterError);
  }
}
