#include "fockbarrier/wigner.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fockbarrier/errors.hpp"

namespace fockbarrier {

WignerField wigner_from_wavefunction(const WavefunctionGrid& wf, const UniformAxis& p_axis,
                                     double time, std::string source) {
  const auto nq = static_cast<Eigen::Index>(wf.q_axis.size());
  if (static_cast<Eigen::Index>(wf.psi.size()) != nq) {
    throw UsageError("wavefunction length does not match its axis");
  }
  const auto np = static_cast<Eigen::Index>(p_axis.size());
  const double h = wf.q_axis.step();
  const Eigen::Index kmax = (nq - 1) / 2;

  // W = (1/pi) sum_y psi(q + y) conj(psi(q - y)) exp(-2ipy) h, with
  // f_jk = psi(q_j + kh) conj(psi(q_j - kh)), k >= 0. Negative k is the
  // complex conjugate, folded into the factor 2 below.
  Eigen::MatrixXd re = Eigen::MatrixXd::Zero(nq, kmax + 1);
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(nq, kmax + 1);
  for (Eigen::Index j = 0; j < nq; ++j) {
    const Eigen::Index reach = std::min(j, nq - 1 - j);
    for (Eigen::Index k = 0; k <= reach; ++k) {
      const std::complex<double> f = wf.psi[j + k] * std::conj(wf.psi[j - k]);
      re(j, k) = f.real();
      im(j, k) = f.imag();
    }
  }
  Eigen::MatrixXd cosine(kmax + 1, np);
  Eigen::MatrixXd sine(kmax + 1, np);
  for (Eigen::Index k = 0; k <= kmax; ++k) {
    const double weight = k == 0 ? 1.0 : 2.0;
    for (Eigen::Index l = 0; l < np; ++l) {
      const double theta = 2.0 * p_axis.node(static_cast<std::size_t>(l)) * static_cast<double>(k) * h;
      cosine(k, l) = weight * std::cos(theta);
      sine(k, l) = weight * std::sin(theta);
    }
  }
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w =
      (h / std::numbers::pi) * (re * cosine + im * sine);

  PhaseGrid grid(wf.q_axis, p_axis);
  grid.set_values(std::vector<double>(w.data(), w.data() + w.size()));
  return WignerField{std::move(grid), time, std::move(source)};
}

WignerField wigner_from_state(const FockState& state, const PhaseGrid& grid_spec, double time,
                              std::string source, double boundary_tolerance) {
  const WavefunctionGrid wf = wavefunction_on_grid(state, grid_spec.q_axis(), boundary_tolerance);
  return wigner_from_wavefunction(wf, grid_spec.p_axis(), time, std::move(source));
}

std::vector<double> marginal_q(const WignerField& field) {
  const PhaseGrid& g = field.grid;
  if (!g.has_values()) throw UsageError("Wigner field has no values");
  const auto wp = simpson_weights(g.n_p(), g.p_axis().step());
  std::vector<double> out(g.n_q(), 0.0);
  for (std::size_t i = 0; i < g.n_q(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < g.n_p(); ++j) row += wp[j] * g.value(i, j);
    out[i] = row;
  }
  return out;
}

double transmission_wigner(const WignerField& field, double q1, double q2) {
  return integrate_region(field.grid, Region::q_interval(q1, q2));
}

double positive_energy_fraction(const WignerField& field, const HamiltonianSpec& spec,
                                double e_c) {
  return integrate_region(field.grid, energy_above(spec, e_c));
}

namespace {

// Catmull-Rom weights for stencil offsets -1, 0, 1, 2 at fraction s of a cell.
std::array<double, 4> catmull_rom(double s) {
  const double s2 = s * s, s3 = s2 * s;
  return {0.5 * (-s3 + 2.0 * s2 - s), 0.5 * (3.0 * s3 - 5.0 * s2 + 2.0),
          0.5 * (-3.0 * s3 + 4.0 * s2 + s), 0.5 * (s3 - s2)};
}

// Cell integral of the Catmull-Rom interpolant, per unit cell length.
constexpr std::array<double, 4> kCellWeights{-1.0 / 24.0, 13.0 / 24.0, 13.0 / 24.0, -1.0 / 24.0};

constexpr int kKinkSubsamples = 16;

}  // namespace

NegativityReport negativity(const WignerField& field) {
  const PhaseGrid& g = field.grid;
  if (!g.has_values()) throw UsageError("Wigner field has no values");
  const std::size_t nq = g.n_q(), np = g.n_p();
  auto at = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
    i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(nq) - 1);
    j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(np) - 1);
    return g.value(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  };
  std::array<std::array<double, 4>, kKinkSubsamples> sub{};
  for (int m = 0; m < kKinkSubsamples; ++m) sub[m] = catmull_rom((m + 0.5) / kKinkSubsamples);

  // Integrates min(W, 0) of a bicubic interpolant: whole-cell weights where
  // the stencil is negative throughout, midpoint subsampling where W changes
  // sign, so the kink along the zero contour does not cost O(h^2).
  double sum = 0.0;
  std::array<std::array<double, 4>, 4> v{};
  std::array<std::array<double, kKinkSubsamples>, 4> rows{};
  for (std::size_t i = 0; i + 1 < nq; ++i) {
    for (std::size_t j = 0; j + 1 < np; ++j) {
      bool any_negative = false, all_negative = true;
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          const double w = at(static_cast<std::ptrdiff_t>(i) + a - 1, static_cast<std::ptrdiff_t>(j) + b - 1);
          v[a][b] = w;
          const bool negative = w < -kNegativityFloor;
          any_negative = any_negative || negative;
          all_negative = all_negative && negative;
        }
      }
      if (!any_negative) continue;
      double cell = 0.0;
      if (all_negative) {
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) cell -= kCellWeights[a] * kCellWeights[b] * v[a][b];
        }
      } else {
        for (int a = 0; a < 4; ++a) {
          for (int mp = 0; mp < kKinkSubsamples; ++mp) {
            double r = 0.0;
            for (int b = 0; b < 4; ++b) r += sub[mp][b] * v[a][b];
            rows[a][mp] = r;
          }
        }
        for (int mq = 0; mq < kKinkSubsamples; ++mq) {
          for (int mp = 0; mp < kKinkSubsamples; ++mp) {
            double w = 0.0;
            for (int a = 0; a < 4; ++a) w += sub[mq][a] * rows[a][mp];
            if (w < -kNegativityFloor) cell -= w;
          }
        }
        cell /= static_cast<double>(kKinkSubsamples * kKinkSubsamples);
      }
      sum += cell;
    }
  }
  const double delta = 2.0 * sum * g.q_axis().step() * g.p_axis().step();
  return NegativityReport{std::max(0.0, delta), field.time};
}

double forbidden_volume(const WignerField& field, const HamiltonianSpec& spec) {
  const Region lobe = right_lobe(spec);
  const PhaseGrid& g = field.grid;
  if (!g.has_values()) throw UsageError("Wigner field has no values");
  std::vector<double> mag(g.values().size());
  std::transform(g.values().begin(), g.values().end(), mag.begin(),
                 [](double w) { return std::abs(w); });
  return integrate_region(g.with_values(std::move(mag)), lobe);
}

int count_sign_changes(const std::vector<double>& q_nodes, const std::vector<double>& values,
                       const std::vector<bool>& inside, double relative_threshold) {
  if (values.size() != q_nodes.size() || inside.size() != q_nodes.size()) {
    throw UsageError("slice, node and mask lengths differ");
  }
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  const double floor = relative_threshold * peak;
  int changes = 0;
  int previous = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!inside[i]) {
      previous = 0;
      continue;
    }
    if (std::abs(values[i]) <= floor) continue;
    const int sign = values[i] > 0.0 ? 1 : -1;
    if (previous != 0 && sign != previous) ++changes;
    previous = sign;
  }
  return changes;
}

FringeReport fringe_count(const WignerField& field, const HamiltonianSpec& spec,
                          double relative_threshold) {
  const Region lobe = right_lobe(spec);
  const PhaseGrid& g = field.grid;
  if (!g.has_values()) throw UsageError("Wigner field has no values");
  const std::size_t j0 = g.p_axis().index_of(0.0);
  if (j0 == UniformAxis::npos) throw UsageError("fringe slice needs p = 0 on the p axis");
  std::vector<double> q(g.n_q());
  std::vector<double> slice(g.n_q());
  std::vector<bool> inside(g.n_q());
  for (std::size_t i = 0; i < g.n_q(); ++i) {
    q[i] = g.q(i);
    slice[i] = g.value(i, j0);
    inside[i] = lobe.contains({q[i], 0.0});
  }
  return FringeReport{count_sign_changes(q, slice, inside, relative_threshold), field.time};
}

std::vector<PlateauInterval> detect_plateaus(const TransmissionSeries& series,
                                             const PlateauOptions& options) {
  const std::size_t n = series.times.size();
  if (n < 5 || series.estimates.size() != n) {
    throw UsageError("plateau detection needs at least five samples");
  }
  const double dt = series.times[1] - series.times[0];
  if (!(dt > 0.0)) throw UsageError("series times must increase");
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((series.times[i] - series.times[i - 1]) - dt) > 1e-6 * dt) {
      throw UsageError("plateau detection needs a uniform time step");
    }
  }
  const auto& p = series.estimates;
  std::vector<double> rate(n);
  rate[0] = std::abs(p[1] - p[0]) / dt;
  rate[n - 1] = std::abs(p[n - 1] - p[n - 2]) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) rate[i] = std::abs(p[i + 1] - p[i - 1]) / (2.0 * dt);
  const double limit = options.threshold * *std::max_element(rate.begin(), rate.end());

  std::vector<PlateauInterval> out;
  std::size_t i = 0;
  while (i < n) {
    if (rate[i] > limit) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && rate[j + 1] <= limit) ++j;
    if (j - i + 1 >= options.min_samples) {
      out.push_back(PlateauInterval{series.times[i], series.times[j], i, j});
    }
    i = j + 1;
  }
  return out;
}

namespace {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_wigner_dump(std::ostream& out, const WignerField& field, std::size_t stride) {
  const PhaseGrid& g = field.grid;
  if (!g.has_values()) throw UsageError("Wigner field has no values");
  if (stride == 0) throw UsageError("dump stride must be positive");
  std::vector<std::size_t> qi;
  std::vector<std::size_t> pj;
  for (std::size_t i = 0; i < g.n_q(); i += stride) qi.push_back(i);
  for (std::size_t j = 0; j < g.n_p(); j += stride) pj.push_back(j);
  if (qi.size() < 2 || pj.size() < 2) throw UsageError("dump stride leaves fewer than two nodes");
  out << "# wigner t=" << number(field.time) << ' ' << number(g.q(qi.front())) << ' '
      << number(g.q(qi.back())) << ' ' << number(g.p(pj.front())) << ' '
      << number(g.p(pj.back())) << ' ' << qi.size() << ' ' << pj.size() << '\n';
  for (std::size_t i : qi) {
    for (std::size_t j : pj) {
      out << number(g.q(i)) << ' ' << number(g.p(j)) << ' ' << number(g.value(i, j)) << '\n';
    }
  }
}

WignerField read_wigner_dump(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw UsageError("empty Wigner dump");
  std::istringstream hs(header);
  std::string hash, tag, tfield;
  double qmin = 0, qmax = 0, pmin = 0, pmax = 0;
  std::size_t nq = 0, np = 0;
  hs >> hash >> tag >> tfield >> qmin >> qmax >> pmin >> pmax >> nq >> np;
  if (!hs || hash != "#" || tag != "wigner" || tfield.rfind("t=", 0) != 0) {
    throw UsageError("malformed Wigner dump header: " + header);
  }
  const double t = std::stod(tfield.substr(2));
  PhaseGrid grid(qmin, qmax, nq, pmin, pmax, np);
  std::vector<double> values(nq * np);
  for (std::size_t k = 0; k < nq * np; ++k) {
    double q, p, w;
    if (!(in >> q >> p >> w)) throw UsageError("Wigner dump ends early");
    values[k] = w;
  }
  grid.set_values(std::move(values));
  return WignerField{std::move(grid), t, {}};
}

}  // namespace fockbarrier
