#include "kramers/box1d.hpp"

#include "kramers/dressed_potential.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace kramers::box1d {

namespace {

double clipped_arccos(double u) { return std::acos(std::clamp(u, -1.0, 1.0)); }

// Root of g in [a, b] where g(a), g(b) have opposite signs.
double bracketed_root(const std::function<double(double)>& g, double a, double b) {
  auto tol = [](double lo, double hi) { return std::abs(hi - lo) <= 4e-16 * std::max(1.0, std::abs(lo)); };
  std::uintmax_t iters = 200;
  const auto [lo, hi] = boost::math::tools::bisect(g, a, b, tol, iters);
  return 0.5 * (lo + hi);
}

std::vector<double> compress_runs(std::span<const double> v, double tol) {
  std::vector<double> runs;
  for (double x : v)
    if (runs.empty() || std::abs(x - runs.back()) > tol) runs.push_back(x);
  return runs;
}

}  // namespace

double box_potential(double z) { return std::abs(z) <= kHalfWidth ? kHeight : 0.0; }

double effective_analytic(double z, double alpha0) {
  if (alpha0 < 0.0) throw Error("alpha0 must be >= 0");
  if (alpha0 == 0.0) return box_potential(z);
  return clipped_arccos(-(kHalfWidth + z) / alpha0) - clipped_arccos((kHalfWidth - z) / alpha0);
}

double phase_fraction_inside(const std::function<double(double)>& inside, int n) {
  if (n < 16) throw Error("n_phase must be >= 16");
  const double h = kTwoPi / n;
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) g[k] = inside(h * k);

  // Breakpoints: the nodes plus every extremum bracketed by three nodes.
  std::vector<double> breaks;
  breaks.reserve(n + 16);
  for (int k = 0; k < n; ++k) breaks.push_back(h * k);
  for (int k = 0; k < n; ++k) {
    const double gm = g[(k + n - 1) % n], g0 = g[k], gp = g[(k + 1) % n];
    const bool is_min = g0 < gm && g0 <= gp;
    const bool is_max = g0 > gm && g0 >= gp;
    if (!is_min && !is_max) continue;
    const double sign = is_min ? 1.0 : -1.0;
    auto f = [&](double w) { return sign * inside(w); };
    const auto [w, fw] = boost::math::tools::brent_find_minima(f, h * (k - 1), h * (k + 1), 40);
    (void)fw;
    breaks.push_back(std::fmod(w + kTwoPi, kTwoPi));
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  breaks.push_back(breaks.front() + kTwoPi);

  double measure = 0.0;
  double ga = inside(breaks[0]);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    const double gb = inside(b);
    if (ga <= 0.0 && gb <= 0.0) {
      measure += b - a;
    } else if (ga <= 0.0 || gb <= 0.0) {
      const double c = bracketed_root(inside, a, b);
      measure += ga <= 0.0 ? c - a : b - c;
    }
    ga = gb;
  }
  return measure / kTwoPi;
}

double effective_numeric(double z, double alpha0, int n_phase) {
  if (alpha0 < 0.0) throw Error("alpha0 must be >= 0");
  auto inside = [=](double w) {
    const double s = z + alpha0 * std::cos(w);
    return s * s - kHalfWidth * kHalfWidth;
  };
  return kHeight * phase_fraction_inside(inside, n_phase);
}

double effective_relativistic(double z, double alpha0, double alpha_f, int n_phase,
                              RelativisticMode mode) {
  if (alpha0 < 0.0) throw Error("alpha0 must be >= 0");
  const double transverse = alpha0 * alpha0 * alpha_f;
  auto dist2 = [=](double w) {
    const double s = z + alpha0 * std::cos(w);
    const double t = transverse * std::sin(2.0 * w);
    return s * s + t * t;
  };
  if (mode == RelativisticMode::LiteralDistance) {
    if (n_phase < 16) throw Error("n_phase must be >= 16");
    double sum = 0.0;
    for (int k = 0; k < n_phase; ++k) sum += std::sqrt(dist2(kTwoPi * k / n_phase));
    return sum / n_phase;
  }
  return kHeight * phase_fraction_inside([&](double w) { return dist2(w) - 1.0; }, n_phase);
}

traj::Multicolor two_color_trajectory(double alpha0, double alpha1) {
  return traj::Multicolor{{
      traj::Tone{alpha0, traj::Axis::X, 1, traj::Shape::Cos},
      traj::Tone{alpha1, traj::Axis::Z, 4, traj::Shape::Sin},
  }};
}

double multicolor_point(double x, double z, double alpha0, double alpha1, int n_phase,
                        MulticolorBase base, double Z) {
  if (alpha0 < 0.0 || alpha1 < 0.0) throw Error("multicolor amplitudes must be >= 0");
  if (base == MulticolorBase::Coulomb) {
    const DressedPotential pot(Z, two_color_trajectory(alpha0, alpha1), FieldParams{},
                               PotentialOptions{.n_phase = n_phase});
    return pot.value({x, 0.0, z});
  }
  auto inside = [=](double w) {
    const double sx = x + alpha0 * std::cos(w);
    const double sz = z + alpha1 * std::sin(4.0 * w);
    return sx * sx + sz * sz - kHalfWidth * kHalfWidth;
  };
  return kHeight * phase_fraction_inside(inside, n_phase);
}

Grid2D multicolor_effective(std::span<const double> z_grid, std::span<const double> x_grid,
                            double alpha0, double alpha1, int n_phase, MulticolorBase base,
                            double Z) {
  Grid2D g;
  g.x.assign(x_grid.begin(), x_grid.end());
  g.z.assign(z_grid.begin(), z_grid.end());
  g.values.resize(g.x.size() * g.z.size());
  if (base == MulticolorBase::Coulomb) {
    const DressedPotential pot(Z, two_color_trajectory(alpha0, alpha1), FieldParams{},
                               PotentialOptions{.n_phase = n_phase});
    for (std::size_t iz = 0; iz < g.z.size(); ++iz)
      for (std::size_t ix = 0; ix < g.x.size(); ++ix) {
        double v;
        try {
          v = pot.value({g.x[ix], 0.0, g.z[iz]});
        } catch (const NonFiniteError&) {
          v = -std::numeric_limits<double>::infinity();
        }
        g.values[iz * g.x.size() + ix] = v;
      }
    return g;
  }
  for (std::size_t iz = 0; iz < g.z.size(); ++iz)
    for (std::size_t ix = 0; ix < g.x.size(); ++ix)
      g.values[iz * g.x.size() + ix] =
          multicolor_point(g.x[ix], g.z[iz], alpha0, alpha1, n_phase, base, Z);
  return g;
}

int count_local_maxima(std::span<const double> values, double tol) {
  const auto runs = compress_runs(values, tol);
  int count = 0;
  for (std::size_t i = 1; i + 1 < runs.size(); ++i)
    if (runs[i] > runs[i - 1] && runs[i] > runs[i + 1]) ++count;
  return count;
}

int count_local_minima(std::span<const double> values, double tol) {
  const auto runs = compress_runs(values, tol);
  int count = 0;
  for (std::size_t i = 1; i + 1 < runs.size(); ++i)
    if (runs[i] < runs[i - 1] && runs[i] < runs[i + 1]) ++count;
  return count;
}

}  // namespace kramers::box1d
