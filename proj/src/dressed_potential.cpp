#include "kramers/dressed_potential.hpp"

#include "kramers/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kramers {

namespace {

// Trapezoid error on a periodic integrand with a complex singularity at
// distance a from the real axis decays like exp(-n a).  For a point at
// distance d from the path, a >= d / (v + sqrt(2 A d)) with v the local path
// speed and A the acceleration bound.  40 leaves the error near round-off.
constexpr double kStripFactor = 40.0;

}  // namespace

double mass_gauge_coefficient(const FieldParams& p) { return 0.5 * p.alpha_f * p.alpha_f; }

MassGauge mass_gauge(const FieldParams& p) {
  p.validate();
  const double q = 0.25 * p.alpha0 * p.alpha0 * p.omega * p.omega * p.alpha_f * p.alpha_f;
  return {q, std::sqrt(1.0 + 2.0 * q)};
}

double mass_factor(const FieldParams& p) { return mass_gauge(p).multiplier; }

DressedPotential::DressedPotential(double Z, TrajectoryKind kind, FieldParams params,
                                   PotentialOptions options)
    : Z_(Z), kind_(std::move(kind)), params_(params), options_(options) {
  params_.validate();
  validate(kind_);
  if (options_.n_phase < 1) throw Error("n_phase must be positive");
  if (options_.softening < 0.0) throw Error("softening must be >= 0");
  if (options_.max_nodes < options_.n_phase) options_.max_nodes = options_.n_phase;
  extent_ = trajectory_extent(kind_, params_);
  max_accel_ = trajectory_max_acceleration(kind_, params_);
  static_ = extent_.max() == 0.0;
  while (levels_ < 30 && (static_cast<long>(options_.n_phase) << levels_) <= options_.max_nodes) ++levels_;
  cache_ = std::make_shared<NodeCache>(levels_);
}

const std::vector<Vec3>& DressedPotential::nodes_at(int level) const {
  std::call_once(cache_->once[level], [&] {
    const int n = options_.n_phase << level;
    auto& v = cache_->nodes[level];
    v.reserve(n);
    for (int k = 0; k < n; ++k) v.push_back(eval_trajectory(kind_, params_, kTwoPi * k / n));
  });
  return cache_->nodes[level];
}

DressedPotential DressedPotential::with_charge(double Z) const {
  DressedPotential copy = *this;
  copy.Z_ = Z;
  return copy;
}

template <bool WithGradient>
DressedPotential::Sum DressedPotential::accumulate(const Vec3& r, int level) const {
  const double eps2 = options_.softening * options_.softening;
  Sum s;
  double min_d2 = std::numeric_limits<double>::infinity();
  int k_min = 0;
  const auto& nodes = nodes_at(level);
  const int n = static_cast<int>(nodes.size());
  for (int k = 0; k < n; ++k) {
    const Vec3 d = r + nodes[k];
    const double d2 = d.squaredNorm() + eps2;
    if (d2 < min_d2) {
      min_d2 = d2;
      k_min = k;
    }
    const double inv = 1.0 / std::sqrt(d2);
    s.inv += inv;
    if constexpr (WithGradient) s.grad += d * (inv * inv * inv);
  }
  s.inv /= n;
  if constexpr (WithGradient) s.grad /= n;
  s.min_dist = std::sqrt(min_d2);
  s.min_phase = kTwoPi * k_min / n;
  return s;
}

int DressedPotential::required_nodes(const Sum& s, int n) const {
  const double v = trajectory_velocity(kind_, params_, s.min_phase).norm() + max_accel_ * kTwoPi / n;
  const double width = s.min_dist / (v + std::sqrt(2.0 * max_accel_ * s.min_dist));
  const double needed = kStripFactor / width;
  return needed >= options_.max_nodes ? options_.max_nodes : static_cast<int>(std::ceil(needed));
}

template <bool WithGradient>
DressedPotential::Sum DressedPotential::evaluate(const Vec3& r, int* nodes) const {
  int level = 0;
  Sum s = accumulate<WithGradient>(r, level);
  if (options_.auto_refine) {
    while (level + 1 < levels_ && s.min_dist > 0.0) {
      const int n = options_.n_phase << level;
      const int needed = required_nodes(s, n);
      if (needed <= n) break;
      while (level + 1 < levels_ && (options_.n_phase << level) < needed) ++level;
      s = accumulate<WithGradient>(r, level);
    }
  }
  if (nodes) *nodes = options_.n_phase << level;
  if (s.min_dist == 0.0 || !std::isfinite(s.inv))
    throw NonFiniteError("dressed potential evaluated on the trajectory path");
  return s;
}

double DressedPotential::value(const Vec3& r) const {
  if (static_) {
    const double d = std::sqrt(r.squaredNorm() + options_.softening * options_.softening);
    if (d == 0.0) throw NonFiniteError("dressed potential evaluated at the nucleus");
    return -Z_ / d;
  }
  return -Z_ * evaluate<false>(r, nullptr).inv;
}

std::pair<double, Vec3> DressedPotential::value_and_gradient(const Vec3& r) const {
  if (static_) {
    const double d2 = r.squaredNorm() + options_.softening * options_.softening;
    if (d2 == 0.0) throw NonFiniteError("dressed potential evaluated at the nucleus");
    const double inv = 1.0 / std::sqrt(d2);
    return {-Z_ * inv, Z_ * inv * inv * inv * r};
  }
  const Sum s = evaluate<true>(r, nullptr);
  return {-Z_ * s.inv, Z_ * s.grad};
}

int DressedPotential::nodes_used(const Vec3& r) const {
  if (static_) return 1;
  int n = 0;
  evaluate<false>(r, &n);
  return n;
}

PotentialGrid potential_grid(const DressedPotential& pot, double x_min, double x_max, double z_min,
                             double z_max, int nx, int nz, int jobs) {
  if (nx < 2 || nz < 2) throw Error("potential grid needs nx, nz >= 2");
  PotentialGrid g{x_min, x_max, z_min, z_max, nx, nz, {}, {}};
  const auto cells = static_cast<std::size_t>(nx) * nz;
  g.values.assign(cells, 0.0);
  g.nonfinite.assign(cells, 0);
  parallel_for(static_cast<std::size_t>(nz), jobs, [&](std::size_t iz) {
    for (int ix = 0; ix < nx; ++ix) {
      const std::size_t c = iz * nx + ix;
      try {
        g.values[c] = pot.value({g.x(ix), 0.0, g.z(static_cast<int>(iz))});
      } catch (const NonFiniteError&) {
        g.values[c] = -std::numeric_limits<double>::infinity();
        g.nonfinite[c] = 1;
      }
    }
  });
  return g;
}

std::vector<std::pair<int, int>> grid_local_minima(const PotentialGrid& g) {
  std::vector<std::pair<int, int>> minima;
  for (int iz = 1; iz + 1 < g.nz; ++iz) {
    for (int ix = 1; ix + 1 < g.nx; ++ix) {
      const double v = g.at(ix, iz);
      bool is_min = true;
      for (int dz = -1; dz <= 1 && is_min; ++dz)
        for (int dx = -1; dx <= 1 && is_min; ++dx)
          if ((dx || dz) && !(v < g.at(ix + dx, iz + dz))) is_min = false;
      if (is_min) minima.emplace_back(ix, iz);
    }
  }
  return minima;
}

}  // namespace kramers
