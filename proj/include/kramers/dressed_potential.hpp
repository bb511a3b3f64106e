#pragma once

// Period-averaged (Kramers-Henneberger) Coulomb potential
//
//   V(r) = -(Z / 2 pi) \oint dphi / sqrt(|r + alpha(phi)|^2 + eps^2)
//
// and the relativistic mass-gauge multiplier (1 + 2q)^(1/2).

#include "kramers/trajectory.hpp"
#include "kramers/types.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace kramers {

struct MassGauge {
  double q = 0.0;           ///< ponderomotive energy over rest energy, U_P / (m c^2)
  double multiplier = 1.0;  ///< (1 + 2q)^(1/2)
};

/// q = alpha0^2 omega^2 alpha_f^2 / 4 in atomic units (U_P = E0^2 / 4 omega^2, c = 1/alpha_f).
MassGauge mass_gauge(const FieldParams& params);
double mass_factor(const FieldParams& params);

/// Coefficient of alpha0^2 omega^2 in 2q, i.e. alpha_f^2 / 2 (about 2.66e-5).
double mass_gauge_coefficient(const FieldParams& params);

struct PotentialOptions {
  int n_phase = 512;       ///< minimum trapezoid node count over one period
  double softening = 0.0;  ///< soft-core eps, bohr; keep 0 for energetics
  /// Raise the node count (powers of two) when the point is close to the path
  /// relative to path speed x node spacing, so the periodic rule stays spectral.
  bool auto_refine = true;
  int max_nodes = 1 << 18;  ///< cap; refined counts are n_phase * 2^k
};

class DressedPotential {
 public:
  DressedPotential(double Z, TrajectoryKind kind, FieldParams params, PotentialOptions options = {});

  /// Potential energy of an electron at r, hartree.  Throws NonFiniteError if a
  /// quadrature node lands on the path with zero softening.
  double operator()(const Vec3& r) const { return value(r); }
  double value(const Vec3& r) const;

  /// Value and spatial gradient; the integrand gradient is averaged with the
  /// same nodes as the value.
  std::pair<double, Vec3> value_and_gradient(const Vec3& r) const;

  /// Node count the rule uses at r.
  int nodes_used(const Vec3& r) const;

  double charge() const { return Z_; }
  const TrajectoryKind& kind() const { return kind_; }
  const FieldParams& params() const { return params_; }
  const PotentialOptions& options() const { return options_; }
  Extent extent() const { return extent_; }

  /// True when the path degenerates to a point (alpha0 = 0 linear, zero amplitudes).
  bool is_static() const { return static_; }

  /// Copy with a different nuclear charge.
  DressedPotential with_charge(double Z) const;

 private:
  struct Sum {
    double inv = 0.0;
    Vec3 grad = Vec3::Zero();
    double min_dist = 0.0;
    double min_phase = 0.0;
  };
  int required_nodes(const Sum& s, int n) const;
  template <bool WithGradient>
  Sum accumulate(const Vec3& r, int level) const;
  template <bool WithGradient>
  Sum evaluate(const Vec3& r, int* nodes) const;

  double Z_;
  TrajectoryKind kind_;
  FieldParams params_;
  PotentialOptions options_;
  Extent extent_;
  double max_accel_ = 0.0;
  bool static_ = false;

  // Node tables per refinement level (n_phase << level), built on first use
  // and shared between copies.
  struct NodeCache {
    explicit NodeCache(int levels) : once(levels), nodes(levels) {}
    std::vector<std::once_flag> once;
    std::vector<std::vector<Vec3>> nodes;
  };
  const std::vector<Vec3>& nodes_at(int level) const;
  int levels_ = 1;
  std::shared_ptr<NodeCache> cache_;
};

/// y = 0 plane grid, row-major with x fastest: values[iz * nx + ix].
struct PotentialGrid {
  double x_min = 0.0, x_max = 0.0, z_min = 0.0, z_max = 0.0;
  int nx = 0, nz = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> nonfinite;  ///< 1 where the cell hit the path

  double x(int ix) const { return x_min + (x_max - x_min) * ix / (nx - 1); }
  double z(int iz) const { return z_min + (z_max - z_min) * iz / (nz - 1); }
  double at(int ix, int iz) const { return values[static_cast<std::size_t>(iz) * nx + ix]; }
};

/// Fills the grid; `jobs` worker threads split rows.
PotentialGrid potential_grid(const DressedPotential& pot, double x_min, double x_max, double z_min,
                             double z_max, int nx, int nz, int jobs = 1);

/// Strict interior local minima (8-neighbourhood), as (ix, iz) pairs.
std::vector<std::pair<int, int>> grid_local_minima(const PotentialGrid& grid);

}  // namespace kramers
