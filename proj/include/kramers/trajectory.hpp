#pragma once

// Closed-form periodic quiver trajectories of a free electron in a laser
// field.  Everything is a function of the phase phi = omega t; drift motion
// is dropped.  Laser propagates along y, E along z, B along x.

#include "kramers/types.hpp"

#include <string>
#include <variant>
#include <vector>

namespace kramers {

struct FieldParams {
  double alpha0 = 0.0;  ///< quiver amplitude E0/omega^2, bohr
  double omega = 1.0;   ///< angular frequency, atomic units
  double alpha_f = kFineStructure;
  /// Prefactor of the figure-8 transverse amplitude coeff * alpha0^2 * alpha_f.
  /// 1 is the atomic-unit closed form; omega/8 is the Newton-Lorentz result.
  double x_amp_coeff = 1.0;

  /// Peak field E0 = alpha0 * omega^2.
  double field_strength() const { return alpha0 * omega * omega; }
  /// Normalised vector potential Q0 = E0 / (omega c), with c = 1/alpha_f.
  double q0() const { return field_strength() * alpha_f / omega; }

  void validate() const;
};

namespace traj {

struct NonRelLinear {};

/// Figure-8: (-coeff alpha0^2 alpha_f sin 2phi, 0, alpha0 cos phi).
struct RelLinear {};

/// Electric + magnetic elliptical components; amplitudes are given directly
/// and do not scale with alpha0.
struct Elliptical {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
};

struct Circular {
  double eps = 0.0;
  double beta = 0.0;
};

enum class Axis { X = 0, Y = 1, Z = 2 };
enum class Shape { Cos, Sin };

struct Tone {
  double amplitude = 0.0;
  Axis axis = Axis::Z;
  int harmonic = 1;
  Shape shape = Shape::Cos;
};

/// Superposition of single-axis harmonics, e.g. a0 cos(phi) x + a1 sin(4 phi) z.
struct Multicolor {
  std::vector<Tone> tones;
};

}  // namespace traj

using TrajectoryKind = std::variant<traj::NonRelLinear, traj::RelLinear, traj::Elliptical,
                                    traj::Circular, traj::Multicolor>;

void validate(const TrajectoryKind& kind);

/// Short identifier: "nonrel", "rel", "elliptical", "circular", "multicolor".
std::string kind_name(const TrajectoryKind& kind);

/// Parses the identifiers produced by kind_name for the parameter-free kinds.
TrajectoryKind parse_kind(const std::string& name);

Vec3 eval_trajectory(const TrajectoryKind& kind, const FieldParams& params, double phase);

/// d alpha / d phase.
Vec3 trajectory_velocity(const TrajectoryKind& kind, const FieldParams& params, double phase);

/// Half-widths of the axis-aligned box containing the path.
struct Extent {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double max() const;
};

Extent trajectory_extent(const TrajectoryKind& kind, const FieldParams& params);

/// Upper bound on |d alpha / d phase| over a period.
double trajectory_max_speed(const TrajectoryKind& kind, const FieldParams& params);

/// Upper bound on |d^2 alpha / d phase^2| over a period.
double trajectory_max_acceleration(const TrajectoryKind& kind, const FieldParams& params);

}  // namespace kramers
