#pragma once

// Phase-averaged 1-D box potential V(z) = pi for |z| <= 1, else 0: the
// analytic effective potential, a numeric averaging route, the figure-8
// correction and a two-colour superposition in the x-z plane.

#include "kramers/trajectory.hpp"

#include <functional>
#include <span>
#include <vector>

namespace kramers::box1d {

inline constexpr double kHeight = std::numbers::pi;
inline constexpr double kHalfWidth = 1.0;

double box_potential(double z);

/// Closed form: arccos(clip(-(1+z)/a0)) - arccos(clip((1-z)/a0)).
double effective_analytic(double z, double alpha0);

/// Trapezoid average over the phase circle with box-edge crossings resolved
/// inside each sub-interval.
double effective_numeric(double z, double alpha0, int n_phase = 4096);

enum class RelativisticMode {
  BoxOfDistance,    ///< V_box(sqrt((z + a0 cos W)^2 + a0^4 af^2 sin^2 2W)), default
  LiteralDistance,  ///< average of the distance expression itself (debug)
};

double effective_relativistic(double z, double alpha0, double alpha_f = kFineStructure,
                              int n_phase = 4096,
                              RelativisticMode mode = RelativisticMode::BoxOfDistance);

enum class MulticolorBase { Box, Coulomb };

/// Values on the x-z grid, row-major with x fastest: values[iz * nx + ix].
struct Grid2D {
  std::vector<double> x, z;
  std::vector<double> values;
  double at(std::size_t ix, std::size_t iz) const { return values[iz * x.size() + ix]; }
};

/// Averages the base potential over alpha(t) = a0 cos(wt) e_x + a1 sin(4wt) e_z.
/// Box: radial box (pi inside x^2 + z^2 <= 1).  Coulomb: -Z/|r| in the y = 0
/// plane, through DressedPotential.
Grid2D multicolor_effective(std::span<const double> z_grid, std::span<const double> x_grid,
                            double alpha0, double alpha1, int n_phase = 4096,
                            MulticolorBase base = MulticolorBase::Box, double Z = 1.0);

/// Single-point version of multicolor_effective.
double multicolor_point(double x, double z, double alpha0, double alpha1, int n_phase = 4096,
                        MulticolorBase base = MulticolorBase::Box, double Z = 1.0);

/// The two-colour trajectory as a Multicolor kind.
traj::Multicolor two_color_trajectory(double alpha0, double alpha1);

/// Fraction of [0, 2 pi) on which inside(W) <= 0, with n_phase base nodes,
/// node-local extrema of `inside` located and sign changes bisected.
double phase_fraction_inside(const std::function<double(double)>& inside, int n_phase);

/// Strict local maxima / minima of a sampled curve (plateaus ignored).
int count_local_maxima(std::span<const double> values, double tol = 1e-12);
int count_local_minima(std::span<const double> values, double tol = 1e-12);

}  // namespace kramers::box1d
