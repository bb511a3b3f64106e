#pragma once

// D -> infinity dimensional-scaling energy functionals.  Electrons sit at
// fixed points; the large-D kinetic term survives as a centrifugal 1/(2 m rho^2).

#include "kramers/dressed_potential.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace kramers::dscale {

enum class Hamiltonian {
  CentralForce,  ///< kinetic 1/(2 m r^2), repulsion 1/sqrt(r_i^2 + r_j^2)
  Diatomic,      ///< kinetic 1/(2 m (x^2 + y^2)), repulsion with rho_i^2 + rho_j^2 + dz^2
  Planar,        ///< kinetic 1/(2 m y^2), repulsion with dx^2 + dz^2 + y_i^2 + y_j^2
};

/// "cf", "da", "planar".
std::string hamiltonian_name(Hamiltonian h);
Hamiltonian parse_hamiltonian(const std::string& name);

struct ElectronConfiguration {
  std::vector<Vec3> positions;

  int size() const { return static_cast<int>(positions.size()); }
  Eigen::VectorXd flat() const;
  static ElectronConfiguration from_flat(const Eigen::VectorXd& x);
  /// (x, y, z) -> (x, y, -z) for every electron.
  ElectronConfiguration mirrored_z() const;
  /// Same configuration without electron i.
  ElectronConfiguration without(int i) const;
};

struct EnergyTerms {
  double kinetic = 0.0;
  double external = 0.0;
  double repulsion = 0.0;
  double total() const { return kinetic + external + repulsion; }
};

inline constexpr double kDefaultDegeneracyTol = 1e-12;

/// Throws DegenerateConfiguration when a kinetic denominator is below
/// `degeneracy_tol`.  `mass` divides the kinetic term only.
EnergyTerms energy_terms(Hamiltonian h, const ElectronConfiguration& config,
                         const DressedPotential& pot, double mass = 1.0,
                         double degeneracy_tol = kDefaultDegeneracyTol);

double energy(Hamiltonian h, const ElectronConfiguration& config, const DressedPotential& pot,
              double mass = 1.0, double degeneracy_tol = kDefaultDegeneracyTol);

/// Analytic gradient, laid out as (x_0, y_0, z_0, x_1, ...).
Eigen::VectorXd gradient(Hamiltonian h, const ElectronConfiguration& config,
                         const DressedPotential& pot, double mass = 1.0,
                         double degeneracy_tol = kDefaultDegeneracyTol);

double energy_and_gradient(Hamiltonian h, const ElectronConfiguration& config,
                           const DressedPotential& pot, double mass, Eigen::VectorXd* grad,
                           double degeneracy_tol = kDefaultDegeneracyTol);

struct MinimizeOptions {
  int restarts = 24;
  std::uint64_t seed = 0;
  double gradient_tol = 1e-8;
  int max_iterations = 2000;
  int jobs = 1;
  double degeneracy_tol = kDefaultDegeneracyTol;
  /// Extra starting points (e.g. the previous sweep point's minimiser) tried
  /// before the random restarts.  Configurations with a different electron
  /// count are ignored.
  std::vector<ElectronConfiguration> warm_starts;
  /// Drop electrons whose removal does not raise the energy and re-minimise.
  bool drop_unbound = true;
};

struct GroundState {
  double energy = 0.0;
  ElectronConfiguration config;  ///< bound electrons only
  int n_restarts_used = 0;
  bool converged = false;
  double grad_norm = 0.0;
  int n_bound = 0;
  /// Best minimum found with all N electrons kept, and its configuration.
  double localized_energy = 0.0;
  ElectronConfiguration localized_config;
};

/// Seed sites: origin, the four figure-8 turning points (phi = odd pi/4) and
/// the two tips (phi = 0, pi), as electron positions r = -alpha(phi).
std::vector<Vec3> seed_sites(const DressedPotential& pot);

/// Multistart local minimisation over 3N coordinates.  Deterministic for a
/// fixed seed regardless of `jobs`.
GroundState minimize(Hamiltonian h, int N, const DressedPotential& pot, double mass,
                     const MinimizeOptions& options = {});

/// Local minimisation from one start (no restarts, no electron dropping).
GroundState minimize_from(Hamiltonian h, const ElectronConfiguration& start,
                          const DressedPotential& pot, double mass,
                          const MinimizeOptions& options = {});

/// E(N) - E(N-1), E(0) = 0.  E(N) is capped at E(N-1) (an unbound electron
/// dissociates), so an unbound electron gives exactly 0.
double binding_energy(Hamiltonian h, int N, const DressedPotential& pot, double mass,
                      const MinimizeOptions& options = {});

/// Scales a configuration from the alpha0 of one sweep point to the next:
/// x and z by the amplitude ratio, y by its square root.
ElectronConfiguration rescale_configuration(const ElectronConfiguration& config, double from_alpha0,
                                            double to_alpha0);

}  // namespace kramers::dscale
