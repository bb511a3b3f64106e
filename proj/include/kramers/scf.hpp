#pragma once

// D = 3 unrestricted Hartree-Fock with floating s-type Gaussians placed on
// the trajectory's potential wells.

#include "kramers/dressed_potential.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace kramers::scf {

struct Primitive {
  double exponent = 1.0;     ///< bohr^-2
  double coefficient = 1.0;  ///< multiplies the normalised primitive
};

struct ContractedS {
  int center = 0;
  std::vector<Primitive> primitives;
};

struct FloatingBasis {
  std::vector<Vec3> centers;
  std::vector<ContractedS> functions;

  int size() const { return static_cast<int>(functions.size()); }
  /// Throws Error on non-positive exponents, bad centre indices or an empty basis.
  void validate() const;
  /// Rescales every contraction to unit self-overlap.
  void normalize();
  /// Same basis with every centre shifted by d.
  FloatingBasis translated(const Vec3& d) const;
};

/// Origin plus the wells r = -alpha(phi) at phi = pi/4, 3pi/4, 5pi/4, 7pi/4.
std::vector<Vec3> turning_point_centers(const DressedPotential& pot);

/// n_primitives even-tempered exponents from lo to hi, one uncontracted
/// function per exponent per centre.
FloatingBasis even_tempered_basis(const std::vector<Vec3>& centers, double lo, double hi,
                                  int n_primitives);

/// 6 primitives spanning 0.02-20 (Z < 2) or 0.04-40 (Z >= 2) on every
/// turning-point centre.
FloatingBasis default_basis(const DressedPotential& pot);

struct ProductGaussian {
  double exponent = 0.0;
  double prefactor = 0.0;
  Vec3 center = Vec3::Zero();
};

ProductGaussian gaussian_product_center(double a, const Vec3& A, double b, const Vec3& B);

/// F0(t) = int_0^1 exp(-t u^2) du.
double boys_f0(double t);

struct OneElectron {
  Eigen::MatrixXd S, T;
  double min_eigenvalue = 0.0;
  bool linear_dependent = false;  ///< min eigenvalue of S below the threshold
};

OneElectron overlap_kinetic(const FloatingBasis& basis, double threshold = 1e-8);

/// V_mu,nu = <mu| V_dressed |nu> with the phase average taken outside the
/// spatial integral: -Z K (2 pi / p) < F0(p |R_P + alpha(phi)|^2) >_phi.
Eigen::MatrixXd nuclear_attraction(const FloatingBasis& basis, const DressedPotential& pot);

struct CubatureOptions {
  double rel_tol = 1e-7;
  double sigma_box = 8.0;      ///< half-width of the box in product-Gaussian sigmas
  double extent_margin = 5.0;  ///< bohr added around the trajectory extent
  long max_evaluations = 50'000'000;
  int jobs = 1;  ///< threads over matrix elements
};

/// The same element by global adaptive 3-D cubature of phi_mu V phi_nu over a
/// box around the product Gaussian and the trajectory.  Throws QuadratureFailure.
double nuclear_attraction_numeric(const FloatingBasis& basis, int mu, int nu,
                                  const DressedPotential& pot, const CubatureOptions& options = {});

Eigen::MatrixXd nuclear_attraction_numeric(const FloatingBasis& basis, const DressedPotential& pot,
                                           const CubatureOptions& options = {});

/// (ab|cd) over unnormalised primitives exp(-a|r-A|^2) etc.
double eri_primitive(double a, const Vec3& A, double b, const Vec3& B, double c, const Vec3& C,
                     double d, const Vec3& D);

/// Two-electron integrals (ij|kl) stored once per 8-fold symmetry class.
class EriTensor {
 public:
  EriTensor() = default;
  explicit EriTensor(int n);
  int size() const { return n_; }
  double operator()(int i, int j, int k, int l) const { return packed_[index(i, j, k, l)]; }
  double& at(int i, int j, int k, int l) { return packed_[index(i, j, k, l)]; }
  /// Element for pair indices ij = i(i+1)/2 + j (i >= j) and kl, ij >= kl.
  double& at_packed(std::size_t ij, std::size_t kl) { return packed_[ij * (ij + 1) / 2 + kl]; }
  std::size_t packed_size() const { return packed_.size(); }
  /// Dense n^4 copy, row-major in (i, j, k, l).
  std::vector<double> full() const;
  static std::size_t index(int i, int j, int k, int l);

 private:
  int n_ = 0;
  std::vector<double> packed_;
};

EriTensor eri_tensor(const FloatingBasis& basis);
double eri(const FloatingBasis& basis, int i, int j, int k, int l);

enum class NuclearRoute { PhaseBoys, Cubature };

struct ScfOptions {
  double damping = 0.3;  ///< weight of the previous density
  double level_shift = 0.0;
  int max_iterations = 500;
  double energy_tol = 1e-6;
  double density_tol = 1e-6;
  double orth_threshold = 1e-8;
  NuclearRoute route = NuclearRoute::PhaseBoys;
  CubatureOptions cubature;
  /// Also start from a HOMO/LUMO-rotated spin-broken guess and keep the lower energy.
  bool spin_broken_guess = true;
};

struct ScfState {
  Eigen::MatrixXd S, T, V, Hcore;
  EriTensor eri;
  Eigen::MatrixXd Pa, Pb, Ca, Cb;
  Eigen::VectorXd eps_a, eps_b;
  double energy = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_trace;
  int n_alpha = 0, n_beta = 0;
  double mass = 1.0;
  int kept_functions = 0;  ///< after canonical orthogonalisation
  bool spin_broken = false;  ///< the spin-broken guess won
};

/// X = U w^-1/2 over eigenvalues of S above threshold.
Eigen::MatrixXd canonical_orthogonalizer(const Eigen::MatrixXd& S, double threshold = 1e-8);

/// Lowest eigenvalue of the canonically orthogonalised H^core.
double lowest_core_eigenvalue(const Eigen::MatrixXd& S, const Eigen::MatrixXd& Hcore,
                              double threshold = 1e-8);

/// Throws ScfNotConverged (with the energy trace) or LinearDependence.
ScfState scf_solve(const FloatingBasis& basis, const DressedPotential& pot, int n_alpha, int n_beta,
                   double mass = 1.0, const ScfOptions& options = {});

/// Spin-summed Mulliken populations per basis centre.
std::vector<double> mulliken(const ScfState& state, const FloatingBasis& basis);

/// Total density on the plane y = y0, values[iz * nx + ix].
struct DensityGrid {
  double y0 = 0.0;
  double x_min = 0.0, x_max = 0.0, z_min = 0.0, z_max = 0.0;
  int nx = 0, nz = 0;
  std::vector<double> values;
  double x(int ix) const { return x_min + (x_max - x_min) * ix / (nx - 1); }
  double z(int iz) const { return z_min + (z_max - z_min) * iz / (nz - 1); }
  double at(int ix, int iz) const { return values[static_cast<std::size_t>(iz) * nx + ix]; }
};

double density_at(const ScfState& state, const FloatingBasis& basis, const Vec3& r);

DensityGrid density_grid(const ScfState& state, const FloatingBasis& basis, double y0, double x_min,
                         double x_max, double z_min, double z_max, int nx, int nz);

}  // namespace kramers::scf
