#include "kramers/scf.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>

namespace kramers::scf {

Eigen::MatrixXd canonical_orthogonalizer(const Eigen::MatrixXd& S, double threshold) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  const auto& w = es.eigenvalues();
  int keep = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w[i] > threshold) ++keep;
  Eigen::MatrixXd X(S.rows(), keep);
  int c = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w[i] > threshold) X.col(c++) = es.eigenvectors().col(i) / std::sqrt(w[i]);
  return X;
}

double lowest_core_eigenvalue(const Eigen::MatrixXd& S, const Eigen::MatrixXd& Hcore, double threshold) {
  const Eigen::MatrixXd X = canonical_orthogonalizer(S, threshold);
  if (X.cols() == 0) throw LinearDependence("overlap matrix has no eigenvalue above threshold", 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X.transpose() * Hcore * X, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

namespace {

struct Spin {
  Eigen::MatrixXd P, C;
  Eigen::VectorXd eps;
};

struct Run {
  Eigen::MatrixXd Pa, Pb, Ca, Cb;
  Eigen::VectorXd eps_a, eps_b;
  double energy = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

// Diagonalises F in the orthogonal basis and returns the aufbau density.
Spin occupy(const Eigen::MatrixXd& F, const Eigen::MatrixXd& X, int n_occ, const Eigen::MatrixXd* P_prev,
            const Eigen::MatrixXd& S, double shift) {
  Eigen::MatrixXd Fx = X.transpose() * F * X;
  if (shift != 0.0 && P_prev) {
    // Raise the virtual space of the previous density by `shift`.
    const Eigen::MatrixXd Px = X.transpose() * S * (*P_prev) * S * X;
    Fx += shift * (Eigen::MatrixXd::Identity(Fx.rows(), Fx.cols()) - Px);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Fx);
  Spin s;
  s.C = X * es.eigenvectors();
  s.eps = es.eigenvalues();
  s.P = s.C.leftCols(n_occ) * s.C.leftCols(n_occ).transpose();
  return s;
}

void build_fock(const std::vector<double>& g, int n, const Eigen::MatrixXd& H, const Eigen::MatrixXd& Pa,
                const Eigen::MatrixXd& Pb, Eigen::MatrixXd& Fa, Eigen::MatrixXd& Fb) {
  const Eigen::MatrixXd Pt = Pa + Pb;
  Fa = H;
  Fb = H;
  const std::size_t N = n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double J = 0.0, Ka = 0.0, Kb = 0.0;
      for (int k = 0; k < n; ++k) {
        const double* gij = &g[((i * N + j) * N + k) * N];
        const double* gik = &g[((i * N + k) * N + j) * N];
        for (int l = 0; l < n; ++l) {
          J += gij[l] * Pt(k, l);
          Ka += gik[l] * Pa(k, l);
          Kb += gik[l] * Pb(k, l);
        }
      }
      Fa(i, j) += J - Ka;
      Fb(i, j) += J - Kb;
      Fa(j, i) = Fa(i, j);
      Fb(j, i) = Fb(i, j);
    }
}

double uhf_energy(const Eigen::MatrixXd& H, const Eigen::MatrixXd& Pa, const Eigen::MatrixXd& Pb,
                  const Eigen::MatrixXd& Fa, const Eigen::MatrixXd& Fb) {
  return 0.5 * ((Pa + Pb).cwiseProduct(H).sum() + Pa.cwiseProduct(Fa).sum() + Pb.cwiseProduct(Fb).sum());
}

Run iterate(const Eigen::MatrixXd& H, const Eigen::MatrixXd& S, const Eigen::MatrixXd& X,
            const std::vector<double>& g, int n_alpha, int n_beta, Eigen::MatrixXd Pa,
            Eigen::MatrixXd Pb, const ScfOptions& opt) {
  const int n = static_cast<int>(H.rows());
  Run run;
  Eigen::MatrixXd Fa, Fb;
  double e_old = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opt.max_iterations; ++it) {
    build_fock(g, n, H, Pa, Pb, Fa, Fb);
    const double e = uhf_energy(H, Pa, Pb, Fa, Fb);
    run.trace.push_back(e);
    const Spin a = occupy(Fa, X, n_alpha, &Pa, S, opt.level_shift);
    const Spin b = occupy(Fb, X, n_beta, &Pb, S, opt.level_shift);
    const double rms = std::sqrt(((a.P - Pa).squaredNorm() + (b.P - Pb).squaredNorm()) / (n * n));
    run.iterations = it;
    run.Ca = a.C;
    run.Cb = b.C;
    run.eps_a = a.eps;
    run.eps_b = b.eps;
    if (std::abs(e - e_old) < opt.energy_tol && rms < opt.density_tol) {
      run.converged = true;
      Pa = a.P;
      Pb = b.P;
      break;
    }
    e_old = e;
    Pa = (1.0 - opt.damping) * a.P + opt.damping * Pa;
    Pb = (1.0 - opt.damping) * b.P + opt.damping * Pb;
  }
  build_fock(g, n, H, Pa, Pb, Fa, Fb);
  run.energy = uhf_energy(H, Pa, Pb, Fa, Fb);
  run.Pa = Pa;
  run.Pb = Pb;
  return run;
}

}  // namespace

ScfState scf_solve(const FloatingBasis& basis, const DressedPotential& pot, int n_alpha, int n_beta,
                   double mass, const ScfOptions& opt) {
  basis.validate();
  const int n = basis.size();
  if (n_alpha < 0 || n_beta < 0 || n_alpha + n_beta < 1) throw Error("need at least one electron");
  if (n_alpha + n_beta > 2 * n) throw Error("more electrons than spin orbitals");
  if (!(mass > 0.0)) throw Error("mass multiplier must be positive");
  if (!(opt.damping >= 0.0 && opt.damping < 1.0)) throw Error("damping must lie in [0, 1)");

  ScfState st;
  const OneElectron one = overlap_kinetic(basis, opt.orth_threshold);
  st.S = one.S;
  st.T = one.T;
  st.V = opt.route == NuclearRoute::PhaseBoys ? nuclear_attraction(basis, pot)
                                               : nuclear_attraction_numeric(basis, pot, opt.cubature);
  st.Hcore = st.T / mass + st.V;
  st.eri = eri_tensor(basis);
  st.n_alpha = n_alpha;
  st.n_beta = n_beta;
  st.mass = mass;

  const Eigen::MatrixXd X = canonical_orthogonalizer(st.S, opt.orth_threshold);
  st.kept_functions = static_cast<int>(X.cols());
  if (st.kept_functions < std::max(n_alpha, n_beta))
    throw LinearDependence("too few independent functions after pruning", one.min_eigenvalue);

  const std::vector<double> g = st.eri.full();
  const Spin core = occupy(st.Hcore, X, 0, nullptr, st.S, 0.0);
  auto density = [](const Eigen::MatrixXd& C, int k) -> Eigen::MatrixXd {
    return C.leftCols(k) * C.leftCols(k).transpose();
  };

  std::vector<Run> runs;
  runs.push_back(iterate(st.Hcore, st.S, X, g, n_alpha, n_beta, density(core.C, n_alpha),
                         density(core.C, n_beta), opt));
  const int homo = std::max(n_alpha, n_beta) - 1;
  if (opt.spin_broken_guess && n_alpha > 0 && n_beta > 0 && homo + 1 < st.kept_functions) {
    Eigen::MatrixXd Ca = core.C, Cb = core.C;
    const double c = std::cos(std::numbers::pi / 4.0), s = std::sin(std::numbers::pi / 4.0);
    Ca.col(homo) = c * core.C.col(homo) + s * core.C.col(homo + 1);
    Cb.col(homo) = c * core.C.col(homo) - s * core.C.col(homo + 1);
    runs.push_back(iterate(st.Hcore, st.S, X, g, n_alpha, n_beta, density(Ca, n_alpha), density(Cb, n_beta), opt));
  }

  int best = -1;
  for (int r = 0; r < static_cast<int>(runs.size()); ++r)
    if (runs[r].converged && (best < 0 || runs[r].energy < runs[best].energy)) best = r;
  if (best < 0) throw ScfNotConverged("SCF did not converge", runs.front().trace);

  Run& r = runs[best];
  st.Pa = r.Pa;
  st.Pb = r.Pb;
  st.Ca = r.Ca;
  st.Cb = r.Cb;
  st.eps_a = r.eps_a;
  st.eps_b = r.eps_b;
  st.energy = r.energy;
  st.iterations = r.iterations;
  st.converged = true;
  st.energy_trace = r.trace;
  st.spin_broken = best == 1;
  return st;
}

std::vector<double> mulliken(const ScfState& state, const FloatingBasis& basis) {
  const Eigen::MatrixXd PS = (state.Pa + state.Pb) * state.S;
  std::vector<double> pop(basis.centers.size(), 0.0);
  for (int i = 0; i < basis.size(); ++i) pop[basis.functions[i].center] += PS(i, i);
  return pop;
}

double density_at(const ScfState& state, const FloatingBasis& basis, const Vec3& r) {
  const int n = basis.size();
  Eigen::VectorXd phi(n);
  for (int i = 0; i < n; ++i) {
    const auto& f = basis.functions[i];
    const double r2 = (r - basis.centers[f.center]).squaredNorm();
    double v = 0.0;
    for (const auto& p : f.primitives)
      v += p.coefficient * std::pow(2.0 * p.exponent / std::numbers::pi, 0.75) * std::exp(-p.exponent * r2);
    phi[i] = v;
  }
  return phi.dot((state.Pa + state.Pb) * phi);
}

DensityGrid density_grid(const ScfState& state, const FloatingBasis& basis, double y0, double x_min,
                         double x_max, double z_min, double z_max, int nx, int nz) {
  if (nx < 2 || nz < 2) throw Error("density grid needs nx, nz >= 2");
  DensityGrid g{y0, x_min, x_max, z_min, z_max, nx, nz, {}};
  g.values.resize(static_cast<std::size_t>(nx) * nz);
  for (int iz = 0; iz < nz; ++iz)
    for (int ix = 0; ix < nx; ++ix)
      g.values[static_cast<std::size_t>(iz) * nx + ix] = density_at(state, basis, {g.x(ix), y0, g.z(iz)});
  return g;
}

}  // namespace kramers::scf
