#include "kramers/scf.hpp"

#include "kramers/detail/cubature.hpp"
#include "kramers/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace kramers::scf {

namespace {

constexpr double kPi = std::numbers::pi;

double primitive_norm(double a) { return std::pow(2.0 * a / kPi, 0.75); }

struct Prim {
  double a;
  double c;  // coefficient times primitive normalisation
  Vec3 center;
};

std::vector<Prim> expand(const FloatingBasis& basis, int mu) {
  const auto& f = basis.functions[mu];
  std::vector<Prim> out;
  out.reserve(f.primitives.size());
  for (const auto& p : f.primitives)
    out.push_back({p.exponent, p.coefficient * primitive_norm(p.exponent), basis.centers[f.center]});
  return out;
}

// Primitive pair of basis functions mu, nu reduced to one product Gaussian.
struct PairPrim {
  double p;
  Vec3 P;
  double k;  // c_a c_b exp(-mu |A-B|^2)
};

std::vector<PairPrim> pair_prims(const std::vector<Prim>& A, const std::vector<Prim>& B) {
  std::vector<PairPrim> out;
  out.reserve(A.size() * B.size());
  for (const auto& a : A)
    for (const auto& b : B) {
      const auto g = gaussian_product_center(a.a, a.center, b.a, b.center);
      out.push_back({g.exponent, g.center, a.c * b.c * g.prefactor});
    }
  return out;
}

// Trajectory node tables n0 * 2^level, built on demand.
class PhaseNodes {
 public:
  PhaseNodes(const DressedPotential& pot, int n0) : pot_(pot), n0_(n0) {}
  const std::vector<Vec3>& level(int l) {
    if (static_cast<int>(levels_.size()) <= l) levels_.resize(l + 1);
    auto& v = levels_[l];
    if (v.empty()) {
      const int n = n0_ << l;
      v.reserve(n);
      for (int k = 0; k < n; ++k) v.push_back(eval_trajectory(pot_.kind(), pot_.params(), kTwoPi * k / n));
    }
    return v;
  }
  int n0() const { return n0_; }

 private:
  const DressedPotential& pot_;
  int n0_;
  std::vector<std::vector<Vec3>> levels_;
};

constexpr int kMaxPhaseLevel = 10;

// < F0(p |P + alpha(phi)|^2) >_phi by the periodic trapezoid rule, doubling
// until the change is below 1e-13 relative.  The integrand is entire in phi.
double phase_boys_average(double p, const Vec3& P, PhaseNodes& nodes, double speed) {
  const double width_nodes = 4.0 * kTwoPi * speed * std::sqrt(p);
  int l = 0;
  while (l < kMaxPhaseLevel && (nodes.n0() << l) < width_nodes) ++l;
  auto average = [&](int level) {
    double s = 0.0;
    for (const auto& a : nodes.level(level)) s += boys_f0(p * (P + a).squaredNorm());
    return s / static_cast<double>(nodes.n0() << level);
  };
  double prev = average(l);
  while (l < kMaxPhaseLevel) {
    const double next = average(++l);
    if (std::abs(next - prev) <= 1e-13 * std::abs(next)) return next;
    prev = next;
  }
  return prev;
}

}  // namespace

void FloatingBasis::validate() const {
  if (centers.empty()) throw Error("basis needs at least one centre");
  if (functions.empty()) throw Error("basis needs at least one function");
  for (const auto& f : functions) {
    if (f.center < 0 || f.center >= static_cast<int>(centers.size()))
      throw Error("basis function refers to a missing centre");
    if (f.primitives.empty()) throw Error("contracted function without primitives");
    for (const auto& p : f.primitives)
      if (!(p.exponent > 0.0) || !std::isfinite(p.coefficient))
        throw Error("primitive exponents must be positive and coefficients finite");
  }
}

void FloatingBasis::normalize() {
  validate();
  for (auto& f : functions) {
    double s = 0.0;
    for (const auto& p : f.primitives)
      for (const auto& q : f.primitives)
        s += p.coefficient * q.coefficient * primitive_norm(p.exponent) * primitive_norm(q.exponent) *
             std::pow(kPi / (p.exponent + q.exponent), 1.5);
    const double scale = 1.0 / std::sqrt(s);
    for (auto& p : f.primitives) p.coefficient *= scale;
  }
}

FloatingBasis FloatingBasis::translated(const Vec3& d) const {
  FloatingBasis b = *this;
  for (auto& c : b.centers) c += d;
  return b;
}

std::vector<Vec3> turning_point_centers(const DressedPotential& pot) {
  std::vector<Vec3> c{Vec3::Zero()};
  constexpr double q = kPi / 4.0;
  for (double phi : {q, 3 * q, 5 * q, 7 * q})
    c.push_back(-eval_trajectory(pot.kind(), pot.params(), phi));
  return c;
}

FloatingBasis even_tempered_basis(const std::vector<Vec3>& centers, double lo, double hi,
                                  int n_primitives) {
  if (n_primitives < 1 || !(lo > 0.0) || !(hi >= lo)) throw Error("bad even-tempered parameters");
  FloatingBasis b;
  b.centers = centers;
  for (int c = 0; c < static_cast<int>(centers.size()); ++c)
    for (int k = 0; k < n_primitives; ++k) {
      const double t = n_primitives == 1 ? 0.0 : static_cast<double>(k) / (n_primitives - 1);
      b.functions.push_back({c, {{lo * std::pow(hi / lo, t), 1.0}}});
    }
  b.normalize();
  return b;
}

FloatingBasis default_basis(const DressedPotential& pot) {
  const double s = pot.charge() >= 2.0 ? 2.0 : 1.0;
  return even_tempered_basis(turning_point_centers(pot), 0.02 * s, 20.0 * s, 6);
}

ProductGaussian gaussian_product_center(double a, const Vec3& A, double b, const Vec3& B) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error("Gaussian exponents must be positive");
  const double p = a + b;
  return {p, std::exp(-a * b / p * (A - B).squaredNorm()), (a * A + b * B) / p};
}

double boys_f0(double t) {
  if (t < 0.0) throw Error("boys_f0 needs t >= 0");
  if (t < 30.0) {
    // F0 = exp(-t) sum_k (2t)^k / (2k+1)!!, all terms positive.
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= 2.0 * t / (2 * k + 1);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::exp(-t) * sum;
  }
  // sqrt(pi/4t) - erfc(sqrt t) sqrt(pi/4t), erfc by its asymptotic series.
  const double inv = 1.0 / (2.0 * t);
  double term = 1.0, series = 1.0;
  for (int k = 1; k < 8; ++k) {
    term *= -(2 * k - 1) * inv;
    series += term;
  }
  return 0.5 * std::sqrt(kPi / t) - std::exp(-t) * inv * series;
}

OneElectron overlap_kinetic(const FloatingBasis& basis, double threshold) {
  basis.validate();
  const int n = basis.size();
  OneElectron out;
  out.S.setZero(n, n);
  out.T.setZero(n, n);
  std::vector<std::vector<Prim>> prims(n);
  for (int i = 0; i < n; ++i) prims[i] = expand(basis, i);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0, t = 0.0;
      for (const auto& a : prims[i])
        for (const auto& b : prims[j]) {
          const double p = a.a + b.a, mu = a.a * b.a / p;
          const double r2 = (a.center - b.center).squaredNorm();
          const double sab = a.c * b.c * std::exp(-mu * r2) * std::pow(kPi / p, 1.5);
          s += sab;
          t += mu * (3.0 - 2.0 * mu * r2) * sab;
        }
      out.S(i, j) = out.S(j, i) = s;
      out.T(i, j) = out.T(j, i) = t;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.S, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues()(0);
  out.linear_dependent = out.min_eigenvalue < threshold;
  return out;
}

Eigen::MatrixXd nuclear_attraction(const FloatingBasis& basis, const DressedPotential& pot) {
  basis.validate();
  if (pot.options().softening != 0.0) throw Error("analytic nuclear attraction needs zero softening");
  const int n = basis.size();
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, n);
  std::vector<std::vector<Prim>> prims(n);
  for (int i = 0; i < n; ++i) prims[i] = expand(basis, i);
  PhaseNodes nodes(pot, std::bit_ceil(static_cast<unsigned>(std::max(pot.options().n_phase, 16))));
  const double speed = trajectory_max_speed(pot.kind(), pot.params());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double v = 0.0;
      for (const auto& pp : pair_prims(prims[i], prims[j])) {
        if (pp.k == 0.0) continue;
        const double avg = pot.is_static() ? boys_f0(pp.p * pp.P.squaredNorm())
                                           : phase_boys_average(pp.p, pp.P, nodes, speed);
        v += pp.k * (2.0 * kPi / pp.p) * avg;
      }
      V(i, j) = V(j, i) = -pot.charge() * v;
    }
  return V;
}

double nuclear_attraction_numeric(const FloatingBasis& basis, int mu, int nu,
                                  const DressedPotential& pot, const CubatureOptions& opt) {
  basis.validate();
  const auto A = expand(basis, mu), B = expand(basis, nu);
  const auto pairs = pair_prims(A, B);

  // Box per axis: product Gaussian +- sigma_box sigma, unioned with the
  // trajectory extent + margin; split at the Gaussian box edges.
  double p_min = pairs.front().p;
  Vec3 Pc = Vec3::Zero();
  double wsum = 0.0;
  for (const auto& pp : pairs) {
    p_min = std::min(p_min, pp.p);
    Pc += std::abs(pp.k) * pp.P;
    wsum += std::abs(pp.k);
  }
  if (wsum > 0.0) Pc /= wsum;
  const double half = opt.sigma_box / std::sqrt(2.0 * p_min);
  const Extent ext = pot.extent();
  const double e[3] = {ext.x, ext.y, ext.z};
  std::vector<double> cuts[3];
  for (int d = 0; d < 3; ++d) {
    const double g_lo = Pc[d] - half, g_hi = Pc[d] + half;
    const double lo = std::min(g_lo, -e[d] - opt.extent_margin);
    const double hi = std::max(g_hi, e[d] + opt.extent_margin);
    cuts[d] = {lo, hi};
    if (g_lo > lo) cuts[d].push_back(g_lo);
    if (g_hi < hi) cuts[d].push_back(g_hi);
    // The path runs through the origin in the symmetry planes; keep nodes off them.
    if (lo < 0.0 && hi > 0.0) cuts[d].push_back(0.0);
    std::sort(cuts[d].begin(), cuts[d].end());
  }

  auto density = [&](const Vec3& r) {
    double s = 0.0;
    for (const auto& a : A)
      for (const auto& b : B)
        s += a.c * b.c * std::exp(-a.a * (r - a.center).squaredNorm() - b.a * (r - b.center).squaredNorm());
    return s;
  };

  std::vector<detail::Box3> boxes;
  for (std::size_t i = 0; i + 1 < cuts[0].size(); ++i)
    for (std::size_t j = 0; j + 1 < cuts[1].size(); ++j)
      for (std::size_t k = 0; k + 1 < cuts[2].size(); ++k)
        boxes.push_back({{{cuts[0][i], cuts[0][i + 1]}, {cuts[1][j], cuts[1][j + 1]}, {cuts[2][k], cuts[2][k + 1]}}});
  const auto r = detail::hcubature(
      [&](double x, double y, double z) {
        const Vec3 pt(x, y, z);
        const double g = density(pt);
        return g == 0.0 ? 0.0 : g * pot.value(pt);
      },
      boxes, opt.rel_tol, 0.0, opt.max_evaluations);
  const double value = r.value;
  const double achieved = value != 0.0 ? r.error / std::abs(value) : r.error;
  if (!std::isfinite(value) || !r.converged)
    throw QuadratureFailure("nuclear attraction cubature missed its tolerance", achieved);
  return value;
}

Eigen::MatrixXd nuclear_attraction_numeric(const FloatingBasis& basis, const DressedPotential& pot,
                                           const CubatureOptions& options) {
  const int n = basis.size();
  Eigen::MatrixXd V(n, n);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) pairs.emplace_back(i, j);
  parallel_for(pairs.size(), options.jobs, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    V(i, j) = V(j, i) = nuclear_attraction_numeric(basis, i, j, pot, options);
  });
  return V;
}

double eri_primitive(double a, const Vec3& A, double b, const Vec3& B, double c, const Vec3& C,
                     double d, const Vec3& D) {
  const auto ab = gaussian_product_center(a, A, b, B);
  const auto cd = gaussian_product_center(c, C, d, D);
  const double p = ab.exponent, q = cd.exponent;
  return 2.0 * std::pow(kPi, 2.5) / (p * q * std::sqrt(p + q)) * ab.prefactor * cd.prefactor *
         boys_f0(p * q / (p + q) * (ab.center - cd.center).squaredNorm());
}

EriTensor::EriTensor(int n) : n_(n), packed_(index(n - 1, n - 1, n - 1, n - 1) + 1, 0.0) {}

std::size_t EriTensor::index(int i, int j, int k, int l) {
  auto pair = [](std::size_t a, std::size_t b) { return a >= b ? a * (a + 1) / 2 + b : b * (b + 1) / 2 + a; };
  return pair(pair(i, j), pair(k, l));
}

std::vector<double> EriTensor::full() const {
  const std::size_t n = n_;
  std::vector<double> out(n * n * n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          out[((i * n + j) * n + k) * n + l] = (*this)(int(i), int(j), int(k), int(l));
  return out;
}

EriTensor eri_tensor(const FloatingBasis& basis) {
  basis.validate();
  const int n = basis.size();
  std::vector<std::vector<Prim>> prims(n);
  for (int i = 0; i < n; ++i) prims[i] = expand(basis, i);
  std::vector<std::vector<PairPrim>> pairs(n * (n + 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) pairs[i * (i + 1) / 2 + j] = pair_prims(prims[i], prims[j]);
  EriTensor g(n);
  const double c0 = 2.0 * std::pow(kPi, 2.5);
  for (int ij = 0; ij < static_cast<int>(pairs.size()); ++ij)
    for (int kl = 0; kl <= ij; ++kl) {
      double v = 0.0;
      for (const auto& x : pairs[ij])
        for (const auto& y : pairs[kl]) {
          const double kk = x.k * y.k;
          if (kk == 0.0) continue;
          const double p = x.p, q = y.p;
          v += c0 / (p * q * std::sqrt(p + q)) * kk * boys_f0(p * q / (p + q) * (x.P - y.P).squaredNorm());
        }
      g.at_packed(ij, kl) = v;
    }
  return g;
}

double eri(const FloatingBasis& basis, int i, int j, int k, int l) {
  double v = 0.0;
  for (const auto& a : expand(basis, i))
    for (const auto& b : expand(basis, j))
      for (const auto& c : expand(basis, k))
        for (const auto& d : expand(basis, l))
          v += a.c * b.c * c.c * d.c * eri_primitive(a.a, a.center, b.a, b.center, c.a, c.center, d.a, d.center);
  return v;
}

}  // namespace kramers::scf
