#include "kramers/dscale.hpp"

#include "kramers/detail/minimizer.hpp"
#include "kramers/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace kramers::dscale {

std::string hamiltonian_name(Hamiltonian h) {
  switch (h) {
    case Hamiltonian::CentralForce: return "cf";
    case Hamiltonian::Diatomic: return "da";
    case Hamiltonian::Planar: return "planar";
  }
  return "?";
}

Hamiltonian parse_hamiltonian(const std::string& name) {
  if (name == "cf") return Hamiltonian::CentralForce;
  if (name == "da") return Hamiltonian::Diatomic;
  if (name == "planar") return Hamiltonian::Planar;
  throw Error("unknown hamiltonian '" + name + "' (expected cf, da or planar)");
}

Eigen::VectorXd ElectronConfiguration::flat() const {
  Eigen::VectorXd x(3 * positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) x.segment<3>(3 * i) = positions[i];
  return x;
}

ElectronConfiguration ElectronConfiguration::from_flat(const Eigen::VectorXd& x) {
  if (x.size() % 3 != 0) throw Error("configuration vector length must be a multiple of 3");
  ElectronConfiguration c;
  for (Eigen::Index i = 0; i < x.size() / 3; ++i) c.positions.push_back(x.segment<3>(3 * i));
  return c;
}

ElectronConfiguration ElectronConfiguration::mirrored_z() const {
  ElectronConfiguration c = *this;
  for (auto& p : c.positions) p.z() = -p.z();
  return c;
}

ElectronConfiguration ElectronConfiguration::without(int i) const {
  ElectronConfiguration c = *this;
  c.positions.erase(c.positions.begin() + i);
  return c;
}

namespace {

// Kinetic denominator rho^2 for one electron and d(rho^2)/d(position).
double kinetic_rho2(Hamiltonian h, const Vec3& p, Vec3* d) {
  switch (h) {
    case Hamiltonian::Planar:
      if (d) *d = {0.0, 2.0 * p.y(), 0.0};
      return p.y() * p.y();
    case Hamiltonian::Diatomic:
      if (d) *d = {2.0 * p.x(), 2.0 * p.y(), 0.0};
      return p.x() * p.x() + p.y() * p.y();
    case Hamiltonian::CentralForce:
      if (d) *d = 2.0 * p;
      return p.squaredNorm();
  }
  return 0.0;
}

// Squared pair distance Q_ij; dQ/dp_i written to di (dQ/dp_j to dj).
double pair_q(Hamiltonian h, const Vec3& a, const Vec3& b, Vec3* di, Vec3* dj) {
  switch (h) {
    case Hamiltonian::Planar: {
      const double dx = a.x() - b.x(), dz = a.z() - b.z();
      if (di) {
        *di = {2.0 * dx, 2.0 * a.y(), 2.0 * dz};
        *dj = {-2.0 * dx, 2.0 * b.y(), -2.0 * dz};
      }
      return dx * dx + dz * dz + a.y() * a.y() + b.y() * b.y();
    }
    case Hamiltonian::Diatomic: {
      const double dz = a.z() - b.z();
      if (di) {
        *di = {2.0 * a.x(), 2.0 * a.y(), 2.0 * dz};
        *dj = {2.0 * b.x(), 2.0 * b.y(), -2.0 * dz};
      }
      return a.x() * a.x() + a.y() * a.y() + b.x() * b.x() + b.y() * b.y() + dz * dz;
    }
    case Hamiltonian::CentralForce:
      if (di) {
        *di = 2.0 * a;
        *dj = 2.0 * b;
      }
      return a.squaredNorm() + b.squaredNorm();
  }
  return 0.0;
}

double evaluate(Hamiltonian h, const ElectronConfiguration& config, const DressedPotential& pot,
                double mass, double tol, EnergyTerms* terms, Eigen::VectorXd* grad) {
  if (!(mass > 0.0)) throw Error("mass multiplier must be positive");
  const auto& p = config.positions;
  const int n = config.size();
  EnergyTerms t;
  if (grad) grad->setZero(3 * n);
  for (int i = 0; i < n; ++i) {
    Vec3 d;
    const double rho2 = kinetic_rho2(h, p[i], grad ? &d : nullptr);
    if (!(rho2 >= tol)) throw DegenerateConfiguration("kinetic denominator vanished for electron " + std::to_string(i));
    t.kinetic += 0.5 / (mass * rho2);
    if (grad) grad->segment<3>(3 * i) += (-0.5 / (mass * rho2 * rho2)) * d;
    if (grad) {
      const auto [v, g] = pot.value_and_gradient(p[i]);
      t.external += v;
      grad->segment<3>(3 * i) += g;
    } else {
      t.external += pot.value(p[i]);
    }
    for (int j = i + 1; j < n; ++j) {
      Vec3 di, dj;
      const double q = pair_q(h, p[i], p[j], grad ? &di : nullptr, grad ? &dj : nullptr);
      if (!(q > 0.0)) throw DegenerateConfiguration("coincident electrons");
      const double inv = 1.0 / std::sqrt(q);
      t.repulsion += inv;
      if (grad) {
        const double c = -0.5 * inv * inv * inv;
        grad->segment<3>(3 * i) += c * di;
        grad->segment<3>(3 * j) += c * dj;
      }
    }
  }
  if (terms) *terms = t;
  return t.total();
}

double marginal_energy(Hamiltonian h, const ElectronConfiguration& c, int i, double e_all,
                       const DressedPotential& pot, double mass, double tol) {
  return e_all - evaluate(h, c.without(i), pot, mass, tol, nullptr, nullptr);
}

}  // namespace

EnergyTerms energy_terms(Hamiltonian h, const ElectronConfiguration& config,
                         const DressedPotential& pot, double mass, double degeneracy_tol) {
  EnergyTerms t;
  evaluate(h, config, pot, mass, degeneracy_tol, &t, nullptr);
  return t;
}

double energy(Hamiltonian h, const ElectronConfiguration& config, const DressedPotential& pot,
              double mass, double degeneracy_tol) {
  return evaluate(h, config, pot, mass, degeneracy_tol, nullptr, nullptr);
}

Eigen::VectorXd gradient(Hamiltonian h, const ElectronConfiguration& config,
                         const DressedPotential& pot, double mass, double degeneracy_tol) {
  Eigen::VectorXd g;
  evaluate(h, config, pot, mass, degeneracy_tol, nullptr, &g);
  return g;
}

double energy_and_gradient(Hamiltonian h, const ElectronConfiguration& config,
                           const DressedPotential& pot, double mass, Eigen::VectorXd* grad,
                           double degeneracy_tol) {
  return evaluate(h, config, pot, mass, degeneracy_tol, nullptr, grad);
}

std::vector<Vec3> seed_sites(const DressedPotential& pot) {
  std::vector<Vec3> sites{Vec3::Zero()};
  if (pot.is_static()) return sites;
  constexpr double q = std::numbers::pi / 4.0;
  for (double phi : {q, 3 * q, 5 * q, 7 * q, 0.0, 4 * q})
    sites.push_back(-eval_trajectory(pot.kind(), pot.params(), phi));
  return sites;
}

GroundState minimize_from(Hamiltonian h, const ElectronConfiguration& start,
                          const DressedPotential& pot, double mass, const MinimizeOptions& options) {
  GroundState gs;
  gs.n_restarts_used = 1;
  if (start.size() == 0) {
    gs.converged = true;
    return gs;
  }
  const detail::Objective f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    return evaluate(h, ElectronConfiguration::from_flat(x), pot, mass, options.degeneracy_tol, nullptr, g);
  };
  detail::BfgsOptions bo;
  bo.gradient_tol = options.gradient_tol;
  bo.max_iterations = options.max_iterations;
  const auto r = detail::bfgs_minimize(f, start.flat(), bo);
  gs.config = ElectronConfiguration::from_flat(r.x);
  // Energy is even in each y when the path has no y extent.
  if (pot.extent().y == 0.0)
    for (auto& p : gs.config.positions) p.y() = std::abs(p.y());
  gs.energy = r.f;
  gs.grad_norm = r.grad_norm;
  gs.converged = r.converged;
  gs.n_bound = gs.config.size();
  gs.localized_energy = gs.energy;
  gs.localized_config = gs.config;
  return gs;
}

namespace {

// Repeatedly removes the least bound electron while its removal does not
// raise the energy, re-minimising the remainder each time.
GroundState drop_unbound(Hamiltonian h, GroundState gs, const DressedPotential& pot, double mass,
                         const MinimizeOptions& options) {
  const double localized = gs.localized_energy;
  const auto localized_config = gs.localized_config;
  while (gs.config.size() > 0) {
    int worst = -1;
    double worst_m = 0.0;
    for (int i = 0; i < gs.config.size(); ++i) {
      const double m = marginal_energy(h, gs.config, i, gs.energy, pot, mass, options.degeneracy_tol);
      if (m >= worst_m) {
        worst_m = m;
        worst = i;
      }
    }
    if (worst < 0) break;
    gs = minimize_from(h, gs.config.without(worst), pot, mass, options);
  }
  if (gs.config.size() == 0) {
    gs.energy = 0.0;
    gs.converged = true;
    gs.grad_norm = 0.0;
  }
  gs.n_bound = gs.config.size();
  gs.localized_energy = localized;
  gs.localized_config = localized_config;
  return gs;
}

ElectronConfiguration random_start(int N, int restart, const std::vector<Vec3>& sites,
                                   const DressedPotential& pot, std::mt19937_64& rng) {
  const double ext = pot.extent().max();
  const double y_scale = std::sqrt((1.0 + ext) / std::max(pot.charge(), 1e-3));
  const double sigma = 0.3 + 0.01 * ext;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, sigma);

  // Site order by restart: origin then turning points; random with
  // replacement; turning points then origin; all outer sites shuffled.
  std::vector<int> order;
  const int n_sites = static_cast<int>(sites.size());
  std::vector<int> turning, tips;
  for (int i = 1; i < n_sites; ++i) (i <= 4 ? turning : tips).push_back(i);
  std::shuffle(turning.begin(), turning.end(), rng);
  std::shuffle(tips.begin(), tips.end(), rng);
  switch (restart % 4) {
    case 0:
      order.push_back(0);
      order.insert(order.end(), turning.begin(), turning.end());
      order.insert(order.end(), tips.begin(), tips.end());
      break;
    case 2:
      order.insert(order.end(), turning.begin(), turning.end());
      order.push_back(0);
      order.insert(order.end(), tips.begin(), tips.end());
      break;
    case 3: {
      std::vector<int> outer(turning);
      outer.insert(outer.end(), tips.begin(), tips.end());
      std::shuffle(outer.begin(), outer.end(), rng);
      order = outer;
      order.push_back(0);
      break;
    }
    default:
      break;
  }
  std::uniform_int_distribution<int> pick(0, static_cast<int>(sites.size()) - 1);
  while (static_cast<int>(order.size()) < N) order.push_back(pick(rng));

  ElectronConfiguration c;
  for (int i = 0; i < N; ++i) {
    const Vec3& s = sites[order[i]];
    const double shrink = 0.8 + 0.25 * u01(rng);
    Vec3 p(shrink * s.x() + jitter(rng), 0.0, shrink * s.z() + jitter(rng));
    p.y() = (0.5 + 1.5 * u01(rng)) * y_scale;
    c.positions.push_back(p);
  }
  return c;
}

}  // namespace

GroundState minimize(Hamiltonian h, int N, const DressedPotential& pot, double mass,
                     const MinimizeOptions& options) {
  if (N < 0) throw Error("electron count must be >= 0");
  if (N == 0) {
    GroundState gs;
    gs.converged = true;
    return gs;
  }
  if (options.restarts < 1) throw Error("restarts must be >= 1");

  std::vector<ElectronConfiguration> starts;
  for (const auto& w : options.warm_starts)
    if (w.size() == N) starts.push_back(w);
  const auto sites = seed_sites(pot);
  for (int r = 0; r < options.restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(N)};
    std::mt19937_64 rng(seq);
    starts.push_back(random_start(N, r, sites, pot, rng));
  }

  std::vector<GroundState> results(starts.size());
  parallel_for(starts.size(), options.jobs, [&](std::size_t k) {
    GroundState gs;
    try {
      gs = minimize_from(h, starts[k], pot, mass, options);
      if (options.drop_unbound) gs = drop_unbound(h, gs, pot, mass, options);
    } catch (const DegenerateConfiguration&) {
      gs.energy = gs.localized_energy = std::numeric_limits<double>::infinity();
    }
    results[k] = std::move(gs);
  });

  std::size_t best = 0, best_loc = 0;
  for (std::size_t k = 1; k < results.size(); ++k) {
    if (results[k].energy < results[best].energy) best = k;
    if (results[k].localized_energy < results[best_loc].localized_energy) best_loc = k;
  }
  if (!std::isfinite(results[best].energy))
    throw DegenerateConfiguration("every restart hit a degenerate configuration");
  GroundState gs = results[best];
  gs.n_restarts_used = static_cast<int>(results.size());
  gs.localized_energy = results[best_loc].localized_energy;
  gs.localized_config = results[best_loc].localized_config;
  return gs;
}

double binding_energy(Hamiltonian h, int N, const DressedPotential& pot, double mass,
                      const MinimizeOptions& options) {
  if (N < 1) throw Error("binding energy needs N >= 1");
  const double e_prev = N == 1 ? 0.0 : minimize(h, N - 1, pot, mass, options).energy;
  const double e = std::min(minimize(h, N, pot, mass, options).energy, e_prev);
  return e - e_prev;
}

ElectronConfiguration rescale_configuration(const ElectronConfiguration& config, double from_alpha0,
                                            double to_alpha0) {
  if (!(from_alpha0 > 0.0) || !(to_alpha0 > 0.0)) return config;
  const double s = to_alpha0 / from_alpha0;
  const double sy = std::sqrt(s);
  ElectronConfiguration c = config;
  for (auto& p : c.positions) {
    p.x() *= s;
    p.z() *= s;
    p.y() *= sy;
  }
  return c;
}

}  // namespace kramers::dscale
