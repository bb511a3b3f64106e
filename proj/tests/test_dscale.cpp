#include "kramers/dscale.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace kramers;
using namespace kramers::dscale;

namespace {

FieldParams field(double a0) {
  FieldParams p;
  p.alpha0 = a0;
  return p;
}

DressedPotential pot_of(double Z, double a0, TrajectoryKind kind = traj::RelLinear{}) {
  return DressedPotential(Z, std::move(kind), field(a0));
}

ElectronConfiguration config(std::initializer_list<Vec3> ps) { return {std::vector<Vec3>(ps)}; }

ElectronConfiguration random_config(std::mt19937_64& rng, int N, double spread) {
  std::uniform_real_distribution<double> u(-spread, spread), uy(0.5, 3.0);
  ElectronConfiguration c;
  for (int i = 0; i < N; ++i) c.positions.emplace_back(u(rng), uy(rng), u(rng));
  return c;
}

constexpr Hamiltonian kAll[] = {Hamiltonian::CentralForce, Hamiltonian::Diatomic, Hamiltonian::Planar};

}  // namespace

TEST_CASE("energy examples") {
  const auto h = pot_of(1.0, 0.0);
  CHECK(energy(Hamiltonian::CentralForce, config({{0, 0, 1}}), h) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(energy(Hamiltonian::Planar, config({{0, 1, 0}}), h) == doctest::Approx(-0.5).epsilon(1e-15));
  const double two = energy(Hamiltonian::Planar, config({{0, 1, 0}, {0, 1, 0}}), h);
  CHECK(two == doctest::Approx(2 * (0.5 - 1.0) + 1.0 / std::sqrt(2.0)).epsilon(1e-15));

  const auto t = energy_terms(Hamiltonian::Planar, config({{0, 1, 0}, {0, 1, 0}}), h);
  CHECK(t.kinetic == doctest::Approx(1.0));
  CHECK(t.external == doctest::Approx(-2.0));
  CHECK(t.repulsion == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(t.total() == doctest::Approx(two));
}

TEST_CASE("hand-evaluated forms") {
  const auto pot = pot_of(2.0, 0.0);
  const auto c = config({{0.3, 1.2, -0.4}, {-0.5, 0.8, 0.9}});
  const Vec3 a = c.positions[0], b = c.positions[1];
  const double ext = -2.0 / a.norm() - 2.0 / b.norm();
  const double m = 1.3;

  const double planar = 1 / (2 * m * a.y() * a.y()) + 1 / (2 * m * b.y() * b.y()) + ext +
                        1 / std::sqrt(std::pow(a.z() - b.z(), 2) + std::pow(a.x() - b.x(), 2) + a.y() * a.y() +
                                      b.y() * b.y());
  CHECK(energy(Hamiltonian::Planar, c, pot, m) == doctest::Approx(planar).epsilon(1e-14));

  const double ra2 = a.x() * a.x() + a.y() * a.y(), rb2 = b.x() * b.x() + b.y() * b.y();
  const double da = 1 / (2 * m * ra2) + 1 / (2 * m * rb2) + ext + 1 / std::sqrt(ra2 + rb2 + std::pow(a.z() - b.z(), 2));
  CHECK(energy(Hamiltonian::Diatomic, c, pot, m) == doctest::Approx(da).epsilon(1e-14));

  const double cf = 1 / (2 * m * a.squaredNorm()) + 1 / (2 * m * b.squaredNorm()) + ext +
                    1 / std::sqrt(a.squaredNorm() + b.squaredNorm());
  CHECK(energy(Hamiltonian::CentralForce, c, pot, m) == doctest::Approx(cf).epsilon(1e-14));
}

TEST_CASE("forms coincide on the shared symmetry subspace") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10, 10), uy(0.3, 4);
  const auto pot = pot_of(2.0, 15.0);
  for (int k = 0; k < 10; ++k) {
    ElectronConfiguration xz0, x0;
    for (int i = 0; i < 3; ++i) {
      xz0.positions.emplace_back(0, uy(rng), 0);
      x0.positions.emplace_back(0, uy(rng), u(rng));
    }
    CHECK(energy(Hamiltonian::Planar, x0, pot) ==
          doctest::Approx(energy(Hamiltonian::Diatomic, x0, pot)).epsilon(1e-14));
    const double p = energy(Hamiltonian::Planar, xz0, pot);
    CHECK(energy(Hamiltonian::Diatomic, xz0, pot) == doctest::Approx(p).epsilon(1e-14));
    CHECK(energy(Hamiltonian::CentralForce, xz0, pot) == doctest::Approx(p).epsilon(1e-15));
  }
}

TEST_CASE("degenerate configurations are rejected") {
  const auto pot = pot_of(1.0, 5.0);
  CHECK_THROWS_AS(energy(Hamiltonian::Planar, config({{1, 0, 1}}), pot), DegenerateConfiguration);
  CHECK_THROWS_AS(energy(Hamiltonian::Diatomic, config({{0, 0, 1}}), pot), DegenerateConfiguration);
  CHECK_THROWS_AS(gradient(Hamiltonian::CentralForce, config({{0, 0, 0}}), pot), DegenerateConfiguration);
  CHECK_NOTHROW(energy(Hamiltonian::Diatomic, config({{1, 0, 1}}), pot));
}

TEST_CASE("gradient vanishes at the field-free minimum") {
  const auto h = pot_of(1.0, 0.0);
  CHECK(gradient(Hamiltonian::Planar, config({{0, 1, 0}}), h).norm() < 1e-8);
  CHECK(gradient(Hamiltonian::CentralForce, config({{0, 0, 1}}), h).norm() < 1e-8);
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 rng(21);
  const auto pot = pot_of(2.0, 20.0);
  for (auto h : kAll)
    for (int k = 0; k < 5; ++k) {
      const auto c = random_config(rng, 3, 20.0);
      const double m = 1.05;
      Eigen::VectorXd g;
      const double e = energy_and_gradient(h, c, pot, m, &g);
      CHECK(e == doctest::Approx(energy(h, c, pot, m)).epsilon(1e-14));
      const Eigen::VectorXd x = c.flat();
      Eigen::VectorXd fd(x.size());
      const double step = 1e-5;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        fd[i] = (energy(h, ElectronConfiguration::from_flat(xp), pot, m) -
                 energy(h, ElectronConfiguration::from_flat(xm), pot, m)) / (2 * step);
      }
      CHECK((g - fd).norm() <= 1e-5 * fd.norm());
    }
}

TEST_CASE("mirror pair symmetry") {
  const auto pot = pot_of(1.0, 20.0);
  const auto c = config({{0.01, 5.0, 16.0}, {-0.02, 5.2, -17.0}});
  const auto m = c.mirrored_z();
  for (auto h : kAll) {
    CHECK(energy(h, m, pot) == doctest::Approx(energy(h, c, pot)).epsilon(1e-12));
    const Eigen::VectorXd g = gradient(h, c, pot), gm = gradient(h, m, pot);
    for (int i = 0; i < 2; ++i) {
      CHECK(gm[3 * i] == doctest::Approx(g[3 * i]).epsilon(1e-10));
      CHECK(gm[3 * i + 1] == doctest::Approx(g[3 * i + 1]).epsilon(1e-10));
      CHECK(gm[3 * i + 2] == doctest::Approx(-g[3 * i + 2]).epsilon(1e-10));
    }
  }
  // A pair that is its own mirror image has opposite z forces.
  const auto pair = config({{0, 5.0, 16.0}, {0, 5.0, -16.0}});
  const Eigen::VectorXd g = gradient(Hamiltonian::Planar, pair, pot);
  CHECK(g[2] == doctest::Approx(-g[5]).epsilon(1e-10));
  CHECK(g[1] == doctest::Approx(g[4]).epsilon(1e-10));
}

TEST_CASE("heavier mass lowers the energy at fixed positions") {
  std::mt19937_64 rng(9);
  const auto pot = pot_of(1.0, 30.0);
  for (int k = 0; k < 20; ++k) {
    const auto c = random_config(rng, 2, 30.0);
    for (auto h : kAll) {
      const double m = 1.0 + 0.01 * k, step = 1e-6;
      const double dEdm = (energy(h, c, pot, m + step) - energy(h, c, pot, m - step)) / (2 * step);
      const double kinetic = energy_terms(h, c, pot, m).kinetic;
      CHECK(dEdm <= 0.0);
      CHECK(dEdm == doctest::Approx(-kinetic / m).epsilon(1e-5));
    }
  }
}

TEST_CASE("configuration helpers") {
  const auto c = config({{1, 2, 3}, {4, 5, 6}});
  CHECK(ElectronConfiguration::from_flat(c.flat()).positions == c.positions);
  CHECK(c.mirrored_z().positions[1] == Vec3(4, 5, -6));
  CHECK(c.without(0).positions == std::vector<Vec3>{Vec3(4, 5, 6)});
  const auto r = rescale_configuration(c, 10.0, 40.0);
  CHECK(r.positions[0] == Vec3(4, 4, 12));
  CHECK(rescale_configuration(c, 0.0, 40.0).positions == c.positions);
  CHECK(hamiltonian_name(parse_hamiltonian("da")) == "da");
  CHECK(parse_hamiltonian("cf") == Hamiltonian::CentralForce);
  CHECK(parse_hamiltonian("planar") == Hamiltonian::Planar);
  CHECK_THROWS_AS(parse_hamiltonian("pl"), Error);
}

TEST_CASE("seed sites") {
  const auto pot = pot_of(1.0, 20.0);
  const auto s = seed_sites(pot);
  REQUIRE(s.size() == 7);
  CHECK(s[0] == Vec3::Zero());
  CHECK((s[1] + eval_trajectory(traj::RelLinear{}, field(20), std::numbers::pi / 4)).norm() < 1e-14);
  CHECK(seed_sites(pot_of(1.0, 0.0)).size() == 1);
}

TEST_CASE("field-free hydrogenic minimum") {
  for (double Z : {1.0, 2.0, 3.0}) {
    const auto gs = minimize(Hamiltonian::CentralForce, 1, pot_of(Z, 0.0), 1.0, {.restarts = 4});
    CHECK(gs.converged);
    CHECK(gs.energy == doctest::Approx(-Z * Z / 2).epsilon(1e-10));
    CHECK(gs.config.positions[0].norm() == doctest::Approx(1.0 / Z).epsilon(1e-6));
  }
  const auto p = minimize(Hamiltonian::Planar, 1, pot_of(1.0, 0.0), 1.0, {.restarts = 4});
  CHECK(p.energy == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(p.config.positions[0].y() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("hydrogen at alpha0 = 20") {
  const auto pot = pot_of(1.0, 20.0);
  // Printed one-electron position: a local minimum off the centre.
  const auto local = minimize_from(Hamiltonian::Planar, config({{0, 5.0, -12.0}}), pot, 1.0);
  CHECK(local.converged);
  const Vec3 r = local.config.positions[0];
  CHECK(std::abs(r.x()) < 1e-3);
  CHECK(r.y() == doctest::Approx(5.4461).epsilon(2e-3));
  CHECK(r.z() == doctest::Approx(-12.2387).epsilon(2e-3));

  // Two electrons: a mirror pair near the trajectory tips.
  const auto gs = minimize(Hamiltonian::Planar, 2, pot, 1.0, {.restarts = 24, .seed = 1});
  REQUIRE(gs.n_bound == 2);
  auto a = gs.config.positions[0], b = gs.config.positions[1];
  if (a.z() < b.z()) std::swap(a, b);
  for (const Vec3& p : {a, b}) {
    CHECK(std::abs(p.x()) < 1e-3);
    CHECK(p.y() == doctest::Approx(5.0386).epsilon(1e-3));
    CHECK(std::abs(p.z()) == doctest::Approx(16.5852).epsilon(1e-3));
  }
  CHECK(a.z() == doctest::Approx(-b.z()).epsilon(1e-5));
}

TEST_CASE("binding energies") {
  const MinimizeOptions o{.restarts = 24};
  CHECK(binding_energy(Hamiltonian::Planar, 1, pot_of(1.0, 0.0), 1.0, o) == doctest::Approx(-0.5).epsilon(1e-10));

  const auto h10 = pot_of(1.0, 10.0);
  const double be_h = binding_energy(Hamiltonian::Planar, 2, h10, mass_factor(h10.params()), o);
  CHECK(be_h < 0.0);
  CHECK(be_h == doctest::Approx(-0.047).epsilon(0.15));

  const auto he10 = pot_of(2.0, 10.0);
  const double be_he = binding_energy(Hamiltonian::Planar, 3, he10, mass_factor(he10.params()), o);
  CHECK(be_he == doctest::Approx(-0.057).epsilon(0.15));
}

TEST_CASE("unbound electrons are dropped") {
  const auto pot = pot_of(1.0, 20.0);
  const auto gs = minimize(Hamiltonian::Planar, 3, pot, mass_factor(pot.params()), {.restarts = 16});
  const auto two = minimize(Hamiltonian::Planar, 2, pot, mass_factor(pot.params()), {.restarts = 16});
  CHECK(gs.n_bound == 2);
  CHECK(gs.energy == doctest::Approx(two.energy).epsilon(1e-9));
  CHECK(gs.localized_config.size() == 3);
  CHECK(gs.localized_energy > two.energy);
  CHECK(std::abs(binding_energy(Hamiltonian::Planar, 3, pot, mass_factor(pot.params()), {.restarts = 16})) < 1e-12);
}

TEST_CASE("deterministic for a seed regardless of threads") {
  const auto pot = pot_of(2.0, 30.0);
  const MinimizeOptions a{.restarts = 12, .seed = 42, .jobs = 1};
  MinimizeOptions b = a;
  b.jobs = 4;
  const auto r1 = minimize(Hamiltonian::Planar, 3, pot, 1.0, a);
  const auto r2 = minimize(Hamiltonian::Planar, 3, pot, 1.0, b);
  const auto r3 = minimize(Hamiltonian::Planar, 3, pot, 1.0, a);
  CHECK(r1.energy == r2.energy);
  CHECK(r1.config.positions == r2.config.positions);
  CHECK(r1.config.positions == r3.config.positions);
}

TEST_CASE("warm starts are used") {
  const auto pot = pot_of(1.0, 20.0);
  MinimizeOptions o{.restarts = 1};
  o.warm_starts.push_back(config({{0, 5, 16.5}, {0, 5, -16.5}}));
  const auto gs = minimize(Hamiltonian::Planar, 2, pot, 1.0, o);
  CHECK(gs.energy == doctest::Approx(-0.1017).epsilon(2e-3));
}

TEST_CASE("planar and diatomic agree on the linear trajectory") {
  for (auto [Z, N] : {std::pair{1.0, 1}, std::pair{1.0, 2}, std::pair{2.0, 2}}) {
    const auto pot = pot_of(Z, 20.0, traj::NonRelLinear{});
    const double ep = minimize(Hamiltonian::Planar, N, pot, 1.0, {.restarts = 24}).energy;
    const double ed = minimize(Hamiltonian::Diatomic, N, pot, 1.0, {.restarts = 24}).energy;
    CHECK(std::abs(ep - ed) < 1e-6);
  }
}

TEST_CASE("argument checks") {
  const auto pot = pot_of(1.0, 5.0);
  CHECK_THROWS_AS(minimize(Hamiltonian::Planar, -1, pot, 1.0), Error);
  const auto empty = minimize(Hamiltonian::Planar, 0, pot, 1.0);
  CHECK(empty.energy == 0.0);
  CHECK(empty.n_bound == 0);
  CHECK_THROWS_AS(minimize(Hamiltonian::Planar, 1, pot, 1.0, {.restarts = 0}), Error);
  CHECK_THROWS_AS(binding_energy(Hamiltonian::Planar, 0, pot, 1.0), Error);
}
