#include "kramers/dressed_potential.hpp"

#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace kramers;

namespace {

FieldParams field(double a0, double omega = 1.0) {
  FieldParams p;
  p.alpha0 = a0;
  p.omega = omega;
  return p;
}

DressedPotential rel(double Z, double a0, PotentialOptions o = {}) {
  return DressedPotential(Z, traj::RelLinear{}, field(a0), o);
}

// Distance from r to the sampled path.
double path_distance(const DressedPotential& pot, const Vec3& r) {
  double d = INFINITY;
  for (int k = 0; k < 20000; ++k)
    d = std::min(d, (r + eval_trajectory(pot.kind(), pot.params(), kTwoPi * k / 20000)).norm());
  return d;
}

}  // namespace

TEST_CASE("mass gauge") {
  CHECK(mass_factor(field(0.0, 3.0)) == 1.0);
  CHECK(mass_factor(field(100.0)) == doctest::Approx(std::sqrt(1 + 2.66e-5 * 1e4)).epsilon(1e-4));
  CHECK(mass_factor(field(100.0)) == doctest::Approx(1.1248).epsilon(5e-4));

  // q from U_P = E0^2 / (4 omega^2) over m c^2 with c = 1 / alpha_f.
  const FieldParams p = field(10.0);
  const double E0 = p.alpha0 * p.omega * p.omega;
  const double Up = E0 * E0 / (4 * p.omega * p.omega);
  const double q = Up * p.alpha_f * p.alpha_f;
  CHECK(mass_gauge(p).q == doctest::Approx(q).epsilon(1e-14));
  CHECK(mass_factor(p) == doctest::Approx(std::sqrt(1 + 2 * q)).epsilon(1e-14));
  CHECK(mass_factor(p) == doctest::Approx(1.001330).epsilon(1e-6));

  CHECK(mass_gauge_coefficient(p) == doctest::Approx(2.6626e-5).epsilon(1e-4));
  for (double a0 : {0.0, 1.0, 50.0, 500.0}) {
    const auto g = mass_gauge(field(a0, 0.7));
    CHECK(g.q >= 0.0);
    CHECK(g.multiplier >= 1.0);
  }
}

TEST_CASE("bare Coulomb limit") {
  const DressedPotential h(1.0, traj::NonRelLinear{}, field(0));
  CHECK(h(Vec3(0, 0, 1)) == doctest::Approx(-1.0).epsilon(1e-15));
  const DressedPotential he(2.0, traj::RelLinear{}, field(0));
  CHECK(he(Vec3(3, 4, 0)) == doctest::Approx(-0.4).epsilon(1e-15));
  CHECK(he.is_static());
  CHECK_THROWS_AS(he(Vec3(0, 0, 0)), NonFiniteError);
}

TEST_CASE("matches an elliptic-integral reference near the path") {
  // (1/2pi) int dphi / sqrt(a^2 + b^2 cos^2 phi) = 2 K(k) / (pi sqrt(a^2 + b^2)), k^2 = b^2 / (a^2 + b^2).
  const double a = 0.1, b = 5.0;
  const double ref = -2.0 * std::comp_ellint_1(b / std::hypot(a, b)) / (std::numbers::pi * std::hypot(a, b));
  const DressedPotential pot(1.0, traj::NonRelLinear{}, field(5));
  CHECK(pot(Vec3(0.1, 0, 0)) == doctest::Approx(ref).epsilon(1e-6));

  // And against adaptive quadrature split at the near-singular phases.
  auto f = [&](double phi) { return 1.0 / std::sqrt(a * a + b * b * std::cos(phi) * std::cos(phi)); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double h = std::numbers::pi / 2;
  const double quarter = GK::integrate(f, 0.0, h, 20, 1e-11);
  CHECK(pot(Vec3(0.1, 0, 0)) == doctest::Approx(-4 * quarter / kTwoPi).epsilon(1e-6));
}

TEST_CASE("potential on the linear axis is even and negative") {
  const DressedPotential pot(1.0, traj::NonRelLinear{}, field(5));
  for (double z : {5.5, 7.5, 20.0}) {
    CHECK(pot(Vec3(0, 0, z)) == doctest::Approx(pot(Vec3(0, 0, -z))).epsilon(1e-12));
    CHECK(pot(Vec3(0, 0, z)) < 0.0);
  }
  // Inside the path's reach, just off the axis.
  for (double z : {0.3, 1.7, 4.2})
    CHECK(pot(Vec3(0.2, 0, z)) == doctest::Approx(pot(Vec3(0.2, 0, -z))).epsilon(1e-12));
}

TEST_CASE("figure-8 potential is even in x and in z") {
  const auto pot = rel(1.0, 40.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 20; ++i) {
    const Vec3 r(u(rng), 0.5 + std::abs(u(rng)) / 10, u(rng));
    const double v = pot(r);
    CHECK(v < 0.0);
    CHECK(pot(Vec3(-r.x(), r.y(), r.z())) == doctest::Approx(v).epsilon(1e-12));
    CHECK(pot(Vec3(r.x(), r.y(), -r.z())) == doctest::Approx(v).epsilon(1e-12));
    CHECK(pot(Vec3(r.x(), -r.y(), r.z())) == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("monopole limit") {
  for (double a0 : {0.0, 5.0, 40.0, 100.0}) {
    const auto pot = rel(1.0, a0);
    for (const Vec3& dir : {Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0.6, 0, 0.8), Vec3(0, 1, 0)}) {
      const Vec3 r = 1000.0 * (a0 + 1.0) * dir;
      CHECK(std::abs(pot(r) * r.norm() + 1.0) < 1e-3);
    }
  }
}

TEST_CASE("linear in Z") {
  const auto p1 = rel(1.0, 30.0), p2 = rel(2.0, 30.0);
  for (const Vec3& r : {Vec3(1, 2, 3), Vec3(0, 0.1, 21), Vec3(-5, 4, -12)}) CHECK(p2(r) == 2.0 * p1(r));
  CHECK(p1.with_charge(2.0)(Vec3(1, 2, 3)) == p2(Vec3(1, 2, 3)));
}

TEST_CASE("256 -> 512 nodes converge away from the path") {
  std::mt19937_64 rng(11);
  for (double a0 : {5.0, 25.0, 100.0}) {
    PotentialOptions o256, o512;
    o256.n_phase = 256;
    o512.n_phase = 512;
    const auto p256 = rel(1.0, a0, o256), p512 = rel(1.0, a0, o512);
    std::uniform_real_distribution<double> u(-1.2 * a0 - 3, 1.2 * a0 + 3);
    int tested = 0;
    while (tested < 15) {
      const Vec3 r(u(rng) / 10, std::abs(u(rng)) / 10, u(rng));
      if (path_distance(p256, r) <= 1.0) continue;
      const double a = p256(r), b = p512(r);
      CHECK(std::abs(a - b) < 1e-8 * std::abs(b));
      ++tested;
    }
  }
}

TEST_CASE("refinement tracks the accurate value close to the path") {
  PotentialOptions fine;
  fine.n_phase = 1 << 18;
  fine.auto_refine = false;
  const auto ref = rel(1.0, 50.0, fine);
  const auto pot = rel(1.0, 50.0);
  for (const Vec3& r : {Vec3(0, 0.05, 30), Vec3(0.2, 0.3, -49.9), Vec3(1, 0, 0.5)}) {
    CHECK(pot(r) == doctest::Approx(ref(r)).epsilon(1e-8));
    CHECK(pot.nodes_used(r) >= pot.options().n_phase);
  }
}

TEST_CASE("gradient matches finite differences") {
  const auto pot = rel(2.0, 20.0);
  const double h = 1e-5;
  for (const Vec3& r : {Vec3(0.3, 4, 10), Vec3(-1, 1, -16), Vec3(2, 0.5, 0)}) {
    const auto [v, g] = pot.value_and_gradient(r);
    CHECK(v == doctest::Approx(pot(r)).epsilon(1e-14));
    for (int d = 0; d < 3; ++d) {
      Vec3 e = Vec3::Zero();
      e[d] = h;
      const double fd = (pot(r + e) - pot(r - e)) / (2 * h);
      CHECK(std::abs(g[d] - fd) <= 1e-6 * (std::abs(fd) + 1e-3));
    }
  }
}

TEST_CASE("node collision is reported") {
  PotentialOptions o;
  o.auto_refine = false;
  const DressedPotential pot(1.0, traj::NonRelLinear{}, field(5), o);
  CHECK_THROWS_AS(pot(Vec3(0, 0, -5)), NonFiniteError);
  o.softening = 0.1;
  const DressedPotential soft(1.0, traj::NonRelLinear{}, field(5), o);
  CHECK(std::isfinite(soft(Vec3(0, 0, -5))));
}

TEST_CASE("grid at alpha0 = 0 is the bare Coulomb potential") {
  const DressedPotential pot(1.0, traj::RelLinear{}, field(0));
  const auto g = potential_grid(pot, -3, 3, -3, 3, 10, 10, 2);
  for (int iz = 0; iz < g.nz; ++iz)
    for (int ix = 0; ix < g.nx; ++ix)
      CHECK(g.at(ix, iz) == doctest::Approx(-1.0 / std::hypot(g.x(ix), g.z(iz))).epsilon(1e-14));

  const auto g2 = potential_grid(pot, -1, 1, -1, 1, 3, 3);
  CHECK(g2.nonfinite[4] == 1);
  CHECK(std::isinf(g2.at(1, 1)));
  CHECK(g2.at(1, 1) < 0.0);
  CHECK_THROWS_AS(potential_grid(pot, -1, 1, -1, 1, 1, 3), Error);
}

TEST_CASE("figure-8 grid is symmetric under (x, z) -> (-x, -z)") {
  const auto pot = rel(1.0, 30.0);
  const auto g = potential_grid(pot, -6, 6, -40, 40, 50, 50, 4);
  for (int iz = 0; iz < 50; ++iz)
    for (int ix = 0; ix < 50; ++ix) {
      const double a = g.at(ix, iz), b = g.at(49 - ix, 49 - iz);
      if (std::isfinite(a)) CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
}

TEST_CASE("grid does not depend on the thread count") {
  const auto pot = rel(1.0, 30.0);
  const auto a = potential_grid(pot, -6, 6, -40, 40, 21, 17, 1);
  const auto b = potential_grid(pot, -6, 6, -40, 40, 21, 17, 5);
  CHECK(a.values == b.values);
}

TEST_CASE("potential regimes") {
  // Softening proportional to alpha0 smooths the log ridge along the path so
  // grid aliasing does not show up as extra minima.
  auto count = [&](double a0, int n) {
    PotentialOptions soft;
    soft.softening = std::max(0.5, 0.08 * a0);
    const auto pot = rel(1.0, a0, soft);
    const double xr = pot.extent().x + 5, zr = pot.extent().z + 5;
    const auto g = potential_grid(pot, -xr, xr, -zr, zr, n, n, 4);
    return grid_local_minima(g);
  };
  // Atomic: the single well at the nucleus.
  CHECK(count(0.0, 41).size() == 1);
  // Pseudo-linear: wells on the z axis.
  const auto pseudo = count(25.0, 161);
  CHECK(pseudo.size() >= 2);
  CHECK(pseudo.size() <= 3);
  // Parametric: the centre plus the four turning points.
  const auto para = count(100.0, 161);
  CHECK(para.size() == 5);
}
