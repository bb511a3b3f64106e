#include "kramers/trajectory.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

using namespace kramers;

namespace {

FieldParams field(double a0, double coeff = 1.0) {
  FieldParams p;
  p.alpha0 = a0;
  p.x_amp_coeff = coeff;
  return p;
}

void check_close(const Vec3& a, const Vec3& b, double tol) {
  CHECK((a - b).norm() <= tol);
}

}  // namespace

TEST_CASE("closed-form trajectory values") {
  check_close(eval_trajectory(traj::NonRelLinear{}, field(5), 0.0), Vec3(0, 0, 5), 1e-15);
  check_close(eval_trajectory(traj::RelLinear{}, field(10), std::numbers::pi / 2), Vec3(0, 0, 0), 1e-13);

  FieldParams p = field(100);
  p.alpha_f = 1.0 / 137.036;
  const Vec3 a = eval_trajectory(traj::RelLinear{}, p, std::numbers::pi / 4);
  CHECK(a.x() == doctest::Approx(-1e4 / 137.036).epsilon(1e-12));
  CHECK(a.y() == 0.0);
  CHECK(a.z() == doctest::Approx(100 * std::sqrt(0.5)).epsilon(1e-12));
  CHECK(a.x() == doctest::Approx(-72.97).epsilon(1e-4));
  CHECK(a.z() == doctest::Approx(70.71).epsilon(1e-4));

  check_close(eval_trajectory(traj::Elliptical{2, 1, 0, 0}, field(0), 0.0), Vec3(2, 0, 0), 1e-15);
  check_close(eval_trajectory(traj::Elliptical{2, 1, 0, 0}, field(0), std::numbers::pi / 2), Vec3(0, 0, 1), 1e-15);
}

TEST_CASE("elliptical components") {
  const traj::Elliptical e{1.5, 0.7, 0.3, 0.2};
  for (double phi : {0.1, 1.0, 2.5, 4.0}) {
    const Vec3 a = eval_trajectory(e, field(0), phi);
    CHECK(a.x() == doctest::Approx(1.5 * std::cos(phi) - 0.2 * std::sin(phi)));
    CHECK(a.y() == 0.0);
    CHECK(a.z() == doctest::Approx(0.7 * std::sin(phi) + 0.3 * std::cos(phi)));
  }
}

TEST_CASE("extent") {
  const Extent nr = trajectory_extent(traj::NonRelLinear{}, field(10));
  CHECK(nr.x == 0.0);
  CHECK(nr.z == doctest::Approx(10.0));

  const Extent rel = trajectory_extent(traj::RelLinear{}, field(10));
  CHECK(rel.x == doctest::Approx(100 * kFineStructure).epsilon(1e-12));
  CHECK(rel.x == doctest::Approx(0.7298).epsilon(1e-4));
  CHECK(rel.z == doctest::Approx(10.0));

  traj::Multicolor m{{{3.0, traj::Axis::X, 1, traj::Shape::Cos}}};
  const Extent mc = trajectory_extent(m, field(0));
  CHECK(mc.x == doctest::Approx(3.0));
  CHECK(mc.z == 0.0);
}

TEST_CASE("extent bounds the sampled path") {
  const TrajectoryKind kinds[] = {traj::NonRelLinear{}, traj::RelLinear{}, traj::Elliptical{2, 1, 0.5, 0.25},
                                  traj::Circular{1.2, 0.4},
                                  traj::Multicolor{{{5, traj::Axis::X, 1, traj::Shape::Cos},
                                                    {2, traj::Axis::Z, 4, traj::Shape::Sin}}}};
  for (const auto& k : kinds) {
    const auto p = field(30);
    const Extent e = trajectory_extent(k, p);
    double vmax = 0.0;
    for (int i = 0; i < 4000; ++i) {
      const double phi = kTwoPi * i / 4000;
      const Vec3 a = eval_trajectory(k, p, phi);
      CHECK(std::abs(a.x()) <= e.x + 1e-12);
      CHECK(std::abs(a.z()) <= e.z + 1e-12);
      vmax = std::max(vmax, trajectory_velocity(k, p, phi).norm());
    }
    CHECK(vmax <= trajectory_max_speed(k, p) * (1 + 1e-12));
  }
}

TEST_CASE("velocity is the phase derivative") {
  const TrajectoryKind kinds[] = {traj::RelLinear{}, traj::Elliptical{2, 1, 0.5, 0.25},
                                  traj::Multicolor{{{5, traj::Axis::X, 1, traj::Shape::Cos},
                                                    {2, traj::Axis::Z, 4, traj::Shape::Sin}}}};
  const double h = 1e-6;
  for (const auto& k : kinds)
    for (double phi : {0.3, 1.7, 4.1}) {
      const auto p = field(40);
      const Vec3 fd = (eval_trajectory(k, p, phi + h) - eval_trajectory(k, p, phi - h)) / (2 * h);
      check_close(trajectory_velocity(k, p, phi), fd, 1e-6 * (1 + fd.norm()));
    }
}

TEST_CASE("periodicity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  const TrajectoryKind kinds[] = {traj::NonRelLinear{}, traj::RelLinear{}, traj::Elliptical{2, 1, 0.5, 0.25},
                                  traj::Circular{1, 1}};
  for (const auto& k : kinds)
    for (int i = 0; i < 100; ++i) {
      const double phi = u(rng);
      const auto p = field(17);
      const Vec3 a = eval_trajectory(k, p, phi), b = eval_trajectory(k, p, phi + kTwoPi);
      CHECK((a - b).norm() <= 1e-12 * (1 + a.norm()));
    }
}

TEST_CASE("figure-8 symmetry") {
  // x is odd about pi/2 and z flips there too, so the reflection phi -> pi - phi
  // negates the whole displacement; phi -> -phi negates x only.
  const auto p = field(60);
  for (int i = 0; i < 50; ++i) {
    const double phi = 0.137 * i;
    const Vec3 a = eval_trajectory(traj::RelLinear{}, p, phi);
    CHECK(a.y() == 0.0);
    check_close(eval_trajectory(traj::RelLinear{}, p, std::numbers::pi - phi), -a, 1e-12);
    check_close(eval_trajectory(traj::RelLinear{}, p, -phi), Vec3(-a.x(), 0, a.z()), 1e-12);
  }
}

TEST_CASE("figure-8 reduces to the linear path without magnetic coupling") {
  for (double phi : {0.0, 0.4, 1.3, 3.0, 5.5}) {
    FieldParams p = field(25);
    p.alpha_f = 0.0;
    CHECK(eval_trajectory(traj::RelLinear{}, p, phi) == eval_trajectory(traj::NonRelLinear{}, p, phi));
    FieldParams q = field(25, 0.0);
    CHECK(eval_trajectory(traj::RelLinear{}, q, phi) == eval_trajectory(traj::NonRelLinear{}, q, phi));
  }
}

TEST_CASE("x_amp_coeff scales the transverse amplitude") {
  FieldParams p = field(20, 1.0 / 8.0);
  const Vec3 a = eval_trajectory(traj::RelLinear{}, p, std::numbers::pi / 4);
  CHECK(a.x() == doctest::Approx(-400 * kFineStructure / 8));
}

TEST_CASE("circular is the symmetric elliptical case") {
  for (double phi : {0.0, 0.7, 2.2, 5.9}) {
    const Vec3 c = eval_trajectory(traj::Circular{1.3, 0.4}, field(0), phi);
    const Vec3 e = eval_trajectory(traj::Elliptical{1.3, 1.3, 0.4, 0.4}, field(0), phi);
    check_close(c, e, 1e-15);
  }
}

TEST_CASE("multicolor sums its tones") {
  const traj::Multicolor m{{{5, traj::Axis::X, 1, traj::Shape::Cos}, {2, traj::Axis::Z, 4, traj::Shape::Sin},
                            {1, traj::Axis::Z, 2, traj::Shape::Cos}}};
  for (double phi : {0.2, 1.1, 3.3}) {
    const Vec3 a = eval_trajectory(m, field(0), phi);
    check_close(a, Vec3(5 * std::cos(phi), 0, 2 * std::sin(4 * phi) + std::cos(2 * phi)), 1e-14);
  }
}

TEST_CASE("validation") {
  FieldParams p = field(-1);
  CHECK_THROWS_AS(p.validate(), Error);
  p = field(1);
  p.omega = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  CHECK_THROWS_AS(validate(traj::Elliptical{-1, 0, 0, 0}), Error);
  CHECK_THROWS_AS(validate(traj::Multicolor{}), Error);
  CHECK_THROWS_AS(validate(traj::Multicolor{{{1, traj::Axis::X, 0, traj::Shape::Cos}}}), Error);
  CHECK_NOTHROW(validate(traj::RelLinear{}));
}

TEST_CASE("kind names round-trip") {
  CHECK(kind_name(parse_kind("nonrel")) == "nonrel");
  CHECK(kind_name(parse_kind("rel")) == "rel");
  CHECK(kind_name(traj::Circular{}) == "circular");
  CHECK_THROWS_AS(parse_kind("sideways"), Error);
}

TEST_CASE("field helpers") {
  FieldParams p = field(10);
  p.omega = 0.5;
  CHECK(p.field_strength() == doctest::Approx(2.5));
  CHECK(p.q0() == doctest::Approx(2.5 * kFineStructure / 0.5));
}
