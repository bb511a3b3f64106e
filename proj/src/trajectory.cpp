#include "kramers/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kramers {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

traj::Elliptical as_elliptical(const traj::Circular& c) {
  return {c.eps, c.eps, c.beta, c.beta};
}

double figure8_amplitude(const FieldParams& p) {
  return p.x_amp_coeff * p.alpha0 * p.alpha0 * p.alpha_f;
}

double tone_value(const traj::Tone& t, double phase) {
  const double arg = t.harmonic * phase;
  return t.amplitude * (t.shape == traj::Shape::Cos ? std::cos(arg) : std::sin(arg));
}

double tone_rate(const traj::Tone& t, double phase) {
  const double arg = t.harmonic * phase;
  const double k = t.amplitude * t.harmonic;
  return t.shape == traj::Shape::Cos ? -k * std::sin(arg) : k * std::cos(arg);
}

}  // namespace

void FieldParams::validate() const {
  if (!(alpha0 >= 0.0) || !std::isfinite(alpha0)) throw Error("alpha0 must be finite and >= 0");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw Error("omega must be finite and > 0");
  if (!(alpha_f > 0.0)) throw Error("alpha_f must be > 0");
  if (!std::isfinite(x_amp_coeff)) throw Error("x_amp_coeff must be finite");
}

void validate(const TrajectoryKind& kind) {
  std::visit(overloaded{
                 [](const traj::NonRelLinear&) {},
                 [](const traj::RelLinear&) {},
                 [](const traj::Elliptical& e) {
                   if (e.eps1 < 0 || e.eps2 < 0 || e.beta1 < 0 || e.beta2 < 0)
                     throw Error("elliptical amplitudes must be non-negative");
                 },
                 [](const traj::Circular& c) {
                   if (c.eps < 0 || c.beta < 0)
                     throw Error("circular amplitudes must be non-negative");
                 },
                 [](const traj::Multicolor& m) {
                   if (m.tones.empty()) throw Error("multicolor trajectory needs at least one tone");
                   for (const auto& t : m.tones)
                     if (t.harmonic < 1) throw Error("multicolor harmonics must be positive integers");
                 },
             },
             kind);
}

std::string kind_name(const TrajectoryKind& kind) {
  return std::visit(overloaded{
                        [](const traj::NonRelLinear&) { return std::string("nonrel"); },
                        [](const traj::RelLinear&) { return std::string("rel"); },
                        [](const traj::Elliptical&) { return std::string("elliptical"); },
                        [](const traj::Circular&) { return std::string("circular"); },
                        [](const traj::Multicolor&) { return std::string("multicolor"); },
                    },
                    kind);
}

TrajectoryKind parse_kind(const std::string& name) {
  if (name == "nonrel") return traj::NonRelLinear{};
  if (name == "rel") return traj::RelLinear{};
  throw Error("trajectory '" + name + "' needs explicit parameters (only nonrel|rel parse bare)");
}

Vec3 eval_trajectory(const TrajectoryKind& kind, const FieldParams& p, double phase) {
  return std::visit(
      overloaded{
          [&](const traj::NonRelLinear&) -> Vec3 {
            return {0.0, 0.0, p.alpha0 * std::cos(phase)};
          },
          [&](const traj::RelLinear&) -> Vec3 {
            return {-figure8_amplitude(p) * std::sin(2.0 * phase), 0.0, p.alpha0 * std::cos(phase)};
          },
          [&](const traj::Elliptical& e) -> Vec3 {
            const double c = std::cos(phase), s = std::sin(phase);
            return {e.eps1 * c - e.beta2 * s, 0.0, e.eps2 * s + e.beta1 * c};
          },
          [&](const traj::Circular& circ) -> Vec3 {
            return eval_trajectory(as_elliptical(circ), p, phase);
          },
          [&](const traj::Multicolor& m) -> Vec3 {
            Vec3 r = Vec3::Zero();
            for (const auto& t : m.tones) r[static_cast<int>(t.axis)] += tone_value(t, phase);
            return r;
          },
      },
      kind);
}

Vec3 trajectory_velocity(const TrajectoryKind& kind, const FieldParams& p, double phase) {
  return std::visit(
      overloaded{
          [&](const traj::NonRelLinear&) -> Vec3 {
            return {0.0, 0.0, -p.alpha0 * std::sin(phase)};
          },
          [&](const traj::RelLinear&) -> Vec3 {
            return {-2.0 * figure8_amplitude(p) * std::cos(2.0 * phase), 0.0,
                    -p.alpha0 * std::sin(phase)};
          },
          [&](const traj::Elliptical& e) -> Vec3 {
            const double c = std::cos(phase), s = std::sin(phase);
            return {-e.eps1 * s - e.beta2 * c, 0.0, e.eps2 * c - e.beta1 * s};
          },
          [&](const traj::Circular& circ) -> Vec3 {
            return trajectory_velocity(as_elliptical(circ), p, phase);
          },
          [&](const traj::Multicolor& m) -> Vec3 {
            Vec3 v = Vec3::Zero();
            for (const auto& t : m.tones) v[static_cast<int>(t.axis)] += tone_rate(t, phase);
            return v;
          },
      },
      kind);
}

double Extent::max() const { return std::max({x, y, z}); }

Extent trajectory_extent(const TrajectoryKind& kind, const FieldParams& p) {
  return std::visit(
      overloaded{
          [&](const traj::NonRelLinear&) { return Extent{0.0, 0.0, p.alpha0}; },
          [&](const traj::RelLinear&) {
            return Extent{std::abs(figure8_amplitude(p)), 0.0, p.alpha0};
          },
          [&](const traj::Elliptical& e) {
            return Extent{std::hypot(e.eps1, e.beta2), 0.0, std::hypot(e.eps2, e.beta1)};
          },
          [&](const traj::Circular& c) { return trajectory_extent(as_elliptical(c), p); },
          [&](const traj::Multicolor& m) {
            double w[3] = {0.0, 0.0, 0.0};
            for (const auto& t : m.tones) w[static_cast<int>(t.axis)] += std::abs(t.amplitude);
            return Extent{w[0], w[1], w[2]};
          },
      },
      kind);
}

double trajectory_max_speed(const TrajectoryKind& kind, const FieldParams& p) {
  return std::visit(
      overloaded{
          [&](const traj::NonRelLinear&) { return p.alpha0; },
          [&](const traj::RelLinear&) {
            return std::hypot(2.0 * figure8_amplitude(p), p.alpha0);
          },
          [&](const traj::Elliptical& e) {
            return std::hypot(std::hypot(e.eps1, e.beta2), std::hypot(e.eps2, e.beta1));
          },
          [&](const traj::Circular& c) { return trajectory_max_speed(as_elliptical(c), p); },
          [&](const traj::Multicolor& m) {
            double w[3] = {0.0, 0.0, 0.0};
            for (const auto& t : m.tones)
              w[static_cast<int>(t.axis)] += std::abs(t.amplitude) * t.harmonic;
            return std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
          },
      },
      kind);
}

double trajectory_max_acceleration(const TrajectoryKind& kind, const FieldParams& p) {
  return std::visit(
      overloaded{
          [&](const traj::NonRelLinear&) { return p.alpha0; },
          [&](const traj::RelLinear&) {
            return std::hypot(4.0 * figure8_amplitude(p), p.alpha0);
          },
          [&](const traj::Elliptical& e) { return trajectory_max_speed(e, p); },
          [&](const traj::Circular& c) { return trajectory_max_speed(as_elliptical(c), p); },
          [&](const traj::Multicolor& m) {
            double w[3] = {0.0, 0.0, 0.0};
            for (const auto& t : m.tones)
              w[static_cast<int>(t.axis)] += std::abs(t.amplitude) * t.harmonic * t.harmonic;
            return std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
          },
      },
      kind);
}

}  // namespace kramers
