#pragma once

#include <Eigen/Core>

#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kramers {

using Vec3 = Eigen::Vector3d;

/// CODATA fine-structure constant, used as the default magnetic coupling.
inline constexpr double kFineStructure = 1.0 / 137.035999;
inline constexpr double kHartreeToEv = 27.211386;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dressed-potential evaluation hit the trajectory path exactly.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// A D-scaled kinetic denominator vanished (electron on a singular axis/plane).
class DegenerateConfiguration : public Error {
 public:
  using Error::Error;
};

class LinearDependence : public Error {
 public:
  LinearDependence(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, double achieved_relative_error)
      : Error(what), achieved_(achieved_relative_error) {}
  double achieved_relative_error() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class ScfNotConverged : public Error {
 public:
  ScfNotConverged(const std::string& what, std::vector<double> energy_trace)
      : Error(what), trace_(std::move(energy_trace)) {}
  const std::vector<double>& energy_trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

}  // namespace kramers
