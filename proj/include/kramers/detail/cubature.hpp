#pragma once

#include <array>
#include <functional>
#include <vector>

namespace kramers::detail {

using Box3 = std::array<std::array<double, 2>, 3>;
using Integrand3 = std::function<double(double x, double y, double z)>;

struct CubatureResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  bool converged = false;
};

/// Global adaptive cubature with the degree-7/5 Genz-Malik pair.  Starts from
/// the given boxes and bisects the worst box along its roughest axis until
/// the summed error estimate is below max(abs_tol, rel_tol |value|).
CubatureResult hcubature(const Integrand3& f, const std::vector<Box3>& boxes, double rel_tol,
                         double abs_tol, long max_evaluations);

}  // namespace kramers::detail
