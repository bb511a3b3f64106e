#pragma once

#include <Eigen/Core>

#include <functional>

namespace kramers::detail {

/// f(x) and, when grad is non-null, its gradient.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct BfgsOptions {
  double gradient_tol = 1e-8;
  int max_iterations = 2000;
  double initial_step = 0.1;
  double line_tol = 0.1;
  int max_restarts = 8;  ///< restarts of the quasi-Newton memory on a stalled line search
  /// A search that stalls below this gradient norm is at the round-off floor.
  double stall_gradient_tol = 1e-6;
};

struct BfgsResult {
  Eigen::VectorXd x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Quasi-Newton (GSL vector_bfgs2) local minimisation.
BfgsResult bfgs_minimize(const Objective& objective, Eigen::VectorXd x0, const BfgsOptions& options);

}  // namespace kramers::detail
