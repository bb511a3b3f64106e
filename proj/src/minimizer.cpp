#include "kramers/detail/minimizer.hpp"

#include <gsl/gsl_blas.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <algorithm>
#include <limits>
#include <memory>

namespace kramers::detail {

namespace {

// Objective values returned to GSL when the callback throws; GSL is C and
// cannot unwind.
constexpr double kWall = 1e300;

struct Context {
  const Objective* objective;
  Eigen::VectorXd x, g;
};

void load(const gsl_vector* v, Eigen::VectorXd& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = gsl_vector_get(v, i);
}

double eval(Context& c, const gsl_vector* v, gsl_vector* df) {
  load(v, c.x);
  double f;
  try {
    f = (*c.objective)(c.x, df ? &c.g : nullptr);
    if (!std::isfinite(f)) throw 0;
  } catch (...) {
    f = kWall;
    c.g.setZero();
  }
  if (df)
    for (Eigen::Index i = 0; i < c.g.size(); ++i) gsl_vector_set(df, i, c.g[i]);
  return f;
}

double f_cb(const gsl_vector* v, void* p) { return eval(*static_cast<Context*>(p), v, nullptr); }
void df_cb(const gsl_vector* v, void* p, gsl_vector* df) { eval(*static_cast<Context*>(p), v, df); }
void fdf_cb(const gsl_vector* v, void* p, double* f, gsl_vector* df) {
  *f = eval(*static_cast<Context*>(p), v, df);
}


}  // namespace

BfgsResult bfgs_minimize(const Objective& objective, Eigen::VectorXd x0, const BfgsOptions& options) {
  static const bool handler_off = (gsl_set_error_handler_off(), true);
  (void)handler_off;
  const auto n = x0.size();
  Context ctx{&objective, Eigen::VectorXd(n), Eigen::VectorXd(n)};
  gsl_multimin_function_fdf fn{f_cb, df_cb, fdf_cb, static_cast<std::size_t>(n), &ctx};

  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(n), gsl_vector_free);
  for (Eigen::Index i = 0; i < n; ++i) gsl_vector_set(x.get(), i, x0[i]);
  std::unique_ptr<gsl_multimin_fdfminimizer, decltype(&gsl_multimin_fdfminimizer_free)> s(
      gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n),
      gsl_multimin_fdfminimizer_free);
  gsl_multimin_fdfminimizer_set(s.get(), &fn, x.get(), options.initial_step, options.line_tol);

  BfgsResult r;
  int restarts = 0;
  bool stalled = false;
  double last_f = std::numeric_limits<double>::infinity();
  while (r.iterations < options.max_iterations) {
    if (gsl_multimin_test_gradient(s->gradient, options.gradient_tol) == GSL_SUCCESS) {
      r.converged = true;
      break;
    }
    ++r.iterations;
    const int status = gsl_multimin_fdfminimizer_iterate(s.get());
    if (status != GSL_SUCCESS) {
      // Stalled line search: restart the Hessian approximation from here
      // with a smaller trial step, unless the last restart made no progress.
      if (restarts >= options.max_restarts || !(s->f < last_f)) {
        stalled = true;
        break;
      }
      last_f = s->f;
      ++restarts;
      gsl_vector_memcpy(x.get(), s->x);
      gsl_multimin_fdfminimizer_set(s.get(), &fn, x.get(),
                                    options.initial_step * std::pow(0.1, restarts), options.line_tol);
    }
  }
  r.x.resize(n);
  load(s->x, r.x);
  r.f = s->f;
  r.grad_norm = gsl_blas_dnrm2(s->gradient);
  if (!r.converged)
    r.converged = r.grad_norm <= (stalled ? std::max(options.gradient_tol, options.stall_gradient_tol)
                                          : options.gradient_tol);
  return r;
}

}  // namespace kramers::detail
