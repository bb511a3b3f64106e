#include "kramers/detail/cubature.hpp"

#include <cmath>
#include <queue>

namespace kramers::detail {

namespace {

constexpr int kDim = 3;
const double kLambda2 = std::sqrt(9.0 / 70.0);
const double kLambda4 = std::sqrt(9.0 / 10.0);
const double kLambda5 = std::sqrt(9.0 / 19.0);
constexpr double kW1 = (12824.0 - 9120.0 * kDim + 400.0 * kDim * kDim) / 19683.0;
constexpr double kW2 = 980.0 / 6561.0;
constexpr double kW3 = (1820.0 - 400.0 * kDim) / 19683.0;
constexpr double kW4 = 200.0 / 19683.0;
constexpr double kW5 = 6859.0 / 19683.0 / (1 << kDim);
constexpr double kE1 = (729.0 - 950.0 * kDim + 50.0 * kDim * kDim) / 729.0;
constexpr double kE2 = 245.0 / 486.0;
constexpr double kE3 = (265.0 - 100.0 * kDim) / 1458.0;
constexpr double kE4 = 25.0 / 729.0;

struct Region {
  Box3 box;
  double value;
  double error;
  int split_axis;
  bool operator<(const Region& o) const { return error < o.error; }
};

Region rule(const Integrand3& f, const Box3& box, long& evals) {
  double c[kDim], h[kDim], volume = 1.0;
  for (int d = 0; d < kDim; ++d) {
    c[d] = 0.5 * (box[d][0] + box[d][1]);
    h[d] = 0.5 * (box[d][1] - box[d][0]);
    volume *= 2.0 * h[d];
  }
  auto at = [&](double dx, double dy, double dz) {
    ++evals;
    return f(c[0] + dx * h[0], c[1] + dy * h[1], c[2] + dz * h[2]);
  };
  auto axis = [&](int d, double s) {
    double u[kDim] = {0, 0, 0};
    u[d] = s;
    return at(u[0], u[1], u[2]);
  };

  const double f1 = at(0, 0, 0);
  double s2 = 0.0, s3 = 0.0, s4 = 0.0, s5 = 0.0, worst = -1.0;
  int split = 0;
  const double ratio = (kLambda2 * kLambda2) / (kLambda4 * kLambda4);
  for (int d = 0; d < kDim; ++d) {
    const double a = axis(d, kLambda2) + axis(d, -kLambda2);
    const double b = axis(d, kLambda4) + axis(d, -kLambda4);
    s2 += a;
    s3 += b;
    const double diff = std::abs(a - 2 * f1 - ratio * (b - 2 * f1));
    if (diff > worst) {
      worst = diff;
      split = d;
    }
  }
  for (int d = 0; d < kDim; ++d)
    for (int e = d + 1; e < kDim; ++e)
      for (double sd : {-kLambda4, kLambda4})
        for (double se : {-kLambda4, kLambda4}) {
          double u[kDim] = {0, 0, 0};
          u[d] = sd;
          u[e] = se;
          s4 += at(u[0], u[1], u[2]);
        }
  for (double sx : {-kLambda5, kLambda5})
    for (double sy : {-kLambda5, kLambda5})
      for (double sz : {-kLambda5, kLambda5}) s5 += at(sx, sy, sz);

  const double i7 = volume * (kW1 * f1 + kW2 * s2 + kW3 * s3 + kW4 * s4 + kW5 * s5);
  const double i5 = volume * (kE1 * f1 + kE2 * s2 + kE3 * s3 + kE4 * s4);
  return {box, i7, std::abs(i7 - i5), split};
}

}  // namespace

CubatureResult hcubature(const Integrand3& f, const std::vector<Box3>& boxes, double rel_tol,
                         double abs_tol, long max_evaluations) {
  CubatureResult r;
  std::priority_queue<Region> heap;
  for (const auto& b : boxes) {
    auto reg = rule(f, b, r.evaluations);
    r.value += reg.value;
    r.error += reg.error;
    heap.push(reg);
  }
  while (!heap.empty()) {
    if (!std::isfinite(r.value)) break;
    if (r.error <= std::max(abs_tol, rel_tol * std::abs(r.value))) {
      r.converged = true;
      break;
    }
    if (r.evaluations >= max_evaluations) break;
    Region worst = heap.top();
    heap.pop();
    Box3 lo = worst.box, hi = worst.box;
    const int d = worst.split_axis;
    const double mid = 0.5 * (worst.box[d][0] + worst.box[d][1]);
    lo[d][1] = mid;
    hi[d][0] = mid;
    const auto a = rule(f, lo, r.evaluations), b = rule(f, hi, r.evaluations);
    r.value += a.value + b.value - worst.value;
    r.error += a.error + b.error - worst.error;
    heap.push(a);
    heap.push(b);
  }
  // Re-sum to shed the drift of the running totals.
  double v = 0.0, e = 0.0;
  while (!heap.empty()) {
    v += heap.top().value;
    e += heap.top().error;
    heap.pop();
  }
  r.value = v;
  r.error = e;
  return r;
}

}  // namespace kramers::detail
