#include "suprec/lambert_w.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "suprec/error.hpp"

namespace suprec {

namespace {

constexpr double kInvE = 1.0 / std::numbers::e;
// Inputs this close below -1/e are treated as the branch point itself.
constexpr double kBranchSlack = 4 * std::numeric_limits<double>::epsilon();

// Series about the branch point in p = +-sqrt(2(e x + 1)).
double branch_point_series(double p) {
  return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
}

double halley(double w, double x) {
  constexpr double tol = 4 * std::numeric_limits<double>::epsilon();
  for (int iter = 0; iter < 64; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (f == 0.0 || w == -1.0) break;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= tol * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace

double lambert_w(LambertBranch branch, double x) {
  if (std::isnan(x)) throw DomainError("lambert_w: NaN argument");
  if (x < -kInvE - kBranchSlack) {
    throw DomainError("lambert_w: argument below -1/e");
  }
  if (x <= -kInvE) return -1.0;

  const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));

  if (branch == LambertBranch::principal) {
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return x;
    double w;
    if (x < -0.32) {
      w = branch_point_series(p);
    } else {
      // Winitzki's global approximation.
      const double l = std::log1p(x);
      w = l * (1.0 - std::log1p(l) / (2.0 + l));
    }
    return std::max(halley(w, x), -1.0);
  }

  if (x >= 0.0) {
    throw DomainError("lambert_w: minus_one branch needs -1/e <= x < 0");
  }
  double w;
  if (x < -0.25) {
    w = branch_point_series(-p);
  } else {
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  }
  return std::min(halley(w, x), -1.0);
}

}  // namespace suprec
