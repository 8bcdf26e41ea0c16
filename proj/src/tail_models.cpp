#include "suprec/tail_models.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "suprec/detail/overloaded.hpp"
#include "suprec/error.hpp"

namespace suprec {

using detail::overloaded;

namespace {

constexpr double kLog2 = std::numbers::ln2;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2 pi))

// ---------------------------------------------------------------------------
// Gaussian
// ---------------------------------------------------------------------------

double gaussian_upper_survival(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double gaussian_upper_log_survival(double x) {
  if (x < 35.0) return std::log(gaussian_upper_survival(x));
  // Asymptotic Mills-ratio expansion; truncation error < 1e-14 for x >= 35.
  const double inv2 = 1.0 / (x * x);
  double term = 1.0;
  double series = 1.0;
  for (int k = 1; k <= 6; ++k) {
    term *= -(2.0 * k - 1.0) * inv2;
    series += term;
  }
  return -0.5 * x * x - std::log(x) - kLogSqrt2Pi + std::log(series);
}

// Acklam's rational approximation of the standard normal lower quantile,
// relative error below 1.2e-9 over (0, 1/2].
double acklam_lower(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  if (p < 0.02425) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double gaussian_upper_quantile(double tail) {
  double x = -acklam_lower(tail);
  const double log_tail = std::log(tail);
  // Newton on log-survival: d/dx log S(x) = -phi(x) / S(x).
  for (int iter = 0; iter < 3; ++iter) {
    const double log_s = gaussian_upper_log_survival(x);
    const double hazard = std::exp(-0.5 * x * x - kLogSqrt2Pi - log_s);
    const double step = (log_s - log_tail) / hazard;
    x += step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Generalized Gaussian, density exp(-|x|^nu / nu) / (2 nu^(1/nu - 1) G(1/nu))
// ---------------------------------------------------------------------------

double gg_upper_survival(double nu, double x) {
  return 0.5 * boost::math::gamma_q(1.0 / nu, std::pow(x, nu) / nu);
}

double gg_upper_log_survival(double nu, double x) {
  const double a = 1.0 / nu;
  const double z = std::pow(x, nu) / nu;
  const double q = boost::math::gamma_q(a, z);
  if (q > 1e-280) return std::log(0.5 * q);
  // log Gamma(a, z) ~ (a-1) log z - z + log(1 + (a-1)/z + (a-1)(a-2)/z^2 ...)
  double term = 1.0;
  double series = 1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= (a - k) / z;
    series += term;
  }
  return (a - 1.0) * std::log(z) - z + std::log(series) - std::lgamma(a) -
         kLog2;
}

double gg_upper_quantile(double nu, double tail) {
  const double y = boost::math::gamma_q_inv(1.0 / nu, 2.0 * tail);
  return std::pow(nu * y, 1.0 / nu);
}

double gg_log_density(double nu, double x) {
  const double a = 1.0 / nu;
  return -std::pow(std::abs(x), nu) / nu - kLog2 - (a - 1.0) * std::log(nu) -
         std::lgamma(a);
}

// ---------------------------------------------------------------------------
// Laws with an exact power/exponential tail beyond x0 and uniform mass 1/2 on
// [-x0, x0]; survival there is 1/2 - x / (4 x0).
// ---------------------------------------------------------------------------

double agg_asymptotic_knot(double nu) {
  return std::pow(nu * std::log(4.0), 1.0 / nu);
}
double pareto_knot(double alpha) { return std::pow(4.0, 1.0 / alpha); }

double center_survival(double x0, double x) { return 0.5 - x / (4.0 * x0); }

// Survival of the law for x >= 0, per variant.
struct UpperSurvival {
  double x;
  double operator()(Gaussian) const { return gaussian_upper_survival(x); }
  double operator()(Laplace) const { return 0.5 * std::exp(-x); }
  double operator()(const GeneralizedGaussian& g) const {
    return gg_upper_survival(g.nu, x);
  }
  double operator()(const AggAsymptotic& g) const {
    const double x0 = agg_asymptotic_knot(g.nu);
    return x < x0 ? center_survival(x0, x) : std::exp(-std::pow(x, g.nu) / g.nu);
  }
  double operator()(const HeavierThanAgg& h) const {
    return 0.5 * std::exp(-h.c * std::pow(std::log1p(x), h.gamma));
  }
  double operator()(const LighterThanAgg& l) const {
    return 0.5 * std::exp(1.0 - std::exp(std::pow(x, l.nu)));
  }
  double operator()(const Pareto& p) const {
    const double x0 = pareto_knot(p.tail_index);
    return x < x0 ? center_survival(x0, x) : std::pow(x, -p.tail_index);
  }
};

struct UpperLogSurvival {
  double x;
  double operator()(Gaussian) const { return gaussian_upper_log_survival(x); }
  double operator()(Laplace) const { return -x - kLog2; }
  double operator()(const GeneralizedGaussian& g) const {
    return gg_upper_log_survival(g.nu, x);
  }
  double operator()(const AggAsymptotic& g) const {
    const double x0 = agg_asymptotic_knot(g.nu);
    return x < x0 ? std::log(center_survival(x0, x)) : -std::pow(x, g.nu) / g.nu;
  }
  double operator()(const HeavierThanAgg& h) const {
    return -h.c * std::pow(std::log1p(x), h.gamma) - kLog2;
  }
  double operator()(const LighterThanAgg& l) const {
    return 1.0 - std::exp(std::pow(x, l.nu)) - kLog2;
  }
  double operator()(const Pareto& p) const {
    const double x0 = pareto_knot(p.tail_index);
    return x < x0 ? std::log(center_survival(x0, x))
                  : -p.tail_index * std::log(x);
  }
};

// x >= 0 with survival(x) == tail, for tail in (0, 1/2].
struct UpperQuantile {
  double tail;
  double operator()(Gaussian) const { return gaussian_upper_quantile(tail); }
  double operator()(Laplace) const { return -std::log(2.0 * tail); }
  double operator()(const GeneralizedGaussian& g) const {
    return gg_upper_quantile(g.nu, tail);
  }
  double operator()(const AggAsymptotic& g) const {
    if (tail <= 0.25) return std::pow(-g.nu * std::log(tail), 1.0 / g.nu);
    return (0.5 - tail) * 4.0 * agg_asymptotic_knot(g.nu);
  }
  double operator()(const HeavierThanAgg& h) const {
    return std::expm1(std::pow(-std::log(2.0 * tail) / h.c, 1.0 / h.gamma));
  }
  double operator()(const LighterThanAgg& l) const {
    return std::pow(std::log(1.0 - std::log(2.0 * tail)), 1.0 / l.nu);
  }
  double operator()(const Pareto& p) const {
    if (tail <= 0.25) return std::pow(tail, -1.0 / p.tail_index);
    return (0.5 - tail) * 4.0 * pareto_knot(p.tail_index);
  }
};

// log density at |x|.
struct LogDensity {
  double x;  // nonnegative
  double operator()(Gaussian) const { return -0.5 * x * x - kLogSqrt2Pi; }
  double operator()(Laplace) const { return -x - kLog2; }
  double operator()(const GeneralizedGaussian& g) const {
    return gg_log_density(g.nu, x);
  }
  double operator()(const AggAsymptotic& g) const {
    const double x0 = agg_asymptotic_knot(g.nu);
    if (x < x0) return -std::log(4.0 * x0);
    return (g.nu - 1.0) * std::log(x) - std::pow(x, g.nu) / g.nu;
  }
  double operator()(const HeavierThanAgg& h) const {
    const double l = std::log1p(x);
    return -kLog2 - h.c * std::pow(l, h.gamma) + std::log(h.c * h.gamma) +
           (h.gamma - 1.0) * std::log(l) - l;
  }
  double operator()(const LighterThanAgg& n) const {
    const double xn = std::pow(x, n.nu);
    return -kLog2 + 1.0 - std::exp(xn) + xn + std::log(n.nu) +
           (n.nu - 1.0) * std::log(x);
  }
  double operator()(const Pareto& p) const {
    const double x0 = pareto_knot(p.tail_index);
    if (x < x0) return -std::log(4.0 * x0);
    return std::log(p.tail_index) - (p.tail_index + 1.0) * std::log(x);
  }
};

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << "TailFamily: " << what << " must be positive and finite, got " << v;
    throw DomainError(msg.str());
  }
}

}  // namespace

TailFamily::TailFamily(Variant law) : law_(law) {
  std::visit(overloaded{
                 [](Gaussian) {},
                 [](Laplace) {},
                 [](const GeneralizedGaussian& g) { require_positive(g.nu, "nu"); },
                 [](const AggAsymptotic& g) { require_positive(g.nu, "nu"); },
                 [](const HeavierThanAgg& h) {
                   require_positive(h.c, "c");
                   if (!(h.gamma > 1.0) || !std::isfinite(h.gamma)) {
                     throw DomainError("TailFamily: gamma must exceed 1");
                   }
                 },
                 [](const LighterThanAgg& l) { require_positive(l.nu, "nu"); },
                 [](const Pareto& p) {
                   require_positive(p.tail_index, "tail_index");
                 },
             },
             law_);
}

std::string TailFamily::name() const {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](Gaussian) { out << "gaussian"; },
                 [&](Laplace) { out << "laplace"; },
                 [&](const GeneralizedGaussian& g) {
                   out << "generalized_gaussian(nu=" << g.nu << ")";
                 },
                 [&](const AggAsymptotic& g) {
                   out << "agg_asymptotic(nu=" << g.nu << ")";
                 },
                 [&](const HeavierThanAgg& h) {
                   out << "heavier_than_agg(gamma=" << h.gamma << ",c=" << h.c
                       << ")";
                 },
                 [&](const LighterThanAgg& l) {
                   out << "lighter_than_agg(nu=" << l.nu << ")";
                 },
                 [&](const Pareto& p) {
                   out << "pareto(tail_index=" << p.tail_index << ")";
                 },
             },
             law_);
  return out.str();
}

std::optional<double> TailFamily::agg_index() const {
  return std::visit(
      overloaded{
          [](Gaussian) -> std::optional<double> { return 2.0; },
          [](Laplace) -> std::optional<double> { return 1.0; },
          [](const GeneralizedGaussian& g) -> std::optional<double> {
            return g.nu;
          },
          [](const AggAsymptotic& g) -> std::optional<double> { return g.nu; },
          [](const auto&) -> std::optional<double> { return std::nullopt; },
      },
      law_);
}

bool TailFamily::is_gaussian() const {
  if (std::holds_alternative<Gaussian>(law_)) return true;
  const auto* g = std::get_if<GeneralizedGaussian>(&law_);
  return g != nullptr && g->nu == 2.0;
}

double TailFamily::survival(double x) const {
  if (std::isnan(x)) throw DomainError("survival: NaN argument");
  if (x >= 0.0) return std::visit(UpperSurvival{x}, law_);
  return 1.0 - std::visit(UpperSurvival{-x}, law_);
}

double TailFamily::cdf(double x) const {
  if (std::isnan(x)) throw DomainError("cdf: NaN argument");
  if (x >= 0.0) return 1.0 - std::visit(UpperSurvival{x}, law_);
  return std::visit(UpperSurvival{-x}, law_);
}

double TailFamily::log_survival(double x) const {
  if (std::isnan(x)) throw DomainError("log_survival: NaN argument");
  if (x >= 0.0) return std::visit(UpperLogSurvival{x}, law_);
  return std::log1p(-std::visit(UpperSurvival{-x}, law_));
}

double TailFamily::upper_quantile(double tail) const {
  if (!(tail > 0.0 && tail < 1.0)) {
    throw DomainError("upper_quantile: tail probability must lie in (0, 1)");
  }
  if (tail <= 0.5) return std::visit(UpperQuantile{tail}, law_);
  return -std::visit(UpperQuantile{1.0 - tail}, law_);
}

double TailFamily::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("quantile: probability must lie in (0, 1)");
  }
  if (q >= 0.5) return std::visit(UpperQuantile{1.0 - q}, law_);
  return -std::visit(UpperQuantile{q}, law_);
}

double TailFamily::log_density(double x) const {
  return std::visit(LogDensity{std::abs(x)}, law_);
}

double TailFamily::density(double x) const { return std::exp(log_density(x)); }

void TailFamily::sample(RandomStream& rng, std::span<double> out) const {
  std::visit(
      overloaded{
          [&](Gaussian) {
            std::normal_distribution<double> normal;
            for (double& v : out) v = normal(rng);
          },
          [&](Laplace) {
            for (double& v : out) {
              const double magnitude = -std::log(rng.uniform_open());
              v = (rng() & 1u) ? magnitude : -magnitude;
            }
          },
          [&](const GeneralizedGaussian& g) {
            std::gamma_distribution<double> gamma(1.0 / g.nu, 1.0);
            const double inv_nu = 1.0 / g.nu;
            for (double& v : out) {
              const double magnitude = std::pow(g.nu * gamma(rng), inv_nu);
              v = (rng() & 1u) ? magnitude : -magnitude;
            }
          },
          [&](const auto&) {
            for (double& v : out) v = upper_quantile(rng.uniform_open());
          },
      },
      law_);
}

std::vector<double> TailFamily::sample(std::size_t n, RandomStream& rng) const {
  std::vector<double> out(n);
  sample(rng, out);
  return out;
}

double asymptotic_quantile(double nu, double p) {
  if (!(nu > 0.0)) throw DomainError("asymptotic_quantile: nu must be positive");
  if (!(p >= 2.0)) throw DomainError("asymptotic_quantile: p must be at least 2");
  return std::pow(nu * std::log(p), 1.0 / nu);
}

}  // namespace suprec
