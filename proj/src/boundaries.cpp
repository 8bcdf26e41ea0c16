#include "suprec/boundaries.hpp"

#include <cmath>

#include "suprec/error.hpp"

namespace suprec {

namespace {

constexpr double kOnBoundaryTol = 1e-12;

void require_beta(double beta, double lo, bool lo_open, double hi,
                  bool hi_open, const char* op) {
  const bool ok = (lo_open ? beta > lo : beta >= lo) &&
                  (hi_open ? beta < hi : beta <= hi);
  if (!ok || std::isnan(beta)) {
    throw DomainError(std::string(op) + ": beta out of range");
  }
}

}  // namespace

std::size_t floor_power(double p, double exponent) {
  const double v = std::pow(p, exponent);
  return static_cast<std::size_t>(std::floor(v * (1.0 + 1e-12)));
}

void SignalConfig::validate() const {
  if (p < 2) throw DomainError("SignalConfig: p must be at least 2");
  require_beta(beta, 0.0, true, 1.0, false, "SignalConfig");
  if (!(r_low > 0.0) || !(r_high >= r_low)) {
    throw DomainError("SignalConfig: need 0 < r_low <= r_high");
  }
  if (!(nu > 0.0)) throw DomainError("SignalConfig: nu must be positive");
}

std::size_t SignalConfig::sparsity() const {
  return floor_power(static_cast<double>(p), 1.0 - beta);
}

double SignalConfig::delta_low() const {
  return signal_magnitude(nu, r_low, static_cast<double>(p));
}

double SignalConfig::delta_high() const {
  return signal_magnitude(nu, r_high, static_cast<double>(p));
}

double signal_magnitude(double nu, double r, double p) {
  if (!(nu > 0.0) || !(r >= 0.0) || !(p > 1.0)) {
    throw DomainError("signal_magnitude: need nu > 0, r >= 0, p > 1");
  }
  return std::pow(nu * r * std::log(p), 1.0 / nu);
}

double strong_boundary(double beta, double nu) {
  require_beta(beta, 0.0, true, 1.0, false, "strong_boundary");
  if (!(nu > 0.0)) throw DomainError("strong_boundary: nu must be positive");
  return std::pow(1.0 + std::pow(1.0 - beta, 1.0 / nu), nu);
}

double detection_boundary(double beta) {
  require_beta(beta, 0.5, true, 1.0, false, "detection_boundary");
  if (beta >= 0.75) {
    const double root = 1.0 - std::sqrt(1.0 - beta);
    return root * root;
  }
  return beta - 0.5;
}

double weak_boundary(double beta) {
  require_beta(beta, 0.0, true, 1.0, false, "weak_boundary");
  return beta;
}

double non_udd_boundary(double beta) {
  require_beta(beta, 0.0, false, 1.0, false, "non_udd_boundary");
  return 4.0 * (1.0 - beta);
}

double reparam(double beta) {
  require_beta(beta, 0.0, false, 1.0, false, "reparam");
  const double root = 1.0 + std::sqrt(1.0 - beta);
  return 2.0 - root * root;
}

double reparametrized_boundary(double beta_tilde) {
  if (!(beta_tilde >= -2.0 && beta_tilde <= 1.0)) {
    throw DomainError("reparametrized_boundary: beta_tilde must lie in [-2, 1]");
  }
  return 2.0 - beta_tilde;
}

AltSignalParams heavier_than_agg_params(std::size_t p, double beta,
                                        double gamma, double r) {
  if (p < 2) throw DomainError("heavier_than_agg_params: p must be at least 2");
  require_beta(beta, 0.0, true, 1.0, true, "heavier_than_agg_params");
  if (!(gamma >= 1.0)) {
    throw DomainError("heavier_than_agg_params: gamma must be at least 1");
  }
  if (!(r > 0.0)) throw DomainError("heavier_than_agg_params: r must be positive");
  const double log_p = std::log(static_cast<double>(p));
  const double root = std::pow(log_p, 1.0 / gamma);
  const double base = root + std::log1p(-beta);
  if (!(base > 0.0)) {
    throw DomainError(
        "heavier_than_agg_params: (log p)^(1/gamma) + log(1 - beta) must be "
        "positive");
  }
  const double k = log_p - std::pow(base, gamma);
  const double count = std::floor(std::exp(log_p - k) * (1.0 + 1e-12));
  const double boundary = 2.0 - beta;
  return {static_cast<std::size_t>(count), std::exp(root) * r, boundary,
          std::abs(r - boundary) <= kOnBoundaryTol};
}

AltSignalParams lighter_than_agg_params(std::size_t p, double beta, double nu,
                                        double r) {
  if (p < 3) throw DomainError("lighter_than_agg_params: p must be at least 3");
  require_beta(beta, 0.0, true, 1.0, true, "lighter_than_agg_params");
  if (!(nu > 0.0)) throw DomainError("lighter_than_agg_params: nu must be positive");
  if (!(r > 0.0)) throw DomainError("lighter_than_agg_params: r must be positive");
  const double log_p = std::log(static_cast<double>(p));
  const double k = log_p - std::pow(log_p, std::pow(1.0 - beta, nu));
  const double count = std::floor(std::exp(log_p - k) * (1.0 + 1e-12));
  const double boundary = 2.0 - beta;
  return {static_cast<std::size_t>(count),
          std::pow(std::log(log_p), 1.0 / nu) * r, boundary,
          std::abs(r - boundary) <= kOnBoundaryTol};
}

}  // namespace suprec
