#pragma once

#include <cstddef>

namespace suprec {

/// floor(p^exponent), robust to pow() landing a few ulps below an integer.
std::size_t floor_power(double p, double exponent);

/*!
 * Sparsity and signal-size parametrization of a sparse mean vector:
 * s = floor(p^(1 - beta)) nonzero entries with magnitudes in
 * [(nu r_low log p)^(1/nu), (nu r_high log p)^(1/nu)].
 */
struct SignalConfig {
  std::size_t p;
  double beta;
  double r_low;
  double r_high;
  double nu;

  // Throws DomainError unless p >= 2, beta in (0, 1], 0 < r_low <= r_high,
  // nu > 0.
  void validate() const;
  std::size_t sparsity() const;
  double delta_low() const;
  double delta_high() const;
};

/// (nu r log p)^(1/nu).
double signal_magnitude(double nu, double r, double p);

/// Strong classification boundary (1 + (1 - beta)^(1/nu))^nu, beta in (0, 1].
double strong_boundary(double beta, double nu);

/// Gaussian detection boundary, beta in (1/2, 1].
double detection_boundary(double beta);

/// Weak classification boundary, the identity on beta in (0, 1].
double weak_boundary(double beta);

/// 4 (1 - beta): what Bonferroni-type thresholds reach under perfectly
/// block-correlated Gaussian noise. beta in [0, 1].
double non_udd_boundary(double beta);

/// beta_tilde = 2 - (1 + sqrt(1 - beta))^2. Maps (0, 1] onto [-2, 1]; values
/// below zero occur for beta < 3/4.
double reparam(double beta);

/// 2 - beta_tilde, for beta_tilde in [-2, 1].
double reparametrized_boundary(double beta_tilde);

/// Sparsity and magnitude for the heavier- and lighter-than-AGG models, whose
/// boundary in these coordinates is 2 - beta.
struct AltSignalParams {
  std::size_t s;
  double delta;
  double boundary;   // 2 - beta
  bool on_boundary;  // r == 2 - beta: no recovery guarantee either way
};

/// k(beta) = log p - ((log p)^(1/gamma) + log(1 - beta))^gamma,
/// s = floor(p e^{-k}), delta = exp((log p)^(1/gamma)) r.
AltSignalParams heavier_than_agg_params(std::size_t p, double beta,
                                        double gamma, double r);

/// k(beta) = log p - (log p)^((1 - beta)^nu),
/// s = floor(p e^{-k}), delta = (log log p)^(1/nu) r.
AltSignalParams lighter_than_agg_params(std::size_t p, double beta, double nu,
                                        double r);

}  // namespace suprec
