#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "suprec/random.hpp"

namespace suprec {

// Marginal error laws. All are symmetric about zero and unit scale.

/// Standard normal.
struct Gaussian {};
/// Density exp(-|x|) / 2.
struct Laplace {};
/// Density proportional to exp(-|x|^nu / nu).
struct GeneralizedGaussian {
  double nu;
};
/// Upper tail exactly exp(-x^nu / nu) beyond the point where it equals 1/4,
/// uniform in between. Its 1 - 1/p quantile is (nu log p)^(1/nu) for p >= 4.
struct AggAsymptotic {
  double nu;
};
/// Survival exp(-c * log(1 + |x|)^gamma) / 2 on each side.
struct HeavierThanAgg {
  double gamma;
  double c;
};
/// Survival exp(1 - exp(|x|^nu)) / 2 on each side.
struct LighterThanAgg {
  double nu;
};
/// Upper tail exactly x^(-tail_index) beyond the point where it equals 1/4,
/// uniform in between.
struct Pareto {
  double tail_index;
};

/*!
 * A marginal error distribution: survival, quantile, density and sampler.
 *
 * Parameters are validated on construction; a TailFamily is always usable.
 * `Gaussian` and `Laplace` share their laws with `GeneralizedGaussian(2)` and
 * `GeneralizedGaussian(1)` but use closed forms.
 */
class TailFamily {
 public:
  using Variant = std::variant<Gaussian, Laplace, GeneralizedGaussian,
                               AggAsymptotic, HeavierThanAgg, LighterThanAgg,
                               Pareto>;

  TailFamily() : TailFamily(Gaussian{}) {}
  // Throws DomainError on invalid parameters.
  explicit TailFamily(Variant law);

  static TailFamily gaussian() { return TailFamily(Gaussian{}); }
  static TailFamily laplace() { return TailFamily(Laplace{}); }
  static TailFamily generalized_gaussian(double nu) {
    return TailFamily(GeneralizedGaussian{nu});
  }
  static TailFamily agg_asymptotic(double nu) {
    return TailFamily(AggAsymptotic{nu});
  }
  static TailFamily heavier_than_agg(double gamma, double c) {
    return TailFamily(HeavierThanAgg{gamma, c});
  }
  static TailFamily lighter_than_agg(double nu) {
    return TailFamily(LighterThanAgg{nu});
  }
  static TailFamily pareto(double tail_index) {
    return TailFamily(Pareto{tail_index});
  }

  const Variant& law() const { return law_; }
  std::string name() const;

  // nu for the AGG(nu) laws (Gaussian 2, Laplace 1); empty otherwise.
  std::optional<double> agg_index() const;
  bool is_gaussian() const;

  /// 1 - F(x).
  double survival(double x) const;
  double cdf(double x) const;
  /// log(1 - F(x)), finite far beyond the underflow point of survival().
  double log_survival(double x) const;

  /// Generalized inverse F^{-1}(q), q in (0, 1).
  double quantile(double q) const;
  /// x with survival(x) == tail, tail in (0, 1). More accurate than
  /// quantile(1 - tail) when tail is tiny.
  double upper_quantile(double tail) const;

  double log_density(double x) const;
  double density(double x) const;

  void sample(RandomStream& rng, std::span<double> out) const;
  std::vector<double> sample(std::size_t n, RandomStream& rng) const;

 private:
  Variant law_;
};

/// (nu log p)^(1/nu): leading-order 1 - 1/p quantile of an AGG(nu) law.
double asymptotic_quantile(double nu, double p);

}  // namespace suprec
