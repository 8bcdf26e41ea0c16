#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "suprec/random.hpp"
#include "suprec/tail_models.hpp"

namespace suprec {

struct IidNoise {
  TailFamily family;
};
struct Ar1Noise {
  double rho;
};
struct FgnNoise {
  double hurst;
};
/// floor(p^(1 - beta)) perfectly correlated blocks, independent across blocks.
struct BlockNoise {
  double beta;
};
struct ExplicitCovarianceNoise {
  Eigen::MatrixXd sigma;
};

/// Dependence structure of the error vector. Every variant other than IID has
/// standard Gaussian marginals.
using NoiseModel = std::variant<IidNoise, Ar1Noise, FgnNoise, BlockNoise,
                                ExplicitCovarianceNoise>;

// Dense factorization budget for explicit covariances.
inline constexpr std::size_t kMaxDenseDimension = 2000;

std::vector<double> sample_iid(const TailFamily& family, std::size_t p,
                               RandomStream& rng);

/// Stationary AR(1): e(1) ~ N(0, 1), e(j) = rho e(j-1) + sqrt(1 - rho^2) z(j).
void sample_ar1(double rho, RandomStream& rng, std::span<double> out);
std::vector<double> sample_ar1(double rho, std::size_t p, RandomStream& rng);

/// fGn autocovariance (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2.
double fgn_autocovariance(double hurst, std::size_t lag);

/*!
 * Exact fractional Gaussian noise by circulant embedding.
 *
 * The autocovariance is embedded in a symmetric circulant of size 2m, with m
 * the smallest power of two >= p - 1, whose eigenvalues come from one FFT at
 * construction. Each draw costs one FFT of that size. The object is
 * immutable after construction and may be shared between threads.
 */
class FgnGenerator {
 public:
  FgnGenerator(double hurst, std::size_t p);

  std::size_t dimension() const { return p_; }
  std::size_t embedding_size() const { return eigenvalues_.size(); }
  // Most negative eigenvalue before clipping (0 if none were negative).
  double min_raw_eigenvalue() const { return min_raw_eigenvalue_; }

  void sample(RandomStream& rng, std::span<double> out) const;
  std::vector<double> sample(RandomStream& rng) const;

  /// Autocovariance of the generated sequence at lags 0..p-1, recovered from
  /// the (clipped) embedding spectrum.
  std::vector<double> embedding_covariance() const;

 private:
  std::size_t p_;
  std::vector<double> sqrt_scaled_eigenvalues_;  // sqrt(lambda_k / M)
  std::vector<double> eigenvalues_;
  double min_raw_eigenvalue_ = 0.0;
};

std::vector<double> sample_fgn(double hurst, std::size_t p, RandomStream& rng);

/// Block partition: `count` blocks, the first count-1 of size p / count and
/// the last absorbing the remainder.
struct BlockLayout {
  std::size_t count;
  std::size_t base_size;
  std::size_t block_of(std::size_t index) const {
    return std::min(index / base_size, count - 1);
  }
};
BlockLayout block_layout(std::size_t p, double beta);

void sample_block(double beta, RandomStream& rng, std::span<double> out);
std::vector<double> sample_block(std::size_t p, double beta, RandomStream& rng);

/// N(0, sigma) through a Cholesky factor, falling back to a symmetric
/// eigendecomposition (eigenvalues above -1e-8 clipped to zero) when sigma is
/// only semidefinite.
class ExplicitCovarianceSampler {
 public:
  explicit ExplicitCovarianceSampler(const Eigen::MatrixXd& sigma);
  std::size_t dimension() const { return static_cast<std::size_t>(factor_.rows()); }
  void sample(RandomStream& rng, std::span<double> out) const;

 private:
  Eigen::MatrixXd factor_;
};

std::vector<double> sample_explicit(const Eigen::MatrixXd& sigma,
                                    RandomStream& rng);

/// Exact covariance matrix of the model in dimension p (p <= 2000).
/// IID returns the identity.
Eigen::MatrixXd covariance_of(const NoiseModel& model, std::size_t p);

/*!
 * Draws error vectors of a fixed dimension from a NoiseModel.
 *
 * Model state that is expensive to build (fGn spectrum, covariance factor) is
 * computed once here and shared read-only by every draw.
 */
class NoiseGenerator {
 public:
  NoiseGenerator(NoiseModel model, std::size_t p);

  std::size_t dimension() const { return p_; }
  const NoiseModel& model() const { return model_; }
  void sample(RandomStream& rng, std::span<double> out) const;

 private:
  NoiseModel model_;
  std::size_t p_;
  std::shared_ptr<const FgnGenerator> fgn_;
  std::shared_ptr<const ExplicitCovarianceSampler> explicit_;
};

/// Throws DomainError for invalid parameters (|rho| >= 1, H outside (0, 1),
/// beta outside (0, 1], malformed sigma).
void validate(const NoiseModel& model);

}  // namespace suprec
