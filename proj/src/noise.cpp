#include "suprec/noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "suprec/boundaries.hpp"
#include "suprec/detail/overloaded.hpp"
#include "suprec/error.hpp"
#include "suprec/fft.hpp"

namespace suprec {

using detail::overloaded;

namespace {

constexpr double kEmbeddingTolerance = 1e-9;
constexpr double kPsdTolerance = 1e-8;

void require_rho(double rho) {
  if (!(std::abs(rho) < 1.0)) throw DomainError("AR(1): need |rho| < 1");
}

void require_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("fGn: need 0 < H < 1");
}

void require_block_beta(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("block noise: need beta in [0, 1]");
}

void require_correlation_matrix(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
    throw DomainError("covariance: matrix must be square and nonempty");
  }
  if (static_cast<std::size_t>(sigma.rows()) > kMaxDenseDimension) {
    throw DomainError("covariance: dimension exceeds the dense budget of 2000");
  }
  for (Eigen::Index i = 0; i < sigma.rows(); ++i) {
    if (std::abs(sigma(i, i) - 1.0) > 1e-12) {
      throw DomainError("covariance: diagonal must be 1");
    }
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(sigma(i, j) - sigma(j, i)) > 1e-12) {
        throw DomainError("covariance: matrix must be symmetric");
      }
    }
  }
}

}  // namespace

void validate(const NoiseModel& model) {
  std::visit(overloaded{
                 [](const IidNoise&) {},
                 [](const Ar1Noise& a) { require_rho(a.rho); },
                 [](const FgnNoise& f) { require_hurst(f.hurst); },
                 [](const BlockNoise& b) { require_block_beta(b.beta); },
                 [](const ExplicitCovarianceNoise& e) {
                   require_correlation_matrix(e.sigma);
                 },
             },
             model);
}

std::vector<double> sample_iid(const TailFamily& family, std::size_t p,
                               RandomStream& rng) {
  return family.sample(p, rng);
}

void sample_ar1(double rho, RandomStream& rng, std::span<double> out) {
  require_rho(rho);
  if (out.empty()) return;
  std::normal_distribution<double> normal;
  const double innovation_scale = std::sqrt(1.0 - rho * rho);
  out[0] = normal(rng);
  for (std::size_t j = 1; j < out.size(); ++j) {
    out[j] = rho * out[j - 1] + innovation_scale * normal(rng);
  }
}

std::vector<double> sample_ar1(double rho, std::size_t p, RandomStream& rng) {
  std::vector<double> out(p);
  sample_ar1(rho, rng, out);
  return out;
}

double fgn_autocovariance(double hurst, std::size_t lag) {
  require_hurst(hurst);
  const double k = static_cast<double>(lag);
  const double two_h = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) +
                std::pow(std::abs(k - 1.0), two_h));
}

FgnGenerator::FgnGenerator(double hurst, std::size_t p) : p_(p) {
  require_hurst(hurst);
  if (p == 0) throw DomainError("fGn: p must be positive");
  const std::size_t half = std::bit_ceil(std::max<std::size_t>(p - 1, 1));
  const std::size_t size = 2 * half;

  std::vector<std::complex<double>> row(size);
  for (std::size_t k = 0; k <= half; ++k) {
    row[k] = fgn_autocovariance(hurst, k);
  }
  for (std::size_t k = 1; k < half; ++k) row[size - k] = row[k];
  fft_inplace(row);

  eigenvalues_.resize(size);
  sqrt_scaled_eigenvalues_.resize(size);
  for (std::size_t k = 0; k < size; ++k) {
    const double lambda = row[k].real();
    min_raw_eigenvalue_ = std::min(min_raw_eigenvalue_, lambda);
    if (lambda < -kEmbeddingTolerance) {
      std::ostringstream msg;
      msg << "fGn: circulant embedding has eigenvalue " << lambda;
      throw InternalError(msg.str());
    }
    eigenvalues_[k] = std::max(lambda, 0.0);
    sqrt_scaled_eigenvalues_[k] =
        std::sqrt(eigenvalues_[k] / static_cast<double>(size));
  }
}

void FgnGenerator::sample(RandomStream& rng, std::span<double> out) const {
  if (out.size() != p_) throw DomainError("fGn: output length mismatch");
  std::normal_distribution<double> normal;
  std::vector<std::complex<double>> work(sqrt_scaled_eigenvalues_.size());
  for (std::size_t k = 0; k < work.size(); ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    work[k] = sqrt_scaled_eigenvalues_[k] * std::complex<double>(re, im);
  }
  fft_inplace(work);
  for (std::size_t j = 0; j < p_; ++j) out[j] = work[j].real();
}

std::vector<double> FgnGenerator::sample(RandomStream& rng) const {
  std::vector<double> out(p_);
  sample(rng, out);
  return out;
}

std::vector<double> FgnGenerator::embedding_covariance() const {
  std::vector<std::complex<double>> spectrum(eigenvalues_.begin(),
                                             eigenvalues_.end());
  fft_inplace(spectrum, /*inverse=*/true);
  std::vector<double> cov(p_);
  const double scale = 1.0 / static_cast<double>(spectrum.size());
  for (std::size_t j = 0; j < p_; ++j) cov[j] = spectrum[j].real() * scale;
  return cov;
}

std::vector<double> sample_fgn(double hurst, std::size_t p, RandomStream& rng) {
  return FgnGenerator(hurst, p).sample(rng);
}

BlockLayout block_layout(std::size_t p, double beta) {
  require_block_beta(beta);
  if (p == 0) throw DomainError("block noise: p must be positive");
  const std::size_t count = floor_power(static_cast<double>(p), 1.0 - beta);
  if (count < 1) throw DomainError("block noise: fewer than one block");
  return {count, p / count};
}

void sample_block(double beta, RandomStream& rng, std::span<double> out) {
  const auto layout = block_layout(out.size(), beta);
  std::normal_distribution<double> normal;
  std::size_t j = 0;
  for (std::size_t g = 0; g < layout.count; ++g) {
    const double value = normal(rng);
    const std::size_t end =
        (g + 1 == layout.count) ? out.size() : (g + 1) * layout.base_size;
    for (; j < end; ++j) out[j] = value;
  }
}

std::vector<double> sample_block(std::size_t p, double beta, RandomStream& rng) {
  std::vector<double> out(p);
  sample_block(beta, rng, out);
  return out;
}

ExplicitCovarianceSampler::ExplicitCovarianceSampler(
    const Eigen::MatrixXd& sigma) {
  require_correlation_matrix(sigma);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() == Eigen::Success) {
    factor_ = llt.matrixL();
    return;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
  if (eig.info() != Eigen::Success) {
    throw DomainError("covariance: eigendecomposition failed");
  }
  const double min_eigenvalue = eig.eigenvalues().minCoeff();
  if (min_eigenvalue < -kPsdTolerance) {
    std::ostringstream msg;
    msg << "covariance: not positive semidefinite (eigenvalue "
        << min_eigenvalue << ")";
    throw DomainError(msg.str());
  }
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  factor_ = eig.eigenvectors() * roots.asDiagonal();
}

void ExplicitCovarianceSampler::sample(RandomStream& rng,
                                       std::span<double> out) const {
  const auto n = factor_.rows();
  if (out.size() != static_cast<std::size_t>(n)) {
    throw DomainError("covariance: output length mismatch");
  }
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
  Eigen::Map<Eigen::VectorXd>(out.data(), n) = factor_ * z;
}

std::vector<double> sample_explicit(const Eigen::MatrixXd& sigma,
                                    RandomStream& rng) {
  ExplicitCovarianceSampler sampler(sigma);
  std::vector<double> out(sampler.dimension());
  sampler.sample(rng, out);
  return out;
}

Eigen::MatrixXd covariance_of(const NoiseModel& model, std::size_t p) {
  validate(model);
  if (p == 0 || p > kMaxDenseDimension) {
    throw DomainError("covariance_of: p must lie in [1, 2000]");
  }
  const auto n = static_cast<Eigen::Index>(p);
  return std::visit(
      overloaded{
          [&](const IidNoise&) -> Eigen::MatrixXd {
            return Eigen::MatrixXd::Identity(n, n);
          },
          [&](const Ar1Noise& a) -> Eigen::MatrixXd {
            Eigen::MatrixXd sigma(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
              for (Eigen::Index j = 0; j < n; ++j)
                sigma(i, j) = std::pow(a.rho, static_cast<double>(std::abs(i - j)));
            return sigma;
          },
          [&](const FgnNoise& f) -> Eigen::MatrixXd {
            std::vector<double> acf(p);
            for (std::size_t k = 0; k < p; ++k) acf[k] = fgn_autocovariance(f.hurst, k);
            Eigen::MatrixXd sigma(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
              for (Eigen::Index j = 0; j < n; ++j)
                sigma(i, j) = acf[static_cast<std::size_t>(std::abs(i - j))];
            return sigma;
          },
          [&](const BlockNoise& b) -> Eigen::MatrixXd {
            const auto layout = block_layout(p, b.beta);
            Eigen::MatrixXd sigma(n, n);
            for (std::size_t i = 0; i < p; ++i)
              for (std::size_t j = 0; j < p; ++j)
                sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    layout.block_of(i) == layout.block_of(j) ? 1.0 : 0.0;
            return sigma;
          },
          [&](const ExplicitCovarianceNoise& e) -> Eigen::MatrixXd {
            if (e.sigma.rows() != n) {
              throw DomainError("covariance_of: explicit matrix has wrong dimension");
            }
            return e.sigma;
          },
      },
      model);
}

NoiseGenerator::NoiseGenerator(NoiseModel model, std::size_t p)
    : model_(std::move(model)), p_(p) {
  validate(model_);
  if (p_ == 0) throw DomainError("NoiseGenerator: p must be positive");
  if (const auto* f = std::get_if<FgnNoise>(&model_)) {
    fgn_ = std::make_shared<const FgnGenerator>(f->hurst, p_);
  } else if (const auto* e = std::get_if<ExplicitCovarianceNoise>(&model_)) {
    if (static_cast<std::size_t>(e->sigma.rows()) != p_) {
      throw DomainError("NoiseGenerator: explicit matrix has wrong dimension");
    }
    explicit_ = std::make_shared<const ExplicitCovarianceSampler>(e->sigma);
  } else if (const auto* b = std::get_if<BlockNoise>(&model_)) {
    block_layout(p_, b->beta);
  }
}

void NoiseGenerator::sample(RandomStream& rng, std::span<double> out) const {
  if (out.size() != p_) throw DomainError("NoiseGenerator: output length mismatch");
  std::visit(overloaded{
                 [&](const IidNoise& m) { m.family.sample(rng, out); },
                 [&](const Ar1Noise& m) { sample_ar1(m.rho, rng, out); },
                 [&](const FgnNoise&) { fgn_->sample(rng, out); },
                 [&](const BlockNoise& m) { sample_block(m.beta, rng, out); },
                 [&](const ExplicitCovarianceNoise&) { explicit_->sample(rng, out); },
             },
             model_);
}

}  // namespace suprec
