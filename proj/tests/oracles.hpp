#pragma once

// Reference implementations used only by tests. They are slow and simple on
// purpose and share no code with the library.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double normal_density(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// Upper normal tail. Power series below 3, Mills-ratio continued fraction
/// (evaluated bottom-up) above.
inline double normal_survival(double x) {
  if (x < 0.0) return 1.0 - normal_survival(-x);
  if (x < 3.0) {
    // Phi(x) - 1/2 = phi(x) * sum x^(2n+1) / (2n+1)!!
    double term = x, sum = x;
    for (int n = 1; n < 200; ++n) {
      term *= x * x / (2.0 * n + 1.0);
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return 0.5 - normal_density(x) * sum;
  }
  double tail = x;
  for (int k = 300; k >= 1; --k) tail = x + k / tail;
  return normal_density(x) / tail;
}

/// Smallest x with survival(x) <= tail, by bisection on [lo, hi].
inline double bisect_upper_quantile(const std::function<double(double)>& survival,
                                    double tail, double lo, double hi) {
  for (int i = 0; i < 400 && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (survival(mid) > tail ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline std::vector<std::complex<double>> naive_dft(
    const std::vector<std::complex<double>>& x, bool inverse = false) {
  const std::size_t n = x.size();
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double angle =
          sign * 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) /
          static_cast<double>(n);
      acc += x[j] * std::polar(1.0, angle);
    }
    out[k] = acc;
  }
  return out;
}

/// Calls visit(subset) for every k-subset of {0..n-1} in lexicographic order.
inline void for_each_subset(std::size_t n, std::size_t k,
                            const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Posterior mode over all size-s supports under a uniform prior, for a
/// location family with log density `logf` and common shift delta. Returns
/// every maximizer (ties within 1e-12).
inline std::vector<std::vector<std::size_t>> posterior_modes(
    const std::vector<double>& x, std::size_t s, double delta,
    const std::function<double(double)>& logf) {
  std::vector<std::vector<std::size_t>> best;
  double best_ll = -INFINITY;
  for_each_subset(x.size(), s, [&](const std::vector<std::size_t>& sub) {
    double ll = 0.0;
    std::size_t pos = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const bool in = pos < sub.size() && sub[pos] == j;
      if (in) ++pos;
      ll += logf(in ? x[j] - delta : x[j]);
    }
    if (ll > best_ll + 1e-12) {
      best_ll = ll;
      best = {sub};
    } else if (std::fabs(ll - best_ll) <= 1e-12) {
      best.push_back(sub);
    }
  });
  return best;
}

/// Does some k-subset have every pair adjacent?
inline bool has_clique(const std::vector<std::vector<bool>>& adj, std::size_t k) {
  bool found = false;
  for_each_subset(adj.size(), k, [&](const std::vector<std::size_t>& sub) {
    if (found) return;
    for (std::size_t a = 0; a < sub.size(); ++a)
      for (std::size_t b = a + 1; b < sub.size(); ++b)
        if (!adj[sub[a]][sub[b]]) return;
    found = true;
  });
  return found;
}

inline double binomial(unsigned n, unsigned k) {
  double v = 1.0;
  for (unsigned i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

}  // namespace oracle
