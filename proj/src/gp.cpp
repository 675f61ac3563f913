#include <cmath>
#include <string>

#include "falsify/gp.hpp"

namespace falsify::gp {

namespace {

void check_point(std::span<const double> x) {
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("input coordinate outside the normalized box [0,1]");
  }
}

}  // namespace

void Dataset::append(std::vector<double> x, double z) {
  if (!inputs.empty() && x.size() != inputs.front().size())
    throw std::invalid_argument("dataset input dimension mismatch");
  check_point(x);
  if (!std::isfinite(z)) throw std::invalid_argument("non-finite observation");
  inputs.push_back(std::move(x));
  observations.push_back(z);
}

double kernel(std::span<const double> x, std::span<const double> y, const KernelConfig& config) {
  if (x.size() != y.size()) throw std::invalid_argument("kernel input dimension mismatch");
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sq += d * d;
  }
  return std::exp(-sq / (2.0 * config.length_scale * config.length_scale));
}

std::vector<double> gram_matrix(const std::vector<std::vector<double>>& pts,
                                const KernelConfig& config, Exec exec) {
  const std::int64_t n = static_cast<std::int64_t>(pts.size());
  std::vector<double> gram(static_cast<std::size_t>(n * n));
  // One flat index per entry; the (i, j) and (j, i) slots are computed
  // independently from the same inputs, so symmetry is exact.
  for_each_index(n * n, exec, [&](std::int64_t idx) {
    const std::int64_t i = idx / n;
    const std::int64_t j = idx % n;
    gram[idx] = kernel(pts[i], pts[j], config);
  });
  return gram;
}

Posterior Posterior::fit(const Dataset& data, const KernelConfig& config, Exec exec) {
  if (data.inputs.size() != data.observations.size())
    throw std::invalid_argument("dataset input/observation length mismatch");
  if (!(config.length_scale > 0.0)) throw std::invalid_argument("length scale must be > 0");
  if (!(config.jitter >= 0.0)) throw std::invalid_argument("jitter must be >= 0");

  Posterior post;
  post.config_ = config;
  post.inputs_ = data.inputs;
  const std::size_t n = data.size();
  if (n == 0) return post;  // prior

  std::vector<double> a = gram_matrix(data.inputs, config, exec);
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] += config.jitter;

  // In-place lower Cholesky, serial: the sequential dependency chain is the
  // point, and n stays desk-scale (bounded by the evaluation budget).
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
    if (!(diag > 0.0)) {
      throw FitError("covariance factorization failed at pivot " + std::to_string(j) + " of " +
                     std::to_string(n) + " (value " + std::to_string(diag) +
                     "); near-duplicate inputs with zero jitter are the usual cause");
    }
    const double root = std::sqrt(diag);
    a[j * n + j] = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double sum = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) sum -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = sum / root;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a[i * n + j] = 0.0;
  post.chol_ = std::move(a);

  // weights = (K + jitter I)^{-1} z via forward then backward substitution.
  std::vector<double> w(data.observations);
  const std::vector<double>& l = post.chol_;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = w[i];
    for (std::size_t k = 0; k < i; ++k) sum -= l[i * n + k] * w[k];
    w[i] = sum / l[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double sum = w[ii];
    for (std::size_t k = ii + 1; k < n; ++k) sum -= l[k * n + ii] * w[k];
    w[ii] = sum / l[ii * n + ii];
  }
  post.weights_ = std::move(w);
  return post;
}

Posterior::Prediction Posterior::predict(std::span<const double> x) const {
  check_point(x);
  const std::size_t n = inputs_.size();
  if (n == 0) return {0.0, 1.0};  // GP(0, k) prior; k(x,x) = 1
  if (x.size() != inputs_.front().size())
    throw std::invalid_argument("predict input dimension mismatch");

  std::vector<double> kstar(n);
  for (std::size_t i = 0; i < n; ++i) kstar[i] = kernel(inputs_[i], x, config_);

  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += kstar[i] * weights_[i];

  // variance = k(x,x) - ||L^{-1} k_*||^2 with k(x,x) = 1.
  std::vector<double> v(kstar);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = v[i];
    for (std::size_t k = 0; k < i; ++k) sum -= chol_[i * n + k] * v[k];
    v[i] = sum / chol_[i * n + i];
  }
  double reduction = 0.0;
  for (double vi : v) reduction += vi * vi;
  const double variance = 1.0 - reduction;
  return {mean, variance < 0.0 ? 0.0 : variance};
}

double std_normal_cdf(double z) {
  return 0.5 * std::erfc(-z * 0.7071067811865475244);  // 1/sqrt(2)
}

double prob_positive(double mean, double variance) {
  if (variance < 0.0) throw std::invalid_argument("negative variance");
  const double sigma = std::sqrt(variance < 1e-12 ? 1e-12 : variance);
  double p = std_normal_cdf(mean / sigma);
  if (p < 1e-300) p = 1e-300;
  const double hi = 1.0 - 1e-16;
  if (p > hi) p = hi;
  return p;
}

}  // namespace falsify::gp
