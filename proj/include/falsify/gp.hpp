#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "falsify/exec.hpp"

namespace falsify::gp {

// Squared-exponential kernel k(x,y) = exp(-||x-y||^2 / (2 l^2)) on inputs
// normalized to the unit box; jitter is added to the Gram diagonal.
struct KernelConfig {
  double length_scale = 0.1;
  double jitter = 1e-8;
};

struct Dataset {
  std::vector<std::vector<double>> inputs;  // points in [0,1]^d
  std::vector<double> observations;         // cost values, unscaled

  std::size_t size() const { return inputs.size(); }
  void append(std::vector<double> x, double z);
};

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double kernel(std::span<const double> x, std::span<const double> y, const KernelConfig& config);

// Row-major n x n kernel matrix over pts (no jitter). Exposed for the
// serial/parallel consistency tests and the kernel benchmark.
std::vector<double> gram_matrix(const std::vector<std::vector<double>>& pts,
                                const KernelConfig& config, Exec exec);

// Zero-mean GP posterior fitted by a dense Cholesky factorization of
// K_DD + jitter*I. Immutable once fitted; predict is const and thread-safe.
// A default-constructed Posterior is the prior: predict yields (0, 1).
class Posterior {
 public:
  struct Prediction {
    double mean = 0.0;
    double variance = 1.0;
  };

  Posterior() = default;

  // Throws FitError when the jittered Gram matrix is not positive definite.
  static Posterior fit(const Dataset& data, const KernelConfig& config,
                       Exec exec = Exec::Parallel);

  // Posterior mean and variance at x; variance clamped to >= 0.
  Prediction predict(std::span<const double> x) const;

  std::size_t size() const { return inputs_.size(); }

 private:
  std::vector<std::vector<double>> inputs_;
  std::vector<double> chol_;     // row-major lower-triangular factor L
  std::vector<double> weights_;  // (K + jitter I)^{-1} z
  KernelConfig config_;
};

// Standard normal CDF, absolute error well below 1e-7; never NaN.
double std_normal_cdf(double z);

// Pr(N(mean, variance) > 0) with the variance floored at 1e-12 and the
// result clamped into [1e-300, 1 - 1e-16] so downstream logs stay finite.
double prob_positive(double mean, double variance);

}  // namespace falsify::gp
