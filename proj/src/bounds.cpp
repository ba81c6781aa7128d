#include "msq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace msq {

double TheoremConstants::a_upper() const {
  const double threshold = 4.0 * c_k_ensemble * c_k_ensemble;
  if (!(lambda > threshold)) {
    throw std::domain_error("theorem constants undefined: lambda=" + std::to_string(lambda) +
                            " must exceed (2 c_K)^2=" + std::to_string(threshold));
  }
  const double base = 0.5 - c_k_ensemble / std::sqrt(lambda);
  return 1.0 / (base * base);
}

double TheoremConstants::a_lower() const {
  const double base = 1.5 + c_k_ensemble / std::sqrt(lambda);
  return 1.0 / (base * base);
}

double TheoremConstants::success_probability(std::int64_t m) const {
  return 1.0 - c2 - 2.0 * std::exp(-c3 * static_cast<double>(m));
}

double c1_from_confidence(double c2, double big_c, double subgaussian_k) {
  if (!(c2 > 0.0 && c2 < 1.0)) throw std::invalid_argument("c2 must lie in (0, 1)");
  return big_c * subgaussian_k * std::sqrt(std::log(std::exp(2.0) / c2));
}

double wnh_prediction(std::int64_t k, std::int64_t m, double delta, double frob_norm_pinv) {
  if (k < 1 || m < 1 || delta < 0.0 || frob_norm_pinv < 0.0) {
    throw std::invalid_argument("wnh_prediction: arguments must be positive");
  }
  return std::sqrt(frob_norm_pinv * frob_norm_pinv * delta * delta / 12.0);
}

double mwnh_prediction(std::int64_t k, std::int64_t m, double delta) {
  if (k < 1 || m < 1 || delta < 0.0) throw std::invalid_argument("mwnh_prediction: arguments must be positive");
  return delta * std::sqrt(static_cast<double>(k) / (12.0 * static_cast<double>(m)));
}

ErrorBand theorem1_band(double mu, const TheoremConstants& constants, std::int64_t k, double delta) {
  if (k < 3) throw std::invalid_argument("theorem1_band needs k >= 3");
  const double a = constants.a_upper();
  const double a_prime = constants.a_lower();
  const double fluctuation =
      constants.c1 * std::sqrt(std::log(static_cast<double>(k))) * delta / std::sqrt(constants.lambda);
  return {a_prime * std::max(0.0, mu - fluctuation), a * (mu + fluctuation)};
}

double mu_cap(double delta, std::int64_t k, std::int64_t m, double c_k) {
  if (!(delta > 0.0) || k < 1 || m < 1) throw std::invalid_argument("mu_cap: arguments must be positive");
  return 0.5 * delta * (1.0 + c_k * std::sqrt(static_cast<double>(k) / static_cast<double>(m)));
}

ErrorBand gaussian_mu_bracket(double x_norm, double delta) {
  if (x_norm == 0.0) return {0.0, 0.0};
  const double s = 2.0 * std::numbers::pi * std::numbers::pi * x_norm * x_norm / (delta * delta);
  const double t1 = std::exp(-s);
  const double t2 = std::exp(-4.0 * s);
  return {2.0 * x_norm * (t1 - t2), 2.0 * x_norm * t1};
}

GaussianCorollaryBand gaussian_corollary_band(double x_norm, double delta, double lambda, std::int64_t k,
                                              double c1) {
  TheoremConstants constants;
  constants.c_k_ensemble = 1.0;
  constants.c1 = c1;
  constants.lambda = lambda;
  GaussianCorollaryBand out;
  out.mu = gaussian_mu_bracket(x_norm, delta);
  out.error.lower = theorem1_band(out.mu.lower, constants, k, delta).lower;
  out.error.upper = theorem1_band(out.mu.upper, constants, k, delta).upper;
  return out;
}

}  // namespace msq
