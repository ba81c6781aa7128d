#pragma once

#include <cstdint>

namespace msq {

/// Constants in the two-sided high-probability error band around the bias
/// term mu. c_k is the ensemble constant in the singular value deviation
/// bound (1 for Gaussian); c1 scales the fluctuation term and is tied to the
/// failure probability c2 by c1 = C K sqrt(ln(e^2 / c2)); c3 is the rate in
/// the 2 exp(-c3 m) failure term. None of C, c2, c3 is known numerically, so
/// all are configurable.
struct TheoremConstants {
  double c_k_ensemble = 1.0;
  double c1 = 1.0;
  double c2 = 0.1;
  double c3 = 0.125;
  double lambda = 1.0;

  /// (1/2 - c_K lambda^{-1/2})^{-2}; throws std::domain_error unless lambda > (2 c_K)^2.
  double a_upper() const;
  /// (3/2 + c_K lambda^{-1/2})^{-2}, always in (0, 4/9].
  double a_lower() const;
  /// Lower bound on the probability that the band holds: 1 - c2 - 2 exp(-c3 m).
  double success_probability(std::int64_t m) const;
};

/// c1 = C K sqrt(ln(e^2 / c2)) for c2 in (0, 1).
double c1_from_confidence(double c2, double big_c = 1.0, double subgaussian_k = 1.0);

struct ErrorBand {
  double lower = 0.0;
  double upper = 0.0;
};

/// RMS error predicted by the white noise hypothesis, sqrt(||E^+||_F^2 delta^2 / 12).
double wnh_prediction(std::int64_t k, std::int64_t m, double delta, double frob_norm_pinv);

/// Random-frame variant with sigma_min ~ sqrt(m): delta sqrt(k / (12 m)).
double mwnh_prediction(std::int64_t k, std::int64_t m, double delta);

/// lower = A' max(0, mu - c1 sqrt(ln k) lambda^{-1/2} delta),
/// upper = A (mu + c1 sqrt(ln k) lambda^{-1/2} delta).
/// Requires k >= 3 (std::invalid_argument) and lambda > (2 c_K)^2 (std::domain_error).
ErrorBand theorem1_band(double mu, const TheoremConstants& constants, std::int64_t k, double delta);

/// (delta/2)(1 + c_K sqrt(k/m)): a cap on mu for any isotropic sub-Gaussian frame.
double mu_cap(double delta, std::int64_t k, std::int64_t m, double c_k = 1.0);

/// Alternating-series bracket for the Gaussian bias term:
/// lower = 2||x||(t1 - t2), upper = 2||x|| t1, t_p = exp(-2 pi^2 p^2 ||x||^2 / delta^2).
ErrorBand gaussian_mu_bracket(double x_norm, double delta);

struct GaussianCorollaryBand {
  ErrorBand mu;
  ErrorBand error;
};

/// theorem1_band with c_K = 1, using the bracket's lower end for the lower
/// error bound and its upper end for the upper error bound.
GaussianCorollaryBand gaussian_corollary_band(double x_norm, double delta, double lambda, std::int64_t k,
                                              double c1);

}  // namespace msq
