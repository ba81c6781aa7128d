#pragma once

// The bias term mu = (1/m) || E[ E^T (E x - Q(E x)) ] ||.
//
// For frames with i.i.d. rows e this equals || E[ e F(e^T x) ] || with
// F(z) = z - Q(z), so it does not depend on m. Three evaluations:
//
//  * mu_gaussian     exact alternating series for i.i.d. N(0,1) entries,
//                    mean vector = 2 x S, S = sum_{p>=1} (-1)^{p+1} exp(-2 pi^2 p^2 ||x||^2 / delta^2)
//  * mu_schwartz     the Poisson-summation series for any i.i.d. entry density
//                    with Schwartz-class transforms,
//                    entry_i = x_i + x_i sum_{p in Z} (-1)^p g^(|x_i| p / delta)
//                                        prod_{s != i} phi^(x_s sign(x_i) p / delta)
//  * mu_monte_carlo  sample mean of e F(e^T x) over single-row draws
//
// Series truncate once a term falls below 1e-17 of the first term.

#include <cstdint>
#include <string>

#include "msq/density.hpp"
#include "msq/ensembles.hpp"
#include "msq/quantizer.hpp"
#include "msq/recon.hpp"

namespace msq {

enum class MuMethod { GaussianClosedForm, SchwartzSeries, MonteCarlo };

std::string to_string(MuMethod method);

struct MuEstimate {
  double value = 0.0;
  MuMethod method = MuMethod::GaussianClosedForm;
  double std_error = 0.0;      ///< 0 for the analytic methods
  std::int64_t truncation_p = 0;  ///< last series index used
  std::int64_t trials = 0;     ///< Monte Carlo only
};

inline constexpr double kSeriesRelTol = 1e-17;
inline constexpr std::int64_t kGaussianSeriesCap = 64;
inline constexpr std::int64_t kSchwartzSeriesCap = 512;

/// Alternating sum S above. When the direct series would need more than 64
/// terms (||x||/delta below about 0.022) the Jacobi theta transform
/// sum_p (-1)^p e^{-a p^2} = sqrt(pi/a) sum_n e^{-pi^2 (n+1/2)^2 / a} is summed
/// instead; it converges in a handful of terms in exactly that regime.
double gaussian_alternating_sum(double x_norm, double delta, std::int64_t* terms_used = nullptr);

MuEstimate mu_gaussian(const Signal& x, const QuantizerConfig& cfg);

/// Throws ConvergenceError when the tail has not decayed by |p| = 512.
MuEstimate mu_schwartz(const Signal& x, const QuantizerConfig& cfg, const SchwartzDensity& density);

/// Per-entry mean vector behind mu_schwartz (real part).
Vec schwartz_mean_vector(const Signal& x, const QuantizerConfig& cfg, const SchwartzDensity& density,
                         std::int64_t* truncation_p = nullptr);

inline constexpr std::int64_t kMonteCarloBlock = 4096;

/// Averages e F(e^T x) over `trials` single rows. Rows are drawn in blocks of
/// 4096 trials, block b from substream mix_seed(seed, {b}); block statistics
/// merge in block order, so the result is the same for any thread count.
/// For PartialDFT rows the summand is conj(e) F(e^T x), F acting on real and
/// imaginary parts separately. std_error propagates the sample covariance
/// of the mean through the norm (delta method).
MuEstimate mu_monte_carlo(const Signal& x, const EnsembleSpec& spec, std::int64_t trials, std::uint64_t seed,
                          const QuantizerConfig& cfg, int threads = 0);

struct PoissonCheck {
  double lhs = 0.0;  ///< sum_n g(a n + b)
  double rhs = 0.0;  ///< sum_p (1/a) g^(p/a) exp(2 pi i p b / a), real part
  double abs_diff = 0.0;
  std::int64_t lhs_terms = 0;
  std::int64_t rhs_terms = 0;
};

/// Both sides of the Poisson summation formula for f = density.g.
/// Requires a > 0 (std::invalid_argument).
PoissonCheck poisson_check(const SchwartzDensity& density, double a, double b);

}  // namespace msq
