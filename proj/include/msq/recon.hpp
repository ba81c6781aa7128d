#pragma once

#include "msq/ensembles.hpp"
#include "msq/linalg.hpp"
#include "msq/quantizer.hpp"
#include "msq/types.hpp"

namespace msq {

/// A finite signal in R^k with its cached Euclidean norm.
class Signal {
 public:
  explicit Signal(Vec values);

  const Vec& values() const noexcept { return values_; }
  double norm() const noexcept { return norm_; }
  Eigen::Index size() const noexcept { return values_.size(); }

 private:
  Vec values_;
  double norm_;
};

struct ReconResult {
  Vec x_hat;
  double error = 0.0;       ///< ||x - x_hat||
  double sigma_min = 0.0;   ///< of the frame
  Eigen::Index m = 0;
  Eigen::Index k = 0;
  double delta = 0.0;
  /// Complex frames only: norm of the imaginary part dropped from E^+ Q(Ex).
  double discarded_imag_norm = 0.0;
  /// sqrt(m) (delta/2) / sigma_min, times sqrt(2) for complex measurements.
  double rough_bound = 0.0;
};

/// Worst-case error of linear reconstruction from MSQ measurements:
/// ||E^+ u|| <= ||u|| / sigma_min with ||u||_inf <= delta/2 per real
/// component, so sqrt(m) delta/2 / sigma_min for real frames and sqrt(2m)
/// delta/2 / sigma_min when real and imaginary parts are quantized separately.
double rough_error_bound(double sigma_min, Eigen::Index m, double delta, bool complex_measurements);

/// Q(E x) for real frames.
Vec quantized_measurements(const Mat& e, const Vec& x, const QuantizerConfig& cfg);

/// x_hat = E^+ Q(E x), error = ||x - x_hat||. For a complex frame the real
/// part of the complex least-squares solution is returned.
ReconResult reconstruct(const Signal& x, const FrameMatrix& e, const QuantizerConfig& cfg);

/// Same, reusing a pseudoinverse already computed for `e`.
ReconResult reconstruct(const Signal& x, const FrameMatrix& e, const Pseudoinverse& pinv,
                        const QuantizerConfig& cfg);

/// For a +-1 frame: whether Q(Ex) == E Q(x) entrywise. Compared on lattice
/// indices, so the check is exact. Throws ContractError for any other frame.
bool bernoulli_commutation_check(const Signal& x, const FrameMatrix& e, const QuantizerConfig& cfg);

}  // namespace msq
