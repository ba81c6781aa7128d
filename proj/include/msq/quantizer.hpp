#pragma once

#include <cstdint>

#include "msq/types.hpp"

namespace msq {

/// Step size of the uniform mid-tread quantizer. The lattice is unbounded:
/// no saturation and no dither.
class QuantizerConfig {
 public:
  explicit QuantizerConfig(double delta);

  double delta() const noexcept { return delta_; }
  double half_step() const noexcept { return 0.5 * delta_; }

 private:
  double delta_;
};

/// Index n of the cell (n*delta - delta/2, n*delta + delta/2] containing v.
/// The cell is open on the left and closed on the right. The index is
/// corrected so that v - n*delta, evaluated in double precision, lies in
/// (-delta/2, delta/2]. Throws std::domain_error for non-finite v.
std::int64_t lattice_index(double v, const QuantizerConfig& cfg);

/// q_delta(v) = n*delta.
double quantize_scalar(double v, const QuantizerConfig& cfg);

/// v - q_delta(v); always in (-delta/2, delta/2].
double residual(double v, const QuantizerConfig& cfg);

Vec quantize_vector(const Vec& u, const QuantizerConfig& cfg);

/// Real and imaginary parts are quantized independently with the same step.
CVec quantize_vector(const CVec& u, const QuantizerConfig& cfg);

}  // namespace msq
