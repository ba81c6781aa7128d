#include "msq/quantizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace msq {

QuantizerConfig::QuantizerConfig(double delta) : delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("quantizer step size must be positive and finite, got " +
                                std::to_string(delta));
  }
}

std::int64_t lattice_index(double v, const QuantizerConfig& cfg) {
  if (!std::isfinite(v)) throw std::domain_error("quantizer input is not finite");
  const double delta = cfg.delta();
  const double half = cfg.half_step();
  auto n = static_cast<std::int64_t>(std::ceil(v / delta - 0.5));
  // v/delta rounds, so n can be one off near a cell boundary. The fma residual
  // is v - n*delta rounded once, and rounding is monotone, so comparing it with
  // the exact half step picks the cell of the double v on the lattice of the
  // double delta.
  for (int guard = 0; guard < 4; ++guard) {
    const double r = std::fma(-static_cast<double>(n), delta, v);
    if (r > half) {
      ++n;
    } else if (r <= -half) {
      --n;
    } else {
      break;
    }
  }
  return n;
}

double quantize_scalar(double v, const QuantizerConfig& cfg) {
  return static_cast<double>(lattice_index(v, cfg)) * cfg.delta();
}

// Computed with one rounding; v - quantize_scalar(v) can differ from this in the
// last bit and land just outside (-delta/2, delta/2].
double residual(double v, const QuantizerConfig& cfg) {
  return std::fma(-static_cast<double>(lattice_index(v, cfg)), cfg.delta(), v);
}

Vec quantize_vector(const Vec& u, const QuantizerConfig& cfg) {
  Vec out(u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) out[j] = quantize_scalar(u[j], cfg);
  return out;
}

CVec quantize_vector(const CVec& u, const QuantizerConfig& cfg) {
  CVec out(u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    out[j] = Complex(quantize_scalar(u[j].real(), cfg), quantize_scalar(u[j].imag(), cfg));
  }
  return out;
}

}  // namespace msq
