#pragma once

#include <functional>

#include "msq/types.hpp"

namespace msq {

/// Entry density phi of an i.i.d. ensemble with its Fourier transform and the
/// transform of g(z) = int_{-inf}^z t phi(t) dt. Transforms use
/// f^(w) = int exp(-2 pi i t w) f(t) dt.
///
/// Expected: phi >= 0, phi_hat(0) = 1 (unit mass), g_hat(0) = -1 (zero mean,
/// unit variance), and both transforms decay faster than any polynomial.
struct SchwartzDensity {
  std::function<double(double)> phi;
  std::function<Complex(double)> phi_hat;
  std::function<double(double)> g;
  std::function<Complex(double)> g_hat;
};

}  // namespace msq
