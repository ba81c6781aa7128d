#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "msq/quantizer.hpp"

using namespace msq;

TEST_CASE("config rejects non-positive or non-finite steps") {
  CHECK_THROWS_AS(QuantizerConfig(0.0), std::invalid_argument);
  CHECK_THROWS_AS(QuantizerConfig(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(QuantizerConfig(std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(QuantizerConfig(std::nan("")), std::invalid_argument);
  CHECK(QuantizerConfig(0.25).half_step() == 0.125);
}

TEST_CASE("scalar examples") {
  const QuantizerConfig tenth(0.1);
  const QuantizerConfig one(1.0);
  CHECK(quantize_scalar(0.0, tenth) == 0.0);
  CHECK(quantize_scalar(0.26, tenth) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(quantize_scalar(0.5, one) == 0.0);
  CHECK(quantize_scalar(-0.5, one) == -1.0);
  CHECK(residual(0.26, tenth) == doctest::Approx(-0.04).epsilon(1e-12));
  CHECK(residual(0.5, one) == 0.5);
  for (int n = -5; n <= 5; ++n) CHECK(residual(n * 4.0, QuantizerConfig(4.0)) == 0.0);
  CHECK(lattice_index(1.5, one) == 1);
  CHECK(lattice_index(-1.5, one) == -2);
}

TEST_CASE("non-finite input is a domain error") {
  const QuantizerConfig one(1.0);
  CHECK_THROWS_AS(quantize_scalar(std::numeric_limits<double>::infinity(), one), std::domain_error);
  CHECK_THROWS_AS(residual(std::nan(""), one), std::domain_error);
  Vec v(2);
  v << 1.0, std::nan("");
  CHECK_THROWS_AS(quantize_vector(v, one), std::domain_error);
}

TEST_CASE("vector and complex quantization are componentwise") {
  const QuantizerConfig tenth(0.1);
  CHECK(quantize_vector(Vec(Vec::Zero(3)), tenth).isZero(0.0));
  Vec v(2);
  v << 0.26, -0.26;
  const Vec q = quantize_vector(v, tenth);
  CHECK(q[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(q[1] == doctest::Approx(-0.3).epsilon(1e-15));

  CVec c(1);
  c[0] = Complex(1.05, 0.26);
  const CVec qc = quantize_vector(c, tenth);
  CHECK(qc[0].real() == quantize_scalar(1.05, tenth));
  CHECK(qc[0].imag() == quantize_scalar(0.26, tenth));
  // 1.05 sits on the boundary between the cells of 1.0 and 1.1 and the right-closed
  // rule sends it down; the nearest double to 1.05 is also below 10.5 * 0.1 in
  // exact arithmetic.
  CHECK(qc[0].real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(quantize_scalar(1.0500001, tenth) == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(qc[0].imag() == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("odd symmetry holds off the boundary and fails on it") {
  const QuantizerConfig one(1.0);
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 10000; ++i) {
    const double v = u(gen);
    if (std::abs(residual(v, one)) < 0.5) CHECK(quantize_scalar(-v, one) == -quantize_scalar(v, one));
  }
  CHECK(quantize_scalar(2.5, one) == 2.0);
  CHECK(quantize_scalar(-2.5, one) == -3.0);
}

TEST_CASE("random values satisfy the lattice laws") {
  for (double delta : {0.01, 0.1, 1.0, 4.0}) {
    const QuantizerConfig cfg(delta);
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-1000.0 * delta, 1000.0 * delta);
    for (int i = 0; i < 20000; ++i) {
      const double v = u(gen);
      const double q = quantize_scalar(v, cfg);
      const double r = residual(v, cfg);
      CHECK(quantize_scalar(q, cfg) == q);
      CHECK(r > -cfg.half_step());
      CHECK(r <= cfg.half_step());
    }
  }
}
