#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "msq/bounds.hpp"

using namespace msq;

// Reference values below were computed with mpmath at 40 digits.

TEST_CASE("constants A and A'") {
  TheoremConstants c;
  c.lambda = 16.0;
  CHECK(c.a_upper() == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(c.a_lower() == doctest::Approx(16.0 / 49.0).epsilon(1e-14));
  c.lambda = 4.0;
  CHECK_THROWS_AS(c.a_upper(), std::domain_error);
  CHECK(c.a_lower() <= 4.0 / 9.0);
  c.lambda = 1e16;
  CHECK(c.a_upper() == doctest::Approx(4.0).epsilon(1e-7));
  CHECK(c.a_lower() == doctest::Approx(4.0 / 9.0).epsilon(1e-7));
  for (double lam : {0.01, 1.0, 100.0}) {
    c.lambda = lam;
    CHECK(c.a_lower() > 0.0);
    CHECK(c.a_lower() <= 4.0 / 9.0);
  }
  c.c2 = 0.1;
  c.c3 = 0.125;
  CHECK(c.success_probability(80) == doctest::Approx(0.9 - 2.0 * std::exp(-10.0)));
}

TEST_CASE("c1 from the confidence level") {
  CHECK(c1_from_confidence(0.1) == doctest::Approx(std::sqrt(2.0 + std::log(10.0))));
  CHECK_THROWS_AS(c1_from_confidence(0.0), std::invalid_argument);
  CHECK_THROWS_AS(c1_from_confidence(1.0), std::invalid_argument);
}

TEST_CASE("white noise predictions") {
  CHECK(wnh_prediction(20, 2000, 0.1, std::sqrt(20.0 / 2000.0)) == doctest::Approx(0.002886751345948129).epsilon(1e-14));
  CHECK(mwnh_prediction(20, 2000, 0.1) == doctest::Approx(0.002886751345948129).epsilon(1e-14));
  CHECK(wnh_prediction(20, 2000, 0.0, 0.1) == 0.0);
}

TEST_CASE("theorem band") {
  TheoremConstants c;
  c.lambda = 1e16;
  const ErrorBand far = theorem1_band(0.3, c, 20, 0.1);
  CHECK(far.lower == doctest::Approx(0.3 * 4.0 / 9.0).epsilon(1e-6));
  CHECK(far.upper == doctest::Approx(1.2).epsilon(1e-6));
  c.lambda = 4.0;
  CHECK_THROWS_AS(theorem1_band(0.3, c, 20, 0.1), std::domain_error);
  c.lambda = 10.0;
  CHECK_THROWS_AS(theorem1_band(0.3, c, 2, 0.1), std::invalid_argument);

  // Lower end is clamped at zero.
  const ErrorBand clamp = theorem1_band(0.0, c, 20, 0.1);
  CHECK(clamp.lower == 0.0);
  CHECK(clamp.upper > 0.0);

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    TheoremConstants t;
    t.lambda = 4.0001 + 1000.0 * u(gen);
    t.c1 = 2.0 * u(gen);
    const double mu = u(gen);
    const double delta = 0.01 + u(gen);
    const ErrorBand b = theorem1_band(mu, t, 3 + static_cast<std::int64_t>(50 * u(gen)), delta);
    CHECK(b.lower <= b.upper);
    TheoremConstants t2 = t;
    t2.lambda = t.lambda * 1.5;
    CHECK(theorem1_band(mu, t2, 10, delta).upper < theorem1_band(mu, t, 10, delta).upper);
  }
}

TEST_CASE("mu cap") {
  CHECK(mu_cap(0.1, 20, 2000) == doctest::Approx(0.055).epsilon(1e-14));
  CHECK(mu_cap(0.1, 20, 2000000000000LL) == doctest::Approx(0.05).epsilon(1e-5));
  CHECK(mu_cap(0.5, 1, 1) >= 1.0245e-34);
}

TEST_CASE("gaussian bracket") {
  const ErrorBand small = gaussian_mu_bracket(1.0, 0.5);
  CHECK(small.upper == doctest::Approx(1.024500455847086e-34).epsilon(1e-13));
  CHECK(small.lower == doctest::Approx(1.024500455847086e-34).epsilon(1e-13));

  const ErrorBand b = gaussian_mu_bracket(1.0, 4.0);
  CHECK(b.lower == doctest::Approx(0.5680420997163890).epsilon(1e-13));
  CHECK(b.upper == doctest::Approx(0.5824258664280417).epsilon(1e-13));

  const ErrorBand zero = gaussian_mu_bracket(0.0, 1.0);
  CHECK(zero.lower == 0.0);
  CHECK(zero.upper == 0.0);
}

TEST_CASE("gaussian corollary band") {
  const GaussianCorollaryBand g = gaussian_corollary_band(1.0, 4.0, 100.0, 20, 1.0);
  CHECK(g.mu.lower == doctest::Approx(0.5680420997163890).epsilon(1e-13));
  CHECK(g.error.lower <= g.error.upper);
  CHECK_THROWS_AS(gaussian_corollary_band(1.0, 4.0, 4.0, 20, 1.0), std::domain_error);
}
