#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "msq/bounds.hpp"
#include "msq/errors.hpp"
#include "msq/mu.hpp"

using namespace msq;

namespace {

constexpr double kPi = std::numbers::pi;

Signal signal_of(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return Signal(x);
}

Signal with_norm(double r, Eigen::Index k, std::uint64_t seed) {
  Stream s(seed);
  Vec x(k);
  for (auto& v : x) v = s.normal();
  return Signal(x * (r / x.norm()));
}

// Two Gaussians at +-a with variance s2, a^2 + s2 = 1: mean zero, unit variance.
SchwartzDensity mixture_density(double a) {
  const double s2 = 1.0 - a * a;
  const double s = std::sqrt(s2);
  auto normal_pdf = [s](double z, double c) { return std::exp(-0.5 * (z - c) * (z - c) / (s * s)) / (s * std::sqrt(2.0 * kPi)); };
  auto normal_cdf = [s](double z, double c) { return 0.5 * std::erfc(-(z - c) / (s * std::sqrt(2.0))); };
  SchwartzDensity d;
  d.phi = [=](double z) { return 0.5 * (normal_pdf(z, a) + normal_pdf(z, -a)); };
  d.phi_hat = [=](double w) { return Complex(std::cos(2 * kPi * a * w) * std::exp(-2 * kPi * kPi * s2 * w * w), 0.0); };
  d.g = [=](double z) {
    return 0.5 * (a * normal_cdf(z, a) - s2 * normal_pdf(z, a)) + 0.5 * (-a * normal_cdf(z, -a) - s2 * normal_pdf(z, -a));
  };
  d.g_hat = [=](double w) {
    const double damp = std::exp(-2 * kPi * kPi * s2 * w * w);
    if (w == 0.0) return Complex(-1.0, 0.0);
    const double v = -2 * kPi * a * std::sin(2 * kPi * a * w) / (4 * kPi * kPi * w) - s2 * std::cos(2 * kPi * a * w);
    return Complex(v * damp, 0.0);
  };
  return d;
}

}  // namespace

// Reference values below were computed with mpmath at 50 digits.

TEST_CASE("gaussian closed form") {
  CHECK(mu_gaussian(signal_of({1.0}), QuantizerConfig(4.0)).value == doctest::Approx(0.56807221928743279).epsilon(1e-14));
  CHECK(mu_gaussian(signal_of({0.6, 0.8}), QuantizerConfig(4.0)).value == doctest::Approx(0.56807221928743279).epsilon(1e-14));
  CHECK(mu_gaussian(signal_of({1.0}), QuantizerConfig(0.5)).value == doctest::Approx(1.024500455847086e-34).epsilon(1e-13));
  CHECK(mu_gaussian(signal_of({0.3}), QuantizerConfig(1.0)).value == doctest::Approx(0.10104274897547251).epsilon(1e-14));
  CHECK(mu_gaussian(signal_of({2.0}), QuantizerConfig(3.0)).value == doctest::Approx(0.00061944457467097175).epsilon(1e-13));
  // Small ||x|| / delta goes through the theta transform.
  CHECK(mu_gaussian(signal_of({0.01}), QuantizerConfig(1.0)).value == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(mu_gaussian(signal_of({0.02}), QuantizerConfig(1.0)).value == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(mu_gaussian(signal_of({0.05}), QuantizerConfig(1.0)).value == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(mu_gaussian(signal_of({0.001}), QuantizerConfig(2.0)).value == doctest::Approx(0.001).epsilon(1e-14));

  const MuEstimate zero = mu_gaussian(Signal(Vec::Zero(3)), QuantizerConfig(1.0));
  CHECK(zero.value == 0.0);
  CHECK(zero.method == MuMethod::GaussianClosedForm);
  CHECK(zero.std_error == 0.0);

  std::int64_t used = 0;
  gaussian_alternating_sum(1.0, 0.5, &used);
  CHECK(used == 1);
  gaussian_alternating_sum(1.0, 4.0, &used);
  CHECK(used > 2);
  CHECK(used <= kGaussianSeriesCap);
}

TEST_CASE("gaussian value is rotation invariant and bracketed") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Signal a = with_norm(0.8, 6, seed);
    const Signal b = with_norm(0.8, 6, seed + 100);
    const QuantizerConfig cfg(2.0);
    CHECK(std::abs(mu_gaussian(a, cfg).value - mu_gaussian(b, cfg).value) <= 1e-14);
  }
  // Strict inclusion is representable while exp(-3a) is above double rounding of
  // the bracket ends, i.e. ||x|| / delta up to about 0.45.
  for (int i = 0; i < 50; ++i) {
    const double r = 0.1 + 0.35 * i / 49.0;
    const double delta = 0.5 + 0.1 * i;
    const double mu = mu_gaussian(signal_of({r * delta}), QuantizerConfig(delta)).value;
    const ErrorBand br = gaussian_mu_bracket(r * delta, delta);
    CHECK(mu > br.lower);
    CHECK(mu < br.upper);
  }
  for (double r : {0.5, 1.0, 2.0, 4.0}) {
    const double mu = mu_gaussian(signal_of({r}), QuantizerConfig(1.0)).value;
    const ErrorBand br = gaussian_mu_bracket(r, 1.0);
    CHECK(mu >= br.lower);
    CHECK(mu <= br.upper);
  }
}

TEST_CASE("schwartz series matches the gaussian closed form") {
  const SchwartzDensity g = gaussian_density();
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index k = 1 + static_cast<Eigen::Index>(6 * u(gen));
    const double delta = 0.5 + 4.0 * u(gen);
    const Signal x = with_norm(0.05 + 2.0 * u(gen), k, 300 + i);
    const QuantizerConfig cfg(delta);
    const MuEstimate s = mu_schwartz(x, cfg, g);
    CHECK(std::abs(s.value - mu_gaussian(x, cfg).value) <= 1e-12);
    CHECK(s.method == MuMethod::SchwartzSeries);
  }
  const Vec mean = schwartz_mean_vector(signal_of({0.4, 0.0, -0.3}), QuantizerConfig(1.0), g);
  CHECK(mean[1] == 0.0);
  CHECK(mu_schwartz(Signal(Vec::Zero(4)), QuantizerConfig(1.0), g).value == 0.0);
}

TEST_CASE("schwartz series for a non-gaussian density agrees with direct sampling") {
  const SchwartzDensity d = mixture_density(0.6);
  const Signal x = signal_of({0.3, -0.2, 0.1});
  const QuantizerConfig cfg(1.0);
  const Vec series = schwartz_mean_vector(x, cfg, d);

  std::mt19937_64 gen(17);
  std::normal_distribution<double> normal(0.0, std::sqrt(1.0 - 0.36));
  std::bernoulli_distribution coin(0.5);
  const int n = 1000000;
  Vec sum = Vec::Zero(3), sum2 = Vec::Zero(3);
  Vec e(3);
  for (int t = 0; t < n; ++t) {
    for (int i = 0; i < 3; ++i) e[i] = (coin(gen) ? 0.6 : -0.6) + normal(gen);
    const Vec v = e * residual(e.dot(x.values()), cfg);
    sum += v;
    sum2 += v.cwiseProduct(v);
  }
  const Vec mean = sum / n;
  for (int i = 0; i < 3; ++i) {
    const double se = std::sqrt((sum2[i] / n - mean[i] * mean[i]) / n);
    CHECK(std::abs(series[i] - mean[i]) <= 5.0 * se);
  }
  CHECK(euclidean_norm(series) > 0.01);
}

TEST_CASE("schwartz series that does not decay is a convergence error") {
  SchwartzDensity flat = gaussian_density();
  flat.phi_hat = [](double) { return Complex(1.0, 0.0); };
  flat.g_hat = [](double) { return Complex(-1.0, 0.0); };
  CHECK_THROWS_AS(mu_schwartz(signal_of({0.5, 0.5}), QuantizerConfig(1.0), flat), ConvergenceError);
}

TEST_CASE("monte carlo: exact and degenerate cases") {
  EnsembleSpec bern;
  bern.kind = EnsembleKind::Bernoulli;
  for (std::int64_t trials : {1, 7, 4096, 10001}) {
    const MuEstimate e = mu_monte_carlo(signal_of({0.3}), bern, trials, 9, QuantizerConfig(1.0), 1);
    CHECK(e.value == 0.3);
    CHECK(e.trials == trials);
    CHECK(e.method == MuMethod::MonteCarlo);
  }
  CHECK(mu_monte_carlo(Signal(Vec::Zero(4)), EnsembleSpec{}, 5000, 1, QuantizerConfig(1.0), 1).value == 0.0);
  CHECK_THROWS_AS(mu_monte_carlo(signal_of({1.0}), EnsembleSpec{}, 0, 1, QuantizerConfig(1.0)), std::invalid_argument);
}

TEST_CASE("monte carlo does not depend on the thread count") {
  const Signal x = with_norm(1.0, 5, 2);
  const MuEstimate one = mu_monte_carlo(x, EnsembleSpec{}, 30000, 4, QuantizerConfig(4.0), 1);
  const MuEstimate three = mu_monte_carlo(x, EnsembleSpec{}, 30000, 4, QuantizerConfig(4.0), 3);
  CHECK(one.value == three.value);
  CHECK(one.std_error == three.std_error);
}

TEST_CASE("monte carlo agrees with the closed form and respects the cap") {
  const Signal x = with_norm(1.0, 8, 3);
  const QuantizerConfig cfg(4.0);
  const MuEstimate mc = mu_monte_carlo(x, EnsembleSpec{}, 200000, 12, cfg);
  CHECK(std::abs(mc.value - 0.56807221928743279) <= 4.0 * mc.std_error);
  CHECK(mc.std_error > 0.0);
  for (auto kind : {EnsembleKind::Bernoulli, EnsembleKind::SphereRows, EnsembleKind::PartialDFT}) {
    EnsembleSpec s;
    s.kind = kind;
    s.ambient_n = 100000;
    for (double delta : {0.5, 2.0}) {
      const MuEstimate e = mu_monte_carlo(x, s, 50000, 8, QuantizerConfig(delta));
      const double cap = 0.5 * delta * (s.is_complex() ? std::sqrt(2.0) : 1.0);
      CHECK(e.value <= cap + 3.0 * e.std_error);
    }
  }
}

TEST_CASE("poisson summation self-check") {
  const SchwartzDensity g = gaussian_density();
  CHECK(poisson_check(g, 1.0, 0.0).abs_diff < 1e-10);
  CHECK(poisson_check(g, 0.5, 0.25).abs_diff < 1e-10);
  const PoissonCheck c = poisson_check(mixture_density(0.6), 0.7, 0.3);
  CHECK(c.abs_diff < 1e-10);
  CHECK(c.lhs_terms > 1);
  CHECK_THROWS_AS(poisson_check(g, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(poisson_check(g, -1.0, 0.0), std::invalid_argument);
}
