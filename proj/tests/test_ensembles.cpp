#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "msq/ensembles.hpp"
#include "msq/errors.hpp"
#include "msq/rng.hpp"

using namespace msq;

namespace {
EnsembleSpec spec(EnsembleKind kind, std::int64_t n = 0) {
  EnsembleSpec s;
  s.kind = kind;
  s.ambient_n = n;
  return s;
}
}  // namespace

TEST_CASE("seed mixing separates coordinates") {
  CHECK(mix_seed(1, {0, 1}) != mix_seed(1, {1, 0}));
  CHECK(mix_seed(1, {0}) != mix_seed(2, {0}));
  CHECK(mix_seed(5, {3, 4}) == mix_seed(5, {3, 4}));
  Stream a(9), b(9);
  for (int i = 0; i < 10; ++i) CHECK(a.normal() == b.normal());
}

TEST_CASE("names round-trip") {
  for (auto k : {EnsembleKind::Gaussian, EnsembleKind::Bernoulli, EnsembleKind::SphereRows, EnsembleKind::PartialDFT}) {
    CHECK(parse_ensemble_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_ensemble_kind("rademacher"), ConfigError);
}

TEST_CASE("bernoulli entries are +-1") {
  const FrameMatrix f = sample_frame(spec(EnsembleKind::Bernoulli), 4, 2, 3);
  CHECK(f.rows() == 4);
  CHECK(f.cols() == 2);
  CHECK(((f.real().array() == 1.0) || (f.real().array() == -1.0)).all());
}

TEST_CASE("sphere rows have norm sqrt(k)") {
  const FrameMatrix f = sample_frame(spec(EnsembleKind::SphereRows), 3, 20, 4);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(std::abs(f.real().row(i).norm() - std::sqrt(20.0)) < 1e-12);
}

TEST_CASE("gaussian entries have unit variance") {
  const FrameMatrix f = sample_frame(spec(EnsembleKind::Gaussian), 100000, 1, 5);
  const Vec v = f.real().col(0);
  const double mean = v.mean();
  const double var = (v.array() - mean).square().sum() / (v.size() - 1);
  CHECK(std::abs(mean) <= 0.02);
  CHECK(var >= 0.98);
  CHECK(var <= 1.02);
}

TEST_CASE("sampling is deterministic in its arguments") {
  for (auto k : {EnsembleKind::Gaussian, EnsembleKind::Bernoulli, EnsembleKind::SphereRows}) {
    const FrameMatrix a = sample_frame(spec(k), 30, 5, 77);
    const FrameMatrix b = sample_frame(spec(k), 30, 5, 77);
    const FrameMatrix c = sample_frame(spec(k), 30, 5, 78);
    CHECK(a.real() == b.real());
    CHECK(a.real() != c.real());
  }
  const FrameMatrix d1 = sample_frame(spec(EnsembleKind::PartialDFT, 1000), 50, 8, 1);
  const FrameMatrix d2 = sample_frame(spec(EnsembleKind::PartialDFT, 1000), 50, 8, 1);
  CHECK(d1.complex() == d2.complex());
}

TEST_CASE("partial DFT rows are distinct unit-modulus DFT rows") {
  const std::int64_t n = 97;
  const FrameMatrix f = sample_frame(spec(EnsembleKind::PartialDFT, n), 60, 6, 12);
  REQUIRE(f.is_complex());
  const CMat& e = f.complex();
  CHECK(((e.array().abs() - 1.0).abs() < 1e-14).all());
  std::set<std::int64_t> rows;
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    // Column 1 is exp(-2 pi i j / n); recover j from its angle.
    double ang = -std::arg(e(i, 1)) * static_cast<double>(n) / (2.0 * std::numbers::pi);
    auto j = static_cast<std::int64_t>(std::llround(ang));
    j = ((j % n) + n) % n;
    rows.insert(j);
    for (Eigen::Index c = 0; c < e.cols(); ++c) {
      const double expect = -2.0 * std::numbers::pi * static_cast<double>((j * c) % n) / static_cast<double>(n);
      CHECK(std::abs(e(i, c) - std::polar(1.0, expect)) < 1e-12);
    }
  }
  CHECK(rows.size() == 60);
}

TEST_CASE("partial DFT needs N >= m") {
  CHECK_THROWS_AS(sample_frame(spec(EnsembleKind::PartialDFT, 10), 11, 3, 0), ConfigError);
  CHECK_THROWS_AS(sample_frame(spec(EnsembleKind::PartialDFT, 10), 5, 11, 0), ConfigError);
}

TEST_CASE("rows are isotropic") {
  const Eigen::Index m = 100000;
  const double tol = 5.0 * 3.0 / std::sqrt(static_cast<double>(m));
  for (auto k : {EnsembleKind::Gaussian, EnsembleKind::Bernoulli, EnsembleKind::SphereRows}) {
    const FrameMatrix f = sample_frame(spec(k), m, 6, 21);
    const Mat s = f.real().transpose() * f.real() / static_cast<double>(m);
    CHECK((s - Mat::Identity(6, 6)).cwiseAbs().maxCoeff() <= tol);
  }
  const FrameMatrix d = sample_frame(spec(EnsembleKind::PartialDFT, 1000000), m, 6, 21);
  const CMat s = d.complex().adjoint() * d.complex() / static_cast<double>(m);
  CHECK((s - CMat::Identity(6, 6)).cwiseAbs().maxCoeff() <= tol);
}

TEST_CASE("gaussian density bundle") {
  const SchwartzDensity g = gaussian_density();
  CHECK(g.phi(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(std::abs(g.phi_hat(0.0) - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(g.g_hat(0.0) - Complex(-1.0, 0.0)) < 1e-15);
  CHECK(std::abs(g.g_hat(10.0)) < 1e-12);
  CHECK(g.g(0.3) == doctest::Approx(-g.phi(0.3)));
}

TEST_CASE("sample_row matches the frame law") {
  Stream s(4);
  Vec row(20);
  sample_row(spec(EnsembleKind::SphereRows), s, row);
  CHECK(std::abs(row.norm() - std::sqrt(20.0)) < 1e-12);
  sample_row(spec(EnsembleKind::Bernoulli), s, row);
  CHECK((row.array().abs() == 1.0).all());
  CVec crow(5);
  sample_row(spec(EnsembleKind::PartialDFT, 64), s, crow);
  CHECK(std::abs(crow[0] - Complex(1.0, 0.0)) < 1e-15);
}
