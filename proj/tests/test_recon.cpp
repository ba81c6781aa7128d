#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "msq/errors.hpp"
#include "msq/recon.hpp"

using namespace msq;

namespace {
EnsembleSpec spec(EnsembleKind kind, std::int64_t n = 0) {
  EnsembleSpec s;
  s.kind = kind;
  s.ambient_n = n;
  return s;
}
}  // namespace

TEST_CASE("signal validation") {
  CHECK_THROWS_AS(Signal{Vec()}, ContractError);
  Vec bad(2);
  bad << 1.0, std::nan("");
  CHECK_THROWS_AS(Signal{bad}, std::domain_error);
  Vec v(2);
  v << 3.0, 4.0;
  CHECK(Signal(v).norm() == 5.0);
}

TEST_CASE("lattice measurements reconstruct exactly") {
  const QuantizerConfig cfg(0.5);
  Vec x(5);
  x << 1.0, -0.5, 2.5, 0.0, -3.0;
  const FrameMatrix e = sample_frame(spec(EnsembleKind::Bernoulli), 40, 5, 2);
  const ReconResult r = reconstruct(Signal(x), e, cfg);
  CHECK(r.error < 1e-13);
  CHECK(std::abs(r.error - (x - r.x_hat).norm()) <= 1e-12);
}

TEST_CASE("one-dimensional bernoulli frames return Q(x)") {
  const QuantizerConfig cfg(1.0);
  for (double x : {0.3, -0.3, 1.7, -2.2, 0.49}) {
    for (Eigen::Index m = 1; m <= 64; ++m) {
      const FrameMatrix e = sample_frame(spec(EnsembleKind::Bernoulli), m, 1, static_cast<std::uint64_t>(m));
      const ReconResult r = reconstruct(Signal(Vec::Constant(1, x)), e, cfg);
      CHECK(r.error == doctest::Approx(std::abs(x - quantize_scalar(x, cfg))).epsilon(1e-12));
    }
  }
}

TEST_CASE("rough bound holds for every draw") {
  for (auto kind : {EnsembleKind::Gaussian, EnsembleKind::Bernoulli, EnsembleKind::SphereRows, EnsembleKind::PartialDFT}) {
    for (double delta : {0.01, 0.3, 4.0}) {
      for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const FrameMatrix e = sample_frame(spec(kind, 5000), 60, 8, seed);
        Stream s(seed + 1000);
        Vec x(8);
        for (auto& v : x) v = s.normal();
        const ReconResult r = reconstruct(Signal(x), e, QuantizerConfig(delta));
        CHECK(r.error <= r.rough_bound);
        CHECK(r.rough_bound ==
              doctest::Approx(rough_error_bound(r.sigma_min, 60, delta, kind == EnsembleKind::PartialDFT)));
      }
    }
  }
}

TEST_CASE("fourier spike: every measurement equals c") {
  const QuantizerConfig cfg(0.01);
  for (double c : {1.0, 0.123456, -0.7071, 0.00499}) {
    Vec x = Vec::Zero(20);
    x[0] = c;
    const FrameMatrix e = sample_frame(spec(EnsembleKind::PartialDFT, 100000), 400, 20, 9);
    const CVec y = e.complex() * x.cast<Complex>();
    CHECK((y.array() - Complex(c, 0.0)).abs().maxCoeff() == 0.0);
    const ReconResult r = reconstruct(Signal(x), e, cfg);
    CHECK(std::abs(r.error - std::abs(c - quantize_scalar(c, cfg))) <= 1e-12);
    CHECK(r.discarded_imag_norm <= 1e-12);
  }
}

TEST_CASE("repeated bernoulli rows add no information") {
  // k = 2 has four sign patterns; a frame's output depends only on how often each appears.
  const QuantizerConfig cfg(1.0);
  Vec x(2);
  x << 0.37, 1.81;
  const std::vector<std::pair<double, double>> patterns{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  auto frame = [&](const std::vector<int>& counts) {
    int m = 0;
    for (int c : counts) m += c;
    Mat e(m, 2);
    int r = 0;
    for (std::size_t p = 0; p < 4; ++p) {
      for (int c = 0; c < counts[p]; ++c, ++r) e.row(r) << patterns[p].first, patterns[p].second;
    }
    return FrameMatrix(e);
  };
  double floor = 1e9;
  for (int a = 1; a <= 4; ++a) {
    for (int b = 1; b <= 4; ++b) {
      for (int c = 1; c <= 4; ++c) {
        for (int d = 1; d <= 4; ++d) {
          const ReconResult once = reconstruct(Signal(x), frame({a, b, c, d}), cfg);
          const ReconResult twice = reconstruct(Signal(x), frame({2 * a, 2 * b, 2 * c, 2 * d}), cfg);
          CHECK((once.x_hat - twice.x_hat).cwiseAbs().maxCoeff() <= 1e-12);
          floor = std::min(floor, once.error);
        }
      }
    }
  }
  // The error saturates away from zero however rows are repeated.
  CHECK(floor > 0.05);
}

TEST_CASE("commutation check") {
  const QuantizerConfig cfg(0.5);
  Vec on(4);
  on << 0.5, -1.0, 2.0, 0.0;
  const FrameMatrix e = sample_frame(spec(EnsembleKind::Bernoulli), 50, 4, 6);
  CHECK(bernoulli_commutation_check(Signal(on), e, cfg));
  Vec near = on.array() + cfg.delta() / 16.0;
  CHECK(bernoulli_commutation_check(Signal(near), e, cfg));

  CHECK_THROWS_AS(bernoulli_commutation_check(Signal(on), sample_frame(spec(EnsembleKind::Gaussian), 50, 4, 6), cfg),
                  ContractError);

  // Exhaustive over every m x 1 sign matrix.
  const QuantizerConfig one(1.0);
  for (double xv : {0.625, 0.5, -0.5, 0.1}) {
    for (int m = 1; m <= 6; ++m) {
      for (int bits = 0; bits < (1 << m); ++bits) {
        Mat a(m, 1);
        bool expect = true;
        for (int j = 0; j < m; ++j) {
          a(j, 0) = (bits >> j) & 1 ? 1.0 : -1.0;
          expect = expect && quantize_scalar(a(j, 0) * xv, one) == a(j, 0) * quantize_scalar(xv, one);
        }
        CHECK(bernoulli_commutation_check(Signal(Vec::Constant(1, xv)), FrameMatrix(a), one) == expect);
      }
    }
  }
}
