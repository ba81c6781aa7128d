#include "msq/mu.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "msq/errors.hpp"
#include "msq/parallel.hpp"
#include "msq/rng.hpp"

namespace msq {

std::string to_string(MuMethod method) {
  switch (method) {
    case MuMethod::GaussianClosedForm: return "gaussian_closed_form";
    case MuMethod::SchwartzSeries: return "schwartz_series";
    case MuMethod::MonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

namespace {

constexpr double kPi = std::numbers::pi;

// Direct series sum_{p>=1} (-1)^{p+1} e^{-a p^2} is used when it settles
// within kGaussianSeriesCap terms: e^{-a (P^2 - 1)} < kSeriesRelTol.
bool direct_series_converges(double a) {
  const double cap = static_cast<double>(kGaussianSeriesCap);
  return a * (cap * cap - 1.0) > -std::log(kSeriesRelTol);
}

}  // namespace

double gaussian_alternating_sum(double x_norm, double delta, std::int64_t* terms_used) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const double a = 2.0 * kPi * kPi * x_norm * x_norm / (delta * delta);
  std::int64_t used = 0;
  double s = 0.0;
  if (a == 0.0) {
    s = 0.0;
  } else if (direct_series_converges(a)) {
    const double first = std::exp(-a);
    for (std::int64_t p = 1; p <= kGaussianSeriesCap; ++p) {
      const auto pd = static_cast<double>(p);
      const double t = std::exp(-a * pd * pd);
      if (p > 1 && t < kSeriesRelTol * first) break;
      s += (p % 2 == 1) ? t : -t;
      used = p;
    }
  } else {
    // theta = sum_{p in Z} (-1)^p e^{-a p^2} = 2 sqrt(pi/a) sum_{n>=0} e^{-pi^2 (n+1/2)^2 / a}
    const double scale = 2.0 * std::sqrt(kPi / a);
    double theta = 0.0;
    const double first = std::exp(-kPi * kPi * 0.25 / a);
    for (std::int64_t n = 0; n < kGaussianSeriesCap; ++n) {
      const double h = static_cast<double>(n) + 0.5;
      const double t = std::exp(-kPi * kPi * h * h / a);
      if (n > 0 && t < kSeriesRelTol * first) break;
      theta += t;
      used = n + 1;
    }
    s = 0.5 * (1.0 - scale * theta);
  }
  if (terms_used != nullptr) *terms_used = used;
  return s;
}

MuEstimate mu_gaussian(const Signal& x, const QuantizerConfig& cfg) {
  MuEstimate out;
  out.method = MuMethod::GaussianClosedForm;
  if (x.norm() == 0.0) return out;
  const double s = gaussian_alternating_sum(x.norm(), cfg.delta(), &out.truncation_p);
  out.value = 2.0 * x.norm() * s;
  return out;
}

Vec schwartz_mean_vector(const Signal& x, const QuantizerConfig& cfg, const SchwartzDensity& density,
                         std::int64_t* truncation_p) {
  const Vec& v = x.values();
  const Eigen::Index k = v.size();
  const double delta = cfg.delta();
  Vec mean = Vec::Zero(k);
  std::int64_t max_p = 0;

  for (Eigen::Index i = 0; i < k; ++i) {
    if (v[i] == 0.0) continue;  // the entry vanishes exactly
    const double sgn = v[i] > 0.0 ? 1.0 : -1.0;
    const double abs_xi = std::abs(v[i]);
    auto term = [&](std::int64_t p) {
      const auto pd = static_cast<double>(p);
      Complex t = density.g_hat(abs_xi * pd / delta);
      for (Eigen::Index s = 0; s < k; ++s) {
        if (s != i) t *= density.phi_hat(v[s] * sgn * pd / delta);
      }
      return (p % 2 == 0) ? t : -t;
    };

    Complex tail(0.0, 0.0);
    double first = 0.0;
    bool settled = false;
    std::int64_t p = 1;
    for (; p <= kSchwartzSeriesCap; ++p) {
      const Complex plus = term(p);
      const Complex minus = term(-p);
      const double size = std::abs(plus) + std::abs(minus);
      if (p == 1) first = size;
      if (first == 0.0 || (p > 1 && size < kSeriesRelTol * first)) {
        settled = true;
        break;
      }
      tail += plus + minus;
    }
    if (!settled) {
      throw ConvergenceError("mu_schwartz: series tail did not decay by |p| = " +
                                 std::to_string(kSchwartzSeriesCap),
                             mean, std::abs(tail));
    }
    max_p = std::max(max_p, p - 1);
    // 1 + term(0) cancels exactly for densities whose g^(0) is exactly -1.
    const Complex head = 1.0 + term(0);
    mean[i] = v[i] * (head + tail).real();
  }
  if (truncation_p != nullptr) *truncation_p = max_p;
  return mean;
}

MuEstimate mu_schwartz(const Signal& x, const QuantizerConfig& cfg, const SchwartzDensity& density) {
  MuEstimate out;
  out.method = MuMethod::SchwartzSeries;
  const Vec mean = schwartz_mean_vector(x, cfg, density, &out.truncation_p);
  out.value = euclidean_norm(mean);
  return out;
}

namespace {

// Running mean and scatter matrix (Welford), mergeable (Chan et al.).
struct Moments {
  std::int64_t n = 0;
  Vec mean;
  Mat scatter;

  explicit Moments(Eigen::Index d) : mean(Vec::Zero(d)), scatter(Mat::Zero(d, d)) {}

  void push(const Vec& v) {
    ++n;
    const Vec delta = v - mean;
    mean += delta / static_cast<double>(n);
    scatter.noalias() += delta * (v - mean).transpose();
  }

  static Moments merge(const Moments& a, const Moments& b) {
    if (a.n == 0) return b;
    if (b.n == 0) return a;
    Moments out(a.mean.size());
    out.n = a.n + b.n;
    const Vec delta = b.mean - a.mean;
    const double nb_over_n = static_cast<double>(b.n) / static_cast<double>(out.n);
    out.mean = a.mean + delta * nb_over_n;
    out.scatter = a.scatter + b.scatter + (delta * delta.transpose()) * (static_cast<double>(a.n) * nb_over_n);
    return out;
  }
};

Moments reduce_blocks(const std::vector<Moments>& blocks, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return blocks[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return Moments::merge(reduce_blocks(blocks, lo, mid), reduce_blocks(blocks, mid, hi));
}

}  // namespace

MuEstimate mu_monte_carlo(const Signal& x, const EnsembleSpec& spec, std::int64_t trials, std::uint64_t seed,
                          const QuantizerConfig& cfg, int threads) {
  if (trials < 1) throw std::invalid_argument("mu_monte_carlo: trials must be >= 1");
  const Eigen::Index k = x.size();
  const bool complex_rows = spec.is_complex();
  const Eigen::Index d = complex_rows ? 2 * k : k;
  const auto block_count = static_cast<std::size_t>((trials + kMonteCarloBlock - 1) / kMonteCarloBlock);
  std::vector<Moments> blocks(block_count, Moments(d));

  parallel_for(block_count, resolve_threads(threads), [&](std::size_t b) {
    Stream stream(mix_seed(seed, {static_cast<std::uint64_t>(b)}));
    const std::int64_t begin = static_cast<std::int64_t>(b) * kMonteCarloBlock;
    const std::int64_t n = std::min(kMonteCarloBlock, trials - begin);
    Moments acc(d);
    Vec summand(d);
    if (complex_rows) {
      CVec row(k);
      const CVec xc = x.values().cast<Complex>();
      for (std::int64_t t = 0; t < n; ++t) {
        sample_row(spec, stream, row);
        const Complex y = row.transpose() * xc;
        const Complex f(residual(y.real(), cfg), residual(y.imag(), cfg));
        const CVec v = row.conjugate() * f;
        summand.head(k) = v.real();
        summand.tail(k) = v.imag();
        acc.push(summand);
      }
    } else {
      Vec row(k);
      for (std::int64_t t = 0; t < n; ++t) {
        sample_row(spec, stream, row);
        const double f = residual(row.dot(x.values()), cfg);
        summand = row * f;
        acc.push(summand);
      }
    }
    blocks[b] = std::move(acc);
  });

  const Moments total = reduce_blocks(blocks, 0, blocks.size());
  MuEstimate out;
  out.method = MuMethod::MonteCarlo;
  out.trials = trials;
  out.value = euclidean_norm(total.mean);
  if (total.n > 1) {
    const Mat cov_of_mean = total.scatter / (static_cast<double>(total.n - 1) * static_cast<double>(total.n));
    if (out.value > 0.0) {
      const double quad = total.mean.dot(cov_of_mean * total.mean);
      out.std_error = std::sqrt(std::max(0.0, quad)) / out.value;
    } else {
      out.std_error = std::sqrt(std::max(0.0, cov_of_mean.trace()));
    }
  }
  return out;
}

PoissonCheck poisson_check(const SchwartzDensity& density, double a, double b) {
  if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("poisson_check: need a > 0 and finite b");
  }
  PoissonCheck out;

  // Left side: sum g(a n + b), outward from the term nearest the peak.
  {
    const auto center = static_cast<std::int64_t>(std::llround(-b / a));
    auto f = [&](std::int64_t n) { return density.g(a * static_cast<double>(n) + b); };
    double sum = f(center);
    double biggest = std::abs(sum);
    bool settled = false;
    std::int64_t d = 1;
    for (; d <= kSchwartzSeriesCap; ++d) {
      const double hi = f(center + d);
      const double lo = f(center - d);
      const double size = std::abs(hi) + std::abs(lo);
      biggest = std::max(biggest, size);
      sum += hi + lo;
      if (size < kSeriesRelTol * biggest) {
        settled = true;
        break;
      }
    }
    if (!settled) throw ConvergenceError("poisson_check: lattice sum did not settle", Vec(), std::abs(sum));
    out.lhs = sum;
    out.lhs_terms = 2 * d + 1;
  }

  // Right side: sum (1/a) g^(p/a) exp(2 pi i p b / a).
  {
    auto term = [&](std::int64_t p) {
      const double w = static_cast<double>(p) / a;
      return density.g_hat(w) * std::polar(1.0, 2.0 * kPi * w * b) / a;
    };
    Complex sum = term(0);
    double biggest = std::abs(sum);
    bool settled = false;
    std::int64_t p = 1;
    for (; p <= kSchwartzSeriesCap; ++p) {
      const Complex pair = term(p) + term(-p);
      const double size = std::abs(pair);
      biggest = std::max(biggest, size);
      sum += pair;
      if (size < kSeriesRelTol * biggest) {
        settled = true;
        break;
      }
    }
    if (!settled) throw ConvergenceError("poisson_check: dual sum did not settle", Vec(), std::abs(sum));
    out.rhs = sum.real();
    out.rhs_terms = 2 * p + 1;
  }
  out.abs_diff = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace msq
