#include "msq/ensembles.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <unordered_set>
#include <vector>

#include "msq/errors.hpp"

namespace msq {

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::Gaussian: return "gaussian";
    case EnsembleKind::Bernoulli: return "bernoulli";
    case EnsembleKind::SphereRows: return "sphere";
    case EnsembleKind::PartialDFT: return "dft";
  }
  return "unknown";
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "gaussian") return EnsembleKind::Gaussian;
  if (s == "bernoulli") return EnsembleKind::Bernoulli;
  if (s == "sphere" || s == "sphererows") return EnsembleKind::SphereRows;
  if (s == "dft" || s == "partialdft") return EnsembleKind::PartialDFT;
  throw ConfigError("ensemble: unknown kind '" + std::string(name) + "'");
}

FrameMatrix::FrameMatrix(Mat entries, EnsembleSpec spec, std::uint64_t seed)
    : entries_(std::move(entries)), spec_(spec), seed_(seed) {}

FrameMatrix::FrameMatrix(CMat entries, EnsembleSpec spec, std::uint64_t seed)
    : entries_(std::move(entries)), spec_(spec), seed_(seed) {}

Eigen::Index FrameMatrix::rows() const noexcept {
  return std::visit([](const auto& e) { return e.rows(); }, entries_);
}

Eigen::Index FrameMatrix::cols() const noexcept {
  return std::visit([](const auto& e) { return e.cols(); }, entries_);
}

const Mat& FrameMatrix::real() const {
  if (const auto* e = std::get_if<Mat>(&entries_)) return *e;
  throw ContractError("frame holds complex entries");
}

const CMat& FrameMatrix::complex() const {
  if (const auto* e = std::get_if<CMat>(&entries_)) return *e;
  throw ContractError("frame holds real entries");
}

namespace {

void fill_sphere_row(Stream& stream, Eigen::Ref<Vec> row) {
  double norm = 0.0;
  do {
    for (Eigen::Index s = 0; s < row.size(); ++s) row[s] = stream.normal();
    norm = row.norm();
  } while (norm == 0.0);
  row *= std::sqrt(static_cast<double>(row.size())) / norm;
}

Complex dft_entry(std::int64_t n, std::int64_t row, std::int64_t col) {
  const std::int64_t r = (row % n) * col % n;
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

std::vector<std::int64_t> sample_distinct_indices(Stream& stream, std::int64_t n, std::int64_t m) {
  std::unordered_set<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(m) * 2);
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(m));
  for (std::int64_t j = n - m; j < n; ++j) {
    auto t = static_cast<std::int64_t>(stream.index(static_cast<std::uint64_t>(j) + 1));
    if (!chosen.insert(t).second) {
      chosen.insert(j);
      t = j;
    }
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

CMat dft_rows(std::int64_t n, std::span<const std::int64_t> row_indices, Eigen::Index k) {
  CMat out(static_cast<Eigen::Index>(row_indices.size()), k);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index c = 0; c < k; ++c) out(i, c) = dft_entry(n, row_indices[static_cast<std::size_t>(i)], c);
  }
  return out;
}

FrameMatrix sample_frame(const EnsembleSpec& spec, Eigen::Index m, Eigen::Index k, std::uint64_t seed) {
  if (m < 1 || k < 1) throw ConfigError("frame: m and k must be positive");
  Stream stream(seed);
  switch (spec.kind) {
    case EnsembleKind::Gaussian: {
      Mat e(m, k);
      // Row-major fill order so that row i depends only on the stream prefix.
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index s = 0; s < k; ++s) e(i, s) = stream.normal();
      return FrameMatrix(std::move(e), spec, seed);
    }
    case EnsembleKind::Bernoulli: {
      Mat e(m, k);
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index s = 0; s < k; ++s) e(i, s) = stream.sign();
      return FrameMatrix(std::move(e), spec, seed);
    }
    case EnsembleKind::SphereRows: {
      Mat e(m, k);
      Vec row(k);
      for (Eigen::Index i = 0; i < m; ++i) {
        fill_sphere_row(stream, row);
        e.row(i) = row.transpose();
      }
      return FrameMatrix(std::move(e), spec, seed);
    }
    case EnsembleKind::PartialDFT: {
      const std::int64_t n = spec.ambient_n;
      if (n < m || n < k) {
        throw ConfigError("frame: PartialDFT needs ambient_n >= m and >= k (N=" + std::to_string(n) +
                          ", m=" + std::to_string(m) + ", k=" + std::to_string(k) + ")");
      }
      const auto rows = sample_distinct_indices(stream, n, m);
      return FrameMatrix(dft_rows(n, rows, k), spec, seed);
    }
  }
  throw ContractError("frame: unhandled ensemble kind");
}

void sample_row(const EnsembleSpec& spec, Stream& stream, Vec& row) {
  switch (spec.kind) {
    case EnsembleKind::Gaussian:
      for (Eigen::Index s = 0; s < row.size(); ++s) row[s] = stream.normal();
      return;
    case EnsembleKind::Bernoulli:
      for (Eigen::Index s = 0; s < row.size(); ++s) row[s] = stream.sign();
      return;
    case EnsembleKind::SphereRows:
      fill_sphere_row(stream, row);
      return;
    case EnsembleKind::PartialDFT:
      throw ContractError("PartialDFT rows are complex");
  }
}

void sample_row(const EnsembleSpec& spec, Stream& stream, CVec& row) {
  if (spec.kind != EnsembleKind::PartialDFT) throw ContractError("real ensembles have real rows");
  if (spec.ambient_n < row.size()) throw ConfigError("PartialDFT needs ambient_n >= k");
  const auto j = static_cast<std::int64_t>(stream.index(static_cast<std::uint64_t>(spec.ambient_n)));
  for (Eigen::Index c = 0; c < row.size(); ++c) row[c] = dft_entry(spec.ambient_n, j, c);
}

SchwartzDensity gaussian_density() {
  constexpr double two_pi_sq = 2.0 * std::numbers::pi * std::numbers::pi;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  SchwartzDensity d;
  d.phi = [inv_sqrt_2pi](double z) { return inv_sqrt_2pi * std::exp(-0.5 * z * z); };
  d.phi_hat = [](double w) { return Complex(std::exp(-two_pi_sq * w * w), 0.0); };
  d.g = [inv_sqrt_2pi](double z) { return -inv_sqrt_2pi * std::exp(-0.5 * z * z); };
  d.g_hat = [](double w) { return Complex(-std::exp(-two_pi_sq * w * w), 0.0); };
  return d;
}

}  // namespace msq
