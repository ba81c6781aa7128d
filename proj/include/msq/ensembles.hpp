#pragma once

#include <cstdint>
#include <string>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "msq/density.hpp"
#include "msq/rng.hpp"
#include "msq/types.hpp"

namespace msq {

enum class EnsembleKind { Gaussian, Bernoulli, SphereRows, PartialDFT };

std::string to_string(EnsembleKind kind);
/// Accepts gaussian, bernoulli, sphere (or sphererows), dft (or partialdft).
EnsembleKind parse_ensemble_kind(std::string_view name);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::Gaussian;
  /// N, the DFT size. Only read for PartialDFT.
  std::int64_t ambient_n = 0;
  /// psi_2-norm bound K. Metadata; generation ignores it.
  double subgaussian_norm_k = 1.0;

  bool is_complex() const noexcept { return kind == EnsembleKind::PartialDFT; }
};

/// An m x k analysis matrix together with how it was drawn.
class FrameMatrix {
 public:
  FrameMatrix(Mat entries, EnsembleSpec spec = {}, std::uint64_t seed = 0);
  FrameMatrix(CMat entries, EnsembleSpec spec, std::uint64_t seed = 0);

  Eigen::Index rows() const noexcept;
  Eigen::Index cols() const noexcept;
  bool is_complex() const noexcept { return std::holds_alternative<CMat>(entries_); }

  /// Throws ContractError when the other representation is held.
  const Mat& real() const;
  const CMat& complex() const;

  const EnsembleSpec& spec() const noexcept { return spec_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::variant<Mat, CMat> entries_;
  EnsembleSpec spec_;
  std::uint64_t seed_;
};

/// Draws an m x k frame; a deterministic function of (spec, m, k, seed).
///   Gaussian    i.i.d. N(0, 1) entries
///   Bernoulli   i.i.d. +-1 entries
///   SphereRows  i.i.d. rows uniform on the sphere of radius sqrt(k)
///   PartialDFT  first k columns of the unnormalized N x N DFT,
///               entry (j, n) = exp(-2 pi i j n / N), at m distinct rows
///               drawn uniformly without replacement
/// Throws ConfigError when PartialDFT has m > N.
FrameMatrix sample_frame(const EnsembleSpec& spec, Eigen::Index m, Eigen::Index k, std::uint64_t seed);

/// Fills `row` (length k) with one ensemble row drawn from `stream`.
/// For PartialDFT, draws a single row index uniformly from [0, N).
void sample_row(const EnsembleSpec& spec, Stream& stream, Vec& row);
void sample_row(const EnsembleSpec& spec, Stream& stream, CVec& row);

/// m distinct values in [0, n) by Floyd's algorithm, ascending.
std::vector<std::int64_t> sample_distinct_indices(Stream& stream, std::int64_t n, std::int64_t m);

/// Rows `row_indices` of the N x N DFT restricted to the first k columns.
CMat dft_rows(std::int64_t n, std::span<const std::int64_t> row_indices, Eigen::Index k);

/// Standard normal entry density: phi(z) = exp(-z^2/2)/sqrt(2 pi),
/// phi_hat(w) = exp(-2 pi^2 w^2), g(z) = -phi(z), g_hat(w) = -exp(-2 pi^2 w^2).
SchwartzDensity gaussian_density();

}  // namespace msq
