#pragma once

#include <variant>

#include "msq/ensembles.hpp"
#include "msq/types.hpp"

namespace msq {

inline constexpr double kDefaultRankTol = 1e-12;

/// Moore-Penrose pseudoinverse of a full-column-rank m x k frame, with the
/// extreme singular values of the source.
class Pseudoinverse {
 public:
  Pseudoinverse(std::variant<Mat, CMat> matrix, Eigen::Index m, Eigen::Index k, Eigen::Index rank,
                double sigma_min, double sigma_max);

  bool is_complex() const noexcept { return std::holds_alternative<CMat>(matrix_); }
  const Mat& real() const;
  const CMat& complex() const;

  Eigen::Index source_rows() const noexcept { return m_; }
  Eigen::Index source_cols() const noexcept { return k_; }
  Eigen::Index rank() const noexcept { return rank_; }
  double sigma_min() const noexcept { return sigma_min_; }
  double sigma_max() const noexcept { return sigma_max_; }

  Vec apply(const Vec& y) const;
  CVec apply(const CVec& y) const;

 private:
  std::variant<Mat, CMat> matrix_;
  Eigen::Index m_;
  Eigen::Index k_;
  Eigen::Index rank_;
  double sigma_min_;
  double sigma_max_;
};

/// E^+ through a thin SVD (never through the normal equations). Singular
/// values below rel_tol * sigma_max count as rank deficiency and raise
/// RankDeficiencyError carrying sigma_min. Requires m >= k.
Pseudoinverse pseudoinverse(const FrameMatrix& e, double rel_tol = kDefaultRankTol);

struct SingularValueBand {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double lower = 0.0;  ///< sqrt(m) - c_K sqrt(k) - t
  double upper = 0.0;  ///< sqrt(m) + c_K sqrt(k) + t
  bool passes_band = false;
};

/// Extreme singular values and whether they fall inside the deviation band
/// sqrt(m) -+ (c_K sqrt(k) + t), with t = sqrt(m)/2 and c_K = 1 by default.
SingularValueBand singular_value_band(const FrameMatrix& e, double c_k = 1.0);
SingularValueBand singular_value_band(const FrameMatrix& e, double c_k, double t);

/// Singular values in decreasing order.
Vec singular_values(const FrameMatrix& e);

}  // namespace msq
