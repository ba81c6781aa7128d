#include "msq/linalg.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "msq/errors.hpp"

namespace msq {

Pseudoinverse::Pseudoinverse(std::variant<Mat, CMat> matrix, Eigen::Index m, Eigen::Index k,
                             Eigen::Index rank, double sigma_min, double sigma_max)
    : matrix_(std::move(matrix)), m_(m), k_(k), rank_(rank), sigma_min_(sigma_min), sigma_max_(sigma_max) {}

const Mat& Pseudoinverse::real() const {
  if (const auto* p = std::get_if<Mat>(&matrix_)) return *p;
  throw ContractError("pseudoinverse is complex");
}

const CMat& Pseudoinverse::complex() const {
  if (const auto* p = std::get_if<CMat>(&matrix_)) return *p;
  throw ContractError("pseudoinverse is real");
}

Vec Pseudoinverse::apply(const Vec& y) const {
  if (y.size() != m_) throw ContractError("pseudoinverse: measurement length mismatch");
  return real() * y;
}

CVec Pseudoinverse::apply(const CVec& y) const {
  if (y.size() != m_) throw ContractError("pseudoinverse: measurement length mismatch");
  if (is_complex()) return complex() * y;
  return real().cast<Complex>() * y;
}

namespace {

template <typename MatrixT>
Pseudoinverse pinv_impl(const MatrixT& e, double rel_tol) {
  const Eigen::Index m = e.rows();
  const Eigen::Index k = e.cols();
  if (m < k) throw ContractError("pseudoinverse: frame needs m >= k");
  Eigen::JacobiSVD<MatrixT, Eigen::ColPivHouseholderQRPreconditioner> svd(e, Eigen::ComputeThinU |
                                                                                 Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(k - 1);
  if (!(smax > 0.0) || smin < rel_tol * smax) {
    throw RankDeficiencyError("pseudoinverse: numerically rank deficient (sigma_min=" + std::to_string(smin) +
                                  ", sigma_max=" + std::to_string(smax) + ")",
                              smin, smax);
  }
  const Eigen::VectorXd inv = s.cwiseInverse();
  MatrixT p = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
  return Pseudoinverse(std::move(p), m, k, k, smin, smax);
}

template <typename MatrixT>
Vec singular_values_impl(const MatrixT& e) {
  if (e.rows() >= e.cols()) {
    Eigen::JacobiSVD<MatrixT, Eigen::ColPivHouseholderQRPreconditioner> svd(e);
    return svd.singularValues();
  }
  Eigen::JacobiSVD<MatrixT> svd(e);
  return svd.singularValues();
}

}  // namespace

Pseudoinverse pseudoinverse(const FrameMatrix& e, double rel_tol) {
  if (e.is_complex()) return pinv_impl(e.complex(), rel_tol);
  return pinv_impl(e.real(), rel_tol);
}

Vec singular_values(const FrameMatrix& e) {
  if (e.is_complex()) return singular_values_impl(e.complex());
  return singular_values_impl(e.real());
}

SingularValueBand singular_value_band(const FrameMatrix& e, double c_k) {
  return singular_value_band(e, c_k, 0.5 * std::sqrt(static_cast<double>(e.rows())));
}

SingularValueBand singular_value_band(const FrameMatrix& e, double c_k, double t) {
  if (e.rows() < e.cols()) throw ContractError("singular_value_band: frame needs m >= k");
  const Vec s = singular_values(e);
  SingularValueBand band;
  band.sigma_max = s(0);
  band.sigma_min = s(s.size() - 1);
  // Numerically singular frames report sigma_min = 0 and never pass.
  if (band.sigma_min < kDefaultRankTol * band.sigma_max) band.sigma_min = 0.0;
  const double root_m = std::sqrt(static_cast<double>(e.rows()));
  const double spread = c_k * std::sqrt(static_cast<double>(e.cols())) + t;
  band.lower = root_m - spread;
  band.upper = root_m + spread;
  band.passes_band = band.sigma_min > 0.0 && band.sigma_min >= band.lower && band.sigma_max <= band.upper;
  return band;
}

}  // namespace msq
