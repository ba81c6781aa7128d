#pragma once

#include <cmath>
#include <complex>
#include <span>

#include <Eigen/Dense>

namespace msq {

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Euclidean norm accumulated in index order. Zeros never perturb the sum,
/// so a vector and its zero-padded embedding give bit-identical norms.
inline double euclidean_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double e : v) acc += e * e;
  return std::sqrt(acc);
}

inline double euclidean_norm(const Vec& v) {
  return euclidean_norm(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

}  // namespace msq
