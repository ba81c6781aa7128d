#include "msq/recon.hpp"

#include <cmath>

#include "msq/errors.hpp"

namespace msq {

Signal::Signal(Vec values) : values_(std::move(values)), norm_(0.0) {
  if (values_.size() < 1) throw ContractError("signal must have at least one entry");
  if (!values_.allFinite()) throw std::domain_error("signal entries must be finite");
  norm_ = euclidean_norm(values_);
}

double rough_error_bound(double sigma_min, Eigen::Index m, double delta, bool complex_measurements) {
  const double per_entry = complex_measurements ? std::sqrt(2.0) * 0.5 * delta : 0.5 * delta;
  return std::sqrt(static_cast<double>(m)) * per_entry / sigma_min;
}

Vec quantized_measurements(const Mat& e, const Vec& x, const QuantizerConfig& cfg) {
  const Vec y = e * x;
  return quantize_vector(y, cfg);
}

ReconResult reconstruct(const Signal& x, const FrameMatrix& e, const QuantizerConfig& cfg) {
  return reconstruct(x, e, pseudoinverse(e), cfg);
}

ReconResult reconstruct(const Signal& x, const FrameMatrix& e, const Pseudoinverse& pinv,
                        const QuantizerConfig& cfg) {
  if (x.size() != e.cols()) throw ContractError("reconstruct: signal length differs from frame columns");
  if (pinv.source_rows() != e.rows() || pinv.source_cols() != e.cols()) {
    throw ContractError("reconstruct: pseudoinverse shape does not match frame");
  }
  ReconResult out;
  out.m = e.rows();
  out.k = e.cols();
  out.delta = cfg.delta();
  out.sigma_min = pinv.sigma_min();
  out.rough_bound = rough_error_bound(pinv.sigma_min(), out.m, cfg.delta(), e.is_complex());

  if (e.is_complex()) {
    const CVec y = e.complex() * x.values().cast<Complex>();
    const CVec z = pinv.apply(quantize_vector(y, cfg));
    out.x_hat = z.real();
    out.discarded_imag_norm = z.imag().norm();
  } else {
    out.x_hat = pinv.apply(quantized_measurements(e.real(), x.values(), cfg));
  }
  const Vec diff = x.values() - out.x_hat;
  out.error = euclidean_norm(diff);
  return out;
}

bool bernoulli_commutation_check(const Signal& x, const FrameMatrix& e, const QuantizerConfig& cfg) {
  if (e.is_complex()) throw ContractError("commutation check needs a +-1 frame");
  const Mat& a = e.real();
  if (!((a.array() == 1.0) || (a.array() == -1.0)).all()) {
    throw ContractError("commutation check needs a +-1 frame");
  }
  if (x.size() != a.cols()) throw ContractError("commutation check: signal length differs from frame columns");

  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> qx(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) qx[i] = lattice_index(x.values()[i], cfg);
  const Vec y = a * x.values();
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    std::int64_t expected = 0;
    for (Eigen::Index i = 0; i < a.cols(); ++i) expected += a(j, i) > 0 ? qx[i] : -qx[i];
    if (lattice_index(y[j], cfg) != expected) return false;
  }
  return true;
}

}  // namespace msq
