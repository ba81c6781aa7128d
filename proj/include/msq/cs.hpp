#pragma once

// Sparse recovery from quantized measurements: an l1 coarse decoder,
// support identification, and a least-squares refinement on the support.

#include <cstdint>
#include <vector>

#include "msq/ensembles.hpp"
#include "msq/quantizer.hpp"
#include "msq/types.hpp"

namespace msq {

/// A k-sparse vector in R^N. Support indices are kept ascending.
class SparseSignal {
 public:
  /// Throws ContractError on duplicate or out-of-range indices, zero values,
  /// or a length mismatch. Unsorted input is sorted along with its values.
  SparseSignal(std::int64_t ambient_n, std::vector<std::int64_t> support, Vec values);

  std::int64_t ambient_n() const noexcept { return n_; }
  const std::vector<std::int64_t>& support() const noexcept { return support_; }
  const Vec& values() const noexcept { return values_; }
  Eigen::Index sparsity() const noexcept { return values_.size(); }
  Vec dense() const;

 private:
  std::int64_t n_;
  std::vector<std::int64_t> support_;
  Vec values_;
};

/// k nonzeros at uniformly drawn positions, each +-1/sqrt(k) with a fair sign.
SparseSignal sparse_pm_signal(std::int64_t n, std::int64_t k, std::uint64_t seed);

/// min ||z||_1 subject to ||phi z - q|| <= epsilon.
struct BpdnProblem {
  Mat phi;
  Vec q;
  double epsilon = 0.0;
};

struct BpdnOptions {
  double tol_feas = 1e-8;  ///< relative slack on the constraint
  double tol_obj = 1e-6;   ///< objective tolerance, relative to 1 + OPT
  std::int64_t max_iter = 50000;
};

struct BpdnSolution {
  Vec z;
  double residual_norm = 0.0;  ///< ||phi z - q||
  double objective = 0.0;      ///< ||z||_1
  double dual_bound = 0.0;     ///< lower bound on OPT from the dual certificate
  std::int64_t iterations = 0; ///< breakpoints visited along the path
};

/// Follows the piecewise-linear path of the penalized problem
/// min 1/2 ||phi z - q||^2 + gamma ||z||_1 from gamma = ||phi^T q||_inf down to
/// the gamma at which the residual norm reaches epsilon. Each breakpoint
/// refactors the active Gram matrix from scratch.
///
/// The returned point satisfies ||phi z - q|| <= epsilon (1 + tol_feas)
/// (tol_feas ||q|| when epsilon = 0) and ||z||_1 <= dual + tol_obj (1 + dual).
/// Throws ConvergenceError with the last iterate otherwise, or when
/// max_iter breakpoints pass first.
BpdnSolution bpdn_solve(const BpdnProblem& problem, const BpdnOptions& options = {});

/// Indices of the k largest |coarse| entries, lowest index first on ties,
/// returned ascending.
std::vector<std::int64_t> support_recover(const Vec& coarse, std::int64_t k);

struct TwoStageResult {
  Vec coarse;
  std::vector<std::int64_t> recovered_support;
  Vec refined;  ///< zero off recovered_support
  double coarse_error = 0.0;
  double refined_error = 0.0;
  bool support_exact = false;
  double sigma_min_support = 0.0;  ///< of phi restricted to recovered_support
  std::int64_t solver_iterations = 0;
};

/// q = Q(phi x); coarse = bpdn with epsilon = sqrt(m) delta/2; support from
/// the coarse estimate; refined = (phi_T)^+ q on that support.
/// Solver and rank-deficiency errors propagate.
TwoStageResult two_stage(const FrameMatrix& phi, const SparseSignal& x, const QuantizerConfig& cfg,
                         const BpdnOptions& options = {});

/// ceil(c4_bar k ln(0.5 e n / k)): a sufficient number of Gaussian
/// measurements for the restricted isometry property of order 2k. Advisory.
/// epsilon must lie in (0, 1) (std::invalid_argument); it sets no other input.
std::int64_t rip_sample_size(std::int64_t k, std::int64_t n, double epsilon, double c4_bar = 1.0);

}  // namespace msq
