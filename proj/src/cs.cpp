#include "msq/cs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "msq/errors.hpp"
#include "msq/linalg.hpp"
#include "msq/recon.hpp"
#include "msq/rng.hpp"

namespace msq {

SparseSignal::SparseSignal(std::int64_t ambient_n, std::vector<std::int64_t> support, Vec values)
    : n_(ambient_n) {
  if (ambient_n < 1) throw ContractError("sparse signal: ambient dimension must be positive");
  if (static_cast<Eigen::Index>(support.size()) != values.size()) {
    throw ContractError("sparse signal: support and values differ in length");
  }
  std::vector<std::size_t> order(support.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
  support_.reserve(support.size());
  values_.resize(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::int64_t idx = support[order[i]];
    const double v = values[static_cast<Eigen::Index>(order[i])];
    if (idx < 0 || idx >= ambient_n) throw ContractError("sparse signal: index out of range");
    if (!support_.empty() && support_.back() == idx) throw ContractError("sparse signal: duplicate index");
    if (v == 0.0 || !std::isfinite(v)) throw ContractError("sparse signal: values must be finite and nonzero");
    support_.push_back(idx);
    values_[static_cast<Eigen::Index>(i)] = v;
  }
}

Vec SparseSignal::dense() const {
  Vec out = Vec::Zero(n_);
  for (std::size_t i = 0; i < support_.size(); ++i) out[support_[i]] = values_[static_cast<Eigen::Index>(i)];
  return out;
}

SparseSignal sparse_pm_signal(std::int64_t n, std::int64_t k, std::uint64_t seed) {
  if (k < 0 || k > n) throw ContractError("sparse_pm_signal: need 0 <= k <= n");
  Stream stream(seed);
  std::vector<std::int64_t> support = sample_distinct_indices(stream, n, k);
  Vec values(k);
  const double mag = k > 0 ? 1.0 / std::sqrt(static_cast<double>(k)) : 0.0;
  for (Eigen::Index i = 0; i < k; ++i) values[i] = stream.sign() * mag;
  return SparseSignal(n, std::move(support), std::move(values));
}

namespace {

struct PathEnd {
  Vec z;
  double gamma = 0.0;
  std::int64_t iterations = 0;
};

// Penalized path down to the point whose residual norm is `target`.
PathEnd follow_path(const Mat& phi, const Vec& q, double target, double eps, std::int64_t max_iter) {
  const Eigen::Index m = phi.rows();
  const Eigen::Index n = phi.cols();

  Vec c = phi.transpose() * q;
  Eigen::Index j0 = 0;
  double gamma = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::abs(c[j]) > gamma) {
      gamma = std::abs(c[j]);
      j0 = j;
    }
  }
  // Correlations carry absolute rounding of about eps * gamma_0; far down the
  // path that dwarfs any relative tolerance on gamma.
  const double abs_tol = 64.0 * std::numeric_limits<double>::epsilon() * gamma;
  if (gamma == 0.0) {
    throw ConvergenceError("bpdn: q is orthogonal to every column; constraint unreachable", Vec::Zero(n),
                           euclidean_norm(q) - eps);
  }

  std::vector<Eigen::Index> active{j0};
  std::vector<double> signs{c[j0] > 0 ? 1.0 : -1.0};
  std::vector<char> in_active(static_cast<std::size_t>(n), 0);
  in_active[static_cast<std::size_t>(j0)] = 1;
  Eigen::Index last_added = j0;
  Eigen::Index last_dropped = -1;

  Vec z = Vec::Zero(n);
  for (std::int64_t iter = 0;; ++iter) {
    const auto s_size = static_cast<Eigen::Index>(active.size());
    Mat phi_s(m, s_size);
    Vec sgn(s_size);
    for (Eigen::Index i = 0; i < s_size; ++i) {
      phi_s.col(i) = phi.col(active[static_cast<std::size_t>(i)]);
      sgn[i] = signs[static_cast<std::size_t>(i)];
    }
    const Mat gram = phi_s.transpose() * phi_s;
    const Eigen::LDLT<Mat> ldlt(gram);
    const Vec a = ldlt.solve(phi_s.transpose() * q);
    const Vec b = ldlt.solve(sgn);
    const Vec r0 = q - phi_s * a;
    const Vec u = phi_s * b;

    auto current_z = [&](double g) {
      Vec out = Vec::Zero(n);
      for (Eigen::Index i = 0; i < s_size; ++i) out[active[static_cast<std::size_t>(i)]] = a[i] - g * b[i];
      return out;
    };
    z = current_z(gamma);
    if (iter >= max_iter) {
      const Vec r = q - phi * z;
      throw ConvergenceError("bpdn: max_iter reached after " + std::to_string(iter) + " breakpoints", z,
                             euclidean_norm(r) - eps);
    }

    const Vec c0 = phi.transpose() * r0;
    const Vec c1 = phi.transpose() * u;

    // Next breakpoint below gamma. A column dropped at the last breakpoint sits
    // on its add event and is skipped there. A column just added sits on its
    // zero crossing; that crossing is only real if the coefficient heads the
    // wrong way.
    double next = 0.0;
    Eigen::Index event_index = -1;
    double event_sign = 0.0;
    bool event_is_add = false;
    const double near = gamma - std::max(1e-9 * gamma, abs_tol);
    const double ceiling = gamma + std::max(1e-10 * gamma, abs_tol);
    if (s_size < m) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (in_active[static_cast<std::size_t>(j)]) continue;
        const double bound = (j == last_dropped) ? near : ceiling;
        for (const double side : {1.0, -1.0}) {
          const double den = 1.0 - side * c1[j];
          if (!(den > 0.0)) continue;
          const double g = side * c0[j] / den;
          if (g > next && g < bound) {
            next = g;
            event_index = j;
            event_sign = side;
            event_is_add = true;
          }
        }
      }
    }
    for (Eigen::Index i = 0; i < s_size; ++i) {
      if (b[i] == 0.0) continue;
      if (active[static_cast<std::size_t>(i)] == last_added && sgn[i] * b[i] > 0.0) continue;
      const double g = a[i] / b[i];
      if (g > next && g < ceiling) {
        next = g;
        event_index = i;
        event_is_add = false;
      }
    }
    next = std::min(next, gamma);

    const double rr = r0.squaredNorm();
    const double ru = r0.dot(u);
    const double uu = u.squaredNorm();
    auto res2 = [&](double g) { return rr + 2.0 * g * ru + g * g * uu; };

    if (res2(next) <= target * target || event_index < 0) {
      double g = next;
      if (res2(next) <= target * target && uu > 0.0) {
        const double disc = ru * ru - uu * (rr - target * target);
        g = (-ru + std::sqrt(std::max(0.0, disc))) / uu;
        g = std::clamp(g, next, gamma);
      }
      return PathEnd{current_z(g), g, iter};
    }

    gamma = next;
    if (event_is_add) {
      active.push_back(event_index);
      signs.push_back(event_sign);
      in_active[static_cast<std::size_t>(event_index)] = 1;
      last_added = event_index;
      last_dropped = -1;
    } else {
      const Eigen::Index j = active[static_cast<std::size_t>(event_index)];
      active.erase(active.begin() + event_index);
      signs.erase(signs.begin() + event_index);
      in_active[static_cast<std::size_t>(j)] = 0;
      last_dropped = j;
      last_added = -1;
      if (active.empty()) {
        throw ConvergenceError("bpdn: active set emptied", Vec::Zero(n), euclidean_norm(q) - eps);
      }
    }
  }
}

BpdnSolution solve_impl(const Mat& phi, const Vec& q, double eps, const BpdnOptions& options) {
  if (phi.rows() != q.size()) throw ContractError("bpdn: phi rows differ from length of q");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ContractError("bpdn: epsilon must be finite and >= 0");
  if (!phi.allFinite() || !q.allFinite()) throw ContractError("bpdn: non-finite input");
  const Eigen::Index n = phi.cols();

  BpdnSolution out;
  const double q_norm = euclidean_norm(q);
  if (q_norm <= eps) {
    out.z = Vec::Zero(n);
    out.residual_norm = q_norm;
    return out;
  }
  const double feas_limit = eps > 0.0 ? eps * (1.0 + options.tol_feas) : options.tol_feas * q_norm;

  // The closed-form breakpoint can land a hair outside the constraint in
  // floating point; aim slightly inside until the evaluated residual fits.
  Vec best;
  double best_gap = 0.0;
  for (const double shrink : {0.0, 1e-10, 1e-9, 1e-8, 1e-7}) {
    const PathEnd end = follow_path(phi, q, eps * (1.0 - shrink), eps, options.max_iter);
    const Vec r = q - phi * end.z;
    const double r_norm = euclidean_norm(r);
    if (r_norm > feas_limit) {
      best = end.z;
      best_gap = r_norm - eps;
      continue;
    }
    out.z = end.z;
    out.residual_norm = r_norm;
    out.iterations = end.iterations;
    out.objective = end.z.lpNorm<1>();

    // Dual point y with ||phi^T y||_inf <= 1; its value q.y - eps ||y|| bounds OPT from below.
    Vec y;
    if (end.gamma > 0.0) {
      y = r / end.gamma;
    } else {
      // Path end at gamma = 0: the residual direction of the last segment.
      std::vector<Eigen::Index> sup;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (end.z[j] != 0.0) sup.push_back(j);
      }
      Mat phi_s(phi.rows(), static_cast<Eigen::Index>(sup.size()));
      Vec sgn(static_cast<Eigen::Index>(sup.size()));
      for (std::size_t i = 0; i < sup.size(); ++i) {
        phi_s.col(static_cast<Eigen::Index>(i)) = phi.col(sup[i]);
        sgn[static_cast<Eigen::Index>(i)] = end.z[sup[i]] > 0 ? 1.0 : -1.0;
      }
      y = phi_s * (phi_s.transpose() * phi_s).ldlt().solve(sgn);
    }
    const double scale = std::max(1.0, (phi.transpose() * y).lpNorm<Eigen::Infinity>());
    y /= scale;
    out.dual_bound = q.dot(y) - eps * euclidean_norm(y);
    if (out.objective > out.dual_bound + options.tol_obj * (1.0 + std::abs(out.dual_bound))) {
      throw ConvergenceError("bpdn: duality gap above tolerance", out.z, 0.0);
    }
    return out;
  }
  throw ConvergenceError("bpdn: residual could not be brought inside the constraint", best, best_gap);
}

}  // namespace

BpdnSolution bpdn_solve(const BpdnProblem& problem, const BpdnOptions& options) {
  return solve_impl(problem.phi, problem.q, problem.epsilon, options);
}

std::vector<std::int64_t> support_recover(const Vec& coarse, std::int64_t k) {
  if (k < 0 || k > coarse.size()) throw ContractError("support_recover: need 0 <= k <= N");
  std::vector<std::int64_t> idx(static_cast<std::size_t>(coarse.size()));
  std::iota(idx.begin(), idx.end(), std::int64_t{0});
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](std::int64_t a, std::int64_t b) {
    const double fa = std::abs(coarse[a]);
    const double fb = std::abs(coarse[b]);
    return fa != fb ? fa > fb : a < b;
  });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

namespace {

Mat columns(const Mat& phi, const std::vector<std::int64_t>& cols) {
  Mat out(phi.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = phi.col(cols[i]);
  return out;
}

}  // namespace

TwoStageResult two_stage(const FrameMatrix& phi, const SparseSignal& x, const QuantizerConfig& cfg,
                         const BpdnOptions& options) {
  const Mat& p = phi.real();
  const Eigen::Index m = p.rows();
  const std::int64_t k = x.sparsity();
  if (p.cols() != x.ambient_n()) throw ContractError("two_stage: signal length differs from phi columns");
  if (m < k) throw ContractError("two_stage: need m >= k");

  TwoStageResult out;
  const Vec truth = x.dense();
  // Same product and quantizer calls as reconstruct() on (x_T, phi_T).
  const Vec q = k > 0 ? quantized_measurements(columns(p, x.support()), x.values(), cfg) : Vec(Vec::Zero(m));

  const double eps = std::sqrt(static_cast<double>(m)) * cfg.half_step();
  const BpdnSolution coarse = solve_impl(p, q, eps, options);
  out.coarse = coarse.z;
  out.solver_iterations = coarse.iterations;
  out.recovered_support = support_recover(out.coarse, k);
  out.support_exact = out.recovered_support == x.support();

  out.refined = Vec::Zero(x.ambient_n());
  if (k > 0) {
    const FrameMatrix sub(columns(p, out.recovered_support), phi.spec(), phi.seed());
    const Pseudoinverse pinv = pseudoinverse(sub);
    out.sigma_min_support = pinv.sigma_min();
    const Vec on_support = pinv.apply(q);
    for (std::size_t i = 0; i < out.recovered_support.size(); ++i) {
      out.refined[out.recovered_support[i]] = on_support[static_cast<Eigen::Index>(i)];
    }
  }
  out.coarse_error = euclidean_norm(Vec(truth - out.coarse));
  out.refined_error = euclidean_norm(Vec(truth - out.refined));
  return out;
}

std::int64_t rip_sample_size(std::int64_t k, std::int64_t n, double epsilon, double c4_bar) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("rip_sample_size: epsilon must lie in (0, 1)");
  if (k < 1 || n < 1 || k > n) throw std::invalid_argument("rip_sample_size: need 1 <= k <= n");
  if (!(c4_bar > 0.0)) throw std::invalid_argument("rip_sample_size: c4_bar must be positive");
  const double kd = static_cast<double>(k);
  const double v = c4_bar * kd * std::log(0.5 * std::numbers::e * static_cast<double>(n) / kd);
  return static_cast<std::int64_t>(std::ceil(v));
}

}  // namespace msq
