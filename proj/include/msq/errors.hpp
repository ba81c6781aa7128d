#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace msq {

/// Invalid experiment or ensemble configuration. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke an operation's contract (wrong ensemble kind, bad shape).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class RankDeficiencyError : public std::runtime_error {
 public:
  RankDeficiencyError(const std::string& what, double sigma_min, double sigma_max)
      : std::runtime_error(what), sigma_min_(sigma_min), sigma_max_(sigma_max) {}

  double sigma_min() const noexcept { return sigma_min_; }
  double sigma_max() const noexcept { return sigma_max_; }

 private:
  double sigma_min_;
  double sigma_max_;
};

/// An iterative method stopped without meeting its tolerances.
/// Carries the best iterate seen and how far it is from feasibility.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd best_iterate, double feasibility_gap)
      : std::runtime_error(what), best_(std::move(best_iterate)), gap_(feasibility_gap) {}

  const Eigen::VectorXd& best_iterate() const noexcept { return best_; }
  double feasibility_gap() const noexcept { return gap_; }

 private:
  Eigen::VectorXd best_;
  double gap_;
};

}  // namespace msq
