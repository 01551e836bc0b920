#pragma once

#include <deque>
#include <optional>

#include "fsc/env.hpp"
#include "fsc/input_derivatives.hpp"
#include "fsc/replay.hpp"

namespace fsc {

/// Bounded FIFO of hill-climbed states feeding simulated-experience
/// generation.
class SearchControlQueue {
public:
  explicit SearchControlQueue(std::size_t capacity) : capacity_(capacity) {}

  void push(const Eigen::VectorXd& s);
  std::size_t size() const { return states_.size(); }
  bool empty() const { return states_.empty(); }
  std::size_t capacity() const { return capacity_; }
  const Eigen::VectorXd& sample(Rng& rng) const;
  std::vector<Eigen::VectorXd> snapshot() const;

private:
  std::size_t capacity_;
  std::deque<Eigen::VectorXd> states_;
};

/// Single-pass (Welford) mean/covariance over visited states. Falls back to
/// the identity until two samples have been seen.
class CovarianceEstimate {
public:
  explicit CovarianceEstimate(int dim);

  void update(const Eigen::VectorXd& s);
  long count() const { return count_; }
  const Eigen::VectorXd& mean() const { return mean_; }

  /// Unbiased sample covariance; identity fallback below two samples.
  Eigen::MatrixXd covariance() const;

private:
  int dim_;
  long count_ = 0;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd m2_;
};

/// Running mean of |s_{t+1} - s_t|_2 / sqrt(n) over real transitions; the
/// minimum spacing between accepted hill-climb states.
class AcceptThreshold {
public:
  void update(const Eigen::VectorXd& s, const Eigen::VectorXd& s_next);
  double value() const { return count_ == 0 ? 0.0 : sum_ / static_cast<double>(count_); }
  long count() const { return count_; }

private:
  double sum_ = 0.0;
  long count_ = 0;
};

struct HillClimbConfig {
  double alpha = 0.01;   // deterministic step scale
  double eta = 0.01;     // noise scale
  double p = 0.5;        // probability of the frequency rule
  int m = 20;            // states to fetch per environment step
  int attempt_budget_per_state = 50;  // total step budget = budget * m
};

/// Preconditioning data derived from the covariance estimate: the
/// (regularized) covariance and a symmetric PSD factor used to draw
/// N(0, eta * Sigma) noise.
struct Preconditioner {
  Eigen::MatrixXd sigma;         // Sigma_hat + 1e-8 I
  Eigen::MatrixXd noise_factor;  // symmetric PSD square root of sigma

  static Preconditioner from_covariance(const Eigen::MatrixXd& sigma_hat);
};

/// One stochastic ascent step: s + alpha * Sigma d / |Sigma d| + x with
/// x ~ N(0, eta Sigma). The deterministic term vanishes when |Sigma d| is
/// below 1e-12; the noise is applied regardless.
Eigen::VectorXd hc_step(const Eigen::VectorXd& s, const Eigen::VectorXd& direction,
                        const Preconditioner& pre, const HillClimbConfig& cfg, Rng& rng);
Eigen::VectorXd hc_step(const Eigen::VectorXd& s, const Eigen::VectorXd& direction,
                        const Eigen::MatrixXd& sigma_hat, const HillClimbConfig& cfg, Rng& rng);

struct HarvestStats {
  int accepted = 0;
  int steps_used = 0;
  int freq_rule_selections = 0;
  int value_rule_selections = 0;
  int out_of_bounds_restarts = 0;
};

/// Inner search-control loop: pick a climb rule (frequency with probability
/// p, value otherwise), climb from a queue/buffer state, and append every
/// state that has moved more than eps_a * sqrt(n) from the last accepted
/// one. Leaving the state bounds resamples the rule and start state and
/// resets the per-climb accepted count. A global budget of
/// attempt_budget_per_state * m climb steps bounds the call.
HarvestStats harvest(SearchControlQueue& queue, const ReplayBuffer& er, const MlpNet& qnet,
                     const HillClimbConfig& cfg, ClimbCriterion freq_criterion,
                     const CovarianceEstimate& cov, const EnvSpec& bounds, double eps_a,
                     Rng& rng);

}  // namespace fsc
