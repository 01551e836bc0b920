#include "fsc/search_control.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace fsc {

void SearchControlQueue::push(const Eigen::VectorXd& s) {
  if (states_.size() == capacity_) states_.pop_front();
  states_.push_back(s);
}

const Eigen::VectorXd& SearchControlQueue::sample(Rng& rng) const {
  if (states_.empty()) throw std::logic_error("SearchControlQueue: sample from empty queue");
  return states_[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(states_.size())))];
}

std::vector<Eigen::VectorXd> SearchControlQueue::snapshot() const {
  return {states_.begin(), states_.end()};
}

CovarianceEstimate::CovarianceEstimate(int dim)
    : dim_(dim), mean_(Eigen::VectorXd::Zero(dim)), m2_(Eigen::MatrixXd::Zero(dim, dim)) {}

void CovarianceEstimate::update(const Eigen::VectorXd& s) {
  if (s.size() != dim_) throw std::invalid_argument("CovarianceEstimate: dimension mismatch");
  count_ += 1;
  const Eigen::VectorXd delta = s - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_.noalias() += delta * (s - mean_).transpose();
}

Eigen::MatrixXd CovarianceEstimate::covariance() const {
  if (count_ < 2) return Eigen::MatrixXd::Identity(dim_, dim_);
  Eigen::MatrixXd cov = m2_ / static_cast<double>(count_ - 1);
  return 0.5 * (cov + cov.transpose());
}

void AcceptThreshold::update(const Eigen::VectorXd& s, const Eigen::VectorXd& s_next) {
  sum_ += (s_next - s).norm() / std::sqrt(static_cast<double>(s.size()));
  count_ += 1;
}

Preconditioner Preconditioner::from_covariance(const Eigen::MatrixXd& sigma_hat) {
  Preconditioner p;
  const Eigen::Index n = sigma_hat.rows();
  p.sigma = sigma_hat + 1e-8 * Eigen::MatrixXd::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.sigma);
  // Sigma may be singular early in training; clamp tiny negative rounding.
  const Eigen::VectorXd sqrt_eig = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  p.noise_factor = es.eigenvectors() * sqrt_eig.asDiagonal() * es.eigenvectors().transpose();
  return p;
}

Eigen::VectorXd hc_step(const Eigen::VectorXd& s, const Eigen::VectorXd& direction,
                        const Preconditioner& pre, const HillClimbConfig& cfg, Rng& rng) {
  Eigen::VectorXd out = s;
  const Eigen::VectorXd pd = pre.sigma * direction;
  const double norm = pd.norm();
  if (norm >= 1e-12) out += (cfg.alpha / norm) * pd;
  if (cfg.eta > 0.0) {
    Eigen::VectorXd z(s.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
    out += std::sqrt(cfg.eta) * (pre.noise_factor * z);
  }
  return out;
}

Eigen::VectorXd hc_step(const Eigen::VectorXd& s, const Eigen::VectorXd& direction,
                        const Eigen::MatrixXd& sigma_hat, const HillClimbConfig& cfg, Rng& rng) {
  return hc_step(s, direction, Preconditioner::from_covariance(sigma_hat), cfg, rng);
}

namespace {

struct Climb {
  bool freq_rule = false;
  Eigen::VectorXd s;       // current position
  Eigen::VectorXd anchor;  // last accepted state (s~ in the update rule)
  int accepted_in_climb = 0;
};

Climb start_climb(const SearchControlQueue& queue, const ReplayBuffer& er,
                  const HillClimbConfig& cfg, HarvestStats& stats, Rng& rng) {
  Climb c;
  c.freq_rule = rng.uniform() < cfg.p;
  if (c.freq_rule) {
    stats.freq_rule_selections += 1;
    // Frequency climbs start from the queue itself; before it is populated
    // the only source of states is the ER buffer.
    c.s = queue.empty() ? er.sample(rng).s : queue.sample(rng);
  } else {
    stats.value_rule_selections += 1;
    c.s = er.sample(rng).s;
  }
  c.anchor = c.s;
  return c;
}

}  // namespace

HarvestStats harvest(SearchControlQueue& queue, const ReplayBuffer& er, const MlpNet& qnet,
                     const HillClimbConfig& cfg, ClimbCriterion freq_criterion,
                     const CovarianceEstimate& cov, const EnvSpec& bounds, double eps_a,
                     Rng& rng) {
  if (er.empty()) throw std::logic_error("harvest: ER buffer is empty");
  HarvestStats stats;
  const Preconditioner pre = Preconditioner::from_covariance(cov.covariance());
  const double sqrt_n = std::sqrt(static_cast<double>(bounds.state_dim));
  const int budget = cfg.attempt_budget_per_state * cfg.m;
  const ValueSelector selector = max_value_selector();

  Climb climb = start_climb(queue, er, cfg, stats, rng);
  while (climb.accepted_in_climb < cfg.m && stats.steps_used < budget) {
    const Eigen::VectorXd direction =
        climb.freq_rule ? grad_criterion(qnet, climb.s, selector, freq_criterion)
                        : grad_value(qnet, climb.s, selector);
    climb.s = hc_step(climb.s, direction, pre, cfg, rng);
    stats.steps_used += 1;

    if (!bounds.in_bounds(climb.s)) {
      stats.out_of_bounds_restarts += 1;
      climb = start_climb(queue, er, cfg, stats, rng);
      continue;
    }
    if ((climb.s - climb.anchor).norm() / sqrt_n > eps_a) {
      queue.push(climb.s);
      climb.anchor = climb.s;
      climb.accepted_in_climb += 1;
      stats.accepted += 1;
    }
  }
  return stats;
}

}  // namespace fsc
