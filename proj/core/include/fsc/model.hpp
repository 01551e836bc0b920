#pragma once

#include <span>

#include "fsc/adam.hpp"
#include "fsc/env.hpp"
#include "fsc/mlp.hpp"

namespace fsc {

/// Planning model: maps (state, action) to a simulated (next state, reward,
/// terminal). Simulated rewards are the deterministic mean (-1) so planning
/// does not double-inject reward noise.
class PlanningModel {
public:
  virtual ~PlanningModel() = default;
  virtual Transition query(const Eigen::VectorXd& s, int a, Rng& rng) const = 0;
};

/// Queries the environment dynamics directly (one sample per query).
class TrueModel : public PlanningModel {
public:
  explicit TrueModel(const Environment& env) : env_(env) {}
  Transition query(const Eigen::VectorXd& s, int a, Rng& rng) const override;

private:
  const Environment& env_;
};

/// Online-learned one-step dynamics: a relu network predicting s' - s from
/// (s, one-hot action). Rewards and terminals come from the known reward
/// structure and goal predicate.
class DynamicsModel : public PlanningModel {
public:
  DynamicsModel(const Environment& env, Rng& init_rng);

  /// One Adam step on the mean squared error of predicted vs actual deltas.
  /// Returns the batch loss; an empty batch is a no-op returning 0.
  double train_step(std::span<const Transition> batch);

  Eigen::VectorXd predict_delta(const Eigen::VectorXd& s, int a) const;
  Transition query(const Eigen::VectorXd& s, int a, Rng& rng) const override;

  long train_steps() const { return opt_.step; }
  const MlpNet& net() const { return net_; }

private:
  Eigen::VectorXd encode(const Eigen::VectorXd& s, int a) const;

  const Environment& env_;
  MlpNet net_;
  AdamState opt_;
};

}  // namespace fsc
