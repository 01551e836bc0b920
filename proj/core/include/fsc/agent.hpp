#pragma once

#include <optional>
#include <span>

#include "fsc/adam.hpp"
#include "fsc/model.hpp"
#include "fsc/replay.hpp"
#include "fsc/search_control.hpp"

namespace fsc {

enum class Variant { ER, PrioritizedER, DynaValue, DynaFrequency, DynaGradNorm, DynaHessNorm };
enum class ModelKind { True, Learned };

Variant variant_from_string(const std::string& name);
std::string to_string(Variant v);

struct AgentConfig {
  int batch_size = 32;
  double beta = 0.5;        // fraction of simulated transitions per mini-batch
  int plan_steps = 10;      // d; baselines run the same number of updates
  int target_sync = 1000;   // tau, counted in parameter updates
  double epsilon = 0.1;     // exploration, no decay
  int warmup_steps = 5000;  // uniform random actions, no parameter updates
  double gamma = 0.99;
  std::vector<int> hidden = {32, 32};
  double lr = 0.001;
  std::size_t buffer_capacity = 100000;
  HillClimbConfig hc;
  int model_batch = 128;
  int eval_every = 1000;
  int eval_episodes = 5;
  std::vector<long> snapshot_steps;
};

/// eps-greedy action with lowest-index tie-break on the greedy branch.
int epsilon_greedy(const MlpNet& qnet, const Eigen::VectorXd& s, double epsilon,
                   int action_count, Rng& rng);

struct QUpdateResult {
  double loss = 0.0;
  bool applied = false;           // false when the loss or gradient was not finite
  std::vector<double> abs_td;     // per-transition |TD error|
};

/// One Adam step on the mean squared TD error with targets
/// r + gamma * (1 - terminal) * max_a Q'(s', a). The target network is not
/// touched.
QUpdateResult dqn_td_update(MlpNet& qnet, const MlpNet& target_net, AdamState& opt,
                            std::span<const Transition> batch, double gamma);

/// Mean return of greedy (epsilon = 0) episodes.
double greedy_evaluation(const MlpNet& qnet, const Environment& env, int episodes, Rng& rng);

/// Mean return of uniform-random episodes; the floor every agent must beat.
double random_policy_return(const Environment& env, int episodes, Rng& rng);

struct MetricRow {
  long env_step = 0;
  std::optional<double> episode_return;
  std::optional<double> eval_return;
  double loss = 0.0;
  std::size_t queue_size = 0;
  double model_mse = 0.0;
};

struct RunResult {
  std::vector<MetricRow> rows;
  std::vector<std::pair<long, std::vector<Eigen::VectorXd>>> queue_snapshots;
  double final_eval_return = 0.0;
  long env_steps = 0;
  long parameter_updates = 0;
};

/// Dyna loop with pluggable search-control plus the ER / prioritized-ER
/// baselines under a matched update budget: every variant performs exactly
/// plan_steps parameter updates per post-warmup environment step.
class DqnAgent {
public:
  DqnAgent(Variant variant, const Environment& env, ModelKind model_kind,
           const AgentConfig& cfg, std::uint64_t seed);

  RunResult run(long total_steps);

  // Pieces of the loop, exposed for direct exercise in tests.
  HarvestStats harvest_once(Rng& rng);
  double plan_once(Rng& rng);  // one planning pass (plan_steps updates)
  const MlpNet& qnet() const { return qnet_; }
  const SearchControlQueue& queue() const { return queue_; }
  double accept_threshold() const { return eps_a_.value(); }
  long updates_done() const { return n_updates_; }
  long target_syncs() const { return n_target_syncs_; }

private:
  void observe(const Transition& t);
  std::vector<Transition> mixed_batch(Rng& rng);
  double baseline_update(Rng& rng);

  Variant variant_;
  const Environment& env_;
  ModelKind model_kind_;
  AgentConfig cfg_;
  RngFamily rngs_;

  MlpNet qnet_;
  MlpNet target_;
  AdamState opt_;
  ReplayBuffer er_;
  PrioritizedReplay per_;
  SearchControlQueue queue_;
  CovarianceEstimate cov_;
  AcceptThreshold eps_a_;
  std::unique_ptr<Environment> eval_env_;
  std::unique_ptr<DynamicsModel> learned_model_;
  std::unique_ptr<PlanningModel> model_;

  long n_updates_ = 0;
  long n_target_syncs_ = 0;
  double last_loss_ = 0.0;
  double last_model_mse_ = 0.0;
};

RunResult run_agent(Variant variant, const Environment& env, ModelKind model_kind,
                    const AgentConfig& cfg, std::uint64_t seed, long total_steps);

}  // namespace fsc
