#include "fsc/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsc {

Variant variant_from_string(const std::string& name) {
  if (name == "er") return Variant::ER;
  if (name == "prioritized_er") return Variant::PrioritizedER;
  if (name == "dyna_value") return Variant::DynaValue;
  if (name == "dyna_frequency") return Variant::DynaFrequency;
  if (name == "dyna_gradnorm") return Variant::DynaGradNorm;
  if (name == "dyna_hessnorm") return Variant::DynaHessNorm;
  throw std::invalid_argument("unknown agent variant: " + name);
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::ER: return "er";
    case Variant::PrioritizedER: return "prioritized_er";
    case Variant::DynaValue: return "dyna_value";
    case Variant::DynaFrequency: return "dyna_frequency";
    case Variant::DynaGradNorm: return "dyna_gradnorm";
    case Variant::DynaHessNorm: return "dyna_hessnorm";
  }
  throw std::logic_error("unreachable");
}

int epsilon_greedy(const MlpNet& qnet, const Eigen::VectorXd& s, double epsilon,
                   int action_count, Rng& rng) {
  if (rng.uniform() < epsilon) return rng.uniform_int(action_count);
  return argmax_lowest(forward(qnet, s));
}

QUpdateResult dqn_td_update(MlpNet& qnet, const MlpNet& target_net, AdamState& opt,
                            std::span<const Transition> batch, double gamma) {
  if (batch.empty()) throw std::invalid_argument("dqn_td_update: empty batch");
  QUpdateResult res;
  res.abs_td.reserve(batch.size());
  ParamGradients grads = ParamGradients::zeros_like(qnet);
  const double scale = 2.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  for (const Transition& t : batch) {
    double target = t.r;
    if (!t.terminal) target += gamma * forward(target_net, t.s_next).maxCoeff();
    const ForwardTrace trace = forward_trace(qnet, t.s);
    const double td = trace.post.back()(t.a) - target;
    res.abs_td.push_back(std::abs(td));
    loss += td * td;
    Eigen::VectorXd dout = Eigen::VectorXd::Zero(qnet.output_dim());
    dout(t.a) = scale * td;
    backprop_accumulate(qnet, trace, dout, grads);
  }
  res.loss = loss / static_cast<double>(batch.size());
  if (!std::isfinite(res.loss)) return res;  // skipped, flagged via applied=false
  res.applied = adam_step(qnet, opt, grads);
  return res;
}

double greedy_evaluation(const MlpNet& qnet, const Environment& env, int episodes, Rng& rng) {
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    Eigen::VectorXd s = env.reset(rng);
    double ret = 0.0;
    for (int step = 0; step < env.spec().step_cap; ++step) {
      const int a = argmax_lowest(forward(qnet, s));
      const Transition t = env.step(s, a, rng);
      ret += t.r;
      if (t.terminal) break;
      s = t.s_next;
    }
    total += ret;
  }
  return total / episodes;
}

double random_policy_return(const Environment& env, int episodes, Rng& rng) {
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    Eigen::VectorXd s = env.reset(rng);
    double ret = 0.0;
    for (int step = 0; step < env.spec().step_cap; ++step) {
      const Transition t = env.step(s, rng.uniform_int(env.spec().action_count), rng);
      ret += t.r;
      if (t.terminal) break;
      s = t.s_next;
    }
    total += ret;
  }
  return total / episodes;
}

namespace {

bool is_dyna(Variant v) {
  return v == Variant::DynaValue || v == Variant::DynaFrequency ||
         v == Variant::DynaGradNorm || v == Variant::DynaHessNorm;
}

ClimbCriterion climb_criterion(Variant v) {
  switch (v) {
    case Variant::DynaGradNorm: return ClimbCriterion::GradNormOnly;
    case Variant::DynaHessNorm: return ClimbCriterion::HessNormOnly;
    default: return ClimbCriterion::FrequencyG;
  }
}

}  // namespace

DqnAgent::DqnAgent(Variant variant, const Environment& env, ModelKind model_kind,
                   const AgentConfig& cfg, std::uint64_t seed)
    : variant_(variant),
      env_(env),
      model_kind_(model_kind),
      cfg_(cfg),
      rngs_(seed),
      qnet_([&] {
        Rng init = rngs_.stream(Stream::Init);
        std::vector<int> sizes;
        sizes.push_back(env.spec().state_dim);
        sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
        sizes.push_back(env.spec().action_count);
        return MlpNet::make(sizes, Activation::Tanh, init);
      }()),
      target_(qnet_),
      opt_(AdamState::make(qnet_, AdamConfig{.lr = cfg.lr})),
      er_(cfg.buffer_capacity),
      per_(cfg.buffer_capacity),
      queue_(cfg.buffer_capacity),
      cov_(env.spec().state_dim),
      eval_env_(make_environment(env.spec().name, 0.0)) {
  // Dyna-Value climbs on V only and starts every climb from the ER buffer.
  if (variant_ == Variant::DynaValue) cfg_.hc.p = 0.0;
  if (model_kind_ == ModelKind::Learned) {
    Rng minit = rngs_.stream(Stream::Model);
    learned_model_ = std::make_unique<DynamicsModel>(env_, minit);
    model_ = nullptr;
  } else {
    model_ = std::make_unique<TrueModel>(env_);
  }
}

void DqnAgent::observe(const Transition& t) {
  if (variant_ == Variant::PrioritizedER) {
    per_.push(t);
  } else {
    er_.push(t);
  }
  cov_.update(t.s_next);
  eps_a_.update(t.s, t.s_next);
}

HarvestStats DqnAgent::harvest_once(Rng& rng) {
  return harvest(queue_, er_, qnet_, cfg_.hc, climb_criterion(variant_), cov_, env_.spec(),
                 eps_a_.value(), rng);
}

std::vector<Transition> DqnAgent::mixed_batch(Rng& rng) {
  std::vector<Transition> batch;
  batch.reserve(cfg_.batch_size);
  const int simulated = queue_.empty() ? 0 : static_cast<int>(cfg_.beta * cfg_.batch_size);
  const PlanningModel* model =
      model_kind_ == ModelKind::Learned ? static_cast<PlanningModel*>(learned_model_.get())
                                        : model_.get();
  for (int i = 0; i < simulated; ++i) {
    const Eigen::VectorXd& s = queue_.sample(rng);
    const int a = argmax_lowest(forward(qnet_, s));  // on-policy action of the current Q
    batch.push_back(model->query(s, a, rng));
  }
  for (int i = simulated; i < cfg_.batch_size; ++i) batch.push_back(er_.sample(rng));
  return batch;
}

double DqnAgent::plan_once(Rng& rng) {
  double loss = 0.0;
  for (int u = 0; u < cfg_.plan_steps; ++u) {
    const std::vector<Transition> batch = mixed_batch(rng);
    const QUpdateResult res = dqn_td_update(qnet_, target_, opt_, batch, cfg_.gamma);
    loss = res.loss;
    n_updates_ += 1;
    if (n_updates_ % cfg_.target_sync == 0) {
      target_ = qnet_;
      n_target_syncs_ += 1;
    }
  }
  return loss;
}

double DqnAgent::baseline_update(Rng& rng) {
  double loss = 0.0;
  for (int u = 0; u < cfg_.plan_steps; ++u) {
    std::vector<Transition> batch;
    batch.reserve(cfg_.batch_size);
    QUpdateResult res;
    if (variant_ == Variant::PrioritizedER) {
      const std::vector<std::size_t> idx =
          per_.sample_indices(static_cast<std::size_t>(cfg_.batch_size), rng);
      for (std::size_t i : idx) batch.push_back(per_.at(i));
      res = dqn_td_update(qnet_, target_, opt_, batch, cfg_.gamma);
      for (std::size_t i = 0; i < idx.size(); ++i) per_.update_priority(idx[i], res.abs_td[i]);
    } else {
      for (int i = 0; i < cfg_.batch_size; ++i) batch.push_back(er_.sample(rng));
      res = dqn_td_update(qnet_, target_, opt_, batch, cfg_.gamma);
    }
    loss = res.loss;
    n_updates_ += 1;
    if (n_updates_ % cfg_.target_sync == 0) {
      target_ = qnet_;
      n_target_syncs_ += 1;
    }
  }
  return loss;
}

RunResult DqnAgent::run(long total_steps) {
  RunResult out;
  Rng env_rng = rngs_.stream(Stream::EnvNoise);
  Rng explore_rng = rngs_.stream(Stream::Exploration);
  Rng hc_rng = rngs_.stream(Stream::HillClimb);
  Rng sample_rng = rngs_.stream(Stream::Sampling);
  Rng model_rng = rngs_.stream(Stream::Model);

  Eigen::VectorXd s = env_.reset(env_rng);
  cov_.update(s);
  double episode_return = 0.0;
  int episode_steps = 0;

  auto next_snapshot = cfg_.snapshot_steps.begin();

  for (long t = 1; t <= total_steps; ++t) {
    const int a = t <= cfg_.warmup_steps
                      ? explore_rng.uniform_int(env_.spec().action_count)
                      : epsilon_greedy(qnet_, s, cfg_.epsilon, env_.spec().action_count, explore_rng);
    const Transition tr = env_.step(s, a, env_rng);
    observe(tr);

    if (learned_model_) {
      const std::size_t stored = variant_ == Variant::PrioritizedER ? per_.size() : er_.size();
      if (stored > 0) {
        std::vector<Transition> batch;
        batch.reserve(cfg_.model_batch);
        for (int i = 0; i < cfg_.model_batch; ++i) {
          const std::size_t j = static_cast<std::size_t>(model_rng.uniform_int(static_cast<int>(stored)));
          batch.push_back(variant_ == Variant::PrioritizedER ? per_.at(j) : er_.at(j));
        }
        last_model_mse_ = learned_model_->train_step(batch);
      }
    }

    if (t > cfg_.warmup_steps) {
      if (is_dyna(variant_)) {
        harvest_once(hc_rng);
        last_loss_ = plan_once(sample_rng);
      } else {
        last_loss_ = baseline_update(sample_rng);
      }
    }

    episode_return += tr.r;
    episode_steps += 1;

    const bool episode_over = tr.terminal || episode_steps >= env_.spec().step_cap;
    if (episode_over) {
      MetricRow row;
      row.env_step = t;
      row.episode_return = episode_return;
      row.loss = last_loss_;
      row.queue_size = queue_.size();
      row.model_mse = last_model_mse_;
      out.rows.push_back(row);
      s = env_.reset(env_rng);
      cov_.update(s);
      episode_return = 0.0;
      episode_steps = 0;
    } else {
      s = tr.s_next;
    }

    if (cfg_.eval_every > 0 && t % cfg_.eval_every == 0) {
      Rng eval_rng(derive_seed(rngs_.run_seed() * 1000003ULL + static_cast<std::uint64_t>(t),
                               Stream::Eval));
      const double eval_ret = greedy_evaluation(qnet_, *eval_env_, cfg_.eval_episodes, eval_rng);
      MetricRow row;
      row.env_step = t;
      row.eval_return = eval_ret;
      row.loss = last_loss_;
      row.queue_size = queue_.size();
      row.model_mse = last_model_mse_;
      out.rows.push_back(row);
      out.final_eval_return = eval_ret;
    }

    if (next_snapshot != cfg_.snapshot_steps.end() && t == *next_snapshot) {
      out.queue_snapshots.emplace_back(t, queue_.snapshot());
      ++next_snapshot;
    }
  }
  out.env_steps = total_steps;
  out.parameter_updates = n_updates_;
  return out;
}

RunResult run_agent(Variant variant, const Environment& env, ModelKind model_kind,
                    const AgentConfig& cfg, std::uint64_t seed, long total_steps) {
  DqnAgent agent(variant, env, model_kind, cfg, seed);
  return agent.run(total_steps);
}

}  // namespace fsc
