#include "fsc/model.hpp"

namespace fsc {

Transition TrueModel::query(const Eigen::VectorXd& s, int a, Rng& rng) const {
  Transition t = env_.step(s, a, rng);
  t.r = -1.0;  // deterministic mean reward for simulated experience
  return t;
}

DynamicsModel::DynamicsModel(const Environment& env, Rng& init_rng)
    : env_(env),
      net_(MlpNet::make({env.spec().state_dim + env.spec().action_count, 64, 64, env.spec().state_dim},
                        Activation::Relu, init_rng)),
      opt_(AdamState::make(net_, AdamConfig{.lr = 1e-4})) {}

Eigen::VectorXd DynamicsModel::encode(const Eigen::VectorXd& s, int a) const {
  Eigen::VectorXd in = Eigen::VectorXd::Zero(net_.input_dim());
  in.head(s.size()) = s;
  in(s.size() + a) = 1.0;
  return in;
}

double DynamicsModel::train_step(std::span<const Transition> batch) {
  if (batch.empty()) return 0.0;
  ParamGradients grads = ParamGradients::zeros_like(net_);
  const double denom = static_cast<double>(batch.size()) * env_.spec().state_dim;
  double loss = 0.0;
  for (const Transition& t : batch) {
    const ForwardTrace trace = forward_trace(net_, encode(t.s, t.a));
    const Eigen::VectorXd err = trace.post.back() - (t.s_next - t.s);
    loss += err.squaredNorm();
    backprop_accumulate(net_, trace, (2.0 / denom) * err, grads);
  }
  adam_step(net_, opt_, grads);
  return loss / denom;
}

Eigen::VectorXd DynamicsModel::predict_delta(const Eigen::VectorXd& s, int a) const {
  return forward(net_, encode(s, a));
}

Transition DynamicsModel::query(const Eigen::VectorXd& s, int a, Rng&) const {
  Transition t;
  t.s = s;
  t.a = a;
  t.s_next = env_.spec().clip(s + predict_delta(s, a));
  t.r = -1.0;
  t.terminal = env_.is_goal(t.s_next);
  return t;
}

}  // namespace fsc
