#include "fsc/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace fsc {

AdamState AdamState::make(const MlpNet& net, const AdamConfig& cfg) {
  AdamState s;
  s.cfg = cfg;
  for (int l = 0; l < net.num_layers(); ++l) {
    s.m_w.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    s.v_w.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    s.m_b.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
    s.v_b.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }
  return s;
}

bool adam_step(MlpNet& net, AdamState& state, const ParamGradients& grads) {
  if (grads.weights.size() != static_cast<std::size_t>(net.num_layers()))
    throw std::invalid_argument("adam_step: gradient/parameter layer count mismatch");
  for (int l = 0; l < net.num_layers(); ++l) {
    if (grads.weights[l].rows() != net.weights[l].rows() ||
        grads.weights[l].cols() != net.weights[l].cols() ||
        grads.biases[l].size() != net.biases[l].size())
      throw std::invalid_argument("adam_step: gradient shape mismatch");
  }
  if (!grads.all_finite()) return false;

  state.step += 1;
  const auto& c = state.cfg;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
  for (int l = 0; l < net.num_layers(); ++l) {
    state.m_w[l] = c.beta1 * state.m_w[l] + (1.0 - c.beta1) * grads.weights[l];
    state.v_w[l] = c.beta2 * state.v_w[l].array() + (1.0 - c.beta2) * grads.weights[l].array().square();
    state.m_b[l] = c.beta1 * state.m_b[l] + (1.0 - c.beta1) * grads.biases[l];
    state.v_b[l] = c.beta2 * state.v_b[l].array() + (1.0 - c.beta2) * grads.biases[l].array().square();

    net.weights[l].array() -=
        c.lr * (state.m_w[l].array() / bc1) / ((state.v_w[l].array() / bc2).sqrt() + c.eps);
    net.biases[l].array() -=
        c.lr * (state.m_b[l].array() / bc1) / ((state.v_b[l].array() / bc2).sqrt() + c.eps);
  }
  return true;
}

}  // namespace fsc
