#pragma once

#include "fsc/mlp.hpp"

namespace fsc {

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Moment accumulators shaped like the network parameters.
struct AdamState {
  AdamConfig cfg;
  std::vector<Eigen::MatrixXd> m_w, v_w;
  std::vector<Eigen::VectorXd> m_b, v_b;
  long step = 0;

  static AdamState make(const MlpNet& net, const AdamConfig& cfg);
};

/// One Adam update with bias correction. Returns false (and leaves both the
/// network and the state untouched) when the gradient contains NaN/Inf.
bool adam_step(MlpNet& net, AdamState& state, const ParamGradients& grads);

}  // namespace fsc
