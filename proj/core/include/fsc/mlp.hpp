#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "fsc/rng.hpp"

namespace fsc {

enum class Activation { Tanh, Relu };

/// Fully connected feed-forward network: configurable hidden activation,
/// identity output layer. Evaluation is a pure function of (parameters,
/// input); all mutation goes through the optimizer.
struct MlpNet {
  std::vector<int> layer_sizes;            // input, hidden..., output
  std::vector<Eigen::MatrixXd> weights;    // weights[l]: (sizes[l+1] x sizes[l])
  std::vector<Eigen::VectorXd> biases;     // biases[l]: sizes[l+1]
  Activation activation = Activation::Tanh;

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  int num_layers() const { return static_cast<int>(weights.size()); }

  /// Hidden layers get fan-based (Glorot uniform) weights with zero bias;
  /// the output layer's weights and bias are uniform in [-0.003, 0.003].
  static MlpNet make(const std::vector<int>& sizes, Activation act, Rng& rng);
};

/// Per-layer activations retained from one forward pass (used by backprop).
struct ForwardTrace {
  std::vector<Eigen::VectorXd> pre;   // z_l, pre-activation, per layer
  std::vector<Eigen::VectorXd> post;  // a_l, post-activation; post.back() is the output
};

Eigen::VectorXd forward(const MlpNet& net, const Eigen::VectorXd& x);
ForwardTrace forward_trace(const MlpNet& net, const Eigen::VectorXd& x);

/// Gradients of a scalar loss with respect to every parameter.
struct ParamGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  static ParamGradients zeros_like(const MlpNet& net);
  void scale(double s);
  bool all_finite() const;
};

/// Accumulates dL/dparams for one sample given dL/doutput.
void backprop_accumulate(const MlpNet& net, const ForwardTrace& trace,
                         const Eigen::VectorXd& dloss_doutput, ParamGradients& grads);

/// Parameter snapshot round-trips. The binary form is bit-exact; the JSON
/// form preserves values to full double precision via shortest round-trip
/// formatting.
void save_binary(const MlpNet& net, const std::string& path);
MlpNet load_binary(const std::string& path);
std::string to_json(const MlpNet& net);
MlpNet from_json(const std::string& text);

}  // namespace fsc
