#include "fsc/mlp.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace fsc {

MlpNet MlpNet::make(const std::vector<int>& sizes, Activation act, Rng& rng) {
  if (sizes.size() < 2) throw std::invalid_argument("MlpNet: need at least input and output layer");
  for (int s : sizes)
    if (s <= 0) throw std::invalid_argument("MlpNet: layer sizes must be positive");

  MlpNet net;
  net.layer_sizes = sizes;
  net.activation = act;
  const int L = static_cast<int>(sizes.size()) - 1;
  net.weights.reserve(L);
  net.biases.reserve(L);
  for (int l = 0; l < L; ++l) {
    const int fan_in = sizes[l], fan_out = sizes[l + 1];
    Eigen::MatrixXd w(fan_out, fan_in);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(fan_out);
    if (l == L - 1) {
      for (int i = 0; i < fan_out; ++i) {
        for (int j = 0; j < fan_in; ++j) w(i, j) = rng.uniform(-0.003, 0.003);
        b(i) = rng.uniform(-0.003, 0.003);
      }
    } else {
      const double bound = std::sqrt(6.0 / (fan_in + fan_out));
      for (int i = 0; i < fan_out; ++i)
        for (int j = 0; j < fan_in; ++j) w(i, j) = rng.uniform(-bound, bound);
    }
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  return net;
}

namespace {

inline void apply_activation(Activation act, Eigen::VectorXd& v) {
  if (act == Activation::Tanh) {
    v = v.array().tanh();
  } else {
    v = v.array().max(0.0);
  }
}

}  // namespace

Eigen::VectorXd forward(const MlpNet& net, const Eigen::VectorXd& x) {
  if (x.size() != net.input_dim())
    throw std::invalid_argument("forward: input dimension mismatch");
  Eigen::VectorXd a = x;
  const int L = net.num_layers();
  for (int l = 0; l < L; ++l) {
    Eigen::VectorXd z = net.weights[l] * a + net.biases[l];
    if (l < L - 1) apply_activation(net.activation, z);
    a = std::move(z);
  }
  return a;
}

ForwardTrace forward_trace(const MlpNet& net, const Eigen::VectorXd& x) {
  if (x.size() != net.input_dim())
    throw std::invalid_argument("forward_trace: input dimension mismatch");
  ForwardTrace t;
  const int L = net.num_layers();
  t.pre.resize(L);
  t.post.resize(L + 1);
  t.post[0] = x;
  for (int l = 0; l < L; ++l) {
    t.pre[l] = net.weights[l] * t.post[l] + net.biases[l];
    t.post[l + 1] = t.pre[l];
    if (l < L - 1) apply_activation(net.activation, t.post[l + 1]);
  }
  return t;
}

ParamGradients ParamGradients::zeros_like(const MlpNet& net) {
  ParamGradients g;
  g.weights.reserve(net.num_layers());
  g.biases.reserve(net.num_layers());
  for (int l = 0; l < net.num_layers(); ++l) {
    g.weights.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    g.biases.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }
  return g;
}

void ParamGradients::scale(double s) {
  for (auto& w : weights) w *= s;
  for (auto& b : biases) b *= s;
}

bool ParamGradients::all_finite() const {
  for (const auto& w : weights)
    if (!w.allFinite()) return false;
  for (const auto& b : biases)
    if (!b.allFinite()) return false;
  return true;
}

void backprop_accumulate(const MlpNet& net, const ForwardTrace& trace,
                         const Eigen::VectorXd& dloss_doutput, ParamGradients& grads) {
  const int L = net.num_layers();
  if (dloss_doutput.size() != net.output_dim())
    throw std::invalid_argument("backprop_accumulate: output gradient dimension mismatch");

  Eigen::VectorXd delta = dloss_doutput;  // dL/dz at the output (linear) layer
  for (int l = L - 1; l >= 0; --l) {
    grads.weights[l].noalias() += delta * trace.post[l].transpose();
    grads.biases[l] += delta;
    if (l == 0) break;
    Eigen::VectorXd da = net.weights[l].transpose() * delta;
    if (net.activation == Activation::Tanh) {
      // d tanh(z) = 1 - tanh(z)^2, with tanh(z) = post.
      delta = da.array() * (1.0 - trace.post[l].array().square());
    } else {
      delta = (trace.pre[l - 1].array() > 0.0).select(da, 0.0);
    }
  }
}

// --- serialization -----------------------------------------------------

namespace {
constexpr std::uint32_t kBinaryMagic = 0x464d4c50;  // "FMLP"
}

void save_binary(const MlpNet& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_binary: cannot open " + path);
  const std::uint32_t magic = kBinaryMagic;
  const std::uint32_t act = static_cast<std::uint32_t>(net.activation);
  const std::uint32_t n = static_cast<std::uint32_t>(net.layer_sizes.size());
  out.write(reinterpret_cast<const char*>(&magic), 4);
  out.write(reinterpret_cast<const char*>(&act), 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  for (int s : net.layer_sizes) {
    const std::int64_t v = s;
    out.write(reinterpret_cast<const char*>(&v), 8);
  }
  for (int l = 0; l < net.num_layers(); ++l) {
    out.write(reinterpret_cast<const char*>(net.weights[l].data()),
              static_cast<std::streamsize>(sizeof(double) * net.weights[l].size()));
    out.write(reinterpret_cast<const char*>(net.biases[l].data()),
              static_cast<std::streamsize>(sizeof(double) * net.biases[l].size()));
  }
  if (!out) throw std::runtime_error("save_binary: write failed for " + path);
}

MlpNet load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_binary: cannot open " + path);
  std::uint32_t magic = 0, act = 0, n = 0;
  in.read(reinterpret_cast<char*>(&magic), 4);
  in.read(reinterpret_cast<char*>(&act), 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  if (!in || magic != kBinaryMagic) throw std::runtime_error("load_binary: bad header in " + path);
  MlpNet net;
  net.activation = static_cast<Activation>(act);
  net.layer_sizes.resize(n);
  for (auto& s : net.layer_sizes) {
    std::int64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    s = static_cast<int>(v);
  }
  for (std::size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
    Eigen::MatrixXd w(net.layer_sizes[l + 1], net.layer_sizes[l]);
    Eigen::VectorXd b(net.layer_sizes[l + 1]);
    in.read(reinterpret_cast<char*>(w.data()), static_cast<std::streamsize>(sizeof(double) * w.size()));
    in.read(reinterpret_cast<char*>(b.data()), static_cast<std::streamsize>(sizeof(double) * b.size()));
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  if (!in) throw std::runtime_error("load_binary: truncated file " + path);
  return net;
}

std::string to_json(const MlpNet& net) {
  nlohmann::json j;
  j["layer_sizes"] = net.layer_sizes;
  j["activation"] = net.activation == Activation::Tanh ? "tanh" : "relu";
  nlohmann::json layers = nlohmann::json::array();
  for (int l = 0; l < net.num_layers(); ++l) {
    nlohmann::json layer;
    std::vector<std::vector<double>> w(net.weights[l].rows());
    for (Eigen::Index i = 0; i < net.weights[l].rows(); ++i) {
      w[i].assign(net.weights[l].row(i).begin(), net.weights[l].row(i).end());
    }
    layer["w"] = w;
    layer["b"] = std::vector<double>(net.biases[l].begin(), net.biases[l].end());
    layers.push_back(std::move(layer));
  }
  j["layers"] = std::move(layers);
  return j.dump();
}

MlpNet from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  MlpNet net;
  net.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  net.activation = j.at("activation").get<std::string>() == "tanh" ? Activation::Tanh : Activation::Relu;
  for (const auto& layer : j.at("layers")) {
    const auto w = layer.at("w").get<std::vector<std::vector<double>>>();
    const auto b = layer.at("b").get<std::vector<double>>();
    Eigen::MatrixXd wm(w.size(), w.empty() ? 0 : w[0].size());
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t k = 0; k < w[i].size(); ++k) wm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = w[i][k];
    Eigen::VectorXd bv = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
    net.weights.push_back(std::move(wm));
    net.biases.push_back(bv);
  }
  return net;
}

}  // namespace fsc
