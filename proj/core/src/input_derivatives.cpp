#include "fsc/input_derivatives.hpp"

#include <cmath>
#include <stdexcept>

namespace fsc {

int argmax_lowest(const Eigen::VectorXd& values) {
  int best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i)
    if (values(i) > values(best)) best = static_cast<int>(i);
  return best;
}

ValueSelector max_value_selector() {
  return [](const Eigen::VectorXd& v) { return argmax_lowest(v); };
}

namespace {

struct ActDerivs {
  double d1, d2, d3;
};

inline ActDerivs activation_derivs(Activation act, double z, double post) {
  if (act == Activation::Tanh) {
    const double t = post;  // tanh(z)
    const double d1 = 1.0 - t * t;
    const double d2 = -2.0 * t * d1;
    const double d3 = -2.0 * d1 * d1 + 4.0 * t * t * d1;
    return {d1, d2, d3};
  }
  const double d1 = z > 0.0 ? 1.0 : 0.0;
  return {d1, 0.0, 0.0};
}

// Layer-chained jets. J rows are per-unit input gradients; H and T hold one
// symmetric matrix (resp. slice set) per unit.
struct LayerJets {
  Eigen::MatrixXd jac;                            // (width x n)
  std::vector<Eigen::MatrixXd> hess;              // width of (n x n)
  std::vector<std::vector<Eigen::MatrixXd>> third;  // width of n slices (n x n)
  bool with_third = false;
};

LayerJets propagate(const MlpNet& net, const Eigen::VectorXd& x, bool with_third) {
  const int n = static_cast<int>(x.size());
  const int L = net.num_layers();

  LayerJets cur;
  cur.with_third = with_third;
  cur.jac = Eigen::MatrixXd::Identity(n, n);
  cur.hess.assign(n, Eigen::MatrixXd::Zero(n, n));
  if (with_third) cur.third.assign(n, std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n)));

  Eigen::VectorXd a = x;
  for (int l = 0; l < L - 1; ++l) {
    const Eigen::MatrixXd& W = net.weights[l];
    const int width = static_cast<int>(W.rows());
    Eigen::VectorXd z = W * a + net.biases[l];

    LayerJets next;
    next.with_third = with_third;
    next.jac.resize(width, n);
    next.hess.assign(width, Eigen::MatrixXd());
    if (with_third) next.third.assign(width, std::vector<Eigen::MatrixXd>());

    Eigen::MatrixXd jz = W * cur.jac;  // pre-activation jacobian
    Eigen::VectorXd post(width);
    for (int j = 0; j < width; ++j) {
      Eigen::MatrixXd hz = Eigen::MatrixXd::Zero(n, n);
      for (int k = 0; k < static_cast<int>(W.cols()); ++k) {
        const double w = W(j, k);
        if (w != 0.0) hz.noalias() += w * cur.hess[k];
      }

      const double zj = z(j);
      post(j) = net.activation == Activation::Tanh ? std::tanh(zj) : std::max(zj, 0.0);
      const ActDerivs d = activation_derivs(net.activation, zj, post(j));
      const Eigen::VectorXd g = jz.row(j).transpose();
      const Eigen::MatrixXd outer = g * g.transpose();

      next.jac.row(j) = d.d1 * g.transpose();
      next.hess[j] = d.d2 * outer + d.d1 * hz;

      if (with_third) {
        std::vector<Eigen::MatrixXd> tz(n, Eigen::MatrixXd::Zero(n, n));
        for (int k = 0; k < static_cast<int>(W.cols()); ++k) {
          const double w = W(j, k);
          if (w == 0.0) continue;
          for (int aix = 0; aix < n; ++aix) tz[aix].noalias() += w * cur.third[k][aix];
        }
        std::vector<Eigen::MatrixXd> t(n);
        for (int aix = 0; aix < n; ++aix) {
          const Eigen::VectorXd ha = hz.row(aix).transpose();
          t[aix] = d.d3 * g(aix) * outer
                 + d.d2 * (ha * g.transpose() + g * ha.transpose() + g(aix) * hz)
                 + d.d1 * tz[aix];
        }
        next.third[j] = std::move(t);
      }
    }
    cur = std::move(next);
    a = std::move(post);
  }
  return cur;
}

void combine_output(const MlpNet& net, const LayerJets& jets, int output_index,
                    Eigen::VectorXd& grad, Eigen::MatrixXd& hess,
                    std::vector<Eigen::MatrixXd>* third) {
  const int n = static_cast<int>(jets.jac.cols());
  const Eigen::MatrixXd& W = net.weights.back();
  grad = (W.row(output_index) * jets.jac).transpose();
  hess = Eigen::MatrixXd::Zero(n, n);
  if (third) third->assign(n, Eigen::MatrixXd::Zero(n, n));
  for (int k = 0; k < static_cast<int>(W.cols()); ++k) {
    const double w = W(output_index, k);
    if (w == 0.0) continue;
    hess.noalias() += w * jets.hess[k];
    if (third)
      for (int aix = 0; aix < n; ++aix) (*third)[aix].noalias() += w * jets.third[k][aix];
  }
  hess = 0.5 * (hess + hess.transpose()).eval();
}

}  // namespace

InputDerivatives input_derivatives(const MlpNet& net, const Eigen::VectorXd& x, int output_index) {
  if (x.size() != net.input_dim())
    throw std::invalid_argument("input_derivatives: input dimension mismatch");
  if (output_index < 0 || output_index >= net.output_dim())
    throw std::invalid_argument("input_derivatives: output index out of range");
  const LayerJets jets = propagate(net, x, /*with_third=*/false);
  InputDerivatives out;
  out.value = forward(net, x)(output_index);
  combine_output(net, jets, output_index, out.gradient, out.hessian, nullptr);
  return out;
}

InputJet3 input_derivatives3(const MlpNet& net, const Eigen::VectorXd& x, int output_index) {
  if (x.size() != net.input_dim())
    throw std::invalid_argument("input_derivatives3: input dimension mismatch");
  if (output_index < 0 || output_index >= net.output_dim())
    throw std::invalid_argument("input_derivatives3: output index out of range");
  const LayerJets jets = propagate(net, x, /*with_third=*/true);
  InputJet3 out;
  out.value = forward(net, x)(output_index);
  combine_output(net, jets, output_index, out.gradient, out.hessian, &out.third);
  return out;
}

double criterion_g(const InputDerivatives& d) {
  return d.gradient.squaredNorm() + d.hessian.squaredNorm();
}

double criterion_g(const MlpNet& net, const Eigen::VectorXd& x, const ValueSelector& selector) {
  const int branch = selector(forward(net, x));
  return criterion_g(input_derivatives(net, x, branch));
}

Eigen::VectorXd grad_criterion(const InputJet3& jet, ClimbCriterion crit) {
  const int n = static_cast<int>(jet.gradient.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  if (crit != ClimbCriterion::HessNormOnly) out += 2.0 * (jet.hessian * jet.gradient);
  if (crit != ClimbCriterion::GradNormOnly) {
    for (int a = 0; a < n; ++a) out(a) += 2.0 * jet.hessian.cwiseProduct(jet.third[a]).sum();
  }
  return out;
}

Eigen::VectorXd grad_criterion(const MlpNet& net, const Eigen::VectorXd& x,
                               const ValueSelector& selector, ClimbCriterion crit) {
  const int branch = selector(forward(net, x));
  return grad_criterion(input_derivatives3(net, x, branch), crit);
}

Eigen::VectorXd grad_value(const MlpNet& net, const Eigen::VectorXd& x, const ValueSelector& selector) {
  const int branch = selector(forward(net, x));
  return input_derivatives(net, x, branch).gradient;
}

}  // namespace fsc
