#pragma once

#include <functional>

#include "fsc/mlp.hpp"

namespace fsc {

/// Value, gradient and Hessian of one scalar network output with respect to
/// the network *input*.
struct InputDerivatives {
  double value = 0.0;
  Eigen::VectorXd gradient;  // n
  Eigen::MatrixXd hessian;   // n x n, symmetric
};

/// InputDerivatives extended with the symmetric third-derivative tensor,
/// stored as n slices: third[a](b, c) = d^3 f / dx_a dx_b dx_c.
struct InputJet3 {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  std::vector<Eigen::MatrixXd> third;
};

/// Reduces a network output vector to the scalar branch the derivatives are
/// taken on. For Q-networks this is the greedy action.
using ValueSelector = std::function<int(const Eigen::VectorXd&)>;

/// Lowest index wins ties; keeps branch choice deterministic.
int argmax_lowest(const Eigen::VectorXd& values);

ValueSelector max_value_selector();

/// Closed-form chained derivatives of the selected output w.r.t. the input.
InputDerivatives input_derivatives(const MlpNet& net, const Eigen::VectorXd& x, int output_index);
InputJet3 input_derivatives3(const MlpNet& net, const Eigen::VectorXd& x, int output_index);

/// Which scalar field the hill climb ascends.
enum class ClimbCriterion {
  FrequencyG,    // |grad V|^2 + |H_V|^2_F
  GradNormOnly,  // |grad V|^2
  HessNormOnly,  // |H_V|^2_F
};

/// g = |grad|^2 + |H|^2_F (squared norms for numerical stability).
double criterion_g(const InputDerivatives& d);
double criterion_g(const MlpNet& net, const Eigen::VectorXd& x,
                   const ValueSelector& selector = max_value_selector());

/// Ascent direction of the chosen criterion, from analytic derivatives up to
/// third order. Returns the zero vector where the field is flat.
Eigen::VectorXd grad_criterion(const InputJet3& jet, ClimbCriterion crit = ClimbCriterion::FrequencyG);
Eigen::VectorXd grad_criterion(const MlpNet& net, const Eigen::VectorXd& x,
                               const ValueSelector& selector = max_value_selector(),
                               ClimbCriterion crit = ClimbCriterion::FrequencyG);

/// grad_x V(x) on the selector's branch.
Eigen::VectorXd grad_value(const MlpNet& net, const Eigen::VectorXd& x,
                           const ValueSelector& selector = max_value_selector());

}  // namespace fsc
