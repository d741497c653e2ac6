#pragma once

#include "hamnet/rng.hpp"
#include "hamnet/types.hpp"

#include <cmath>
#include <string>

namespace hamnet::neuralnet {

inline constexpr int kInputs = 3;
inline constexpr int kHidden = 32;
inline constexpr int kActions = 2;

// Default constants of the scaled exponential-linear output unit.
inline constexpr double kScaledEluLambda = 1.0507;
inline constexpr double kScaledEluAlpha = 1.6733;

enum class OutputActivation { ScaledElu, Elu, Linear };

using MatIn = Eigen::Matrix<double, kHidden, kInputs>;
using MatHidden = Eigen::Matrix<double, kHidden, kHidden>;
using MatOut = Eigen::Matrix<double, kActions, kHidden>;
using VecHidden = Eigen::Matrix<double, kHidden, 1>;
using VecOut = Eigen::Matrix<double, kActions, 1>;

// Dense 3 -> 32 -> 32 -> 2 value network. Weights are stored out-by-in, so a
// forward pass is w * x + b per layer.
struct NetParams {
  MatIn w1 = MatIn::Zero();
  VecHidden b1 = VecHidden::Zero();
  MatHidden w2 = MatHidden::Zero();
  VecHidden b2 = VecHidden::Zero();
  MatOut w3 = MatOut::Zero();
  VecOut b3 = VecOut::Zero();
  OutputActivation output_activation = OutputActivation::ScaledElu;
};

struct AdamState {
  MatIn m_w1 = MatIn::Zero(), v_w1 = MatIn::Zero();
  VecHidden m_b1 = VecHidden::Zero(), v_b1 = VecHidden::Zero();
  MatHidden m_w2 = MatHidden::Zero(), v_w2 = MatHidden::Zero();
  VecHidden m_b2 = VecHidden::Zero(), v_b2 = VecHidden::Zero();
  MatOut m_w3 = MatOut::Zero(), v_w3 = MatOut::Zero();
  VecOut m_b3 = VecOut::Zero(), v_b3 = VecOut::Zero();
  long long t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

inline double elu(double x, double a = 1.0) {
  return x > 0.0 ? x : a * (std::exp(x) - 1.0);
}

inline double elu_derivative(double x, double a = 1.0) {
  return x > 0.0 ? 1.0 : a * std::exp(x);
}

inline double scaled_elu(double x, double lambda = kScaledEluLambda,
                         double a = kScaledEluAlpha) {
  return lambda * elu(x, a);
}

// Bias-corrected Adam update of one parameter block.
template <class M>
void adam_update(M& param, const M& grad, M& moment1, M& moment2, long long t,
                 double lr, double beta1 = 0.9, double beta2 = 0.999,
                 double epsilon = 1e-8) {
  moment1 = beta1 * moment1 + (1.0 - beta1) * grad;
  moment2 = beta2 * moment2 + (1.0 - beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  param -= (lr * (moment1 / c1).array() /
            ((moment2 / c2).array().sqrt() + epsilon))
               .matrix();
}

// Glorot-uniform weights, zero biases.
NetParams init_params(Rng& rng,
                      OutputActivation output = OutputActivation::ScaledElu);

VecOut forward(const NetParams& params, const Vec3& features);

struct Gradients {
  MatIn w1 = MatIn::Zero();
  VecHidden b1 = VecHidden::Zero();
  MatHidden w2 = MatHidden::Zero();
  VecHidden b2 = VecHidden::Zero();
  MatOut w3 = MatOut::Zero();
  VecOut b3 = VecOut::Zero();
  bool finite = true;
};

// Backpropagation of the squared error on the selected action value.
Gradients backward(const NetParams& params, const Vec3& features, int action_index,
                   double target);

// One optimisation step toward `target` on action `action_index`. Returns
// the squared-error loss before the update; a non-finite gradient skips the
// update and leaves params and optimizer state untouched.
double train_step(NetParams& params, AdamState& adam, const Vec3& features,
                  int action_index, double target, double lr);

// Versioned plain-text weight file, bit-exact across a save/load round trip.
void save_params(const NetParams& params, const std::string& path);
NetParams load_params(const std::string& path);

}  // namespace hamnet::neuralnet
