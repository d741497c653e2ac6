#include "hamnet/neuralnet.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace hamnet::neuralnet {

namespace {

double output_value(OutputActivation mode, double z) {
  switch (mode) {
    case OutputActivation::ScaledElu:
      return scaled_elu(z);
    case OutputActivation::Elu:
      return elu(z);
    case OutputActivation::Linear:
      return z;
  }
  return z;
}

double output_derivative(OutputActivation mode, double z) {
  switch (mode) {
    case OutputActivation::ScaledElu:
      return kScaledEluLambda * elu_derivative(z, kScaledEluAlpha);
    case OutputActivation::Elu:
      return elu_derivative(z);
    case OutputActivation::Linear:
      return 1.0;
  }
  return 1.0;
}

template <class M>
void fill_glorot(M& w, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  for (Eigen::Index r = 0; r < w.rows(); ++r)
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      w(r, c) = rng.uniform(-bound, bound);
}

struct ForwardTrace {
  VecHidden z1, h1, z2, h2;
  VecOut z3, y;
};

ForwardTrace forward_trace(const NetParams& p, const Vec3& x) {
  ForwardTrace t;
  t.z1 = p.w1 * x + p.b1;
  t.h1 = t.z1.unaryExpr([](double v) { return elu(v); });
  t.z2 = p.w2 * t.h1 + p.b2;
  t.h2 = t.z2.unaryExpr([](double v) { return elu(v); });
  t.z3 = p.w3 * t.h2 + p.b3;
  t.y = t.z3.unaryExpr(
      [&p](double v) { return output_value(p.output_activation, v); });
  return t;
}

std::string format_value(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

NetParams init_params(Rng& rng, OutputActivation output) {
  NetParams p;
  p.output_activation = output;
  fill_glorot(p.w1, rng);
  fill_glorot(p.w2, rng);
  fill_glorot(p.w3, rng);
  return p;
}

VecOut forward(const NetParams& params, const Vec3& features) {
  if (!features.allFinite())
    throw std::invalid_argument("forward: non-finite features");
  return forward_trace(params, features).y;
}

Gradients backward(const NetParams& params, const Vec3& features, int action_index,
                   double target) {
  const ForwardTrace t = forward_trace(params, features);
  const double err = t.y[action_index] - target;

  Gradients g;
  // Only the selected output neuron carries loss.
  VecOut dz3 = VecOut::Zero();
  dz3[action_index] =
      2.0 * err * output_derivative(params.output_activation, t.z3[action_index]);
  g.w3 = dz3 * t.h2.transpose();
  g.b3 = dz3;

  VecHidden dh2 = params.w3.transpose() * dz3;
  VecHidden dz2 =
      dh2.cwiseProduct(t.z2.unaryExpr([](double v) { return elu_derivative(v); }));
  g.w2 = dz2 * t.h1.transpose();
  g.b2 = dz2;

  VecHidden dh1 = params.w2.transpose() * dz2;
  VecHidden dz1 =
      dh1.cwiseProduct(t.z1.unaryExpr([](double v) { return elu_derivative(v); }));
  g.w1 = dz1 * features.transpose();
  g.b1 = dz1;

  g.finite = g.w1.allFinite() && g.b1.allFinite() && g.w2.allFinite() &&
             g.b2.allFinite() && g.w3.allFinite() && g.b3.allFinite();
  return g;
}

double train_step(NetParams& params, AdamState& adam, const Vec3& features,
                  int action_index, double target, double lr) {
  if (action_index < 0 || action_index >= kActions)
    throw std::invalid_argument("train_step: action index out of range");
  const double prediction = forward(params, features)[action_index];
  const double err = prediction - target;
  const double loss = err * err;

  const Gradients g = backward(params, features, action_index, target);
  if (!g.finite) return loss;  // reported via the non-finite loss, step skipped

  adam.t += 1;
  adam_update(params.w1, g.w1, adam.m_w1, adam.v_w1, adam.t, lr, adam.beta1,
              adam.beta2, adam.epsilon);
  adam_update(params.b1, g.b1, adam.m_b1, adam.v_b1, adam.t, lr, adam.beta1,
              adam.beta2, adam.epsilon);
  adam_update(params.w2, g.w2, adam.m_w2, adam.v_w2, adam.t, lr, adam.beta1,
              adam.beta2, adam.epsilon);
  adam_update(params.b2, g.b2, adam.m_b2, adam.v_b2, adam.t, lr, adam.beta1,
              adam.beta2, adam.epsilon);
  adam_update(params.w3, g.w3, adam.m_w3, adam.v_w3, adam.t, lr, adam.beta1,
              adam.beta2, adam.epsilon);
  adam_update(params.b3, g.b3, adam.m_b3, adam.v_b3, adam.t, lr, adam.beta1,
              adam.beta2, adam.epsilon);
  return loss;
}

namespace {

template <class M>
void write_matrix(std::ostream& out, const M& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ' ';
      out << format_value(m(r, c));
    }
    out << '\n';
  }
}

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  double next() {
    std::string tok;
    if (!(in_ >> tok))
      throw std::runtime_error("weight file: unexpected end of data");
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
      throw std::runtime_error("weight file: malformed number '" + tok + "'");
    return v;
  }

 private:
  std::istream& in_;
};

template <class M>
void read_matrix(TokenReader& reader, M& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = reader.next();
}

}  // namespace

void save_params(const NetParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open weight file for writing: " + path);
  out << "hamnet-weights v1\n";
  out << kInputs << ' ' << kHidden << ' ' << kHidden << ' ' << kActions << '\n';
  write_matrix(out, params.w1);
  write_matrix(out, params.b1.transpose());
  write_matrix(out, params.w2);
  write_matrix(out, params.b2.transpose());
  write_matrix(out, params.w3);
  write_matrix(out, params.b3.transpose());
  if (!out) throw std::runtime_error("failed writing weight file: " + path);
}

NetParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weight file: " + path);

  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("weight file: missing header line");
  if (header != "hamnet-weights v1")
    throw std::runtime_error("weight file: version mismatch ('" + header + "')");

  std::string shape_line;
  if (!std::getline(in, shape_line))
    throw std::runtime_error("weight file: missing shape line");
  std::istringstream shapes(shape_line);
  int n_in = 0, n_h1 = 0, n_h2 = 0, n_out = 0;
  if (!(shapes >> n_in >> n_h1 >> n_h2 >> n_out))
    throw std::runtime_error("weight file: malformed shape line");
  if (n_in != kInputs || n_h1 != kHidden || n_h2 != kHidden || n_out != kActions) {
    std::ostringstream msg;
    msg << "weight file: shape mismatch, expected " << kInputs << ' ' << kHidden
        << ' ' << kHidden << ' ' << kActions << " got " << shape_line;
    throw std::runtime_error(msg.str());
  }

  NetParams p;
  TokenReader reader(in);
  read_matrix(reader, p.w1);
  read_matrix(reader, p.b1);
  read_matrix(reader, p.w2);
  read_matrix(reader, p.b2);
  read_matrix(reader, p.w3);
  read_matrix(reader, p.b3);
  return p;
}

}  // namespace hamnet::neuralnet
