#include "ast/policy/lstm_policy.hpp"

#include "ast/errors.hpp"

namespace ast::policy {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using ConstMap = Eigen::Map<const MatrixXd>;
using Map = Eigen::Map<MatrixXd>;

// Activation cache layout per step.
enum Slot { kGates = 0, kCell = 1, kTanhCell = 2, kHidden = 3 };

struct Weights {
  ConstMap w, u, v;
  Eigen::Map<const Eigen::VectorXd> b, d;
};

Weights weights_of(const Eigen::VectorXd& theta, const PolicyShape& s) {
  const auto l = LstmLayout::of(s);
  const Index h = s.hidden_dim, in = s.input_dim, out = s.output_dim;
  return Weights{ConstMap(theta.data() + l.w, 4 * h, in), ConstMap(theta.data() + l.u, 4 * h, h),
                 ConstMap(theta.data() + l.v, out, h), Eigen::Map<const Eigen::VectorXd>(theta.data() + l.b, 4 * h),
                 Eigen::Map<const Eigen::VectorXd>(theta.data() + l.d, out)};
}

// Pre-activations -> gate activations in place: sigmoid on i, f, o; tanh on g.
void activate(MatrixXd& z, Index h) {
  auto sig = [](auto&& block) { block = (1.0 + (-block.array()).exp()).inverse().matrix(); };
  sig(z.topRows(2 * h));
  z.middleRows(2 * h, h) = z.middleRows(2 * h, h).array().tanh().matrix();
  sig(z.bottomRows(h));
}

}  // namespace

LstmLayout LstmLayout::of(const PolicyShape& s) {
  const Index h = s.hidden_dim, in = s.input_dim, out = s.output_dim;
  LstmLayout l;
  l.w = 0;
  l.u = l.w + 4 * h * in;
  l.b = l.u + 4 * h * h;
  l.v = l.b + 4 * h;
  l.d = l.v + out * h;
  l.log_std = l.d + out;
  l.total = l.log_std + out;
  return l;
}

LstmPolicy::LstmPolicy(PolicyParams params) : GaussianPolicy(std::move(params)) {
  if (shape().architecture != Architecture::kLstm) throw InvalidInput("LstmPolicy: shape is not an LSTM");
}

HiddenState LstmPolicy::initial_hidden(int batch) const {
  const Index h = shape().hidden_dim;
  return HiddenState{MatrixXd::Zero(h, batch), MatrixXd::Zero(h, batch)};
}

MatrixXd LstmPolicy::step(const MatrixXd& input, HiddenState& hidden) const {
  const auto& s = shape();
  if (input.rows() != s.input_dim || hidden.h.cols() != input.cols())
    throw InvalidInput("LstmPolicy::step: shape mismatch");
  const Index h = s.hidden_dim;
  const Weights wt = weights_of(theta(), s);
  MatrixXd z = wt.w * input + wt.u * hidden.h;
  z.colwise() += wt.b;
  activate(z, h);
  hidden.c = (z.middleRows(h, h).array() * hidden.c.array() + z.topRows(h).array() * z.middleRows(2 * h, h).array())
                 .matrix();
  hidden.h = (z.bottomRows(h).array() * hidden.c.array().tanh()).matrix();
  MatrixXd mean = wt.v * hidden.h;
  mean.colwise() += wt.d;
  return mean;
}

ForwardTrace LstmPolicy::forward(const SequenceBatch& batch) const {
  const auto& s = shape();
  batch.validate(s.input_dim);
  const Index h = s.hidden_dim;
  const int n = batch.batch();
  const Weights wt = weights_of(theta(), s);

  ForwardTrace trace;
  trace.means.reserve(static_cast<std::size_t>(batch.steps()));
  trace.activations.reserve(static_cast<std::size_t>(batch.steps()));
  MatrixXd h_prev = MatrixXd::Zero(h, n);
  MatrixXd c_prev = MatrixXd::Zero(h, n);
  for (int t = 0; t < batch.steps(); ++t) {
    MatrixXd z = wt.w * batch.inputs[static_cast<std::size_t>(t)];
    z.noalias() += wt.u * h_prev;
    z.colwise() += wt.b;
    activate(z, h);
    MatrixXd c = (z.middleRows(h, h).array() * c_prev.array() + z.topRows(h).array() * z.middleRows(2 * h, h).array())
                     .matrix();
    MatrixXd tc = c.array().tanh().matrix();
    MatrixXd hid = (z.bottomRows(h).array() * tc.array()).matrix();
    MatrixXd mean = wt.v * hid;
    mean.colwise() += wt.d;
    trace.means.push_back(std::move(mean));
    h_prev = hid;
    c_prev = c;
    trace.activations.push_back({std::move(z), std::move(c), std::move(tc), std::move(hid)});
  }
  return trace;
}

Eigen::VectorXd LstmPolicy::backward(const SequenceBatch& batch, const ForwardTrace& trace,
                                     const std::vector<MatrixXd>& dmeans) const {
  const auto& s = shape();
  const Index h = s.hidden_dim, in = s.input_dim, out = s.output_dim;
  const int n = batch.batch();
  if (static_cast<int>(dmeans.size()) != batch.steps() || static_cast<int>(trace.means.size()) != batch.steps())
    throw InvalidInput("LstmPolicy::backward: step count mismatch");
  const Weights wt = weights_of(theta(), s);
  const auto l = LstmLayout::of(s);

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta().size());
  Map dw(grad.data() + l.w, 4 * h, in);
  Map du(grad.data() + l.u, 4 * h, h);
  Map dv(grad.data() + l.v, out, h);
  Eigen::Map<Eigen::VectorXd> db(grad.data() + l.b, 4 * h);
  Eigen::Map<Eigen::VectorXd> dd(grad.data() + l.d, out);

  const MatrixXd zeros = MatrixXd::Zero(h, n);
  MatrixXd dh_next = zeros;
  MatrixXd dc_next = zeros;
  MatrixXd dz(4 * h, n);
  for (int t = batch.steps() - 1; t >= 0; --t) {
    const auto& act = trace.activations[static_cast<std::size_t>(t)];
    const MatrixXd& gates = act[kGates];
    const MatrixXd& tc = act[kTanhCell];
    const MatrixXd& hid = act[kHidden];
    const MatrixXd& c_prev = t > 0 ? trace.activations[static_cast<std::size_t>(t - 1)][kCell] : zeros;
    const MatrixXd& h_prev = t > 0 ? trace.activations[static_cast<std::size_t>(t - 1)][kHidden] : zeros;
    const MatrixXd& dmean = dmeans[static_cast<std::size_t>(t)];

    dv.noalias() += dmean * hid.transpose();
    dd += dmean.rowwise().sum();
    MatrixXd dh = dh_next;
    dh.noalias() += wt.v.transpose() * dmean;

    const auto i = gates.topRows(h).array();
    const auto f = gates.middleRows(h, h).array();
    const auto g = gates.middleRows(2 * h, h).array();
    const auto o = gates.bottomRows(h).array();

    const Eigen::ArrayXXd dc = dh.array() * o * (1.0 - tc.array().square()) + dc_next.array();
    dz.topRows(h) = (dc * g * i * (1.0 - i)).matrix();
    dz.middleRows(h, h) = (dc * c_prev.array() * f * (1.0 - f)).matrix();
    dz.middleRows(2 * h, h) = (dc * i * (1.0 - g.square())).matrix();
    dz.bottomRows(h) = (dh.array() * tc.array() * o * (1.0 - o)).matrix();
    dc_next = (dc * f).matrix();

    dw.noalias() += dz * batch.inputs[static_cast<std::size_t>(t)].transpose();
    du.noalias() += dz * h_prev.transpose();
    db += dz.rowwise().sum();
    dh_next.noalias() = wt.u.transpose() * dz;
  }
  return grad;
}

std::vector<MatrixXd> LstmPolicy::jvp(const SequenceBatch& batch, const ForwardTrace& trace,
                                      const Eigen::VectorXd& direction) const {
  const auto& s = shape();
  const Index h = s.hidden_dim;
  const int n = batch.batch();
  if (direction.size() != theta().size()) throw InvalidInput("LstmPolicy::jvp: direction size mismatch");
  const Weights wt = weights_of(theta(), s);
  const Weights dwt = weights_of(direction, s);

  std::vector<MatrixXd> out;
  out.reserve(static_cast<std::size_t>(batch.steps()));
  const MatrixXd zeros = MatrixXd::Zero(h, n);
  MatrixXd dh_prev = zeros;
  MatrixXd dc_prev = zeros;
  MatrixXd dz;
  for (int t = 0; t < batch.steps(); ++t) {
    const auto& act = trace.activations[static_cast<std::size_t>(t)];
    const MatrixXd& gates = act[kGates];
    const MatrixXd& tc = act[kTanhCell];
    const MatrixXd& hid = act[kHidden];
    const MatrixXd& c_prev = t > 0 ? trace.activations[static_cast<std::size_t>(t - 1)][kCell] : zeros;
    const MatrixXd& h_prev = t > 0 ? trace.activations[static_cast<std::size_t>(t - 1)][kHidden] : zeros;

    dz.noalias() = dwt.w * batch.inputs[static_cast<std::size_t>(t)];
    dz.noalias() += dwt.u * h_prev;
    dz.noalias() += wt.u * dh_prev;
    dz.colwise() += dwt.b;

    const auto i = gates.topRows(h).array();
    const auto f = gates.middleRows(h, h).array();
    const auto g = gates.middleRows(2 * h, h).array();
    const auto o = gates.bottomRows(h).array();
    const Eigen::ArrayXXd di = dz.topRows(h).array() * i * (1.0 - i);
    const Eigen::ArrayXXd df = dz.middleRows(h, h).array() * f * (1.0 - f);
    const Eigen::ArrayXXd dg = dz.middleRows(2 * h, h).array() * (1.0 - g.square());
    const Eigen::ArrayXXd d_o = dz.bottomRows(h).array() * o * (1.0 - o);

    MatrixXd dc = (df * c_prev.array() + f * dc_prev.array() + di * g + i * dg).matrix();
    MatrixXd dh = (d_o * tc.array() + o * (1.0 - tc.array().square()) * dc.array()).matrix();

    MatrixXd dmean = dwt.v * hid;
    dmean.noalias() += wt.v * dh;
    dmean.colwise() += dwt.d;
    out.push_back(std::move(dmean));
    dh_prev = std::move(dh);
    dc_prev = std::move(dc);
  }
  return out;
}

std::unique_ptr<GaussianPolicy> LstmPolicy::clone() const { return std::make_unique<LstmPolicy>(*this); }

}  // namespace ast::policy
