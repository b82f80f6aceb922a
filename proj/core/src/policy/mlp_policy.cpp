#include "ast/policy/mlp_policy.hpp"

#include "ast/errors.hpp"

namespace ast::policy {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;

struct LayerView {
  Index w;  // offset of the weight matrix
  Index b;  // offset of the bias
  Index rows;
  Index cols;
};

struct MlpLayout {
  std::vector<LayerView> hidden;
  LayerView head;
};

MlpLayout layout_of(const PolicyShape& s) {
  MlpLayout l;
  Index offset = 0, prev = s.input_dim;
  for (int k = 0; k < s.hidden_layers; ++k) {
    l.hidden.push_back({offset, offset + s.hidden_dim * prev, s.hidden_dim, prev});
    offset += s.hidden_dim * prev + s.hidden_dim;
    prev = s.hidden_dim;
  }
  l.head = {offset, offset + s.output_dim * prev, s.output_dim, prev};
  return l;
}

Eigen::Map<const MatrixXd> weight(const Eigen::VectorXd& theta, const LayerView& v) {
  return Eigen::Map<const MatrixXd>(theta.data() + v.w, v.rows, v.cols);
}

Eigen::Map<const Eigen::VectorXd> bias(const Eigen::VectorXd& theta, const LayerView& v) {
  return Eigen::Map<const Eigen::VectorXd>(theta.data() + v.b, v.rows);
}

}  // namespace

MlpPolicy::MlpPolicy(PolicyParams params) : GaussianPolicy(std::move(params)) {
  if (shape().architecture != Architecture::kMlp) throw InvalidInput("MlpPolicy: shape is not an MLP");
}

HiddenState MlpPolicy::initial_hidden(int batch) const { return HiddenState{MatrixXd(0, batch), MatrixXd(0, batch)}; }

MatrixXd MlpPolicy::layer_forward(const MatrixXd& input, std::vector<MatrixXd>* acts) const {
  const MlpLayout l = layout_of(shape());
  MatrixXd a = input;
  for (const auto& layer : l.hidden) {
    MatrixXd pre = weight(theta(), layer) * a;
    pre.colwise() += bias(theta(), layer);
    a = pre.array().tanh().matrix();
    if (acts) acts->push_back(a);
  }
  MatrixXd mean = weight(theta(), l.head) * a;
  mean.colwise() += bias(theta(), l.head);
  return mean;
}

MatrixXd MlpPolicy::step(const MatrixXd& input, HiddenState&) const {
  if (input.rows() != shape().input_dim) throw InvalidInput("MlpPolicy::step: input dimension mismatch");
  return layer_forward(input, nullptr);
}

ForwardTrace MlpPolicy::forward(const SequenceBatch& batch) const {
  batch.validate(shape().input_dim);
  ForwardTrace trace;
  for (const auto& x : batch.inputs) {
    std::vector<MatrixXd> acts;
    trace.means.push_back(layer_forward(x, &acts));
    trace.activations.push_back(std::move(acts));
  }
  return trace;
}

Eigen::VectorXd MlpPolicy::backward(const SequenceBatch& batch, const ForwardTrace& trace,
                                    const std::vector<MatrixXd>& dmeans) const {
  if (static_cast<int>(dmeans.size()) != batch.steps()) throw InvalidInput("MlpPolicy::backward: step mismatch");
  const MlpLayout l = layout_of(shape());
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta().size());
  const auto gw = [&](const LayerView& v) { return Eigen::Map<MatrixXd>(grad.data() + v.w, v.rows, v.cols); };
  const auto gb = [&](const LayerView& v) { return Eigen::Map<Eigen::VectorXd>(grad.data() + v.b, v.rows); };

  for (int t = 0; t < batch.steps(); ++t) {
    const auto& acts = trace.activations[static_cast<std::size_t>(t)];
    const MatrixXd& dmean = dmeans[static_cast<std::size_t>(t)];
    gw(l.head).noalias() += dmean * acts.back().transpose();
    gb(l.head) += dmean.rowwise().sum();
    MatrixXd da = weight(theta(), l.head).transpose() * dmean;
    for (std::size_t k = l.hidden.size(); k-- > 0;) {
      const MatrixXd dpre = (da.array() * (1.0 - acts[k].array().square())).matrix();
      const MatrixXd& below = k > 0 ? acts[k - 1] : batch.inputs[static_cast<std::size_t>(t)];
      gw(l.hidden[k]).noalias() += dpre * below.transpose();
      gb(l.hidden[k]) += dpre.rowwise().sum();
      if (k > 0) da = weight(theta(), l.hidden[k]).transpose() * dpre;
    }
  }
  return grad;
}

std::vector<MatrixXd> MlpPolicy::jvp(const SequenceBatch& batch, const ForwardTrace& trace,
                                     const Eigen::VectorXd& direction) const {
  if (direction.size() != theta().size()) throw InvalidInput("MlpPolicy::jvp: direction size mismatch");
  const MlpLayout l = layout_of(shape());
  std::vector<MatrixXd> out;
  for (int t = 0; t < batch.steps(); ++t) {
    const auto& acts = trace.activations[static_cast<std::size_t>(t)];
    const MatrixXd& x = batch.inputs[static_cast<std::size_t>(t)];
    MatrixXd da;
    for (std::size_t k = 0; k < l.hidden.size(); ++k) {
      const MatrixXd& below = k > 0 ? acts[k - 1] : x;
      MatrixXd dpre = weight(direction, l.hidden[k]) * below;
      if (k > 0) dpre.noalias() += weight(theta(), l.hidden[k]) * da;
      dpre.colwise() += bias(direction, l.hidden[k]);
      da = (dpre.array() * (1.0 - acts[k].array().square())).matrix();
    }
    MatrixXd dmean = weight(direction, l.head) * acts.back();
    dmean.noalias() += weight(theta(), l.head) * da;
    dmean.colwise() += bias(direction, l.head);
    out.push_back(std::move(dmean));
  }
  return out;
}

std::unique_ptr<GaussianPolicy> MlpPolicy::clone() const { return std::make_unique<MlpPolicy>(*this); }

}  // namespace ast::policy
