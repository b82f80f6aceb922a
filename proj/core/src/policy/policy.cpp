#include "ast/policy/policy.hpp"

#include "ast/errors.hpp"
#include "ast/policy/lstm_policy.hpp"
#include "ast/policy/mlp_policy.hpp"

#include <Eigen/QR>

#include <cmath>
#include <random>

namespace ast::policy {
namespace {

Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols, double bound, Rng& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
  return m;
}

Eigen::MatrixXd orthogonal_matrix(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  // Sign-fix so the distribution is uniform over O(n).
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

void put(Eigen::VectorXd& theta, Eigen::Index offset, const Eigen::MatrixXd& block) {
  theta.segment(offset, block.size()) = Eigen::Map<const Eigen::VectorXd>(block.data(), block.size());
}

constexpr double kHeadScale = 0.01;

}  // namespace

void PolicyShape::validate() const {
  if (input_dim < 1 || hidden_dim < 1 || output_dim < 1)
    throw InvalidInput("policy shape: dimensions must be positive");
  if (architecture == Architecture::kMlp && hidden_layers < 1)
    throw InvalidInput("policy shape: an MLP needs at least one hidden layer");
  if (architecture != Architecture::kLstm && architecture != Architecture::kMlp)
    throw InvalidInput("policy shape: unknown architecture");
}

Eigen::Index parameter_count(const PolicyShape& s) {
  s.validate();
  const Eigen::Index in = s.input_dim, h = s.hidden_dim, out = s.output_dim;
  if (s.architecture == Architecture::kLstm) return 4 * h * in + 4 * h * h + 4 * h + out * h + out + out;
  Eigen::Index n = 0, prev = in;
  for (int l = 0; l < s.hidden_layers; ++l) {
    n += h * prev + h;
    prev = h;
  }
  return n + out * h + out + out;
}

void PolicyParams::validate() const {
  if (theta.size() != parameter_count(shape))
    throw InvalidInput("policy params: theta has " + std::to_string(theta.size()) + " entries, shape requires " +
                       std::to_string(parameter_count(shape)));
  if (!log_std().allFinite()) throw InvalidInput("policy params: log-std must be finite");
}

PolicyParams initialize_params(const PolicyShape& shape, Rng& rng) {
  PolicyParams p{shape, Eigen::VectorXd::Zero(parameter_count(shape))};
  const Eigen::Index in = shape.input_dim, h = shape.hidden_dim, out = shape.output_dim;
  if (shape.architecture == Architecture::kLstm) {
    const auto layout = LstmLayout::of(shape);
    put(p.theta, layout.w, uniform_matrix(4 * h, in, 1.0 / std::sqrt(static_cast<double>(in)), rng));
    Eigen::MatrixXd u(4 * h, h);
    for (int g = 0; g < 4; ++g) u.middleRows(g * h, h) = orthogonal_matrix(h, rng);
    put(p.theta, layout.u, u);
    p.theta.segment(layout.b + h, h).setOnes();  // forget gate
    put(p.theta, layout.v, uniform_matrix(out, h, kHeadScale, rng));
  } else {
    Eigen::Index offset = 0, prev = in;
    for (int l = 0; l < shape.hidden_layers; ++l) {
      const double bound = std::sqrt(6.0 / static_cast<double>(prev + h));
      put(p.theta, offset, uniform_matrix(h, prev, bound, rng));
      offset += h * prev + h;
      prev = h;
    }
    put(p.theta, offset, uniform_matrix(out, h, kHeadScale, rng));
  }
  return p;
}

long long SequenceBatch::valid_steps() const {
  long long n = 0;
  for (int len : lengths) n += len;
  return n;
}

void SequenceBatch::validate(int input_dim) const {
  for (int len : lengths)
    if (len < 0 || len > steps()) throw InvalidInput("sequence batch: length out of range");
  for (const auto& x : inputs)
    if (x.rows() != input_dim || x.cols() != batch())
      throw InvalidInput("sequence batch: input matrix has shape " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + ", expected " + std::to_string(input_dim) + "x" +
                         std::to_string(batch()));
}

GaussianPolicy::GaussianPolicy(PolicyParams params) : params_(std::move(params)) { params_.validate(); }

void GaussianPolicy::set_theta(const Eigen::VectorXd& theta) {
  if (theta.size() != params_.theta.size()) throw InvalidInput("set_theta: parameter count mismatch");
  params_.theta = theta;
}

std::unique_ptr<GaussianPolicy> make_policy(PolicyParams params) {
  if (params.shape.architecture == Architecture::kLstm) return std::make_unique<LstmPolicy>(std::move(params));
  return std::make_unique<MlpPolicy>(std::move(params));
}

}  // namespace ast::policy
