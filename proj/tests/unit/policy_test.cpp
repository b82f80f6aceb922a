#include "ast/errors.hpp"
#include "ast/policy/gaussian.hpp"
#include "ast/policy/policy.hpp"
#include "ast/policy/policy_input.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace ast::policy {
namespace {

PolicyShape lstm_shape(int in = 11, int hidden = 8) {
  PolicyShape s;
  s.architecture = Architecture::kLstm;
  s.input_dim = in;
  s.hidden_dim = hidden;
  return s;
}

PolicyShape mlp_shape(int in = 14, int hidden = 8, int layers = 2) {
  PolicyShape s;
  s.architecture = Architecture::kMlp;
  s.input_dim = in;
  s.hidden_dim = hidden;
  s.hidden_layers = layers;
  return s;
}

SequenceBatch random_batch(int in, int steps, std::vector<int> lengths, Rng& rng) {
  std::normal_distribution<double> n;
  SequenceBatch b;
  b.lengths = std::move(lengths);
  for (int t = 0; t < steps; ++t) {
    Eigen::MatrixXd x(in, b.batch());
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
    b.inputs.push_back(x);
  }
  return b;
}

std::vector<Eigen::MatrixXd> random_actions(int steps, int batch, Rng& rng) {
  std::normal_distribution<double> n;
  std::vector<Eigen::MatrixXd> a;
  for (int t = 0; t < steps; ++t) {
    Eigen::MatrixXd m(6, batch);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
    a.push_back(m);
  }
  return a;
}

// Perturb theta so the log-stds are not all zero and the gradient is generic.
PolicyParams random_params(const PolicyShape& shape, std::uint64_t seed) {
  Rng rng(seed);
  PolicyParams p = initialize_params(shape, rng);
  std::normal_distribution<double> n(0.0, 0.3);
  for (Eigen::Index i = 0; i < p.theta.size(); ++i) p.theta[i] += n(rng);
  return p;
}

double weighted_log_prob(const GaussianPolicy& pol, const SequenceBatch& b, const std::vector<Eigen::MatrixXd>& a,
                         const std::vector<Eigen::VectorXd>& w) {
  const auto r = log_prob_and_grad(pol, b, a, w);
  double s = 0;
  for (int t = 0; t < b.steps(); ++t)
    for (int j = 0; j < b.batch(); ++j)
      if (b.valid(t, j)) s += w[static_cast<std::size_t>(t)][j] * r.log_probs[static_cast<std::size_t>(t)][j];
  return s;
}

class Architectures : public ::testing::TestWithParam<Architecture> {
 protected:
  PolicyShape shape() const { return GetParam() == Architecture::kLstm ? lstm_shape() : mlp_shape(); }
};

TEST_P(Architectures, ZeroWeightsGiveZeroMean) {
  PolicyParams p;
  p.shape = shape();
  p.theta = Eigen::VectorXd::Zero(parameter_count(p.shape));
  auto pol = make_policy(p);
  Rng rng(1);
  const auto b = random_batch(p.shape.input_dim, 4, {4, 2, 3}, rng);
  for (const auto& m : pol->forward(b).means) EXPECT_TRUE(m.isZero(0.0));
  EXPECT_TRUE(pol->std().isOnes(0.0));
}

TEST_P(Architectures, GradientMatchesFiniteDifferences) {
  auto pol = make_policy(random_params(shape(), 3));
  Rng rng(4);
  const auto b = random_batch(shape().input_dim, 5, {5, 3, 1}, rng);
  const auto a = random_actions(5, 3, rng);
  std::vector<Eigen::VectorXd> w;
  std::normal_distribution<double> n;
  for (int t = 0; t < 5; ++t) w.push_back(Eigen::VectorXd::NullaryExpr(3, [&] { return n(rng); }));

  const Eigen::VectorXd g = log_prob_and_grad(*pol, b, a, w).gradient;
  const Eigen::VectorXd theta = pol->theta();
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Eigen::VectorXd tp = theta, tm = theta;
    tp[i] += h;
    tm[i] -= h;
    pol->set_theta(tp);
    const double fp = weighted_log_prob(*pol, b, a, w);
    pol->set_theta(tm);
    const double fm = weighted_log_prob(*pol, b, a, w);
    const double fd = (fp - fm) / (2 * h);
    EXPECT_NEAR(g[i], fd, 1e-5 * std::max(1.0, std::abs(fd))) << "theta[" << i << "]";
  }
}

TEST_P(Architectures, JvpMatchesFiniteDifferences) {
  auto pol = make_policy(random_params(shape(), 5));
  Rng rng(6);
  const auto b = random_batch(shape().input_dim, 4, {4, 4}, rng);
  std::normal_distribution<double> n;
  const Eigen::VectorXd v = Eigen::VectorXd::NullaryExpr(pol->theta().size(), [&] { return n(rng); });
  const auto trace = pol->forward(b);
  const auto jv = pol->jvp(b, trace, v);

  const Eigen::VectorXd theta = pol->theta();
  const double h = 1e-6;
  pol->set_theta(theta + h * v);
  const auto plus = pol->forward(b).means;
  pol->set_theta(theta - h * v);
  const auto minus = pol->forward(b).means;
  for (std::size_t t = 0; t < jv.size(); ++t) {
    const Eigen::MatrixXd fd = (plus[t] - minus[t]) / (2 * h);
    EXPECT_LT((jv[t] - fd).cwiseAbs().maxCoeff(), 1e-6) << "step " << t;
  }
}

TEST_P(Architectures, BackwardIsAdjointOfJvp) {
  auto pol = make_policy(random_params(shape(), 7));
  Rng rng(8);
  const auto b = random_batch(shape().input_dim, 3, {3, 2}, rng);
  std::normal_distribution<double> n;
  const Eigen::VectorXd v = Eigen::VectorXd::NullaryExpr(pol->theta().size(), [&] { return n(rng); });
  const auto trace = pol->forward(b);
  const auto jv = pol->jvp(b, trace, v);
  const auto u = random_actions(3, 2, rng);
  const Eigen::VectorXd jtu = pol->backward(b, trace, u);
  double lhs = 0;
  for (std::size_t t = 0; t < u.size(); ++t) lhs += (u[t].array() * jv[t].array()).sum();
  const Eigen::Index net = pol->params().network_size();
  EXPECT_NEAR(lhs, jtu.head(net).dot(v.head(net)), 1e-9 * std::max(1.0, std::abs(lhs)));
}

TEST_P(Architectures, StepMatchesForwardAndHiddenResets) {
  auto pol = make_policy(random_params(shape(), 9));
  Rng rng(10);
  const auto b = random_batch(shape().input_dim, 6, {6, 6}, rng);
  const auto means = pol->forward(b).means;
  for (int rep = 0; rep < 2; ++rep) {
    HiddenState h = pol->initial_hidden(2);
    for (int t = 0; t < 6; ++t)
      EXPECT_LT((pol->step(b.inputs[static_cast<std::size_t>(t)], h) - means[static_cast<std::size_t>(t)])
                    .cwiseAbs()
                    .maxCoeff(),
                1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Policy, Architectures, ::testing::Values(Architecture::kLstm, Architecture::kMlp),
                         [](const auto& info) { return info.param == Architecture::kLstm ? "Lstm" : "Mlp"; });

TEST(Policy, PaddingNeverLeaksBackwards) {
  auto pol = make_policy(random_params(lstm_shape(), 11));
  Rng rng(12);
  auto b = random_batch(11, 5, {2, 5}, rng);
  const auto before = pol->forward(b).means;
  for (int t = 2; t < 5; ++t) b.inputs[static_cast<std::size_t>(t)].col(0).setConstant(1e3);
  const auto after = pol->forward(b).means;
  for (int t = 0; t < 2; ++t) EXPECT_EQ(before[static_cast<std::size_t>(t)], after[static_cast<std::size_t>(t)]);
}

TEST(Policy, StdIsInputIndependent) {
  PolicyParams p = random_params(lstm_shape(), 13);
  auto pol = make_policy(p);
  EXPECT_EQ(pol->log_std(), p.theta.tail(6));
}

TEST(Policy, ShapeValidation) {
  PolicyParams p;
  p.shape = lstm_shape();
  p.theta = Eigen::VectorXd::Zero(parameter_count(p.shape) - 1);
  EXPECT_THROW(make_policy(p), InvalidInput);
  PolicyShape bad = lstm_shape();
  bad.hidden_dim = 0;
  EXPECT_THROW(bad.validate(), InvalidInput);
}

TEST(Gaussian, LogProbKnownValues) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(6);
  EXPECT_NEAR(log_prob(zero, zero, zero), -3.0 * std::log(2 * std::numbers::pi), 1e-14);
  Eigen::VectorXd a = zero;
  a[0] = 1.0;
  EXPECT_NEAR(log_prob(zero, zero, a), -3.0 * std::log(2 * std::numbers::pi) - 0.5, 1e-14);
}

TEST(Gaussian, LogStdGradientAtMean) {
  // d/dlog_std of log N(mu; mu, sigma) = -1 for each dimension.
  PolicyParams p;
  p.shape = mlp_shape(3, 4, 1);
  p.theta = Eigen::VectorXd::Zero(parameter_count(p.shape));
  auto pol = make_policy(p);
  SequenceBatch b;
  b.inputs = {Eigen::MatrixXd::Zero(3, 1)};
  b.lengths = {1};
  const auto r = log_prob_and_grad(*pol, b, {Eigen::MatrixXd::Zero(6, 1)});
  for (int i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(r.gradient.tail(6)[i], -1.0);
}

TEST(Gaussian, KlProperties) {
  Eigen::VectorXd m(6), s(6);
  m << 1, 2, 3, 4, 5, 6;
  s << .1, -.2, .3, 0, 0, .5;
  EXPECT_NEAR(kl_divergence(m, s, m, s), 0.0, 1e-15);
  Eigen::VectorXd m2 = m;
  m2[0] += 2.0;
  // Equal variances: KL = 0.5 * dmu^2 / sigma^2.
  EXPECT_NEAR(kl_divergence(m, s, m2, s), 0.5 * 4.0 / std::exp(0.2), 1e-12);
  EXPECT_GT(kl_divergence(m, s, m, s * 0.5), 0.0);
}

TEST(Gaussian, SampleStatistics) {
  Rng rng(14);
  Vector6 mean, std;
  mean << 1, -1, 0, 2, 0, 0.5;
  std << 1, 2, 0.5, 1, 3, 1;
  const int n = 200000;
  Vector6 sum = Vector6::Zero(), sq = Vector6::Zero();
  for (int i = 0; i < n; ++i) {
    const auto s = sample_action(mean, std, rng);
    EXPECT_EQ(s.action, mean + std.cwiseProduct(s.draw));
    sum += s.action;
    sq += (s.action - mean).cwiseAbs2();
  }
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(sum[i] / n, mean[i], 5 * std[i] / std::sqrt(n));
    EXPECT_NEAR(std::sqrt(sq[i] / n), std[i], 0.01 * std[i]);
  }
}

TEST(Input, EncodingWidthsAndContent) {
  EXPECT_EQ(input_dim(InputEncoding::kPreviousAction), 6);
  EXPECT_EQ(input_dim(InputEncoding::kPreviousActionAndInitialCondition), 11);
  EXPECT_EQ(input_dim(InputEncoding::kSimulationState, 14), 14);
  const auto support = InitialConditionSupport::crosswalk_default();
  Vector6 a;
  a << 1, 2, 3, 4, 5, 6;
  const auto x = encode_input(InputEncoding::kPreviousActionAndInitialCondition, a, support.center(), support);
  ASSERT_EQ(x.size(), 11);
  EXPECT_EQ(x.head(6), Eigen::VectorXd(a));
  EXPECT_LT(x.tail(5).cwiseAbs().maxCoeff(), 1e-12);
  const std::vector<double> state(14, 10.0);
  const auto xs = encode_input(InputEncoding::kSimulationState, a, support.center(), support, state);
  EXPECT_TRUE(xs.isOnes(1e-15));
}

}  // namespace
}  // namespace ast::policy
