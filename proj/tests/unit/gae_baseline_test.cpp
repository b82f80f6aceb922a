#include "ast/errors.hpp"
#include "ast/pg/baseline.hpp"
#include "ast/pg/batch.hpp"
#include "ast/pg/gae.hpp"

#include <gtest/gtest.h>

#include <random>

namespace ast::pg {
namespace {

TEST(Gae, TwoStepExample) {
  const std::vector<double> r{-1, -2}, v{0, 0, 0};
  const auto a = gae_advantages(r, v, 0.99, 0.95);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_DOUBLE_EQ(a[1], -2.0);
  EXPECT_NEAR(a[0], -2.881, 1e-12);
}

TEST(Gae, LambdaZeroIsTdResidual) {
  const std::vector<double> r{-1, -3, 2}, v{0.5, -1, 2, 0};
  const auto a = gae_advantages(r, v, 0.9, 0.0);
  for (std::size_t t = 0; t < r.size(); ++t) EXPECT_NEAR(a[t], r[t] + 0.9 * v[t + 1] - v[t], 1e-15);
}

TEST(Gae, LambdaOneIsReturnMinusValue) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  std::vector<double> r(20), v(21);
  for (auto& x : r) x = n(rng);
  for (auto& x : v) x = n(rng);
  v.back() = 0;
  const auto a = gae_advantages(r, v, 0.95, 1.0);
  const auto g = discounted_returns(r, 0.95);
  for (std::size_t t = 0; t < r.size(); ++t) EXPECT_NEAR(a[t], g[t] - v[t], 1e-12);
}

TEST(Gae, LengthMismatchThrows) {
  const std::vector<double> r{1, 2}, v{0, 0};
  EXPECT_THROW(gae_advantages(r, v, 0.99, 0.97), ContractViolation);
}

TEST(Gae, DiscountedReturnsExample) {
  const std::vector<double> r{1, 1, 1};
  const auto g = discounted_returns(r, 0.5);
  EXPECT_DOUBLE_EQ(g[0], 1.75);
  EXPECT_DOUBLE_EQ(g[1], 1.5);
  EXPECT_DOUBLE_EQ(g[2], 1.0);
}

TEST(Normalize, MaskedMeanZeroUnitVariance) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(3.0, 7.0);
  Eigen::MatrixXd m(50, 9);
  Mask mask(50, 9);
  for (int j = 0; j < 9; ++j)
    for (int i = 0; i < 50; ++i) {
      m(i, j) = n(rng);
      mask(i, j) = i < 10 + 4 * j;
    }
  const Eigen::MatrixXd orig = m;
  normalize_masked(m, mask);
  double s = 0, s2 = 0, k = 0;
  for (int j = 0; j < 9; ++j)
    for (int i = 0; i < 50; ++i) {
      if (!mask(i, j)) {
        EXPECT_EQ(m(i, j), orig(i, j));
        continue;
      }
      s += m(i, j);
      s2 += m(i, j) * m(i, j);
      ++k;
    }
  EXPECT_NEAR(s / k, 0.0, 1e-10);
  EXPECT_NEAR(s2 / k, 1.0, 1e-10);
}

TEST(Normalize, ConstantEntriesAreOnlyCentred) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(4, 2, 5.0);
  Mask mask = Mask::Constant(4, 2, true);
  normalize_masked(m, mask);
  EXPECT_TRUE(m.isZero(0.0));
}

policy::SequenceBatch random_inputs(int dim, int steps, std::vector<int> lengths, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  policy::SequenceBatch b;
  b.lengths = std::move(lengths);
  for (int t = 0; t < steps; ++t) b.inputs.push_back(Eigen::MatrixXd::NullaryExpr(dim, b.batch(), [&] { return n(rng); }));
  return b;
}

TEST(Baseline, ConstantReturnsArePredictedExactly) {
  std::mt19937_64 rng(9);
  const auto in = random_inputs(6, 10, {10, 7, 3, 10}, rng);
  Eigen::MatrixXd ret = Eigen::MatrixXd::Constant(10, 4, -42.0);
  LinearBaseline b(10);
  b.fit(in, ret);
  const Eigen::MatrixXd p = b.predict(in);
  for (int j = 0; j < 4; ++j)
    for (int t = 0; t < 10; ++t) {
      // The ridge term shrinks the intercept by roughly ridge / samples.
      if (in.valid(t, j)) EXPECT_NEAR(p(t, j), -42.0, 42.0 * 1e-5);
      else EXPECT_EQ(p(t, j), 0.0);
    }
  EXPECT_EQ(explained_variance(p, ret, in), 0.0);  // zero target variance
}

TEST(Baseline, FitNeverWorseThanZero) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 10; ++trial) {
    const auto in = random_inputs(11, 15, {15, 15, 8, 12, 15, 2}, rng);
    Eigen::MatrixXd ret(15, 6);
    for (int j = 0; j < 6; ++j)
      for (int t = 0; t < 15; ++t) ret(t, j) = 2.0 * in.inputs[static_cast<std::size_t>(t)](0, j) - 0.3 * t + n(rng);
    LinearBaseline b(15);
    b.fit(in, ret);
    const Eigen::MatrixXd p = b.predict(in);
    double rss = 0, rss0 = 0;
    for (int j = 0; j < 6; ++j)
      for (int t = 0; t < 15; ++t)
        if (in.valid(t, j)) {
          rss += std::pow(ret(t, j) - p(t, j), 2);
          rss0 += ret(t, j) * ret(t, j);
        }
    EXPECT_LE(rss, rss0 + 1e-9);
    EXPECT_GT(explained_variance(p, ret, in), 0.0);
  }
}

TEST(Baseline, Features) {
  LinearBaseline b(50);
  Eigen::VectorXd x(2);
  x << 3, 4;
  const Eigen::VectorXd f = b.features(x, 25);
  ASSERT_EQ(f.size(), 5);
  EXPECT_EQ(f[0], 3);
  EXPECT_EQ(f[1], 4);
  EXPECT_DOUBLE_EQ(f[2], 0.5);
  EXPECT_DOUBLE_EQ(f[3], 0.25);
  EXPECT_EQ(f[4], 1);
}

TEST(Baseline, UnfittedPredictsZero) {
  std::mt19937_64 rng(1);
  const auto in = random_inputs(6, 3, {3, 1}, rng);
  LinearBaseline b(3);
  EXPECT_FALSE(b.fitted());
  EXPECT_TRUE(b.predict(in).isZero(0.0));
}

}  // namespace
}  // namespace ast::pg
