#pragma once

#include "ast/random.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <vector>

namespace ast::policy {

enum class Architecture : std::uint32_t { kLstm = 0, kMlp = 1 };

struct PolicyShape {
  Architecture architecture = Architecture::kLstm;
  int input_dim = 6;
  int hidden_dim = 64;
  int output_dim = 6;
  /// Number of tanh hidden layers (MLP only; the LSTM has a single cell).
  int hidden_layers = 1;

  void validate() const;
  friend bool operator==(const PolicyShape&, const PolicyShape&) = default;
};

/// Total parameter count: network weights followed by output_dim log-stds.
Eigen::Index parameter_count(const PolicyShape& shape);

/// Flat parameter vector theta plus the shape that gives it meaning. The last
/// output_dim entries are the state-independent log standard deviations.
struct PolicyParams {
  PolicyShape shape;
  Eigen::VectorXd theta;

  Eigen::Index network_size() const { return theta.size() - shape.output_dim; }
  Eigen::VectorXd log_std() const { return theta.tail(shape.output_dim); }
  Eigen::VectorXd std() const { return log_std().array().exp().matrix(); }

  /// Throws InvalidInput if theta's length disagrees with the shape or the
  /// log-stds are not finite.
  void validate() const;

  friend bool operator==(const PolicyParams&, const PolicyParams&) = default;
};

/// Random initialization. LSTM: orthogonal recurrent blocks, fan-in scaled
/// uniform input weights, forget-gate bias 1, near-zero output head, log-std
/// 0. MLP: Glorot-uniform hidden layers, near-zero head, log-std 0.
PolicyParams initialize_params(const PolicyShape& shape, Rng& rng);

/// A batch of equal-width input sequences. inputs[t] is input_dim x batch;
/// column b is meaningful only while t < lengths[b]. Steps past a sequence's
/// end are computed but never influence earlier outputs.
struct SequenceBatch {
  std::vector<Eigen::MatrixXd> inputs;
  std::vector<int> lengths;

  int steps() const { return static_cast<int>(inputs.size()); }
  int batch() const { return static_cast<int>(lengths.size()); }
  bool valid(int t, int b) const { return t < lengths[static_cast<std::size_t>(b)]; }
  long long valid_steps() const;

  /// Throws InvalidInput on inconsistent dimensions.
  void validate(int input_dim) const;
};

/// Recurrent state for a batch of sequences (hidden_dim x batch each).
struct HiddenState {
  Eigen::MatrixXd h;
  Eigen::MatrixXd c;
};

/// Per-step means plus whatever activations the architecture needs for its
/// backward and tangent passes.
struct ForwardTrace {
  std::vector<Eigen::MatrixXd> means;
  std::vector<std::vector<Eigen::MatrixXd>> activations;
};

/// Gaussian policy with a network-produced mean and a shared diagonal
/// covariance.
class GaussianPolicy {
 public:
  explicit GaussianPolicy(PolicyParams params);
  virtual ~GaussianPolicy() = default;

  const PolicyShape& shape() const { return params_.shape; }
  const PolicyParams& params() const { return params_; }
  const Eigen::VectorXd& theta() const { return params_.theta; }
  void set_theta(const Eigen::VectorXd& theta);

  Eigen::VectorXd log_std() const { return params_.log_std(); }
  Eigen::VectorXd std() const { return params_.std(); }

  virtual HiddenState initial_hidden(int batch) const = 0;

  /// One step for a batch of independent sequences; returns the means
  /// (output_dim x batch) and advances `hidden` in place.
  virtual Eigen::MatrixXd step(const Eigen::MatrixXd& input, HiddenState& hidden) const = 0;

  /// Full-sequence forward from a zero hidden state.
  virtual ForwardTrace forward(const SequenceBatch& batch) const = 0;

  /// Backpropagation through time: gradient of sum_t <dmeans[t], means[t]>
  /// with respect to theta. The log-std tail of the result is zero.
  virtual Eigen::VectorXd backward(const SequenceBatch& batch, const ForwardTrace& trace,
                                   const std::vector<Eigen::MatrixXd>& dmeans) const = 0;

  /// Forward-mode derivative of every mean along `direction` (log-std part
  /// of the direction is ignored).
  virtual std::vector<Eigen::MatrixXd> jvp(const SequenceBatch& batch, const ForwardTrace& trace,
                                           const Eigen::VectorXd& direction) const = 0;

  virtual std::unique_ptr<GaussianPolicy> clone() const = 0;

 protected:
  PolicyParams params_;
};

std::unique_ptr<GaussianPolicy> make_policy(PolicyParams params);

}  // namespace ast::policy
