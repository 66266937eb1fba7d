#ifndef FRACHK_MODEL_HPP
#define FRACHK_MODEL_HPP

#include <Eigen/Dense>

#include <stdexcept>

namespace frachk {

/// Interaction data of the leader-follower consensus system: N agents of
/// dimension d, pairwise influence weights a_ij >= 0 with zero diagonal, and
/// leader couplings c_i >= 0.
struct Network {
  int agents;               // N >= 1
  int dim;                  // d >= 1
  Eigen::MatrixXd weights;  // N x N, a_ii = 0
  Eigen::VectorXd couplings; // length N

  Network(int agents_, int dim_, Eigen::MatrixXd weights_, Eigen::VectorXd couplings_);

  int stacked_size() const { return (agents + 1) * dim; }
};

/// Constant matrices of the stacked linear system D^a x = A x + B u. The
/// leader occupies block 0, so the first d rows of A are zero and B carries
/// the d x d identity in its top block.
struct SystemMatrices {
  Eigen::MatrixXd A; // (N+1)d x (N+1)d
  Eigen::MatrixXd B; // (N+1)d x d
};

/// Stacked state (x_0, x_1, ..., x_N); the leader block is optional so the
/// same type covers the leaderless comparison system.
struct StackedState {
  Eigen::VectorXd data;
  int dim = 1;
  bool has_leader = true;

  int blocks() const { return int(data.size()) / dim; }
  int agents() const { return has_leader ? blocks() - 1 : blocks(); }

  Eigen::VectorXd block(int i) const { return data.segment(i * dim, dim); }
  /// Agent i in 1..N regardless of leader presence.
  Eigen::VectorXd agent(int i) const {
    return data.segment((has_leader ? i : i - 1) * dim, dim);
  }
};

struct CostParams {
  double nu; // control penalty weight, > 0

  explicit CostParams(double nu_) : nu(nu_) {
    if (!(nu > 0.0)) throw std::invalid_argument("CostParams: nu must be positive");
  }
};

SystemMatrices build_system_matrices(const Network& net);

/// Agents-only drift matrix of the leaderless system: couplings c_i removed,
/// s_i reduced to -sum_{j != i} a_ij. Nd x Nd.
Eigen::MatrixXd agents_only_matrix(const Network& net);

/// Right-hand side of the stacked system: block 0 is u, block i is
/// sum_j a_ij (x_j - x_i) + c_i (x_0 - x_i).
Eigen::VectorXd drift(const StackedState& x, const Eigen::VectorXd& u, const Network& net);

/// Running cost f(x, u) = 1/(2N^2) sum_ij |x_i - x_j|^2
///                      + 1/2 sum_i |x_0 - x_i|^2 + nu/2 |u|^2.
double cost_integrand(const StackedState& x, const Eigen::VectorXd& u,
                      const CostParams& params);

/// Gradient of the running cost in x (control-free).
Eigen::VectorXd cost_gradient(const StackedState& x);

/// Same gradient as a constant matrix G with cost_gradient(x) = G x.
Eigen::MatrixXd cost_gradient_matrix(int agents, int dim);

/// Max pairwise distance over the selected blocks.
double consensus_diameter(const StackedState& x, bool include_leader);

} // namespace frachk

#endif
