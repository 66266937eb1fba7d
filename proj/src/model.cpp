#include "frachk/model.hpp"

#include <cmath>
#include <string>

namespace frachk {

Network::Network(int agents_, int dim_, Eigen::MatrixXd weights_, Eigen::VectorXd couplings_)
    : agents(agents_), dim(dim_), weights(std::move(weights_)),
      couplings(std::move(couplings_)) {
  if (agents < 1) throw std::invalid_argument("Network: need at least one agent");
  if (dim < 1) throw std::invalid_argument("Network: state dimension must be >= 1");
  if (weights.rows() != agents || weights.cols() != agents)
    throw std::invalid_argument("Network: weights must be " + std::to_string(agents) + "x" +
                                std::to_string(agents));
  if (couplings.size() != agents)
    throw std::invalid_argument("Network: couplings must have length " +
                                std::to_string(agents));
  for (int i = 0; i < agents; ++i) {
    if (weights(i, i) != 0.0)
      throw std::invalid_argument("Network: self-influence a_" + std::to_string(i + 1) +
                                  std::to_string(i + 1) + " must be zero");
    for (int j = 0; j < agents; ++j)
      if (!std::isfinite(weights(i, j)) || weights(i, j) < 0.0)
        throw std::invalid_argument("Network: weight a_" + std::to_string(i + 1) +
                                    std::to_string(j + 1) + " must be finite and >= 0");
    if (!std::isfinite(couplings(i)) || couplings(i) < 0.0)
      throw std::invalid_argument("Network: coupling c_" + std::to_string(i + 1) +
                                  " must be finite and >= 0");
  }
}

SystemMatrices build_system_matrices(const Network& net) {
  const int N = net.agents;
  const int d = net.dim;
  const int m = (N + 1) * d;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, d);
  B.topLeftCorner(d, d).setIdentity();

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  for (int i = 1; i <= N; ++i) {
    double s = -net.couplings(i - 1);
    for (int j = 1; j <= N; ++j) {
      if (j == i) continue;
      s -= net.weights(i - 1, j - 1);
      A.block(i * d, j * d, d, d) = net.weights(i - 1, j - 1) * I;
    }
    A.block(i * d, 0, d, d) = net.couplings(i - 1) * I;
    A.block(i * d, i * d, d, d) = s * I;
  }
  return {std::move(A), std::move(B)};
}

Eigen::MatrixXd agents_only_matrix(const Network& net) {
  const int N = net.agents;
  const int d = net.dim;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N * d, N * d);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  for (int i = 0; i < N; ++i) {
    double s = 0.0;
    for (int j = 0; j < N; ++j) {
      if (j == i) continue;
      s -= net.weights(i, j);
      A.block(i * d, j * d, d, d) = net.weights(i, j) * I;
    }
    A.block(i * d, i * d, d, d) = s * I;
  }
  return A;
}

Eigen::VectorXd drift(const StackedState& x, const Eigen::VectorXd& u, const Network& net) {
  if (!x.has_leader) throw std::invalid_argument("drift: state has no leader block");
  if (x.dim != net.dim || x.blocks() != net.agents + 1)
    throw std::invalid_argument("drift: state shape does not match the network");
  if (u.size() != net.dim)
    throw std::invalid_argument("drift: control block has size " + std::to_string(u.size()) +
                                ", expected " + std::to_string(net.dim));
  const int N = net.agents;
  const int d = net.dim;
  Eigen::VectorXd out(x.data.size());
  out.head(d) = u;
  const Eigen::VectorXd x0 = x.block(0);
  for (int i = 1; i <= N; ++i) {
    Eigen::VectorXd xi = x.block(i);
    Eigen::VectorXd acc = net.couplings(i - 1) * (x0 - xi);
    for (int j = 1; j <= N; ++j) {
      if (j == i) continue;
      acc += net.weights(i - 1, j - 1) * (x.block(j) - xi);
    }
    out.segment(i * d, d) = acc;
  }
  return out;
}

double cost_integrand(const StackedState& x, const Eigen::VectorXd& u,
                      const CostParams& params) {
  if (!x.has_leader) throw std::invalid_argument("cost_integrand: leader block required");
  const int N = x.agents();
  double pairwise = 0.0;
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= N; ++j) pairwise += (x.block(i) - x.block(j)).squaredNorm();
  double leader_gap = 0.0;
  const Eigen::VectorXd x0 = x.block(0);
  for (int i = 1; i <= N; ++i) leader_gap += (x0 - x.block(i)).squaredNorm();
  return pairwise / (2.0 * double(N) * double(N)) + 0.5 * leader_gap +
         0.5 * params.nu * u.squaredNorm();
}

Eigen::VectorXd cost_gradient(const StackedState& x) {
  if (!x.has_leader) throw std::invalid_argument("cost_gradient: leader block required");
  const int N = x.agents();
  const int d = x.dim;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (int i = 1; i <= N; ++i) mean += x.block(i);
  mean /= double(N);

  Eigen::VectorXd out(x.data.size());
  const Eigen::VectorXd x0 = x.block(0);
  out.head(d) = double(N) * x0 - double(N) * mean;
  for (int i = 1; i <= N; ++i) {
    const Eigen::VectorXd xi = x.block(i);
    out.segment(i * d, d) = (2.0 / double(N)) * (xi - mean) + (xi - x0);
  }
  return out;
}

Eigen::MatrixXd cost_gradient_matrix(int agents, int dim) {
  const int N = agents;
  const int d = dim;
  const int m = (N + 1) * d;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  G.block(0, 0, d, d) = double(N) * I;
  for (int j = 1; j <= N; ++j) G.block(0, j * d, d, d) = -I;
  for (int i = 1; i <= N; ++i) {
    G.block(i * d, 0, d, d) = -I;
    for (int j = 1; j <= N; ++j) {
      double coeff = -2.0 / double(N * N);
      if (j == i) coeff += 2.0 / double(N) + 1.0;
      G.block(i * d, j * d, d, d) += coeff * I;
    }
  }
  return G;
}

double consensus_diameter(const StackedState& x, bool include_leader) {
  const int first = (x.has_leader && !include_leader) ? 1 : 0;
  double diameter = 0.0;
  for (int i = first; i < x.blocks(); ++i)
    for (int j = i + 1; j < x.blocks(); ++j)
      diameter = std::max(diameter, (x.block(i) - x.block(j)).norm());
  return diameter;
}

} // namespace frachk
