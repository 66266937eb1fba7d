#include "frachk/volterra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "frachk/special.hpp"

namespace frachk {

namespace {

struct Problem {
  const Eigen::MatrixXd& A;
  const Eigen::MatrixXd& forcing;
  const Eigen::VectorXd& x0;
  const ConvolutionWeights& w;
  int m;
  int n;
  double a;
  bool singular;
  double sing_scale; // 1 / Gamma(2a)

  Problem(const Eigen::MatrixXd& A_, const Eigen::MatrixXd& forcing_,
          const Eigen::VectorXd& x0_, const ConvolutionWeights& w_)
      : A(A_), forcing(forcing_), x0(x0_), w(w_), m(int(A_.rows())),
        n(w_.grid().n), a(w_.alpha().value()), singular(x0_.norm() > 0.0),
        sing_scale(1.0 / gamma_fn(2.0 * a)) {
    if (w.scheme() != Scheme::trapezoid)
      throw std::invalid_argument("solve_linear_volterra: trapezoid weights required");
    if (A.cols() != m) throw std::invalid_argument("solve_linear_volterra: A must be square");
    if (forcing.rows() != m || forcing.cols() != n + 1)
      throw std::invalid_argument("solve_linear_volterra: forcing must be " +
                                  std::to_string(m) + " x " + std::to_string(n + 1));
    if (x0.size() != m)
      throw std::invalid_argument("solve_linear_volterra: x0 size mismatch");
  }

  // I^a applied to the singular mode x0 t^(a-1)/Gamma(a), evaluated at t_k.
  Eigen::VectorXd singular_image(int k) const {
    if (!singular) return Eigen::VectorXd::Zero(m);
    const double t = w.grid().node(k);
    return (std::pow(t, 2.0 * a - 1.0) * sing_scale) * (A * x0);
  }
};

} // namespace

Eigen::MatrixXd solve_linear_volterra(const Eigen::MatrixXd& A,
                                      const Eigen::MatrixXd& forcing,
                                      const Eigen::VectorXd& x0,
                                      const ConvolutionWeights& weights) {
  Problem p(A, forcing, x0, weights);
  const int m = p.m;
  const int n = p.n;

  const double wkk = weights.diagonal();
  Eigen::MatrixXd step = Eigen::MatrixXd::Identity(m, m) - wkk * A;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(step);
  if (!lu.isInvertible())
    throw std::runtime_error(
        "solve_linear_volterra: singular step matrix I - w*A (h = " +
        std::to_string(weights.grid().step()) + ", |A| = " + std::to_string(A.norm()) +
        "); refine the grid");

  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(m, n + 1);
  // v_j = A y_j + c_j, accumulated as the history becomes known
  Eigen::MatrixXd v(m, n + 1);
  v.col(0) = forcing.col(0); // y_0 = 0

  Eigen::VectorXd rhs(m);
  for (int k = 1; k <= n; ++k) {
    rhs = p.singular_image(k);
    rhs.noalias() += weights.weight(k, 0) * v.col(0);
    for (int j = 1; j < k; ++j) rhs.noalias() += weights.weight(k, j) * v.col(j);
    rhs.noalias() += wkk * forcing.col(k);
    y.col(k) = lu.solve(rhs);
    if (!y.col(k).allFinite())
      throw std::runtime_error("solve_linear_volterra: solution blew up at node " +
                               std::to_string(k) + " (t = " +
                               std::to_string(weights.grid().node(k)) + ")");
    v.col(k).noalias() = A * y.col(k);
    v.col(k) += forcing.col(k);
  }
  return y;
}

double volterra_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& forcing,
                         const Eigen::VectorXd& x0, const ConvolutionWeights& weights,
                         const Eigen::MatrixXd& regular) {
  Problem p(A, forcing, x0, weights);
  if (regular.rows() != p.m || regular.cols() != p.n + 1)
    throw std::invalid_argument("volterra_residual: candidate shape mismatch");

  Eigen::MatrixXd v = A * regular + forcing;
  double worst = regular.col(0).lpNorm<Eigen::Infinity>();
  for (int k = 1; k <= p.n; ++k) {
    Eigen::VectorXd rhs = p.singular_image(k);
    for (int j = 0; j <= k; ++j) rhs.noalias() += weights.weight(k, j) * v.col(j);
    worst = std::max(worst, (regular.col(k) - rhs).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

} // namespace frachk
