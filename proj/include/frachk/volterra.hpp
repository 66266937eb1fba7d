#ifndef FRACHK_VOLTERRA_HPP
#define FRACHK_VOLTERRA_HPP

#include <Eigen/Dense>

#include "frachk/kernels.hpp"

namespace frachk {

/// Solves the weakly singular Volterra equation equivalent to
///
///   D^a x = A x + c(t),   I^(1-a) x(0) = x0,
///
/// by splitting x(t) = x0 t^(a-1)/Gamma(a) + y(t). The singular mode is a
/// pure power function, so its image under I^a has the closed form
/// A x0 t^(2a-1)/Gamma(2a) and never enters the quadrature; the regular
/// remainder y (with y(0) = 0) satisfies
///
///   y(t_k) = A x0 t_k^(2a-1)/Gamma(2a) + sum_j w(k,j) (A y_j + c_j),
///
/// solved implicitly node by node. The step matrix I - w(k,k) A is constant
/// across rows and factored once.
///
/// `forcing` holds c(t_j) column-wise, m x (n+1). Returns the regular part
/// y, m x (n+1), column 0 zero.
Eigen::MatrixXd solve_linear_volterra(const Eigen::MatrixXd& A,
                                      const Eigen::MatrixXd& forcing,
                                      const Eigen::VectorXd& x0,
                                      const ConvolutionWeights& weights);

/// Max-norm residual of the discrete equation above for a candidate regular
/// part; used by property tests.
double volterra_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& forcing,
                         const Eigen::VectorXd& x0, const ConvolutionWeights& weights,
                         const Eigen::MatrixXd& regular);

} // namespace frachk

#endif
