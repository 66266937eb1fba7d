#ifndef FRACHK_ADJOINT_HPP
#define FRACHK_ADJOINT_HPP

#include <Eigen/Dense>

#include "frachk/forward.hpp"

namespace frachk {

/// Costate samples lambda(t_k), k = 0..n. The terminal sample is zero by
/// construction: lambda lives in the right-integrable class with no singular
/// part at T.
struct CostateTrajectory {
  UniformGrid grid;
  FractionalOrder alpha;
  Eigen::MatrixXd samples; // (N+1)d x (n+1)
  int dim;
};

/// Solves the terminal-value adjoint system
///
///   D^a_{T-} lambda = A^T lambda + G x,   I^(1-a)_{T-} lambda(T) = 0,
///
/// as the mirrored Volterra equation lambda = I^a_{T-}[A^T lambda + G x],
/// reusing the forward weights under the reflection tau = T - t. The state's
/// singular factor makes the source blow up like t^(a-1) at the mirrored
/// terminal cell; that cell is integrated analytically (valid for a > 1/2)
/// with the regular remainder anchored at the neighbouring node, matching
/// the forward solver's treatment of its first cell.
CostateTrajectory solve_adjoint(const StateTrajectory& state, const Network& net);

/// Discrete check of the terminal condition I^(1-a)_{T-}[lambda](T) = 0.
/// At T the product-integration value reduces to the terminal sample against
/// the one-cell kernel mass, so the residual is |lambda_n| h^(1-a)/Gamma(2-a);
/// solver outputs give zero by construction, a synthetic nonzero terminal
/// sample is flagged.
double terminal_condition_residual(const CostateTrajectory& costate);

} // namespace frachk

#endif
