#ifndef FRACHK_SWEEP_HPP
#define FRACHK_SWEEP_HPP

#include <vector>

#include <Eigen/Dense>

#include "frachk/adjoint.hpp"
#include "frachk/forward.hpp"

namespace frachk {

struct SweepConfig {
  double relaxation = 0.5;      // theta, in (0, 1]
  int max_iterations = 500;
  double tolerance = 1e-6;      // relative sup-norm control change
  double relaxation_floor = 1e-3;

  void validate() const;
};

struct SweepReport {
  int iterations = 0;
  std::vector<double> cost_history; // one value per accepted iterate, non-increasing
  double final_change = 0.0;
  bool converged = false;
};

struct OptimalSolution {
  StateTrajectory state;
  CostateTrajectory costate;
  ControlSignal control;
  double cost;
  SweepReport report;
};

/// Pointwise Hamiltonian minimizer over the ball |u| <= K:
/// argmin of nu/2 |u|^2 + <lambda0, u> is -lambda0/nu, projected onto the
/// ball when |lambda0| > nu K.
Eigen::VectorXd pmp_control(const Eigen::VectorXd& lambda0, double nu, double K);

/// Cost functional along a trajectory. The tracking term is quadratic, so the
/// pure singular mode contributes Q t^(2a-2)/Gamma(a)^2 with a known quadratic
/// form Q of the singular coefficients; that piece is integrated exactly and
/// the remainder -- which vanishes at t = 0 with the regular part of the
/// state -- by the composite trapezoid rule over all nodes. Needs a > 1/2 so
/// the singular piece is integrable.
double evaluate_cost(const StateTrajectory& state, const ControlSignal& control,
                     const CostParams& params);

/// Forward-backward sweep: iterate forward solve, adjoint solve, pointwise
/// control minimization with relaxation and cost-based backtracking, until
/// the control change drops below tolerance.
OptimalSolution sweep(const Network& net, FractionalOrder alpha, const UniformGrid& grid,
                      const Eigen::VectorXd& x0, double nu, double K,
                      const SweepConfig& config);

/// Brute-force PMP verification: at `samples` evenly spread grid nodes,
/// minimizes the Hamiltonian over a dense discretization of the control ball
/// and returns the worst value of (H(u*) - min_grid H) / (1 + |H|), the
/// violation scaled by the local Hamiltonian magnitude.
double pmp_pointwise_check(const OptimalSolution& solution, const Network& net,
                           const CostParams& params, int samples);

} // namespace frachk

#endif
