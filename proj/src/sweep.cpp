#include "frachk/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "frachk/special.hpp"

namespace frachk {

void SweepConfig::validate() const {
  if (!(relaxation > 0.0) || relaxation > 1.0)
    throw std::invalid_argument("SweepConfig: relaxation must lie in (0, 1]");
  if (!(relaxation_floor > 0.0) || relaxation_floor > relaxation)
    throw std::invalid_argument("SweepConfig: need 0 < floor <= relaxation");
  if (max_iterations < 1) throw std::invalid_argument("SweepConfig: max_iterations >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("SweepConfig: tolerance must be positive");
}

Eigen::VectorXd pmp_control(const Eigen::VectorXd& lambda0, double nu, double K) {
  if (!(nu > 0.0) || !(K > 0.0))
    throw std::invalid_argument("pmp_control: nu and K must be positive");
  if (!lambda0.allFinite()) throw std::invalid_argument("pmp_control: non-finite costate");
  const double norm = lambda0.norm();
  if (norm <= nu * K) return -lambda0 / nu;
  return -(K / norm) * lambda0;
}

double evaluate_cost(const StateTrajectory& state, const ControlSignal& control,
                     const CostParams& params) {
  const double a = state.alpha.value();
  if (a <= 0.5)
    throw std::invalid_argument(
        "evaluate_cost: the cost integral needs alpha in (1/2, 1); got alpha = " +
        std::to_string(a));
  if (!(state.grid == control.grid))
    throw std::invalid_argument("evaluate_cost: state and control grids differ");
  if (!state.has_leader)
    throw std::invalid_argument("evaluate_cost: state must include the leader block");

  const int n = state.grid.n;
  const double h = state.grid.step();
  const double T = state.grid.horizon;
  const Eigen::VectorXd no_control = Eigen::VectorXd::Zero(state.dim);

  // Split x = sigma t^(a-1)/Gamma(a) + y. The tracking term is the quadratic
  // form (1/2) x^T G x, so it decomposes into a pure singular piece
  // (integrated in closed form), a cross piece t^(a-1) * (sigma^T G y)/Gamma(a)
  // (product integration against the kernel, exact for piecewise-linear
  // sigma^T G y), and a regular piece handled by the composite trapezoid rule
  // together with the control cost. Keeping every piece consistent with the
  // kernel quadrature of the solvers makes the sweep's cost monotone down to
  // round-off.
  // singular_coeff already carries the 1/Gamma(a) factor: x ~ sigma t^(a-1) + y
  const double pure =
      cost_integrand(StackedState{state.singular_coeff, state.dim, true}, no_control,
                     params) *
      std::pow(T, 2.0 * a - 1.0) / (2.0 * a - 1.0);

  const Eigen::MatrixXd G =
      cost_gradient_matrix(state.blocks() - 1, state.dim);
  const Eigen::VectorXd weighted_sigma = G * state.singular_coeff;

  double cross = 0.0;
  if (state.is_singular()) {
    // integral of t^(a-1) c(t) over [0, T] equals Gamma(a) (I^a c(T - .))(T)
    ConvolutionWeights w(state.alpha, state.grid, Scheme::trapezoid);
    std::vector<double> reversed(n + 1);
    for (int k = 0; k <= n; ++k)
      reversed[k] = weighted_sigma.dot(state.regular.col(n - k));
    cross = gamma_fn(a) * w.apply_row(n, reversed);
  }

  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double regular_track =
        0.5 * state.regular.col(k).dot(G * state.regular.col(k));
    const double phi = regular_track +
                       0.5 * params.nu * control.samples.col(k).squaredNorm();
    sum += (k == 0 || k == n) ? 0.5 * phi : phi;
  }
  return pure + cross + h * sum;
}

namespace {

// Costate of the *discrete* problem: the exact transpose of the product
// integration scheme applied to the quadrature of evaluate_cost. With it the
// candidate pmp_control(lambda_k) is a projected Newton step on the (convex)
// discrete cost, so backtracking always finds a non-increasing step and the
// sweep's fixed point is the discrete minimizer. The continuous-form adjoint
// of solve_adjoint stays within O(h) of this one away from t = 0 but is
// inconsistent with every fixed quadrature inside the singular boundary
// layer, which makes it unusable for a monotone line search.
Eigen::MatrixXd discrete_costate(const StateTrajectory& state, const Network& net,
                                 const CostParams& params) {
  const int n = state.grid.n;
  const int m = net.stacked_size();
  const double h = state.grid.step();
  const double a = state.alpha.value();
  const ConvolutionWeights w(state.alpha, state.grid, Scheme::trapezoid);
  const Eigen::MatrixXd At = build_system_matrices(net).A.transpose();
  const Eigen::MatrixXd G = cost_gradient_matrix(net.agents, net.dim);

  // dJ/dy_k: trapezoid weight on the regular tracking term plus the cross
  // term's kernel weight against the singular coefficients
  const Eigen::VectorXd cross_dir = G * state.singular_coeff;
  Eigen::MatrixXd source(m, n + 1);
  for (int k = 0; k <= n; ++k) {
    const double tau = (k == 0 || k == n) ? 0.5 * h : h;
    source.col(k) = tau * (G * state.regular.col(k));
    if (state.is_singular())
      source.col(k) += gamma_fn(a) * w.weight(n, n - k) * cross_dir;
  }

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(
      Eigen::MatrixXd::Identity(m, m) - w.diagonal() * At);
  Eigen::MatrixXd q(m, n + 1);
  Eigen::MatrixXd lambda(m, n + 1);
  for (int j = n; j >= 0; --j) {
    Eigen::VectorXd tail = Eigen::VectorXd::Zero(m);
    for (int k = j + 1; k <= n; ++k) tail.noalias() += w.weight(k, j) * q.col(k);
    if (j == 0) {
      q.col(0) = source.col(0) + At * tail; // w(0, 0) = 0
      lambda.col(0) = tail;
    } else {
      q.col(j) = lu.solve(source.col(j) + At * tail);
      lambda.col(j) = tail + w.diagonal() * q.col(j);
    }
    const double tau = (j == 0 || j == n) ? 0.5 * h : h;
    lambda.col(j) /= tau;
  }
  if (!lambda.allFinite())
    throw std::runtime_error("sweep: non-finite discrete costate");
  return lambda;
}

double control_change(const Eigen::MatrixXd& next, const Eigen::MatrixXd& prev) {
  double diff = 0.0, scale = 0.0;
  for (int k = 0; k < next.cols(); ++k) {
    diff = std::max(diff, (next.col(k) - prev.col(k)).norm());
    scale = std::max(scale, next.col(k).norm());
  }
  return diff / (1.0 + scale);
}

} // namespace

OptimalSolution sweep(const Network& net, FractionalOrder alpha, const UniformGrid& grid,
                      const Eigen::VectorXd& x0, double nu, double K,
                      const SweepConfig& config) {
  config.validate();
  if (alpha.value() <= 0.5 || alpha.value() >= 1.0)
    throw std::invalid_argument("sweep: alpha must lie in (1/2, 1)");
  const CostParams params(nu);

  ControlSignal control = ControlSignal::zero(grid, net.dim, K);
  StateTrajectory state = solve_forward(net, alpha, x0, control);
  double cost = evaluate_cost(state, control, params);
  if (!std::isfinite(cost)) throw std::runtime_error("sweep: non-finite initial cost");

  SweepReport report;
  report.cost_history.push_back(cost);

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    report.iterations = iter;
    const Eigen::MatrixXd costate = discrete_costate(state, net, params);

    Eigen::MatrixXd candidate(net.dim, grid.n + 1);
    for (int k = 0; k <= grid.n; ++k)
      candidate.col(k) = pmp_control(costate.col(k).head(net.dim), nu, K);

    // Relaxed update with halving backtracking on the cost; if no step is
    // non-increasing down to the floor, take the best trial found anyway so
    // the fixed-point iteration can keep creeping toward the stationary
    // control.
    double theta = config.relaxation;
    double best_cost = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd best_samples;
    StateTrajectory best_state = state;
    while (true) {
      Eigen::MatrixXd trial = (1.0 - theta) * control.samples + theta * candidate;
      ControlSignal trial_control(grid, trial, K);
      StateTrajectory trial_state = solve_forward(net, alpha, x0, trial_control);
      const double trial_cost = evaluate_cost(trial_state, trial_control, params);
      if (!std::isfinite(trial_cost))
        throw std::runtime_error("sweep: non-finite cost at iteration " +
                                 std::to_string(iter));
      if (trial_cost < best_cost) {
        best_cost = trial_cost;
        best_samples = std::move(trial);
        best_state = std::move(trial_state);
      }
      if (best_cost <= cost * (1.0 + 1e-12) + 1e-15) break;
      theta *= 0.5;
      if (theta < config.relaxation_floor) break;
    }

    report.final_change = control_change(best_samples, control.samples);
    control = ControlSignal(grid, std::move(best_samples), K);
    state = std::move(best_state);
    cost = best_cost;
    report.cost_history.push_back(cost);

    if (report.final_change < config.tolerance) {
      report.converged = true;
      break;
    }
  }

  CostateTrajectory costate = solve_adjoint(state, net);
  return {std::move(state), std::move(costate), std::move(control), cost,
          std::move(report)};
}

double pmp_pointwise_check(const OptimalSolution& solution, const Network& net,
                           const CostParams& params, int samples) {
  if (samples < 1) throw std::invalid_argument("pmp_pointwise_check: samples >= 1");
  const int n = solution.state.grid.n;
  const int d = net.dim;
  const double K = solution.control.bound;

  std::mt19937 rng(20240817u);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  constexpr int kGridPoints = 10000;

  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const int k = 1 + int((long long)(s) * (n - 1) / std::max(1, samples - 1));
    const StackedState x = sample_state(solution.state, k);
    const Eigen::VectorXd lambda = solution.costate.samples.col(k);
    auto hamiltonian = [&](const Eigen::VectorXd& u) {
      return cost_integrand(x, u, params) + lambda.dot(drift(x, u, net));
    };

    double grid_min = std::numeric_limits<double>::infinity();
    if (d == 1) {
      for (int i = 0; i < kGridPoints; ++i) {
        Eigen::VectorXd u(1);
        u(0) = -K + 2.0 * K * double(i) / double(kGridPoints - 1);
        grid_min = std::min(grid_min, hamiltonian(u));
      }
    } else {
      for (int i = 0; i < kGridPoints; ++i) {
        Eigen::VectorXd u(d);
        do {
          for (int c = 0; c < d; ++c) u(c) = K * unit(rng);
        } while (u.norm() > K);
        grid_min = std::min(grid_min, hamiltonian(u));
      }
    }
    const double violation = hamiltonian(solution.control.samples.col(k)) - grid_min;
    worst = std::max(worst, violation / (1.0 + std::abs(grid_min)));
  }
  return worst;
}

} // namespace frachk
