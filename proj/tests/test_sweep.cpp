#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "frachk/special.hpp"
#include "frachk/sweep.hpp"

using namespace frachk;

namespace {

Network pairs_network() {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
  a(0, 1) = a(1, 0) = 1.0;
  a(2, 3) = a(3, 2) = 1.0;
  Eigen::VectorXd c(4);
  c << 1.0, 0.0, 1.0, 0.0;
  return Network(4, 1, a, c);
}

} // namespace

TEST_CASE("scalar control law hand values, nu = 2, K = 1") {
  const double lambdas[] = {-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0};
  const double expected[] = {1.0, 1.0, 0.5, 0.0, -0.5, -1.0, -1.0};
  for (int i = 0; i < 7; ++i) {
    Eigen::VectorXd l(1);
    l(0) = lambdas[i];
    CHECK(pmp_control(l, 2.0, 1.0)(0) == doctest::Approx(expected[i]).epsilon(1e-15));
  }
}

TEST_CASE("saturation at the larger bound") {
  Eigen::VectorXd l(1);
  l(0) = -30.0;
  CHECK(pmp_control(l, 2.0, 10.0)(0) == doctest::Approx(10.0).epsilon(1e-15));
  l(0) = -15.0;
  CHECK(pmp_control(l, 2.0, 10.0)(0) == doctest::Approx(7.5).epsilon(1e-15));
}

TEST_CASE("control law minimizes the control part of the Hamiltonian") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int d : {1, 2, 3}) {
    for (int trial = 0; trial < 200; ++trial) {
      const double nu = 0.5 + std::abs(dist(rng));
      const double K = 0.5 + std::abs(dist(rng));
      Eigen::VectorXd lambda(d);
      for (int c = 0; c < d; ++c) lambda(c) = dist(rng);
      Eigen::VectorXd star = pmp_control(lambda, nu, K);
      REQUIRE(star.norm() <= K * (1.0 + 1e-12));
      auto value = [&](const Eigen::VectorXd& u) {
        return 0.5 * nu * u.squaredNorm() + lambda.dot(u);
      };
      for (int probe = 0; probe < 50; ++probe) {
        Eigen::VectorXd u(d);
        do {
          for (int c = 0; c < d; ++c) u(c) = K * dist(rng) / 5.0;
        } while (u.norm() > K);
        CHECK(value(star) <= value(u) + 1e-12);
      }
    }
  }
}

TEST_CASE("pmp_control rejects bad inputs") {
  Eigen::VectorXd l = Eigen::VectorXd::Ones(2);
  CHECK_THROWS_AS(pmp_control(l, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pmp_control(l, 1.0, -1.0), std::invalid_argument);
  l(0) = std::nan("");
  CHECK_THROWS_AS(pmp_control(l, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("sweep config validation") {
  SweepConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.relaxation = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SweepConfig{};
  cfg.tolerance = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SweepConfig{};
  cfg.relaxation_floor = 0.9;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SweepConfig{};
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("cost of a constant regular trajectory is the exact time integral") {
  // consensus state, constant unit control: the running cost is identically
  // nu/2 = 1, and the trapezoid rule integrates constants exactly
  const double a = 0.8;
  UniformGrid grid(2.0, 64);
  StateTrajectory state{grid, FractionalOrder(a), Eigen::VectorXd::Zero(5),
                        Eigen::MatrixXd::Constant(5, grid.n + 1, 1.0), 1, true};
  ControlSignal control(grid, Eigen::MatrixXd::Constant(1, grid.n + 1, 1.0), 1.0);
  CHECK(evaluate_cost(state, control, CostParams(2.0)) ==
        doctest::Approx(grid.horizon).epsilon(1e-13));
}

TEST_CASE("cost integrates the pure singular gap profile exactly") {
  // leader at zero, one decoupled agent carrying the pure mode t^(a-1)/Gamma(a):
  // phi(t) = (1/2) t^(2a-2)/Gamma(a)^2, integral = T^(2a-1)/(2(2a-1)Gamma(a)^2)
  Network net(1, 1, Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Zero(1));
  const double a = 0.75;
  UniformGrid grid(1.0, 2048);
  Eigen::VectorXd x0(2);
  x0 << 0.0, 1.0;
  auto state = solve_forward(net, FractionalOrder(a), x0, ControlSignal::zero(grid, 1, 1.0));
  const double got = evaluate_cost(state, ControlSignal::zero(grid, 1, 1.0), CostParams(2.0));
  const double g = gamma_fn(a);
  const double exact = std::pow(grid.horizon, 2.0 * a - 1.0) / (2.0 * (2.0 * a - 1.0) * g * g);
  CHECK(got == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("cost converges for a coupled singular trajectory") {
  // D^a x = -x with I^(1-a) x(0) = 1 against the pinned leader: the gap is
  // t^(a-1) E_{a,a}(-t^a); compare the cost against a fine-grid reference.
  Network net(1, 1, Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Ones(1));
  const double a = 0.7;
  Eigen::VectorXd x0(2);
  x0 << 0.0, 1.0;
  auto cost_at = [&](int n) {
    UniformGrid grid(1.0, n);
    auto state =
        solve_forward(net, FractionalOrder(a), x0, ControlSignal::zero(grid, 1, 1.0));
    return evaluate_cost(state, ControlSignal::zero(grid, 1, 1.0), CostParams(2.0));
  };
  const double ref = cost_at(16384);
  CHECK(std::abs(cost_at(1024) - ref) <= 5e-4 * (1.0 + std::abs(ref)));
  CHECK(std::abs(cost_at(4096) - ref) < std::abs(cost_at(1024) - ref));
}

TEST_CASE("cost guards the order range and grid mismatch") {
  UniformGrid grid(1.0, 16);
  StateTrajectory state{grid, FractionalOrder(0.4), Eigen::VectorXd::Zero(2),
                        Eigen::MatrixXd::Zero(2, grid.n + 1), 1, true};
  CHECK_THROWS_AS(evaluate_cost(state, ControlSignal::zero(grid, 1, 1.0), CostParams(1.0)),
                  std::invalid_argument);
  StateTrajectory ok{grid, FractionalOrder(0.7), Eigen::VectorXd::Zero(2),
                     Eigen::MatrixXd::Zero(2, grid.n + 1), 1, true};
  UniformGrid other(1.0, 32);
  CHECK_THROWS_AS(evaluate_cost(ok, ControlSignal::zero(other, 1, 1.0), CostParams(1.0)),
                  std::invalid_argument);
}

TEST_CASE("consensus initial data is already optimal") {
  auto net = pairs_network();
  UniformGrid grid(1.0, 128);
  Eigen::VectorXd x0 = Eigen::VectorXd::Constant(5, 1.2);
  auto sol = sweep(net, FractionalOrder(0.7), grid, x0, 2.0, 1.0, SweepConfig{});
  CHECK(sol.report.converged);
  CHECK(sol.report.iterations == 1);
  CHECK(sol.cost <= 1e-20);
  CHECK(sol.control.samples.norm() <= 1e-15);
}

TEST_CASE("sweep on a small asymmetric problem") {
  auto net = pairs_network();
  UniformGrid grid(1.0, 256);
  Eigen::VectorXd x0(5);
  x0 << 0.0, -1.0, -0.5, 0.5, 1.0;
  auto sol = sweep(net, FractionalOrder(0.6), grid, x0, 2.0, 1.0, SweepConfig{});

  SUBCASE("converges and beats the zero control") {
    CHECK(sol.report.converged);
    ControlSignal zero = ControlSignal::zero(grid, 1, 1.0);
    auto free_state = solve_forward(net, FractionalOrder(0.6), x0, zero);
    const double free_cost = evaluate_cost(free_state, zero, CostParams(2.0));
    CHECK(sol.cost <= free_cost + 1e-12);
  }
  SUBCASE("cost history is non-increasing") {
    for (std::size_t i = 1; i < sol.report.cost_history.size(); ++i)
      CHECK(sol.report.cost_history[i] <=
            sol.report.cost_history[i - 1] * (1.0 + 1e-12) + 1e-15);
  }
  SUBCASE("control stays feasible") {
    for (int k = 0; k <= grid.n; ++k) CHECK(std::abs(sol.control.samples(0, k)) <= 1.0 + 1e-12);
  }
  SUBCASE("reported state solves the reported control") {
    auto replay = solve_forward(net, FractionalOrder(0.6), x0, sol.control);
    CHECK((replay.regular - sol.state.regular).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
  SUBCASE("control is close to the pointwise minimizer of the final costate") {
    // away from the singular layer near t = 0, where the discrete and
    // continuous costates legitimately differ at fixed resolution
    double worst = 0.0;
    for (int k = grid.n / 10; k <= grid.n; ++k) {
      Eigen::VectorXd star = pmp_control(sol.costate.samples.col(k).head(1), 2.0, 1.0);
      worst = std::max(worst, std::abs(star(0) - sol.control.samples(0, k)));
    }
    CHECK(worst <= 1e-3);
  }
  SUBCASE("brute-force Hamiltonian check") {
    CHECK(pmp_pointwise_check(sol, net, CostParams(2.0), 24) <= 1e-6);
  }
}

TEST_CASE("sweep rejects orders outside the optimality range") {
  auto net = pairs_network();
  UniformGrid grid(1.0, 32);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(5);
  CHECK_THROWS_AS(sweep(net, FractionalOrder(0.5), grid, x0, 2.0, 1.0, SweepConfig{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep(net, FractionalOrder(1.0), grid, x0, 2.0, 1.0, SweepConfig{}),
                  std::invalid_argument);
}
