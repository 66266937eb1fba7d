#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "frachk/forward.hpp"
#include "frachk/special.hpp"
#include "frachk/volterra.hpp"

using namespace frachk;

namespace {

Network single_follower() {
  // D^a x_1 = x_0 - x_1; with the leader pinned at zero this is D^a x = -x.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(1, 1);
  Eigen::VectorXd c(1);
  c << 1.0;
  return Network(1, 1, a, c);
}

Network symmetric_pair() {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  a(0, 1) = a(1, 0) = 1.0;
  return Network(2, 1, a, Eigen::VectorXd::Zero(2));
}

Eigen::MatrixXd rk4_linear(const Eigen::MatrixXd& A, const Eigen::VectorXd& x0,
                           const UniformGrid& grid) {
  Eigen::MatrixXd out(x0.size(), grid.n + 1);
  out.col(0) = x0;
  const double h = grid.step();
  for (int k = 0; k < grid.n; ++k) {
    const Eigen::VectorXd x = out.col(k);
    const Eigen::VectorXd k1 = A * x;
    const Eigen::VectorXd k2 = A * (x + 0.5 * h * k1);
    const Eigen::VectorXd k3 = A * (x + 0.5 * h * k2);
    const Eigen::VectorXd k4 = A * (x + h * k3);
    out.col(k + 1) = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return out;
}

} // namespace

TEST_CASE("control signal enforces the ball constraint") {
  UniformGrid grid(1.0, 4);
  Eigen::MatrixXd u = Eigen::MatrixXd::Constant(1, 5, 2.0);
  CHECK_THROWS_AS(ControlSignal(grid, u, 1.0), std::invalid_argument);
  CHECK_NOTHROW(ControlSignal(grid, u, 2.0));
}

TEST_CASE("homogeneous decoupled system keeps the pure singular mode") {
  Network net(2, 1, Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2));
  UniformGrid grid(1.0, 64);
  FractionalOrder alpha(0.7);
  Eigen::VectorXd x0(3);
  x0 << 0.0, 1.0, -2.0;
  auto traj = solve_forward(net, alpha, x0, ControlSignal::zero(grid, 1, 1.0));
  CHECK(traj.regular.norm() == doctest::Approx(0.0)); // quadrature of zero
  for (int k = 1; k <= grid.n; ++k) {
    const StackedState x = sample_state(traj, k);
    const double mode = std::pow(grid.node(k), alpha.value() - 1.0) / gamma_fn(alpha.value());
    CHECK(x.data(1) == doctest::Approx(1.0 * mode).epsilon(1e-13));
    CHECK(x.data(2) == doctest::Approx(-2.0 * mode).epsilon(1e-13));
  }
}

TEST_CASE("scalar relaxation matches the Mittag-Leffler solution") {
  // D^a x = -x, I^(1-a) x(0) = 1, exact x(t) = t^(a-1) E_{a,a}(-t^a)
  const double a = 0.6;
  UniformGrid grid(1.0, 4096);
  Eigen::VectorXd x0(2);
  x0 << 0.0, 1.0;
  auto traj = solve_forward(single_follower(), FractionalOrder(a), x0,
                            ControlSignal::zero(grid, 1, 1.0));
  double worst = 0.0;
  for (int k = 1; k <= grid.n; ++k) {
    const double t = grid.node(k);
    if (t < 0.1) continue;
    const double exact = std::pow(t, a - 1.0) * mittag_leffler(a, a, -std::pow(t, a));
    const double got = sample_state(traj, k).data(1);
    worst = std::max(worst, std::abs(got - exact) / std::abs(exact));
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("manufactured power solution") {
  const double a = 0.75;

  SUBCASE("x = t^(a+1) is reproduced to round-off") {
    // D^a t^(a+1) = Gamma(a+2) t; the right-hand side along the exact
    // solution is linear in t, which the trapezoid product integration
    // handles exactly, for any coupling matrix
    for (int n : {128, 256, 512, 1024}) {
      UniformGrid grid(1.0, n);
      ConvolutionWeights w(FractionalOrder(a), grid, Scheme::trapezoid);
      Eigen::MatrixXd A(1, 1);
      A << -1.0;
      Eigen::MatrixXd forcing(1, n + 1);
      for (int k = 0; k <= n; ++k) {
        const double t = grid.node(k);
        forcing(0, k) = gamma_fn(a + 2.0) * t + std::pow(t, a + 1.0);
      }
      Eigen::MatrixXd y = solve_linear_volterra(A, forcing, Eigen::VectorXd::Zero(1), w);
      for (int k = 1; k <= n; ++k)
        CHECK(std::abs(y(0, k) - std::pow(grid.node(k), a + 1.0)) <= 1e-12);
    }
  }

  SUBCASE("order >= 1.5 under grid doubling on x = t^(a+2)") {
    // D^a t^(a+2) = Gamma(a+3)/2 t^2: a curved right-hand side, so the
    // quadrature error is genuinely O(h^2) and the doubling ratio measures it
    auto solve_err = [&](int n) {
      UniformGrid grid(1.0, n);
      ConvolutionWeights w(FractionalOrder(a), grid, Scheme::trapezoid);
      Eigen::MatrixXd A(1, 1);
      A << -1.0;
      Eigen::MatrixXd forcing(1, n + 1);
      for (int k = 0; k <= n; ++k) {
        const double t = grid.node(k);
        forcing(0, k) = 0.5 * gamma_fn(a + 3.0) * t * t + std::pow(t, a + 2.0);
      }
      Eigen::MatrixXd y = solve_linear_volterra(A, forcing, Eigen::VectorXd::Zero(1), w);
      double worst = 0.0;
      for (int k = 1; k <= n; ++k)
        worst = std::max(worst, std::abs(y(0, k) - std::pow(grid.node(k), a + 2.0)));
      return worst;
    };
    double prev = solve_err(128);
    for (int n = 256; n <= 1024; n *= 2) {
      const double cur = solve_err(n);
      CHECK(std::log2(prev / cur) >= 1.5);
      prev = cur;
    }
  }
}

TEST_CASE("discrete residual of the solved equation is tiny") {
  const double a = 0.6;
  UniformGrid grid(2.0, 256);
  ConvolutionWeights w(FractionalOrder(a), grid, Scheme::trapezoid);
  auto net = symmetric_pair();
  auto sys = build_system_matrices(net);
  Eigen::VectorXd x0(3);
  x0 << 0.0, 1.5, -0.5;
  Eigen::MatrixXd u = Eigen::MatrixXd::Constant(1, grid.n + 1, 0.25);
  ControlSignal control(grid, u, 1.0);
  auto traj = solve_forward(net, FractionalOrder(a), x0, control);
  const double res = volterra_residual(sys.A, sys.B * control.samples, x0, w, traj.regular);
  const double scale = 1.0 + traj.regular.lpNorm<Eigen::Infinity>();
  CHECK(res <= 1e-10 * scale);
}

TEST_CASE("solution is affine in initial data and control") {
  const double a = 0.7;
  UniformGrid grid(1.0, 128);
  auto net = symmetric_pair();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto random_input = [&]() {
    Eigen::VectorXd x0(3);
    for (int i = 0; i < 3; ++i) x0(i) = dist(rng);
    Eigen::MatrixXd u(1, grid.n + 1);
    for (int k = 0; k <= grid.n; ++k) u(0, k) = dist(rng);
    return std::make_pair(x0, u);
  };
  auto [x0a, ua] = random_input();
  auto [x0b, ub] = random_input();
  auto solve = [&](const Eigen::VectorXd& x0, const Eigen::MatrixXd& u) {
    return solve_forward(net, FractionalOrder(a), x0, ControlSignal(grid, u, 10.0)).regular;
  };
  Eigen::MatrixXd sum_of_solutions = solve(x0a, ua) + solve(x0b, ub);
  Eigen::MatrixXd solution_of_sum =
      solve(x0a + x0b, ua + ub) + solve(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Zero(1, grid.n + 1));
  CHECK((sum_of_solutions - solution_of_sum).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("uncontrolled symmetric pair stays antisymmetric") {
  auto net = symmetric_pair();
  UniformGrid grid(1.0, 256);
  Eigen::VectorXd x0(2);
  x0 << 1.0, -1.0;
  auto traj = solve_uncontrolled(net, FractionalOrder(0.6), grid, x0);
  CHECK_FALSE(traj.has_leader);
  for (int k = 1; k <= grid.n; ++k) {
    const StackedState x = sample_state(traj, k);
    CHECK(std::abs(x.data(0) + x.data(1)) <= 1e-12);
  }
}

TEST_CASE("uncontrolled with zero weights decays mode by mode") {
  Network net(2, 1, Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2));
  UniformGrid grid(1.0, 64);
  const double a = 0.8;
  Eigen::VectorXd x0(2);
  x0 << 2.0, -3.0;
  auto traj = solve_uncontrolled(net, FractionalOrder(a), grid, x0);
  for (int k = 1; k <= grid.n; ++k) {
    const double mode = std::pow(grid.node(k), a - 1.0) / gamma_fn(a);
    CHECK(sample_state(traj, k).data(0) == doctest::Approx(2.0 * mode).epsilon(1e-13));
    CHECK(sample_state(traj, k).data(1) == doctest::Approx(-3.0 * mode).epsilon(1e-13));
  }
}

TEST_CASE("classical limit agrees with Runge-Kutta") {
  auto net = symmetric_pair();
  Eigen::MatrixXd A = agents_only_matrix(net);
  Eigen::VectorXd x0(2);
  x0 << 1.0, 0.0;

  SUBCASE("alpha = 1 against RK4") {
    UniformGrid grid(1.0, 4096);
    auto traj = solve_uncontrolled(net, FractionalOrder(1.0), grid, x0);
    Eigen::MatrixXd ref = rk4_linear(A, x0, grid);
    const Eigen::VectorXd got = sample_state(traj, grid.n).data;
    CHECK((got - ref.col(grid.n)).lpNorm<Eigen::Infinity>() <= 1e-4);
  }
  SUBCASE("alpha = 0.999 lands near the classical solution") {
    UniformGrid grid(1.0, 4096);
    auto traj = solve_uncontrolled(net, FractionalOrder(0.999), grid, x0);
    Eigen::MatrixXd ref = rk4_linear(A, x0, grid);
    const Eigen::VectorXd got = sample_state(traj, grid.n).data;
    CHECK((got - ref.col(grid.n)).norm() <= 1e-2 * (1.0 + ref.col(grid.n).norm()));
  }
}

TEST_CASE("sample_state guards the singular origin") {
  Network net(1, 1, Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Zero(1));
  UniformGrid grid(1.0, 16);
  Eigen::VectorXd x0(2);
  x0 << 0.0, 1.0;
  auto traj = solve_forward(net, FractionalOrder(0.6), x0, ControlSignal::zero(grid, 1, 1.0));
  CHECK_THROWS_WITH_AS(sample_state(traj, 0), doctest::Contains("singular"),
                       std::invalid_argument);
  CHECK_THROWS_AS(sample_state(traj, grid.n + 1), std::out_of_range);

  // terminal value of the homogeneous case
  CHECK(sample_state(traj, grid.n).data(1) ==
        doctest::Approx(std::pow(1.0, 0.6 - 1.0) / gamma_fn(0.6)).epsilon(1e-12));

  auto regular = solve_forward(net, FractionalOrder(0.6), Eigen::VectorXd::Zero(2),
                               ControlSignal::zero(grid, 1, 1.0));
  CHECK_NOTHROW(sample_state(regular, 0));
}
