#ifndef FRACHK_KERNELS_HPP
#define FRACHK_KERNELS_HPP

#include <vector>

#include "frachk/grid.hpp"

namespace frachk {

enum class Scheme { rectangle, trapezoid };

/// Product-integration weights for the left Riemann-Liouville integral
///
///   (I^a f)(t_k) ~= sum_j w(k, j) f(t_j),
///
/// where the weakly singular kernel (t_k - s)^(a-1) / Gamma(a) is integrated
/// exactly against a piecewise-constant (rectangle) or piecewise-linear
/// (trapezoid) interpolant of f. Interior weights depend only on the lag
/// k - j, so storage is O(n): one lag table plus closed forms for the two
/// boundary columns.
class ConvolutionWeights {
public:
  ConvolutionWeights(FractionalOrder alpha, const UniformGrid& grid, Scheme scheme);

  /// w(k, j) for 0 <= j <= k <= n. Rectangle rows stop at j = k - 1
  /// (the diagonal weight is zero).
  double weight(int k, int j) const;

  /// Contribution of cell [t_i, t_{i+1}] to target node k, split between the
  /// cell's left and right node (trapezoid only). Standard rows satisfy
  /// w(k, j) = right(cell j-1) + left(cell j); custom rows for singular
  /// endpoints are assembled from these pieces.
  struct CellWeights {
    double left;
    double right;
  };
  CellWeights cell_weights(int k, int cell) const;

  /// sum_j w(k, j) * f(t_j)
  double apply_row(int k, const std::vector<double>& samples) const;

  FractionalOrder alpha() const { return alpha_; }
  const UniformGrid& grid() const { return grid_; }
  Scheme scheme() const { return scheme_; }

  /// Diagonal trapezoid weight w(k, k); constant across rows.
  double diagonal() const;

private:
  FractionalOrder alpha_;
  UniformGrid grid_;
  Scheme scheme_;
  double scale_;            // h^a / Gamma(a+1) (rect) or h^a / Gamma(a+2) (trap)
  std::vector<double> lag_; // rect: m^a - (m-1)^a; trap interior second difference
  std::vector<double> pow_a_;  // m^a,   m = 0..n
  std::vector<double> pow_a1_; // m^(a+1)
};

/// Left RL integral on the grid; result[0] = 0 by the limit convention.
/// With `first_node_singular` set, the rectangle scheme anchors the first
/// cell at t_1 so the (possibly undefined) sample at node 0 is never read.
std::vector<double> rl_integral_left(const std::vector<double>& samples,
                                     const ConvolutionWeights& weights,
                                     bool first_node_singular = false);

/// Right RL integral, implemented as the time-mirror of the left one:
/// reverse(left(reverse(f))). result[n] = 0.
std::vector<double> rl_integral_right(const std::vector<double>& samples,
                                      const ConvolutionWeights& weights,
                                      bool last_node_singular = false);

} // namespace frachk

#endif
