#include "frachk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "frachk/special.hpp"

namespace frachk {

ConvolutionWeights::ConvolutionWeights(FractionalOrder alpha, const UniformGrid& grid,
                                       Scheme scheme)
    : alpha_(alpha), grid_(grid), scheme_(scheme) {
  const double a = alpha_.value();
  const double h = grid_.step();
  const int n = grid_.n;

  pow_a_.resize(n + 2);
  pow_a1_.resize(n + 2);
  for (int m = 0; m <= n + 1; ++m) {
    pow_a_[m] = std::pow(double(m), a);
    pow_a1_[m] = std::pow(double(m), a + 1.0);
  }

  if (scheme_ == Scheme::rectangle) {
    scale_ = std::pow(h, a) / gamma_fn(a + 1.0);
    lag_.resize(n + 1, 0.0);
    for (int m = 1; m <= n; ++m) lag_[m] = pow_a_[m] - pow_a_[m - 1];
  } else {
    scale_ = std::pow(h, a) / gamma_fn(a + 2.0);
    // interior second difference in m = k - j
    lag_.resize(n + 1, 0.0);
    for (int m = 1; m <= n - 1; ++m)
      lag_[m] = pow_a1_[m + 1] - 2.0 * pow_a1_[m] + pow_a1_[m - 1];
  }
  for (double w : lag_)
    if (!std::isfinite(w)) throw std::invalid_argument("ConvolutionWeights: non-finite weight");
}

double ConvolutionWeights::weight(int k, int j) const {
  if (k < 0 || k > grid_.n || j < 0 || j > k)
    throw std::out_of_range("ConvolutionWeights::weight: indices out of range");
  if (k == 0) return 0.0;
  if (scheme_ == Scheme::rectangle) {
    if (j == k) return 0.0;
    return scale_ * lag_[k - j];
  }
  const double a = alpha_.value();
  if (j == k) return scale_;
  if (j == 0) return scale_ * (pow_a1_[k - 1] - (double(k) - 1.0 - a) * pow_a_[k]);
  return scale_ * lag_[k - j];
}

double ConvolutionWeights::diagonal() const {
  if (scheme_ != Scheme::trapezoid)
    throw std::logic_error("ConvolutionWeights::diagonal: trapezoid only");
  return scale_;
}

ConvolutionWeights::CellWeights ConvolutionWeights::cell_weights(int k, int cell) const {
  if (scheme_ != Scheme::trapezoid)
    throw std::logic_error("ConvolutionWeights::cell_weights: trapezoid only");
  if (cell < 0 || cell >= k || k > grid_.n)
    throw std::out_of_range("ConvolutionWeights::cell_weights: indices out of range");
  const double a = alpha_.value();
  const double h = grid_.step();
  const int m = k - cell; // left end of the cell sits at lag m, right end at m - 1
  const double i0 = (pow_a_[m] - pow_a_[m - 1]) / a;
  const double i1 = (pow_a1_[m] - pow_a1_[m - 1]) / (a + 1.0);
  const double c = std::pow(h, a) / gamma_fn(a);
  return {c * (i1 - double(m - 1) * i0), c * (double(m) * i0 - i1)};
}

namespace {

void check_finite(const std::vector<double>& samples, int first) {
  for (int j = first; j < int(samples.size()); ++j)
    if (!std::isfinite(samples[j]))
      throw std::invalid_argument("rl_integral: non-finite sample at node " +
                                  std::to_string(j));
}

} // namespace

std::vector<double> rl_integral_left(const std::vector<double>& samples,
                                     const ConvolutionWeights& weights,
                                     bool first_node_singular) {
  const int n = weights.grid().n;
  if (int(samples.size()) != n + 1)
    throw std::invalid_argument("rl_integral_left: expected " + std::to_string(n + 1) +
                                " samples, got " + std::to_string(samples.size()));
  if (first_node_singular && weights.scheme() != Scheme::rectangle)
    throw std::invalid_argument(
        "rl_integral_left: singular first node requires the rectangle scheme");
  check_finite(samples, first_node_singular ? 1 : 0);

  std::vector<double> out(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) {
      const int src = (first_node_singular && j == 0) ? 1 : j;
      acc += weights.weight(k, j) * samples[src];
    }
    out[k] = acc;
  }
  return out;
}

double ConvolutionWeights::apply_row(int k, const std::vector<double>& samples) const {
  if (int(samples.size()) != grid_.n + 1)
    throw std::invalid_argument("apply_row: sample count does not match the grid");
  double acc = 0.0;
  for (int j = 0; j <= k; ++j) acc += weight(k, j) * samples[j];
  return acc;
}

std::vector<double> rl_integral_right(const std::vector<double>& samples,
                                      const ConvolutionWeights& weights,
                                      bool last_node_singular) {
  std::vector<double> reversed(samples.rbegin(), samples.rend());
  std::vector<double> mirrored = rl_integral_left(reversed, weights, last_node_singular);
  std::reverse(mirrored.begin(), mirrored.end());
  return mirrored;
}

} // namespace frachk
