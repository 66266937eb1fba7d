#ifndef FRACHK_GRID_HPP
#define FRACHK_GRID_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace frachk {

/// Order of the fractional operators. Valid range is (0, 1]; the closed
/// right end admits the classical limit used by sanity checks. Control
/// problems need the tighter range (1/2, 1) and should go through
/// `for_control`.
class FractionalOrder {
public:
  explicit FractionalOrder(double alpha) : alpha_(alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha > 1.0)
      throw std::invalid_argument("FractionalOrder: alpha must lie in (0, 1], got " +
                                  std::to_string(alpha));
  }

  static FractionalOrder for_control(double alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.5 || alpha >= 1.0)
      throw std::invalid_argument(
          "FractionalOrder: control problems require alpha in (1/2, 1), got " +
          std::to_string(alpha));
    return FractionalOrder(alpha);
  }

  double value() const { return alpha_; }

private:
  double alpha_;
};

/// Uniform grid t_k = k * T / n, k = 0..n.
struct UniformGrid {
  double horizon;
  int n;

  UniformGrid(double horizon_, int n_) : horizon(horizon_), n(n_) {
    if (!std::isfinite(horizon) || horizon <= 0.0)
      throw std::invalid_argument("UniformGrid: horizon must be positive and finite");
    if (n < 2) throw std::invalid_argument("UniformGrid: need at least 2 nodes, got n = " +
                                           std::to_string(n));
    if (!std::isfinite(step()))
      throw std::invalid_argument("UniformGrid: non-finite step");
  }

  double step() const { return horizon / double(n); }
  double node(int k) const { return double(k) * step(); }

  bool operator==(const UniformGrid& other) const {
    return horizon == other.horizon && n == other.n;
  }
};

} // namespace frachk

#endif
