#pragma once

// Chebyshev and Jacobi polynomials, the orthogonality weights of the
// implemented families, and adaptive quadrature with declared singular points.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace opoly {

/// T_k by the three-term recurrence; works for real and complex arguments.
template <class T>
T chebyshev_t(int k, T x) {
  if (k <= 0) return T(1);
  T prev(1);
  T cur = x;
  for (int j = 1; j < k; ++j) {
    T next = T(2) * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// U_k by the three-term recurrence; U_{-1} = 0.
template <class T>
T chebyshev_u(int k, T x) {
  if (k < 0) return T(0);
  if (k == 0) return T(1);
  T prev(1);
  T cur = T(2) * x;
  for (int j = 1; j < k; ++j) {
    T next = T(2) * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Jacobi polynomial P_n^{(a,b)}(t) from the standard three-term recurrence,
/// a, b > -1.
template <class T>
T jacobi_p(int n, double a, double b, T t) {
  if (n <= 0) return T(1);
  T prev(1);
  T cur = T((a - b) / 2.0) + T((a + b + 2.0) / 2.0) * t;
  for (int m = 2; m <= n; ++m) {
    const double md = m;
    const double s = 2.0 * md + a + b;
    const double c1 = 2.0 * md * (md + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (a * a - b * b);
    const double c3 = (s - 1.0) * s * (s - 2.0);
    const double c4 = 2.0 * (md + a - 1.0) * (md + b - 1.0) * s;
    T next = ((T(c2) + T(c3) * t) * cur - T(c4) * prev) / T(c1);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Zeros of T_k, cos((2j-1)pi/(2k)), ascending.
std::vector<double> chebyshev_t_zeros(int k);
/// Zeros of U_degree, cos(j pi/(degree+1)), ascending.
std::vector<double> chebyshev_u_zeros(int degree);

/// A quadrature node's position relative to the piece it lies in. Pieces are
/// bounded by consecutive singular points (or the interval ends). Each
/// distance is exact near its own endpoint, so integrands can resolve endpoint
/// singularities without cancellation.
struct NodeOffsets {
  double from_left;
  double from_right;
  double left;
  double right;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  /// Accepted absolute error; the target is max(rel_tol * L1, abs_tol).
  double abs_tol = 0.0;
  int max_depth = 14;
};

/// Integral over [lo, hi] split at every interior singular point. Each piece
/// uses double-exponential (tanh-sinh) quadrature, falling back to bisection
/// when the error estimate misses the target. Throws ConvergenceError past
/// the subdivision cap.
double adaptive_integrate(const std::function<double(double, NodeOffsets)>& f, double lo,
                          double hi, std::vector<double> singular_points = {},
                          QuadratureOptions options = {});
double adaptive_integrate(const std::function<double(double)>& f, double lo, double hi,
                          std::vector<double> singular_points = {},
                          QuadratureOptions options = {});

enum class WeightKind { GenHermite, GenUltraspherical, SievedFirst, SievedSecond };

/// Unnormalized weights:
///   GenHermite         |x|^gamma exp(-x^2)                         on R
///   GenUltraspherical  |x|^gamma (1-x^2)^(alpha-1/2)               on [-1,1]
///   SievedFirst        (1-x^2)^(alpha-1/2) |U_{k-1}|^{2alpha} |T_k|^gamma
///   SievedSecond       (1-x^2)^(alpha+1/2) |U_{k-1}|^{2alpha} |T_k|^gamma
class WeightFunction {
 public:
  static WeightFunction gen_hermite(double gamma);
  static WeightFunction gen_ultraspherical(double alpha, double gamma);
  static WeightFunction sieved_first(double alpha, double gamma, int k);
  static WeightFunction sieved_second(double alpha, double gamma, int k);

  WeightKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }
  int k() const { return k_; }

  /// Support; the Hermite range is truncated at |x| <= max(10, 3 sqrt(n+gamma))
  /// for a moment of degree n (the tail is below exp(-100)).
  double support_lo(int degree = 0) const;
  double support_hi(int degree = 0) const;
  /// Zeros/poles of the weight inside its support (endpoints included).
  std::vector<double> singular_points() const;

  double operator()(double x) const;

  /// Unnormalized moment of x^j.
  double raw_moment(int j) const;
  /// Moment of x^j of the normalized (probability) weight.
  double moment(int j) const;

 private:
  WeightFunction(WeightKind kind, double alpha, double gamma, int k);

  // theta-space integrand w(cos t) sin t for the [-1,1] weights.
  double theta_density(double theta, NodeOffsets off) const;

  WeightKind kind_;
  double alpha_;
  double gamma_;
  int k_;
};

double weight_eval(const WeightFunction& w, double x);

/// |sin(k t)| and |cos(k t)|. When the node's piece ends at a multiple of
/// pi/(2k) the values are computed from the offset to that end, so they stay
/// accurate next to the zeros sitting there.
struct CellTrig {
  double abs_sin;
  double abs_cos;
};
CellTrig cell_trig(int k, double theta, NodeOffsets off);

/// Multiples j pi/(2k), j = 0..2k, the theta images of the zeros of
/// (1-x^2) U_{k-1}(x) T_k(x).
std::vector<double> theta_cell_edges(int k);

}  // namespace opoly
