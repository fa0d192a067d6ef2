#pragma once

// Limiting zero distributions of the sieved families (degree-dependent
// parameters alpha_l ~ a l, gamma_l ~ c l) and of the generalized Hermite
// family, and their comparison with empirical zero-counting measures.

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "opoly/polycore.hpp"

namespace opoly {

/// E_k(kappa, mu) = {x in [-1,1] : (T_k(x)^2 - kappa)^2 < 4 mu}.
///
/// Membership is decided from 1 - T^2 - gap > 0 and T^2 - lower > 0 where
/// lower = kappa - 2 sqrt(mu) and gap = 1 - kappa - 2 sqrt(mu) are formed without
/// cancellation, and 1 - T_k^2 = (1-x^2) U_{k-1}^2.
class SupportRegion {
 public:
  SupportRegion(int k, double kappa, double mu);

  int k() const { return k_; }
  double kappa() const { return kappa_; }
  double mu() const { return mu_; }
  double upper() const { return upper_; }
  double lower() const { return lower_; }
  double gap() const { return gap_; }

  bool contains(double x) const;
  /// theta in (0, pi) (x = cos theta) where the boundary of E_k sits.
  std::vector<double> theta_edges() const;
  /// The edges where sin^2(k theta) = gap, and where cos^2(k theta) = lower.
  std::vector<double> gap_edges() const;
  std::vector<double> lower_edges() const;
  /// Closure of E_k as ascending disjoint intervals.
  std::vector<std::pair<double, double>> intervals() const;
  /// sup of E_k.
  double hull() const;

 private:
  int k_;
  double kappa_;
  double mu_;
  double upper_;
  double lower_;
  double gap_;
};

struct PointMass {
  double x;
  double mass;
};

/// Measure with the chain alternating_sieved_chain(g, h, k): the absolutely
/// continuous density
///   (1/(2 pi h)) sqrt(4mu - (T_k^2 - kappa)^2) / (|U_{k-1}| |T_k| (1-x^2))
/// on the closure of E_k, plus point masses when g + h > 1 or h > g.
class ChainLimit {
 public:
  ChainLimit(double g, double h, int k);

  double g() const { return g_; }
  double h() const { return h_; }
  int k() const { return region_.k(); }
  const SupportRegion& region() const { return region_; }

  /// Throws SingularityError exactly at a zero of (1-x^2) U_{k-1} T_k in the
  /// closure of the support.
  double density(double x) const;
  /// Continuous mass on [-1, y].
  double cdf(double y) const;
  /// Continuous mass on [y0, y1], y0 <= y1.
  double mass_between(double y0, double y1) const;
  double continuous_mass() const;
  /// Masses (g+h-1)/(2hk) at +-1 and (g+h-1)/(hk) at the zeros of U_{k-1}
  /// when g + h > 1; (h-g)/(hk) at the zeros of T_k when h > g.
  std::vector<PointMass> catalog() const;

  /// density(cos t) sin t from |sin kt|, |cos kt| and the two factors
  /// sin^2 kt - gap and cos^2 kt - lower of the radicand.
  double theta_integrand(double abs_sin_kt, double abs_cos_kt, double gap_factor,
                         double lower_factor) const;

 private:
  double g_;
  double h_;
  SupportRegion region_;
};

/// Limit parameters (a, c, k), a, c >= 0.
struct LimitDensity {
  double a;
  double c;
  int k;
  double g;
  double h;
  double kappa;
  double mu;

  static LimitDensity from_ac(double a, double c, int k);

  /// kappa = ((2a+1)(c+2) + c(c+1)) / (2a+c+2)^2.
  static double kappa_ac(double a, double c);
  /// mu = (2a+1)(c+1)(2a+c+1) / (2a+c+2)^4.
  static double mu_ac(double a, double c);

  /// Limit of the reversed measures along l = 2mk: g = (c+1)/(2a+c+2),
  /// h = 1/(2a+c+2); absolutely continuous.
  ChainLimit even_blocks() const;
  /// Limit along l = (2m+1)k: g and h swapped, with point masses c/(k(c+1))
  /// at the zeros of T_k.
  ChainLimit odd_blocks() const;
};

/// ((2a+c+2)/(2 pi)) sqrt(4mu - (T_k^2 - kappa)^2) / (|U_{k-1}||T_k|(1-x^2)) on
/// the closure of E_k, 0 elsewhere.
double density_sieved(double x, const LimitDensity& d);

struct GeneralDensity {
  double continuous;
  std::vector<PointMass> discrete;
};

GeneralDensity general_density(double g, double h, int k, double x);

/// Limit of the rescaled generalized Hermite zeros x/sqrt(l), gamma_l ~ c l:
/// (1/pi) sqrt((c+1) - (x^2 - c/2 - 1)^2) / |x|.
class HermiteLimit {
 public:
  explicit HermiteLimit(double c);

  double c() const { return c_; }
  /// r_in^2 = c^2/(4(c/2+1+sqrt(c+1))), r_out^2 = c/2+1+sqrt(c+1).
  double inner() const { return r_in_; }
  double outer() const { return r_out_; }
  bool contains(double x) const;
  std::vector<std::pair<double, double>> intervals() const;

  /// Throws SingularityError at x = 0 when c = 0.
  double density(double x) const;
  double cdf(double y) const;
  double mass_between(double y0, double y1) const;

 private:
  double c_;
  double r_in_;
  double r_out_;
};

double density_hermite(double x, double c);

double limit_cdf(const LimitDensity& d, double y);
double limit_cdf_hermite(double c, double y);

/// y -> N_l(y)/l for the zeros of a degree-l polynomial.
class EmpiricalCDF {
 public:
  EmpiricalCDF() = default;
  /// Zeros are divided by `rescale` and sorted.
  EmpiricalCDF(std::vector<double> zeros, std::size_t l, double rescale = 1.0);

  const std::vector<double>& zeros() const { return zeros_; }
  std::size_t degree() const { return l_; }
  double operator()(double y) const;

 private:
  std::vector<double> zeros_;
  std::size_t l_ = 0;
};

/// Zeros of the degree-l member of the family with degree-dependent
/// parameters; generalized Hermite zeros are divided by sqrt(l).
EmpiricalCDF empirical_cdf(const FamilySpec& spec, const ParameterSchedule& schedule,
                           std::size_t l);
EmpiricalCDF empirical_cdf(const FamilySpec& spec, const ParameterSchedule& schedule,
                           std::size_t l, double rescale);

/// A limiting CDF with its support hull.
struct LimitTarget {
  double lo;
  double hi;
  /// Continuous mass on [y0, y1].
  std::function<double(double, double)> mass_between;

  static LimitTarget sieved(const LimitDensity& d);
  static LimitTarget hermite(double c);
};

/// CDF of `target` at ascending points ys, accumulated interval by interval.
/// Intervals are integrated on up to `threads` workers; the result does not
/// depend on the thread count.
std::vector<double> cdf_on_grid(const LimitTarget& target, const std::vector<double>& ys,
                                unsigned threads = 1);

struct IntervalDiscrepancy {
  double lo;
  double hi;
  double max_distance;
};

struct ComparisonReport {
  std::size_t degree;
  double sup_distance;
  double argmax;
  std::vector<IntervalDiscrepancy> intervals;
};

/// Limit CDF tabulated on equally spaced points of the hull.
struct LimitGrid {
  std::vector<double> ys;
  std::vector<double> cdf;
};

LimitGrid tabulate(const LimitTarget& target, std::size_t grid_points = 2001,
                   unsigned threads = 1);

/// Sup distance over the grid, and the largest distance on each of `bins`
/// equal sub-intervals of the hull.
ComparisonReport compare(const EmpiricalCDF& e, const LimitGrid& grid, std::size_t bins = 10);
ComparisonReport compare(const EmpiricalCDF& e, const LimitTarget& target,
                         std::size_t grid_points = 2001, std::size_t bins = 10,
                         unsigned threads = 1);

}  // namespace opoly
