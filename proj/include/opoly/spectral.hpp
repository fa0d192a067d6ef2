#pragma once

// Zeros and Gauss-Christoffel masses of terminated J-fractions, reversed
// measures of the implemented families, and the equal-mass patterns they obey.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "opoly/polycore.hpp"

namespace opoly {

/// Symmetric tridiagonal matrix with diagonal b_i and off-diagonal sqrt(a_i).
struct JacobiMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;

  static JacobiMatrix from(const CoefficientSequence& c);
  std::size_t size() const { return diag.size(); }
};

/// Finitely supported probability measure, points ascending.
struct DiscreteMeasure {
  std::vector<double> points;
  std::vector<double> masses;

  std::size_t size() const { return points.size(); }
  double total_mass() const;
  double moment(int j) const;
  std::complex<double> stieltjes(std::complex<double> z) const;
};

/// Eigenvalues of the Jacobi matrix (implicit QL, at most 50 sweeps per
/// eigenvalue), ascending. Throws ConvergenceError past the cap.
std::vector<double> zeros(const CoefficientSequence& c);

/// Eigenvalues together with the squared first eigenvector components.
DiscreteMeasure zeros_and_masses(const CoefficientSequence& c);

/// Independent path: zeros by Sturm-sequence bisection, masses as residues
/// Q_n(z0)/P'_{n+1}(z0) of numerator over denominator. Throws NumericalError
/// when P'(z0) vanishes, i.e. when its factor z0 - z_j for the nearest zero
/// z_j is below 1e-12 times the spread of the zeros (near-multiple root).
DiscreteMeasure residue_masses(const CoefficientSequence& c);

/// Coefficients of the reversed n-term fraction: a-term reversal for the
/// generalized Hermite family, chain reversal for the [-1,1] families.
CoefficientSequence reversed_coeffs(const FamilySpec& spec, std::size_t n);
DiscreteMeasure reversed_measure(const FamilySpec& spec, std::size_t n);

enum class PointSet { ChebyshevTZeros, ChebyshevUZeros, Origin, Remaining };

const char* point_set_name(PointSet s);

struct MassGroup {
  PointSet set;
  /// Mass relative to the ratio-1 group.
  double ratio;
};

struct MassPattern {
  std::string label;
  /// Order of T_k / U_{k-1} for the Chebyshev point sets.
  int k = 1;
  std::vector<MassGroup> groups;
};

struct GroupReport {
  PointSet set;
  double ratio;
  std::size_t count;
  double expected_mass;
  double mean_mass;
  double max_deviation;
  /// mean_mass relative to the unit mass of the pattern.
  double measured_ratio;
};

struct PatternReport {
  std::string label;
  std::vector<GroupReport> groups;
  double max_deviation = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Assigns every support point to a group (analytic Chebyshev zeros within
/// point_tol, then the origin, then "remaining") and compares each mass with
/// ratio / sum(ratio * count). Passes iff every deviation is below tol and no
/// group is empty. Throws StructureError for a point no group claims.
PatternReport check_pattern(const DiscreteMeasure& m, const MassPattern& pattern,
                            double tol = 1e-9, double point_tol = 1e-8);

/// Expected pattern of the reversed n-term measure of `spec`:
///   GenHermite, GenUltraspherical  n = 2m: origin gamma+1; n = 2m-1: uniform
///   SievedFirst   n = k(2m+1)-1: T_k zeros gamma+1;  n = 2mk-1: uniform
///   SievedSecond  n = k(2m+2)-2: U_{k-1} zeros 2alpha+1, T_k zeros gamma+1;
///                 n = k(2m+1)-2: U_{k-1} zeros 2alpha+1
/// Throws StructureError when n fits none of these schedules.
MassPattern pattern_catalog(const FamilySpec& spec, std::size_t n);

}  // namespace opoly
