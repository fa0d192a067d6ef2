#pragma once

// Recurrence coefficients of the generalized Hermite, generalized
// ultraspherical and generalized sieved ultraspherical families.
//
// Every family is represented in monic form
//
//     P_{n+1}(x) = (x - b_{n+1}) P_n(x) - a_n P_{n-1}(x),
//
// which is also the J-fraction 1/(z-b_1) - a_1/(z-b_2) - ... of the Stieltjes
// transform of the orthogonality measure. Symmetric measures on [-1,1] are
// additionally described by a chain sequence p_2, p_4, ... with
// a_i = q_{2i-2} p_{2i}, q_{2i} = 1 - p_{2i}, q_0 = 1.

#include <cstddef>
#include <span>
#include <vector>

namespace opoly {

/// Diagonal terms b_1..b_{n+1} and off-diagonal products a_1..a_n of a
/// terminated J-fraction. The denominator polynomial has degree n+1.
class CoefficientSequence {
 public:
  CoefficientSequence() : b_(1, 0.0) {}
  /// Throws DomainError unless b.size() == a.size() + 1 and every a_i > 0.
  CoefficientSequence(std::vector<double> b, std::vector<double> a);

  /// Symmetric (b = 0) sequence.
  static CoefficientSequence symmetric(std::vector<double> a);

  const std::vector<double>& b() const { return b_; }
  const std::vector<double>& a() const { return a_; }

  /// Number of retained a-terms.
  std::size_t size() const { return a_.size(); }
  /// Degree of the denominator polynomial (= number of support points).
  std::size_t degree() const { return b_.size(); }
  bool is_symmetric() const;

 private:
  std::vector<double> b_;
  std::vector<double> a_;
};

/// Chain parameters p_2, p_4, ..., p_{2n}, each in (0,1).
class ChainSequence {
 public:
  ChainSequence() = default;
  /// Throws DomainError unless every entry lies in (0,1).
  explicit ChainSequence(std::vector<double> p);

  const std::vector<double>& p() const { return p_; }
  std::size_t size() const { return p_.size(); }
  double q(std::size_t i) const { return 1.0 - p_.at(i); }

 private:
  std::vector<double> p_;
};

/// a_i = q_{2i-2} p_{2i}, b = 0.
CoefficientSequence to_coefficients(const ChainSequence& chain);
/// Minimal chain of a symmetric sequence: p_2 = a_1, p_{2i} = a_i / q_{2i-2}.
/// Throws StructureError when b != 0 and DomainError if some p leaves (0,1).
ChainSequence to_chain(const CoefficientSequence& coeffs);

enum class Family { GenHermite, GenUltraspherical, SievedFirst, SievedSecond };
enum class SieveKind { First, Second };

/// A polynomial family together with its parameters. Domains are enforced at
/// construction: gamma > -1, alpha > -1/2, k >= 1.
class FamilySpec {
 public:
  static FamilySpec gen_hermite(double gamma);
  static FamilySpec gen_ultraspherical(double alpha, double gamma);
  static FamilySpec sieved_first(double alpha, double gamma, int k);
  static FamilySpec sieved_second(double alpha, double gamma, int k);

  Family family() const { return family_; }
  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }
  /// Sieve order; 1 for the unsieved families.
  int k() const { return k_; }
  /// True for the families living on [-1,1].
  bool on_interval() const { return family_ != Family::GenHermite; }

  /// Same family and sieve order with new parameters.
  FamilySpec with_parameters(double alpha, double gamma) const;

 private:
  FamilySpec(Family family, double alpha, double gamma, int k);

  Family family_;
  double alpha_;
  double gamma_;
  int k_;
};

/// a_j = j/2 (j even), (j+gamma)/2 (j odd), j = 1..n; b = 0.
CoefficientSequence hermite_coeffs(double gamma, std::size_t n);

/// p_{2j} = j/(2alpha+gamma+2j) (j even), (j+gamma)/(2alpha+gamma+2j) (j odd).
ChainSequence ultraspherical_chain(double alpha, double gamma, std::size_t n);

/// Monic coefficients a_n = gamma^{(alpha,gamma)}_{n+1} of the polynomials
/// orthogonal for |x|^gamma (1-x^2)^(alpha-1/2), evaluated from the two-case
/// closed form.
CoefficientSequence ultraspherical_coeffs(double alpha, double gamma, std::size_t n);

/// Random-walk coefficient A_j of the ultraspherical family:
/// A_{2m} = (2m+1+gamma)/(4m+2alpha+gamma+2), A_{2m-1} = 2m/(4m+2alpha+gamma).
double sieved_ultraspherical_An(double alpha, double gamma, std::size_t j);

/// Number of A_j values that `sieved_coeffs` needs for n a-terms.
std::size_t sieved_required_A(SieveKind kind, int k, std::size_t n);

/// Monic coefficients of the sieved random walk polynomials r_n (first kind)
/// or s_n (second kind) built from A_0, A_1, ... with B_j = 1 - A_j. The
/// sieved coefficients are 1/2 off the grid, and at index jk-1 they are
/// A_{j-1} (forward) and B_{j-1} (backward).
CoefficientSequence sieved_coeffs(SieveKind kind, std::span<const double> A, int k,
                                  std::size_t n);

/// Chain sequence of the first kind: p_{2i} = 1/2 unless k | i, p_{2jk} = A_{j-1}.
ChainSequence sieved_first_chain(std::span<const double> A, int k, std::size_t n);

/// n a-terms of the family's monic recurrence.
CoefficientSequence family_coeffs(const FamilySpec& spec, std::size_t n);

/// Parameter schedules (alpha_n), (gamma_n), n = 0, 1, ...
struct ParameterSchedule {
  std::vector<double> alpha;
  std::vector<double> gamma;

  /// alpha_n = a n, gamma_n = c n for n = 0..last.
  static ParameterSchedule linear(double a, double c, std::size_t last);
};

/// Schedule index used for degree l: floor((l-1)/k) for the [-1,1] families,
/// l itself for the generalized Hermite family.
std::size_t schedule_index(const FamilySpec& spec, std::size_t l);

/// Family with the parameters frozen for degree l.
FamilySpec frozen_spec(const FamilySpec& spec, const ParameterSchedule& schedule,
                       std::size_t l);

/// Coefficient sequence whose denominator polynomial is the degree-l member of
/// the family with degree-dependent parameters (l-1 a-terms). The parameters
/// of `spec` are ignored; only its family and sieve order are used. Throws
/// StructureError when the schedule is too short.
CoefficientSequence degree_dependent_coeffs(const FamilySpec& spec,
                                            const ParameterSchedule& schedule,
                                            std::size_t l);

}  // namespace opoly
