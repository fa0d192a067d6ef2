#pragma once

// Terminated J-fractions, their reversal, the sieve contraction and the
// closed-form Stieltjes transform of the alternating sieved chain.

#include <complex>
#include <cstddef>

#include "opoly/polycore.hpp"

namespace opoly {

using cplx = std::complex<double>;

/// Phi_n(z) = 1/(z - b_1 - a_1/(z - b_2 - ... - a_n/(z - b_{n+1}))).
class JFraction {
 public:
  JFraction() = default;
  explicit JFraction(CoefficientSequence coeffs) : coeffs_(std::move(coeffs)) {}

  const CoefficientSequence& coeffs() const { return coeffs_; }
  /// Number of retained a-terms.
  std::size_t n() const { return coeffs_.size(); }

 private:
  CoefficientSequence coeffs_;
};

/// Backward (tail-to-head) evaluation. Throws PoleError when an intermediate
/// denominator drops below 1e-300 in magnitude.
cplx eval_terminated(const JFraction& f, cplx z);
cplx eval_terminated(const CoefficientSequence& c, cplx z);

/// (b_{n+1}, ..., b_1) and (a_n, ..., a_1).
CoefficientSequence reverse(const CoefficientSequence& c);
JFraction reverse(const JFraction& f);

/// Chain reversal (p_{2n}, ..., p_2), terminated after p_2. This is the
/// reversal for the symmetric [-1,1] families; it does not coincide with
/// reversing the a-terms.
ChainSequence reverse_chain(const ChainSequence& p);

/// (p_{2k}, p_{4k}, ...) of a chain with p_{2i} = 1/2 off the k-grid. For a
/// chain of length jk-1 the fractions satisfy Phi(z) = U_{k-1}(z) Phi*(T_k(z)).
/// Throws StructureError when some off-grid entry differs from 1/2.
ChainSequence sieve_contract(const ChainSequence& p, int k);

struct KappaMu {
  double kappa;
  double mu;
};

/// kappa = g(1-h) + h(1-g), mu = g(1-g)h(1-h).
KappaMu kappa_mu(double g, double h);

/// A root r of r^2 = w^2 - 1 with |w + r| > 1.
struct BranchedSqrt {
  cplx argument;
  cplx root;
};

/// Picks the root by testing both candidates. Throws BranchError when
/// |w + r| and |w - r| agree to 1e-12 (w on the cut [-1, 1]).
BranchedSqrt select_branch(cplx w);

/// Chain p_{2l} = g if l = jk with j odd, h if l = jk with j even, 1/2 otherwise.
ChainSequence alternating_sieved_chain(double g, double h, int k, std::size_t n);

/// Stieltjes transform of the measure with chain `alternating_sieved_chain`:
///   [(1-2h) T^2 + (h-g) - sqrt((T^2-kappa)^2 - 4mu)] / (2h U_{k-1} T (1-z^2)),
/// T = T_k(z), with the square root 2 sqrt(mu) r from `select_branch`.
/// Throws BranchError on the support and PoleError at zeros of the denominator.
cplx phi_star(cplx z, double g, double h, int k);

}  // namespace opoly
