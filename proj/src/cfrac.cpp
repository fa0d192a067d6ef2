#include "opoly/cfrac.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "opoly/errors.hpp"
#include "opoly/specfun.hpp"

namespace opoly {

namespace {

constexpr double kPoleFloor = 1e-300;

}  // namespace

cplx eval_terminated(const CoefficientSequence& c, cplx z) {
  const auto& b = c.b();
  const auto& a = c.a();
  const std::size_t n = a.size();
  cplx t = z - b[n];
  for (std::size_t i = n; i-- > 0;) {
    if (std::abs(t) < kPoleFloor) {
      throw PoleError("eval_terminated: z is at a pole (level " + std::to_string(i + 2) + ")");
    }
    t = z - b[i] - a[i] / t;
  }
  if (std::abs(t) < kPoleFloor) throw PoleError("eval_terminated: z is at a pole");
  return 1.0 / t;
}

cplx eval_terminated(const JFraction& f, cplx z) { return eval_terminated(f.coeffs(), z); }

CoefficientSequence reverse(const CoefficientSequence& c) {
  std::vector<double> b(c.b().rbegin(), c.b().rend());
  std::vector<double> a(c.a().rbegin(), c.a().rend());
  return CoefficientSequence(std::move(b), std::move(a));
}

JFraction reverse(const JFraction& f) { return JFraction(reverse(f.coeffs())); }

ChainSequence reverse_chain(const ChainSequence& p) {
  return ChainSequence(std::vector<double>(p.p().rbegin(), p.p().rend()));
}

ChainSequence sieve_contract(const ChainSequence& p, int k) {
  if (k < 1) throw DomainError("sieve_contract needs k >= 1");
  std::vector<double> out;
  const auto kk = static_cast<std::size_t>(k);
  for (std::size_t i = 1; i <= p.size(); ++i) {
    const double v = p.p()[i - 1];
    if (i % kk == 0) {
      out.push_back(v);
    } else if (std::abs(v - 0.5) > 1e-12) {
      throw StructureError("sieve_contract: p_" + std::to_string(2 * i) + " = " +
                           std::to_string(v) + " is off the k-grid but not 1/2");
    }
  }
  return ChainSequence(std::move(out));
}

KappaMu kappa_mu(double g, double h) {
  if (!(g > 0.0 && g < 1.0 && h > 0.0 && h < 1.0)) {
    throw DomainError("kappa_mu needs g, h in (0,1)");
  }
  return {g * (1.0 - h) + h * (1.0 - g), g * (1.0 - g) * h * (1.0 - h)};
}

BranchedSqrt select_branch(cplx w) {
  const cplx r = std::sqrt(w * w - 1.0);
  const double plus = std::abs(w + r);
  const double minus = std::abs(w - r);
  if (std::abs(plus - minus) <= 1e-12 * std::max(plus, minus)) {
    throw BranchError("select_branch: w is on the cut, both roots give |w + r| = 1");
  }
  return {w, plus > minus ? r : -r};
}

ChainSequence alternating_sieved_chain(double g, double h, int k, std::size_t n) {
  if (k < 1) throw DomainError("alternating_sieved_chain needs k >= 1");
  const auto kk = static_cast<std::size_t>(k);
  std::vector<double> p(n, 0.5);
  for (std::size_t l = kk; l <= n; l += kk) p[l - 1] = ((l / kk) % 2 == 1) ? g : h;
  return ChainSequence(std::move(p));
}

cplx phi_star(cplx z, double g, double h, int k) {
  if (k < 1) throw DomainError("phi_star needs k >= 1");
  const auto [kappa, mu] = kappa_mu(g, h);
  const cplx t = chebyshev_t(k, z);
  const cplx u = chebyshev_u(k - 1, z);
  const cplx t2 = t * t;
  const double two_sqrt_mu = 2.0 * std::sqrt(mu);
  const BranchedSqrt br = select_branch((t2 - kappa) / two_sqrt_mu);
  const cplx den = 2.0 * h * u * t * (1.0 - z * z);
  if (std::abs(den) < kPoleFloor) throw PoleError("phi_star: z is a zero of U_{k-1} T_k (1-z^2)");
  return ((1.0 - 2.0 * h) * t2 + (h - g) - two_sqrt_mu * br.root) / den;
}

}  // namespace opoly
