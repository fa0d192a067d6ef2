#include "opoly/polycore.hpp"

#include <cmath>
#include <string>

#include "opoly/errors.hpp"

namespace opoly {

namespace {

void require_gamma(double gamma) {
  if (!(gamma > -1.0) || !std::isfinite(gamma)) {
    throw DomainError("gamma must satisfy gamma > -1 (got " + std::to_string(gamma) + ")");
  }
}

void require_alpha(double alpha) {
  if (!(alpha > -0.5) || !std::isfinite(alpha)) {
    throw DomainError("alpha must satisfy alpha > -1/2 (got " + std::to_string(alpha) + ")");
  }
}

void require_k(int k) {
  if (k < 1) throw DomainError("sieve order k must be >= 1 (got " + std::to_string(k) + ")");
}

// Sieved coefficient a_j of the random-walk construction; b_j = 1 - a_j.
double sieved_forward(std::span<const double> A, int k, std::size_t j) {
  const auto kk = static_cast<std::size_t>(k);
  if ((j + 1) % kk != 0) return 0.5;
  return A[(j + 1) / kk - 1];
}

}  // namespace

CoefficientSequence::CoefficientSequence(std::vector<double> b, std::vector<double> a)
    : b_(std::move(b)), a_(std::move(a)) {
  if (b_.size() != a_.size() + 1) {
    throw DomainError("coefficient sequence needs len(b) = len(a) + 1");
  }
  for (std::size_t i = 0; i < a_.size(); ++i) {
    if (!(a_[i] > 0.0) || !std::isfinite(a_[i])) {
      throw DomainError("a_" + std::to_string(i + 1) + " must be positive (got " +
                        std::to_string(a_[i]) + ")");
    }
  }
  for (double bi : b_) {
    if (!std::isfinite(bi)) throw DomainError("b_i must be finite");
  }
}

CoefficientSequence CoefficientSequence::symmetric(std::vector<double> a) {
  std::vector<double> b(a.size() + 1, 0.0);
  return CoefficientSequence(std::move(b), std::move(a));
}

bool CoefficientSequence::is_symmetric() const {
  for (double bi : b_) {
    if (bi != 0.0) return false;
  }
  return true;
}

ChainSequence::ChainSequence(std::vector<double> p) : p_(std::move(p)) {
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (!(p_[i] > 0.0 && p_[i] < 1.0)) {
      throw DomainError("chain parameter p_" + std::to_string(2 * (i + 1)) +
                        " must lie in (0,1) (got " + std::to_string(p_[i]) + ")");
    }
  }
}

CoefficientSequence to_coefficients(const ChainSequence& chain) {
  std::vector<double> a;
  a.reserve(chain.size());
  double q = 1.0;
  for (double p : chain.p()) {
    a.push_back(q * p);
    q = 1.0 - p;
  }
  return CoefficientSequence::symmetric(std::move(a));
}

ChainSequence to_chain(const CoefficientSequence& coeffs) {
  if (!coeffs.is_symmetric()) {
    throw StructureError("chain sequences describe symmetric measures only (b != 0)");
  }
  std::vector<double> p;
  p.reserve(coeffs.size());
  double q = 1.0;
  for (double a : coeffs.a()) {
    const double pi = a / q;
    p.push_back(pi);
    q = 1.0 - pi;
  }
  return ChainSequence(std::move(p));
}

FamilySpec::FamilySpec(Family family, double alpha, double gamma, int k)
    : family_(family), alpha_(alpha), gamma_(gamma), k_(k) {
  require_gamma(gamma);
  if (family != Family::GenHermite) require_alpha(alpha);
  require_k(k);
}

FamilySpec FamilySpec::gen_hermite(double gamma) {
  return FamilySpec(Family::GenHermite, 0.0, gamma, 1);
}

FamilySpec FamilySpec::gen_ultraspherical(double alpha, double gamma) {
  return FamilySpec(Family::GenUltraspherical, alpha, gamma, 1);
}

FamilySpec FamilySpec::sieved_first(double alpha, double gamma, int k) {
  return FamilySpec(Family::SievedFirst, alpha, gamma, k);
}

FamilySpec FamilySpec::sieved_second(double alpha, double gamma, int k) {
  return FamilySpec(Family::SievedSecond, alpha, gamma, k);
}

FamilySpec FamilySpec::with_parameters(double alpha, double gamma) const {
  return FamilySpec(family_, alpha, gamma, k_);
}

CoefficientSequence hermite_coeffs(double gamma, std::size_t n) {
  require_gamma(gamma);
  if (n < 1) throw DomainError("hermite_coeffs needs n >= 1");
  std::vector<double> a(n);
  for (std::size_t j = 1; j <= n; ++j) {
    const double jd = static_cast<double>(j);
    a[j - 1] = (j % 2 == 0) ? jd / 2.0 : (jd + gamma) / 2.0;
  }
  return CoefficientSequence::symmetric(std::move(a));
}

ChainSequence ultraspherical_chain(double alpha, double gamma, std::size_t n) {
  require_alpha(alpha);
  require_gamma(gamma);
  if (n < 1) throw DomainError("ultraspherical_chain needs n >= 1");
  std::vector<double> p(n);
  for (std::size_t j = 1; j <= n; ++j) {
    const double jd = static_cast<double>(j);
    const double den = 2.0 * alpha + gamma + 2.0 * jd;
    p[j - 1] = (j % 2 == 0) ? jd / den : (jd + gamma) / den;
  }
  return ChainSequence(std::move(p));
}

CoefficientSequence ultraspherical_coeffs(double alpha, double gamma, std::size_t n) {
  require_alpha(alpha);
  require_gamma(gamma);
  if (n < 1) throw DomainError("ultraspherical_coeffs needs n >= 1");
  const double s = 2.0 * alpha + gamma;
  std::vector<double> a(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t idx = i + 1;  // a_i = gamma_{i+1}
    if (idx % 2 == 0) {
      const double m = static_cast<double>(idx / 2);
      if (idx == 2) {
        // (2alpha+gamma) cancels; keeps alpha = gamma = 0 well defined.
        a[i - 1] = (1.0 + gamma) / (2.0 + s);
      } else {
        a[i - 1] = (2.0 * m - 1.0 + gamma) * (2.0 * m - 2.0 + s) /
                   ((4.0 * m - 4.0 + s) * (4.0 * m - 2.0 + s));
      }
    } else {
      const double m = static_cast<double>(idx / 2);
      a[i - 1] = 2.0 * m * (2.0 * m + 2.0 * alpha - 1.0) /
                 ((4.0 * m - 2.0 + s) * (4.0 * m + s));
    }
  }
  return CoefficientSequence::symmetric(std::move(a));
}

double sieved_ultraspherical_An(double alpha, double gamma, std::size_t j) {
  require_alpha(alpha);
  require_gamma(gamma);
  if (j % 2 == 0) {
    const double m = static_cast<double>(j / 2);
    return (2.0 * m + 1.0 + gamma) / (4.0 * m + 2.0 * alpha + gamma + 2.0);
  }
  const double m = static_cast<double>((j + 1) / 2);
  return 2.0 * m / (4.0 * m + 2.0 * alpha + gamma);
}

std::size_t sieved_required_A(SieveKind kind, int k, std::size_t n) {
  require_k(k);
  const auto kk = static_cast<std::size_t>(k);
  return kind == SieveKind::First ? n / kk : (n + 1) / kk;
}

CoefficientSequence sieved_coeffs(SieveKind kind, std::span<const double> A, int k,
                                  std::size_t n) {
  require_k(k);
  if (n < 1) throw DomainError("sieved_coeffs needs n >= 1");
  const std::size_t needed = sieved_required_A(kind, k, n);
  if (A.size() < needed) {
    throw DomainError("sieved_coeffs needs " + std::to_string(needed) +
                      " random-walk coefficients A_j, got " + std::to_string(A.size()));
  }
  for (std::size_t j = 0; j < needed; ++j) {
    if (!(A[j] > 0.0 && A[j] < 1.0)) {
      throw DomainError("A_" + std::to_string(j) + " must lie in (0,1)");
    }
  }
  std::vector<double> a(n);
  for (std::size_t i = 1; i <= n; ++i) {
    if (kind == SieveKind::First) {
      // x r_n = b_{n-1} r_{n+1} + a_{n-1} r_{n-1}, r_1 = x.
      const double forward = (i == 1) ? 1.0 : 1.0 - sieved_forward(A, k, i - 2);
      a[i - 1] = forward * sieved_forward(A, k, i - 1);
    } else {
      // x s_n = a_n s_{n+1} + b_n s_{n-1}, s_1 = x / a_0.
      a[i - 1] = sieved_forward(A, k, i - 1) * (1.0 - sieved_forward(A, k, i));
    }
  }
  return CoefficientSequence::symmetric(std::move(a));
}

ChainSequence sieved_first_chain(std::span<const double> A, int k, std::size_t n) {
  require_k(k);
  const std::size_t needed = sieved_required_A(SieveKind::First, k, n);
  if (A.size() < needed) throw DomainError("sieved_first_chain: too few A_j");
  std::vector<double> p(n);
  for (std::size_t i = 1; i <= n; ++i) p[i - 1] = sieved_forward(A, k, i - 1);
  return ChainSequence(std::move(p));
}

CoefficientSequence family_coeffs(const FamilySpec& spec, std::size_t n) {
  switch (spec.family()) {
    case Family::GenHermite:
      return hermite_coeffs(spec.gamma(), n);
    case Family::GenUltraspherical:
      return ultraspherical_coeffs(spec.alpha(), spec.gamma(), n);
    case Family::SievedFirst:
    case Family::SievedSecond: {
      const SieveKind kind =
          spec.family() == Family::SievedFirst ? SieveKind::First : SieveKind::Second;
      std::vector<double> A(sieved_required_A(kind, spec.k(), n));
      for (std::size_t j = 0; j < A.size(); ++j) {
        A[j] = sieved_ultraspherical_An(spec.alpha(), spec.gamma(), j);
      }
      return sieved_coeffs(kind, A, spec.k(), n);
    }
  }
  throw DomainError("unknown family");
}

ParameterSchedule ParameterSchedule::linear(double a, double c, std::size_t last) {
  ParameterSchedule s;
  s.alpha.resize(last + 1);
  s.gamma.resize(last + 1);
  for (std::size_t n = 0; n <= last; ++n) {
    s.alpha[n] = a * static_cast<double>(n);
    s.gamma[n] = c * static_cast<double>(n);
  }
  return s;
}

std::size_t schedule_index(const FamilySpec& spec, std::size_t l) {
  if (l < 1) throw DomainError("degree l must be >= 1");
  if (spec.family() == Family::GenHermite) return l;
  return (l - 1) / static_cast<std::size_t>(spec.k());
}

FamilySpec frozen_spec(const FamilySpec& spec, const ParameterSchedule& schedule,
                       std::size_t l) {
  const std::size_t idx = schedule_index(spec, l);
  if (idx >= schedule.gamma.size() ||
      (spec.on_interval() && idx >= schedule.alpha.size())) {
    throw StructureError("parameter schedule too short: degree " + std::to_string(l) +
                         " needs index " + std::to_string(idx));
  }
  const double alpha = spec.on_interval() ? schedule.alpha[idx] : spec.alpha();
  return spec.with_parameters(alpha, schedule.gamma[idx]);
}

CoefficientSequence degree_dependent_coeffs(const FamilySpec& spec,
                                            const ParameterSchedule& schedule,
                                            std::size_t l) {
  if (l < 2) throw DomainError("degree_dependent_coeffs needs l >= 2");
  return family_coeffs(frozen_spec(spec, schedule, l), l - 1);
}

}  // namespace opoly
