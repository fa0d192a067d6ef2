#include "opoly/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "opoly/cfrac.hpp"
#include "opoly/errors.hpp"
#include "opoly/specfun.hpp"

namespace opoly {

namespace {

constexpr int kMaxSweeps = 50;

// Implicit QL with Wilkinson shifts on (d, e), e[i] coupling d[i] and d[i+1].
// When z is non-empty only its first-row entries are rotated along.
void tql(std::vector<double>& d, std::vector<double> e, std::vector<double>* z) {
  const int n = static_cast<int>(d.size());
  e.push_back(0.0);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (iter++ == kMaxSweeps) {
        throw ConvergenceError("tridiagonal QL: no convergence for eigenvalue " +
                               std::to_string(l) + " after " + std::to_string(kMaxSweeps) +
                               " sweeps");
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      int i;
      bool deflated = false;
      for (i = m - 1; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        if (z != nullptr) {
          auto& zz = *z;
          f = zz[i + 1];
          zz[i + 1] = s * zz[i] + c * f;
          zz[i] = c * zz[i] - s * f;
        }
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
}

// Number of eigenvalues of the Jacobi matrix below x.
std::size_t count_below(const CoefficientSequence& c, double x) {
  const auto& b = c.b();
  const auto& a = c.a();
  std::size_t count = 0;
  double d = b[0] - x;
  for (std::size_t j = 0;; ++j) {
    if (d == 0.0) d = -std::numeric_limits<double>::min();
    if (d < 0.0) ++count;
    if (j == a.size()) break;
    d = b[j + 1] - x - a[j] / d;
  }
  return count;
}

void sort_measure(DiscreteMeasure& m) {
  std::vector<std::size_t> order(m.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return m.points[i] < m.points[j]; });
  DiscreteMeasure out;
  for (std::size_t i : order) {
    out.points.push_back(m.points[i]);
    out.masses.push_back(m.masses[i]);
  }
  m = std::move(out);
}

}  // namespace

JacobiMatrix JacobiMatrix::from(const CoefficientSequence& c) {
  JacobiMatrix j;
  j.diag = c.b();
  j.offdiag.reserve(c.size());
  for (double a : c.a()) j.offdiag.push_back(std::sqrt(a));
  return j;
}

double DiscreteMeasure::total_mass() const {
  return std::accumulate(masses.begin(), masses.end(), 0.0);
}

double DiscreteMeasure::moment(int j) const {
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) s += masses[i] * std::pow(points[i], j);
  return s;
}

std::complex<double> DiscreteMeasure::stieltjes(std::complex<double> z) const {
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) s += masses[i] / (z - points[i]);
  return s;
}

std::vector<double> zeros(const CoefficientSequence& c) {
  const JacobiMatrix j = JacobiMatrix::from(c);
  std::vector<double> d = j.diag;
  tql(d, j.offdiag, nullptr);
  std::sort(d.begin(), d.end());
  return d;
}

DiscreteMeasure zeros_and_masses(const CoefficientSequence& c) {
  const JacobiMatrix j = JacobiMatrix::from(c);
  DiscreteMeasure m;
  m.points = j.diag;
  std::vector<double> z(j.size(), 0.0);
  z[0] = 1.0;
  tql(m.points, j.offdiag, &z);
  m.masses.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) m.masses[i] = z[i] * z[i];
  sort_measure(m);
  return m;
}

DiscreteMeasure residue_masses(const CoefficientSequence& c) {
  const auto& b = c.b();
  const auto& a = c.a();
  const std::size_t N = c.degree();

  // Gershgorin bounds.
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (std::size_t i = 0; i < N; ++i) {
    const double left = i > 0 ? std::sqrt(a[i - 1]) : 0.0;
    const double right = i < a.size() ? std::sqrt(a[i]) : 0.0;
    lo = std::min(lo, b[i] - left - right);
    hi = std::max(hi, b[i] + left + right);
  }

  DiscreteMeasure m;
  m.points.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    double l = lo;
    double h = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (l + h);
      if (mid <= l || mid >= h) break;
      if (count_below(c, mid) > i) {
        h = mid;
      } else {
        l = mid;
      }
    }
    m.points[i] = 0.5 * (l + h);
  }

  std::vector<double> dp(N);
  std::vector<double> num(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double z0 = m.points[i];
    // P_{j+1} = (z - b_{j+1}) P_j - a_j P_{j-1} and its derivative.
    double p_prev = 0.0;
    double p = 1.0;
    double dp_prev = 0.0;
    double dpj = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      const double aj = j > 0 ? a[j - 1] : 0.0;
      const double p_next = (z0 - b[j]) * p - aj * p_prev;
      const double dp_next = p + (z0 - b[j]) * dpj - aj * dp_prev;
      p_prev = p;
      p = p_next;
      dp_prev = dpj;
      dpj = dp_next;
    }
    // Associated polynomial: Q_0 = 1, Q_j = (z - b_{j+1}) Q_{j-1} - a_j Q_{j-2}.
    double q_prev = 0.0;
    double q = 1.0;
    for (std::size_t j = 1; j < N; ++j) {
      const double aj = j > 1 ? a[j - 1] : 0.0;
      const double q_next = (z0 - b[j]) * q - aj * q_prev;
      q_prev = q;
      q = q_next;
    }
    dp[i] = dpj;
    num[i] = q;
  }
  // P'(z_i) = prod_{j != i} (z_i - z_j): it vanishes through the factor of the
  // nearest neighbour, measured against the spread of the spectrum.
  const double spread = N > 1 ? m.points.back() - m.points.front() : 1.0;
  m.masses.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    double gap = std::numeric_limits<double>::infinity();
    if (i > 0) gap = std::min(gap, m.points[i] - m.points[i - 1]);
    if (i + 1 < N) gap = std::min(gap, m.points[i + 1] - m.points[i]);
    if (!(std::isfinite(dp[i]) && dp[i] != 0.0) || gap < 1e-12 * spread) {
      throw NumericalError("residue_masses: derivative vanishes at z0 = " +
                           std::to_string(m.points[i]) + " (near-multiple root)");
    }
    m.masses[i] = num[i] / dp[i];
  }
  return m;
}

CoefficientSequence reversed_coeffs(const FamilySpec& spec, std::size_t n) {
  const CoefficientSequence c = family_coeffs(spec, n);
  if (!spec.on_interval()) return reverse(c);
  return to_coefficients(reverse_chain(to_chain(c)));
}

DiscreteMeasure reversed_measure(const FamilySpec& spec, std::size_t n) {
  return zeros_and_masses(reversed_coeffs(spec, n));
}

const char* point_set_name(PointSet s) {
  switch (s) {
    case PointSet::ChebyshevTZeros:
      return "T_k zeros";
    case PointSet::ChebyshevUZeros:
      return "U_{k-1} zeros";
    case PointSet::Origin:
      return "origin";
    case PointSet::Remaining:
      return "remaining";
  }
  return "?";
}

PatternReport check_pattern(const DiscreteMeasure& m, const MassPattern& pattern, double tol,
                            double point_tol) {
  const std::size_t G = pattern.groups.size();
  std::vector<std::vector<double>> anchors(G);
  int remaining = -1;
  int origin = -1;
  for (std::size_t g = 0; g < G; ++g) {
    switch (pattern.groups[g].set) {
      case PointSet::ChebyshevTZeros:
        anchors[g] = chebyshev_t_zeros(pattern.k);
        break;
      case PointSet::ChebyshevUZeros:
        anchors[g] = chebyshev_u_zeros(pattern.k - 1);
        break;
      case PointSet::Origin:
        origin = static_cast<int>(g);
        break;
      case PointSet::Remaining:
        remaining = static_cast<int>(g);
        break;
    }
  }

  std::vector<int> member(m.size(), -1);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double x = m.points[i];
    for (std::size_t g = 0; g < G && member[i] < 0; ++g) {
      for (double s : anchors[g]) {
        if (std::abs(x - s) < point_tol) {
          member[i] = static_cast<int>(g);
          break;
        }
      }
    }
    if (member[i] < 0 && origin >= 0 && std::abs(x) < point_tol) member[i] = origin;
    if (member[i] < 0) member[i] = remaining;
    if (member[i] < 0) {
      throw StructureError("check_pattern: support point " + std::to_string(x) +
                           " belongs to no group of pattern '" + pattern.label + "'");
    }
  }

  PatternReport rep;
  rep.label = pattern.label;
  rep.tol = tol;
  std::vector<std::size_t> count(G, 0);
  for (int g : member) ++count[g];
  double weight = 0.0;
  for (std::size_t g = 0; g < G; ++g) weight += pattern.groups[g].ratio * count[g];
  const double unit = 1.0 / weight;

  rep.pass = true;
  for (std::size_t g = 0; g < G; ++g) {
    GroupReport gr{pattern.groups[g].set, pattern.groups[g].ratio, count[g],
                   pattern.groups[g].ratio * unit, 0.0, 0.0, 0.0};
    double sum = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (member[i] != static_cast<int>(g)) continue;
      sum += m.masses[i];
      gr.max_deviation = std::max(gr.max_deviation, std::abs(m.masses[i] - gr.expected_mass));
    }
    if (count[g] > 0) {
      gr.mean_mass = sum / static_cast<double>(count[g]);
      gr.measured_ratio = gr.mean_mass / unit;
    } else {
      rep.pass = false;
    }
    rep.max_deviation = std::max(rep.max_deviation, gr.max_deviation);
    rep.groups.push_back(gr);
  }
  if (!(rep.max_deviation < tol)) rep.pass = false;
  return rep;
}

MassPattern pattern_catalog(const FamilySpec& spec, std::size_t n) {
  if (n < 1) throw StructureError("pattern_catalog needs n >= 1");
  const double alpha = spec.alpha();
  const double gamma = spec.gamma();
  const int k = spec.k();
  const auto kk = static_cast<std::size_t>(k);
  MassPattern p;
  p.k = k;

  switch (spec.family()) {
    case Family::GenHermite:
    case Family::GenUltraspherical:
      p.k = 1;
      if (n % 2 == 0) {
        p.label = "n = 2m: origin weighted by gamma+1";
        p.groups = {{PointSet::Origin, gamma + 1.0}, {PointSet::Remaining, 1.0}};
      } else {
        p.label = "n = 2m-1: equal masses";
        p.groups = {{PointSet::Remaining, 1.0}};
      }
      return p;

    case Family::SievedFirst: {
      if ((n + 1) % kk != 0) {
        throw StructureError("pattern_catalog: sieved first kind needs n = jk-1, got n = " +
                             std::to_string(n) + " with k = " + std::to_string(k));
      }
      const std::size_t j = (n + 1) / kk;
      if (j % 2 == 1) {
        p.label = "n = k(2m+1)-1: T_k zeros weighted by gamma+1";
        p.groups = {{PointSet::ChebyshevTZeros, gamma + 1.0}};
        if (j > 1) p.groups.push_back({PointSet::Remaining, 1.0});
      } else {
        p.label = "n = 2mk-1: equal masses";
        p.groups = {{PointSet::Remaining, 1.0}};
      }
      return p;
    }

    case Family::SievedSecond: {
      if ((n + 2) % kk != 0) {
        throw StructureError("pattern_catalog: sieved second kind needs n = jk-2, got n = " +
                             std::to_string(n) + " with k = " + std::to_string(k));
      }
      const std::size_t j = (n + 2) / kk;
      if (k > 1) p.groups.push_back({PointSet::ChebyshevUZeros, 2.0 * alpha + 1.0});
      if (j % 2 == 0) {
        p.label = "n = k(2m+2)-2: U_{k-1} zeros weighted by 2alpha+1, T_k zeros by gamma+1";
        p.groups.push_back({PointSet::ChebyshevTZeros, gamma + 1.0});
        if (j > 2) p.groups.push_back({PointSet::Remaining, 1.0});
      } else {
        p.label = "n = k(2m+1)-2: U_{k-1} zeros weighted by 2alpha+1";
        if (j > 1) p.groups.push_back({PointSet::Remaining, 1.0});
      }
      return p;
    }
  }
  throw StructureError("pattern_catalog: unknown family");
}

}  // namespace opoly
