#include "opoly/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "opoly/cfrac.hpp"
#include "opoly/errors.hpp"
#include "opoly/spectral.hpp"
#include "opoly/specfun.hpp"

namespace opoly {

namespace {

constexpr double kPi = std::numbers::pi;

// Limit measures have total mass 1; pieces are accepted at this absolute error.
constexpr QuadratureOptions kMassQuadrature{1e-10, 1e-14, 14};

double clamp_unit(double y) { return std::clamp(y, -1.0, 1.0); }

}  // namespace

SupportRegion::SupportRegion(int k, double kappa, double mu) : k_(k), kappa_(kappa), mu_(mu) {
  if (k < 1) throw DomainError("support region needs k >= 1");
  if (!(mu > 0.0)) throw DomainError("support region needs mu > 0");
  const double two_sqrt_mu = 2.0 * std::sqrt(mu);
  upper_ = kappa + two_sqrt_mu;
  // (kappa - 2 sqrt mu)(kappa + 2 sqrt mu) = kappa^2 - 4mu, likewise for 1 - kappa.
  lower_ = std::max(0.0, (kappa * kappa - 4.0 * mu) / upper_);
  const double one_minus = 1.0 - kappa;
  gap_ = std::max(0.0, (one_minus * one_minus - 4.0 * mu) / (one_minus + two_sqrt_mu));
  if (!(lower_ < 1.0 - gap_)) throw DomainError("support region E_k is empty");
}

bool SupportRegion::contains(double x) const {
  if (!(x > -1.0 && x < 1.0)) return false;
  const double t = chebyshev_t(k_, x);
  const double u = chebyshev_u(k_ - 1, x);
  const double one_minus_t2 = (1.0 - x) * (1.0 + x) * u * u;
  return one_minus_t2 - gap_ > 0.0 && t * t - lower_ > 0.0;
}

std::vector<double> SupportRegion::gap_edges() const {
  // In the cell k t = j pi/2 + e, sin^2 and cos^2 of k t are sin^2 e, cos^2 e
  // (j even) or swapped (j odd).
  std::vector<double> edges;
  if (gap_ == 0.0) return edges;
  const double psi = std::asin(std::sqrt(gap_));
  for (int j = 0; j < 2 * k_; ++j) {
    const double e = j % 2 == 0 ? psi : kPi / 2.0 - psi;
    edges.push_back((j * kPi / 2.0 + e) / k_);
  }
  return edges;
}

std::vector<double> SupportRegion::lower_edges() const {
  std::vector<double> edges;
  if (lower_ == 0.0) return edges;
  const double psi = std::acos(std::sqrt(lower_));
  for (int j = 0; j < 2 * k_; ++j) {
    const double e = j % 2 == 0 ? psi : kPi / 2.0 - psi;
    edges.push_back((j * kPi / 2.0 + e) / k_);
  }
  return edges;
}

std::vector<double> SupportRegion::theta_edges() const {
  std::vector<double> edges = gap_edges();
  for (double e : lower_edges()) edges.push_back(e);
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::vector<std::pair<double, double>> SupportRegion::intervals() const {
  const double psi_gap = std::asin(std::sqrt(gap_));
  const double psi_low = std::acos(std::sqrt(lower_));
  std::vector<std::pair<double, double>> theta;
  for (int j = 0; j < 2 * k_; ++j) {
    const double base = j * kPi / 2.0;
    // support within the cell: sin^2 u >= gap and cos^2 u >= lower
    const double e0 = j % 2 == 0 ? psi_gap : kPi / 2.0 - psi_low;
    const double e1 = j % 2 == 0 ? psi_low : kPi / 2.0 - psi_gap;
    theta.emplace_back((base + e0) / k_, (base + e1) / k_);
  }
  std::vector<std::pair<double, double>> out;
  for (auto it = theta.rbegin(); it != theta.rend(); ++it) {
    const double lo = std::cos(it->second);
    const double hi = std::cos(it->first);
    if (!out.empty() && lo <= out.back().second + 1e-15) {
      out.back().second = hi;
    } else {
      out.emplace_back(lo, hi);
    }
  }
  return out;
}

double SupportRegion::hull() const { return std::cos(std::asin(std::sqrt(gap_)) / k_); }

ChainLimit::ChainLimit(double g, double h, int k)
    : g_(g), h_(h), region_(k, kappa_mu(g, h).kappa, kappa_mu(g, h).mu) {}

double ChainLimit::theta_integrand(double s, double c, double a, double b) const {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  return (std::sqrt(a) / s) * (std::sqrt(b) / c) / (2.0 * kPi * h_);
}

double ChainLimit::density(double x) const {
  if (!(x > -1.0 && x < 1.0)) {
    if (std::abs(x) == 1.0 && region_.gap() == 0.0) {
      throw SingularityError("density evaluated at the singular point x = " +
                             std::to_string(x));
    }
    return 0.0;
  }
  const int k = region_.k();
  const double t = chebyshev_t(k, x);
  const double u = chebyshev_u(k - 1, x);
  const double one_minus_x2 = (1.0 - x) * (1.0 + x);
  const double a = one_minus_x2 * u * u - region_.gap();
  const double b = t * t - region_.lower();
  if (a < 0.0 || b < 0.0) return 0.0;
  const double den = std::abs(u) * std::abs(t) * one_minus_x2;
  if (den == 0.0) {
    throw SingularityError("density evaluated at the singular point x = " +
                           std::to_string(x));
  }
  return std::sqrt(a) * std::sqrt(b) / den / (2.0 * kPi * h_);
}

double ChainLimit::mass_between(double y0, double y1) const {
  y0 = clamp_unit(y0);
  y1 = clamp_unit(y1);
  if (y1 <= y0) return 0.0;
  const double t0 = std::acos(y1);
  const double t1 = std::acos(y0);
  const int k = region_.k();

  std::vector<double> cuts{t0};
  std::vector<double> candidates = theta_cell_edges(k);
  for (double e : region_.theta_edges()) candidates.push_back(e);
  std::sort(candidates.begin(), candidates.end());
  // The theta integrand is bounded, so cuts closer than kMinPiece are merged.
  constexpr double kMinPiece = 1e-14;
  for (double e : candidates) {
    if (e > cuts.back() + kMinPiece && e < t1 - kMinPiece) cuts.push_back(e);
  }
  cuts.push_back(t1);

  const std::vector<double> gap_edges = region_.gap_edges();
  const std::vector<double> lower_edges = region_.lower_edges();
  auto is_edge = [](const std::vector<double>& edges, double t) {
    return std::find(edges.begin(), edges.end(), t) != edges.end();
  };
  // sin^2 u - sin^2 v = sin(u - v) sin(u + v), with u - v = +-k * offset at an edge.
  auto edge_factor = [&](const std::vector<double>& edges, NodeOffsets off, double fallback,
                         double sign) {
    const bool left = is_edge(edges, off.left);
    const bool right = is_edge(edges, off.right);
    if (!left && !right) return fallback;
    const bool use_left = left && (!right || off.from_left <= off.from_right);
    const double v = k * (use_left ? off.left : off.right);
    const double du = use_left ? k * off.from_left : -k * off.from_right;
    return sign * std::sin(du) * std::sin(2.0 * v + du);
  };
  const std::function<double(double, NodeOffsets)> f = [&](double t, NodeOffsets off) {
    const CellTrig trig = cell_trig(k, t, off);
    const double s = trig.abs_sin;
    const double c = trig.abs_cos;
    const double a = edge_factor(gap_edges, off, s * s - region_.gap(), 1.0);
    const double b = edge_factor(lower_edges, off, c * c - region_.lower(), -1.0);
    return theta_integrand(s, c, a, b);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const double s = std::abs(std::sin(k * mid));
    const double c = std::abs(std::cos(k * mid));
    const double at_mid = theta_integrand(s, c, s * s - region_.gap(), c * c - region_.lower());
    if (at_mid == 0.0) continue;
    if (cuts[i + 1] - cuts[i] <= kMinPiece) {
      total += at_mid * (cuts[i + 1] - cuts[i]);
      continue;
    }
    total += adaptive_integrate(f, cuts[i], cuts[i + 1], {}, kMassQuadrature);
  }
  return total;
}

double ChainLimit::cdf(double y) const { return mass_between(-1.0, y); }

double ChainLimit::continuous_mass() const { return mass_between(-1.0, 1.0); }

std::vector<PointMass> ChainLimit::catalog() const {
  std::vector<PointMass> out;
  const int k = region_.k();
  const double excess = g_ + h_ - 1.0;
  if (excess > 0.0) {
    out.push_back({-1.0, excess / (2.0 * h_ * k)});
    for (double z : chebyshev_u_zeros(k - 1)) out.push_back({z, excess / (h_ * k)});
    out.push_back({1.0, excess / (2.0 * h_ * k)});
  }
  if (h_ > g_) {
    for (double z : chebyshev_t_zeros(k)) out.push_back({z, (h_ - g_) / (h_ * k)});
  }
  std::sort(out.begin(), out.end(),
            [](const PointMass& p, const PointMass& q) { return p.x < q.x; });
  return out;
}

LimitDensity LimitDensity::from_ac(double a, double c, int k) {
  if (!(a >= 0.0) || !(c >= 0.0) || !std::isfinite(a) || !std::isfinite(c)) {
    throw DomainError("limit density needs a >= 0 and c >= 0");
  }
  if (k < 1) throw DomainError("limit density needs k >= 1");
  const double s = 2.0 * a + c + 2.0;
  return {a, c, k, (c + 1.0) / s, 1.0 / s, kappa_ac(a, c), mu_ac(a, c)};
}

double LimitDensity::kappa_ac(double a, double c) {
  const double s = 2.0 * a + c + 2.0;
  return ((2.0 * a + 1.0) * (c + 2.0) + c * (c + 1.0)) / (s * s);
}

double LimitDensity::mu_ac(double a, double c) {
  const double s = 2.0 * a + c + 2.0;
  return (2.0 * a + 1.0) * (c + 1.0) * (2.0 * a + c + 1.0) / (s * s * s * s);
}

ChainLimit LimitDensity::even_blocks() const { return ChainLimit(g, h, k); }
ChainLimit LimitDensity::odd_blocks() const { return ChainLimit(h, g, k); }

double density_sieved(double x, const LimitDensity& d) { return d.even_blocks().density(x); }

GeneralDensity general_density(double g, double h, int k, double x) {
  const ChainLimit lim(g, h, k);
  return {lim.density(x), lim.catalog()};
}

HermiteLimit::HermiteLimit(double c) : c_(c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("Hermite limit needs c >= 0");
  const double outer2 = c / 2.0 + 1.0 + std::sqrt(c + 1.0);
  r_out_ = std::sqrt(outer2);
  r_in_ = std::sqrt(c * c / 4.0 / outer2);
}

bool HermiteLimit::contains(double x) const {
  const double ax = std::abs(x);
  return ax > r_in_ && ax < r_out_;
}

std::vector<std::pair<double, double>> HermiteLimit::intervals() const {
  if (r_in_ == 0.0) return {{-r_out_, r_out_}};
  return {{-r_out_, -r_in_}, {r_in_, r_out_}};
}

double HermiteLimit::density(double x) const {
  const double ax = std::abs(x);
  if (ax == 0.0 && r_in_ == 0.0) {
    throw SingularityError("Hermite limit density evaluated at x = 0");
  }
  if (ax <= r_in_ || ax >= r_out_) return 0.0;
  // (c+1) - (x^2 - c/2 - 1)^2 = (r_out^2 - x^2)(x^2 - r_in^2)
  const double outer = (r_out_ - ax) * (r_out_ + ax);
  const double inner = (ax - r_in_) * (ax + r_in_);
  return std::sqrt(outer) * (std::sqrt(inner) / ax) / kPi;
}

double HermiteLimit::mass_between(double y0, double y1) const {
  y0 = std::max(y0, -r_out_);
  y1 = std::min(y1, r_out_);
  if (y1 <= y0) return 0.0;
  std::vector<double> cuts{y0};
  for (double e : {-r_in_, 0.0, r_in_}) {
    if (e > cuts.back() && e < y1) cuts.push_back(e);
  }
  cuts.push_back(y1);
  // Distances to the support edges come from the piece offsets when the piece
  // ends there, so the square roots stay accurate at the edges.
  const std::function<double(double, NodeOffsets)> f = [&](double x, NodeOffsets off) {
    const double ax = std::abs(x);
    double inner = ax - r_in_;
    double outer = r_out_ - ax;
    if (off.right == -r_in_) inner = off.from_right;
    if (off.left == r_in_) inner = off.from_left;
    if (off.left == -r_out_) outer = off.from_left;
    if (off.right == r_out_) outer = off.from_right;
    if (inner <= 0.0 || outer <= 0.0) return 0.0;
    return std::sqrt(outer * (r_out_ + ax)) * (std::sqrt(inner * (ax + r_in_)) / ax) / kPi;
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!contains(0.5 * (cuts[i] + cuts[i + 1]))) continue;
    total += adaptive_integrate(f, cuts[i], cuts[i + 1], {}, kMassQuadrature);
  }
  return total;
}

double HermiteLimit::cdf(double y) const { return mass_between(-r_out_, y); }

double density_hermite(double x, double c) { return HermiteLimit(c).density(x); }

double limit_cdf(const LimitDensity& d, double y) { return d.even_blocks().cdf(y); }

double limit_cdf_hermite(double c, double y) { return HermiteLimit(c).cdf(y); }

EmpiricalCDF::EmpiricalCDF(std::vector<double> zeros, std::size_t l, double rescale)
    : zeros_(std::move(zeros)), l_(l) {
  if (l == 0) throw DomainError("empirical CDF needs l >= 1");
  if (!(rescale > 0.0)) throw DomainError("empirical CDF rescale must be positive");
  for (double& z : zeros_) z /= rescale;
  std::sort(zeros_.begin(), zeros_.end());
}

double EmpiricalCDF::operator()(double y) const {
  const auto n = std::upper_bound(zeros_.begin(), zeros_.end(), y) - zeros_.begin();
  return static_cast<double>(n) / static_cast<double>(l_);
}

EmpiricalCDF empirical_cdf(const FamilySpec& spec, const ParameterSchedule& schedule,
                           std::size_t l, double rescale) {
  return EmpiricalCDF(zeros(degree_dependent_coeffs(spec, schedule, l)), l, rescale);
}

EmpiricalCDF empirical_cdf(const FamilySpec& spec, const ParameterSchedule& schedule,
                           std::size_t l) {
  const double rescale = spec.on_interval() ? 1.0 : std::sqrt(static_cast<double>(l));
  return empirical_cdf(spec, schedule, l, rescale);
}

LimitTarget LimitTarget::sieved(const LimitDensity& d) {
  const ChainLimit lim = d.even_blocks();
  const double hull = lim.region().hull();
  return {-hull, hull, [lim](double y0, double y1) { return lim.mass_between(y0, y1); }};
}

LimitTarget LimitTarget::hermite(double c) {
  const HermiteLimit lim(c);
  return {-lim.outer(), lim.outer(),
          [lim](double y0, double y1) { return lim.mass_between(y0, y1); }};
}

std::vector<double> cdf_on_grid(const LimitTarget& target, const std::vector<double>& ys,
                                unsigned threads) {
  const std::size_t n = ys.size();
  std::vector<double> pieces(n, 0.0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double from = i == 0 ? target.lo : ys[i - 1];
      pieces[i] = ys[i] > from ? target.mass_between(from, ys[i]) : 0.0;
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  std::vector<double> out(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += pieces[i];
    out[i] = acc;
  }
  return out;
}

LimitGrid tabulate(const LimitTarget& target, std::size_t grid_points, unsigned threads) {
  if (grid_points < 2) throw DomainError("tabulate needs at least 2 grid points");
  LimitGrid grid;
  grid.ys.resize(grid_points);
  const double step = (target.hi - target.lo) / static_cast<double>(grid_points - 1);
  for (std::size_t i = 0; i < grid_points; ++i) {
    grid.ys[i] = target.lo + step * static_cast<double>(i);
  }
  grid.ys.back() = target.hi;
  grid.cdf = cdf_on_grid(target, grid.ys, threads);
  return grid;
}

ComparisonReport compare(const EmpiricalCDF& e, const LimitGrid& grid, std::size_t bins) {
  if (grid.ys.size() < 2) throw DomainError("compare needs at least 2 grid points");
  if (bins < 1) bins = 1;
  const double lo = grid.ys.front();
  const double hi = grid.ys.back();
  ComparisonReport rep{e.degree(), 0.0, lo, {}};
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    rep.intervals.push_back({lo + width * static_cast<double>(b),
                             lo + width * static_cast<double>(b + 1), 0.0});
  }
  rep.intervals.back().hi = hi;
  for (std::size_t i = 0; i < grid.ys.size(); ++i) {
    const double d = std::abs(e(grid.ys[i]) - grid.cdf[i]);
    if (d > rep.sup_distance) {
      rep.sup_distance = d;
      rep.argmax = grid.ys[i];
    }
    auto b = static_cast<std::size_t>((grid.ys[i] - lo) / width);
    b = std::min(b, bins - 1);
    rep.intervals[b].max_distance = std::max(rep.intervals[b].max_distance, d);
  }
  return rep;
}

ComparisonReport compare(const EmpiricalCDF& e, const LimitTarget& target,
                         std::size_t grid_points, std::size_t bins, unsigned threads) {
  return compare(e, tabulate(target, grid_points, threads), bins);
}

}  // namespace opoly
