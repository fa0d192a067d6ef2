#include "opoly/specfun.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "opoly/errors.hpp"

namespace opoly {

namespace {

constexpr double kPi = std::numbers::pi;

// Symmetric point sets are built from their nonnegative half so that x and -x
// agree bit for bit and a middle zero is exactly 0.
std::vector<double> mirrored(std::vector<double> positive, bool with_zero) {
  std::sort(positive.begin(), positive.end());
  std::vector<double> out;
  out.reserve(2 * positive.size() + 1);
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) out.push_back(-*it);
  if (with_zero) out.push_back(0.0);
  out.insert(out.end(), positive.begin(), positive.end());
  return out;
}

struct Estimate {
  double value = 0.0;
  double err = 0.0;
  double l1 = 0.0;
  bool ok = false;
};

struct PieceIntegrator {
  const std::function<double(double, NodeOffsets)>& f;
  double piece_lo;
  double piece_hi;

  Estimate estimate(double lo, double hi, double tol) const {
    thread_local boost::math::quadrature::tanh_sinh<double> ts;
    const double width = hi - lo;
    auto g = [&](double x, double xc) {
      double dl;
      double dr;
      if (xc <= 0.0) {
        dl = -xc;
        dr = width - dl;
      } else {
        dr = xc;
        dl = width - dr;
      }
      const NodeOffsets off{(lo - piece_lo) + dl, (piece_hi - hi) + dr, piece_lo, piece_hi};
      return f(x, off);
    };
    Estimate e;
    try {
      e.value = ts.integrate(g, lo, hi, tol, &e.err, &e.l1);
      e.ok = std::isfinite(e.value) && std::isfinite(e.err);
    } catch (const boost::math::evaluation_error&) {
      e.ok = false;
    }
    return e;
  }

  // Bisect until every leaf meets the absolute target.
  double refine(double lo, double hi, const Estimate& e, double target, double tol,
                int depth, int max_depth) const {
    if (e.ok && e.err <= target) return e.value;
    if (depth >= max_depth) {
      throw ConvergenceError("adaptive_integrate: no convergence on [" + std::to_string(lo) +
                             ", " + std::to_string(hi) + "] after " +
                             std::to_string(depth) + " subdivisions");
    }
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) {
      throw ConvergenceError("adaptive_integrate: interval [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "] cannot be subdivided further");
    }
    const Estimate left = estimate(lo, mid, tol);
    const Estimate right = estimate(mid, hi, tol);
    return refine(lo, mid, left, target, tol, depth + 1, max_depth) +
           refine(mid, hi, right, target, tol, depth + 1, max_depth);
  }
};

}  // namespace

std::vector<double> chebyshev_t_zeros(int k) {
  if (k < 1) return {};
  std::vector<double> positive;
  for (int j = 1; 2 * j - 1 < k; ++j) {
    positive.push_back(std::cos((2.0 * j - 1.0) * kPi / (2.0 * k)));
  }
  return mirrored(std::move(positive), k % 2 == 1);
}

std::vector<double> chebyshev_u_zeros(int degree) {
  if (degree < 1) return {};
  std::vector<double> positive;
  for (int j = 1; 2 * j < degree + 1; ++j) {
    positive.push_back(std::cos(j * kPi / (degree + 1.0)));
  }
  return mirrored(std::move(positive), degree % 2 == 1);
}

double adaptive_integrate(const std::function<double(double, NodeOffsets)>& f, double lo,
                          double hi, std::vector<double> singular_points,
                          QuadratureOptions options) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("adaptive_integrate needs a finite interval");
  }
  if (lo == hi) return 0.0;
  if (lo > hi) return -adaptive_integrate(f, hi, lo, std::move(singular_points), options);

  std::vector<double> cuts{lo};
  std::sort(singular_points.begin(), singular_points.end());
  for (double s : singular_points) {
    if (s > lo && s < hi && s != cuts.back()) cuts.push_back(s);
  }
  cuts.push_back(hi);

  const double tol = options.rel_tol * 0.1;
  std::vector<PieceIntegrator> pieces;
  std::vector<Estimate> first;
  double l1 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    pieces.push_back(PieceIntegrator{f, cuts[i], cuts[i + 1]});
    first.push_back(pieces.back().estimate(cuts[i], cuts[i + 1], tol));
    if (first.back().ok) l1 += first.back().l1;
  }
  const double target = std::max({options.rel_tol * l1, options.abs_tol, 1e-300});
  double total = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    total += pieces[i].refine(cuts[i], cuts[i + 1], first[i], target, tol, 0, options.max_depth);
  }
  return total;
}

double adaptive_integrate(const std::function<double(double)>& f, double lo, double hi,
                          std::vector<double> singular_points, QuadratureOptions options) {
  const std::function<double(double, NodeOffsets)> g = [&f](double x, NodeOffsets) {
    return f(x);
  };
  return adaptive_integrate(g, lo, hi, std::move(singular_points), options);
}

CellTrig cell_trig(int k, double theta, NodeOffsets off) {
  const double scale = 2.0 * k / kPi;
  auto edge_index = [&](double t, long& j) {
    const double r = t * scale;
    j = std::lround(r);
    return std::abs(r - static_cast<double>(j)) < 1e-12;
  };
  long j = 0;
  double e = 0.0;
  bool anchored = false;
  if (off.from_left <= off.from_right && edge_index(off.left, j)) {
    e = k * off.from_left;
    anchored = true;
  } else if (edge_index(off.right, j)) {
    e = -k * off.from_right;
    anchored = true;
  } else if (edge_index(off.left, j)) {
    e = k * off.from_left;
    anchored = true;
  }
  if (!anchored) {
    return {std::abs(std::sin(k * theta)), std::abs(std::cos(k * theta))};
  }
  // k theta = j pi/2 + e
  const double s = std::abs(std::sin(e));
  const double c = std::abs(std::cos(e));
  if (j % 2 == 0) return {s, c};
  return {c, s};
}

std::vector<double> theta_cell_edges(int k) {
  std::vector<double> edges;
  edges.reserve(2 * k + 1);
  for (int j = 0; j <= 2 * k; ++j) edges.push_back(j * kPi / (2.0 * k));
  edges.back() = kPi;
  return edges;
}

WeightFunction::WeightFunction(WeightKind kind, double alpha, double gamma, int k)
    : kind_(kind), alpha_(alpha), gamma_(gamma), k_(k) {
  if (!(gamma > -1.0)) throw DomainError("weight needs gamma > -1");
  if (kind != WeightKind::GenHermite && !(alpha > -0.5)) {
    throw DomainError("weight needs alpha > -1/2");
  }
  if (k < 1) throw DomainError("weight needs k >= 1");
}

WeightFunction WeightFunction::gen_hermite(double gamma) {
  return WeightFunction(WeightKind::GenHermite, 0.0, gamma, 1);
}
WeightFunction WeightFunction::gen_ultraspherical(double alpha, double gamma) {
  return WeightFunction(WeightKind::GenUltraspherical, alpha, gamma, 1);
}
WeightFunction WeightFunction::sieved_first(double alpha, double gamma, int k) {
  return WeightFunction(WeightKind::SievedFirst, alpha, gamma, k);
}
WeightFunction WeightFunction::sieved_second(double alpha, double gamma, int k) {
  return WeightFunction(WeightKind::SievedSecond, alpha, gamma, k);
}

double WeightFunction::support_hi(int degree) const {
  if (kind_ != WeightKind::GenHermite) return 1.0;
  return std::max(10.0, 3.0 * std::sqrt(std::max(0.0, degree + gamma_)));
}

double WeightFunction::support_lo(int degree) const { return -support_hi(degree); }

std::vector<double> WeightFunction::singular_points() const {
  if (kind_ == WeightKind::GenHermite) return {0.0};
  std::vector<double> pts{-1.0, 1.0};
  for (double z : chebyshev_t_zeros(k_)) pts.push_back(z);
  for (double z : chebyshev_u_zeros(k_ - 1)) pts.push_back(z);
  std::sort(pts.begin(), pts.end());
  return pts;
}

double WeightFunction::operator()(double x) const {
  if (kind_ == WeightKind::GenHermite) {
    return std::pow(std::abs(x), gamma_) * std::exp(-x * x);
  }
  if (x < -1.0 || x > 1.0) return 0.0;
  const double one_minus = (1.0 - x) * (1.0 + x);
  const double base = std::pow(std::abs(chebyshev_u(k_ - 1, x)), 2.0 * alpha_) *
                      std::pow(std::abs(chebyshev_t(k_, x)), gamma_);
  const double edge = kind_ == WeightKind::SievedSecond ? alpha_ + 0.5 : alpha_ - 0.5;
  return std::pow(one_minus, edge) * base;
}

double WeightFunction::theta_density(double theta, NodeOffsets off) const {
  // w(cos t) sin t = |sin kt|^{2alpha} |cos kt|^gamma  (times sin^2 t for the second kind)
  const CellTrig trig = cell_trig(k_, theta, off);
  double v = std::pow(trig.abs_sin, 2.0 * alpha_) * std::pow(trig.abs_cos, gamma_);
  if (kind_ == WeightKind::SievedSecond) {
    const double s = std::sin(theta);
    v *= s * s;
  }
  return v;
}

double WeightFunction::raw_moment(int j) const {
  if (j < 0) throw DomainError("moment order must be >= 0");
  if (kind_ == WeightKind::GenHermite) {
    const double hi = support_hi(j);
    const std::function<double(double, NodeOffsets)> f = [&](double x, NodeOffsets off) {
      const double ax = x >= 0.0 ? off.from_left : off.from_right;
      const double near_zero = (off.left == 0.0 || off.right == 0.0) ? ax : std::abs(x);
      return std::pow(x, j) * std::pow(near_zero, gamma_) * std::exp(-x * x);
    };
    return adaptive_integrate(f, -hi, hi, {0.0});
  }
  const int k = kind_ == WeightKind::GenUltraspherical ? 1 : k_;
  const std::function<double(double, NodeOffsets)> f = [&](double t, NodeOffsets off) {
    return std::pow(std::cos(t), j) * theta_density(t, off);
  };
  return adaptive_integrate(f, 0.0, kPi, theta_cell_edges(k));
}

double WeightFunction::moment(int j) const { return raw_moment(j) / raw_moment(0); }

double weight_eval(const WeightFunction& w, double x) { return w(x); }

}  // namespace opoly
