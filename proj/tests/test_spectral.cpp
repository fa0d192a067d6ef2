#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "opoly/cfrac.hpp"
#include "opoly/errors.hpp"
#include "opoly/specfun.hpp"
#include "opoly/spectral.hpp"
#include "oracles.hpp"

using namespace opoly;

namespace {

std::vector<FamilySpec> grid_families() {
  std::vector<FamilySpec> out;
  for (double gamma : {0.5, 1.0, 2.5}) {
    out.push_back(FamilySpec::gen_hermite(gamma));
    for (double alpha : {0.0, 0.5, 1.2}) {
      out.push_back(FamilySpec::gen_ultraspherical(alpha, gamma));
      for (int k : {2, 3, 5}) {
        out.push_back(FamilySpec::sieved_first(alpha, gamma, k));
        out.push_back(FamilySpec::sieved_second(alpha, gamma, k));
      }
    }
  }
  return out;
}

// Degrees n at which the catalog has a pattern, with the block index m <= 6.
std::vector<std::size_t> pattern_degrees(const FamilySpec& spec) {
  const std::size_t k = spec.k();
  std::vector<std::size_t> ns;
  for (std::size_t m = 0; m <= 6; ++m) {
    switch (spec.family()) {
      case Family::GenHermite:
      case Family::GenUltraspherical:
        if (m >= 1) {
          ns.push_back(2 * m);
          ns.push_back(2 * m - 1);
        }
        break;
      case Family::SievedFirst:
        ns.push_back(k * (2 * m + 1) - 1);
        if (m >= 1) ns.push_back(2 * m * k - 1);
        break;
      case Family::SievedSecond:
        ns.push_back(k * (2 * m + 2) - 2);
        if (k * (2 * m + 1) >= 3) ns.push_back(k * (2 * m + 1) - 2);
        break;
    }
  }
  return ns;
}

}  // namespace

TEST_CASE("two-point measure") {
  for (double gamma : {0.0, 0.5, 3.0}) {
    const auto m = zeros_and_masses(hermite_coeffs(gamma, 1));
    REQUIRE(m.size() == 2);
    const double r = std::sqrt((1 + gamma) / 2);
    CHECK(m.points[0] == doctest::Approx(-r).epsilon(1e-15));
    CHECK(m.points[1] == doctest::Approx(r).epsilon(1e-15));
    CHECK(m.masses[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.masses[1] == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("zeros of the cubic against an expanded-polynomial root finder") {
  for (auto [alpha, gamma] : {std::pair{0.5, 0.0}, {1.0, 0.0}, {0.3, 1.7}}) {
    const auto c = ultraspherical_coeffs(alpha, gamma, 2);
    // P_3 = x^3 - (a_1 + a_2) x
    const auto roots = oracle::grid_roots({0.0, -(c.a()[0] + c.a()[1]), 0.0, 1.0}, -1.1, 1.1);
    const auto z = zeros(c);
    REQUIRE(roots.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(z[i] - roots[i]) < 1e-12);
  }
  // alpha = 1 is the Chebyshev-U case: points {-1/sqrt2, 0, 1/sqrt2}
  const auto u = zeros(ultraspherical_coeffs(1.0, 0.0, 2));
  CHECK(u[0] == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-14));
  CHECK(std::abs(u[1]) < 1e-15);
  CHECK(u[2] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("Gauss exactness against weight moments") {
  const std::size_t n = 6;
  const auto m = zeros_and_masses(ultraspherical_coeffs(0.4, 1.1, n));
  const auto w = WeightFunction::gen_ultraspherical(0.4, 1.1);
  for (int j = 0; j <= static_cast<int>(2 * n + 1); ++j) {
    CHECK(std::abs(m.moment(j) - w.moment(j)) < 1e-9);
  }
  // one past the exact range the agreement ends
  CHECK(std::abs(m.moment(2 * n + 2) - w.moment(2 * n + 2)) > 1e-6);
}

TEST_CASE("residue masses") {
  SUBCASE("reversed Hermite n = 4") {
    const auto m = residue_masses(reverse(hermite_coeffs(2.0, 4)));
    for (std::size_t i = 0; i < m.size(); ++i) {
      CHECK(m.masses[i] == doctest::Approx(i == 2 ? 3.0 / 7 : 1.0 / 7).epsilon(1e-12));
    }
  }
  SUBCASE("classical Hermite reversed measures are uniform") {
    for (std::size_t n = 1; n <= 25; ++n) {
      const auto m = residue_masses(reversed_coeffs(FamilySpec::gen_hermite(0.0), n));
      for (double w : m.masses) CHECK(w == doctest::Approx(1.0 / (n + 1)).epsilon(1e-10));
    }
  }
  SUBCASE("dual paths agree") {
    const auto c = ultraspherical_coeffs(0.3, 0.8, 9);
    const auto a = zeros_and_masses(c);
    const auto b = residue_masses(c);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(std::abs(a.points[i] - b.points[i]) < 1e-10);
      CHECK(std::abs(a.masses[i] - b.masses[i]) < 1e-10);
    }
  }
  SUBCASE("dual paths agree for every family up to n = 40") {
    for (const auto& spec : grid_families()) {
      for (std::size_t n : {1u, 5u, 16u, 29u, 40u}) {
        for (bool rev : {false, true}) {
          const auto c = rev ? reversed_coeffs(spec, n) : family_coeffs(spec, n);
          const auto a = zeros_and_masses(c);
          const auto b = residue_masses(c);
          REQUIRE(a.size() == b.size());
          for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(std::abs(a.points[i] - b.points[i]) < 1e-10);
            CHECK(std::abs(a.masses[i] - b.masses[i]) < 1e-10);
          }
        }
      }
    }
  }
}

TEST_CASE("measure invariants") {
  for (const auto& spec : grid_families()) {
    const auto fw = zeros_and_masses(family_coeffs(spec, 23));
    const auto rv = reversed_measure(spec, 23);
    CHECK(fw.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rv.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < fw.size(); ++i) {
      // same support
      CHECK(std::abs(fw.points[i] - rv.points[i]) < 1e-10);
      // +- symmetry of points and masses
      const std::size_t j = fw.size() - 1 - i;
      CHECK(std::abs(fw.points[i] + fw.points[j]) < 1e-12);
      CHECK(std::abs(fw.masses[i] - fw.masses[j]) < 1e-12);
      CHECK(std::abs(rv.masses[i] - rv.masses[j]) < 1e-12);
      if (i > 0) CHECK(fw.points[i] > fw.points[i - 1]);
    }
  }
}

TEST_CASE("zeros interlace between consecutive degrees") {
  for (const auto& spec : grid_families()) {
    for (std::size_t n = 1; n < 20; ++n) {
      const auto lo = zeros(family_coeffs(spec, n));
      const auto hi = zeros(family_coeffs(spec, n + 1));
      for (std::size_t i = 0; i < lo.size(); ++i) {
        CHECK(hi[i] < lo[i]);
        CHECK(lo[i] < hi[i + 1]);
      }
    }
  }
}

TEST_CASE("catalog entries") {
  SUBCASE("second kind, n = k(2m+2)-2") {
    const auto p = pattern_catalog(FamilySpec::sieved_second(0.5, 1.0, 3), 3 * 6 - 2);
    REQUIRE(p.groups.size() == 3);
    CHECK(p.groups[0].set == PointSet::ChebyshevUZeros);
    CHECK(p.groups[0].ratio == doctest::Approx(2.0));
    CHECK(p.groups[1].set == PointSet::ChebyshevTZeros);
    CHECK(p.groups[1].ratio == doctest::Approx(2.0));
    CHECK(p.groups[2].set == PointSet::Remaining);
    CHECK(p.groups[2].ratio == 1.0);
  }
  SUBCASE("Hermite, n = 2m") {
    const auto p = pattern_catalog(FamilySpec::gen_hermite(0.8), 10);
    REQUIRE(p.groups.size() == 2);
    CHECK(p.groups[0].set == PointSet::Origin);
    CHECK(p.groups[0].ratio == doctest::Approx(1.8));
  }
  SUBCASE("second kind, n = k(2m+1)-2 masses") {
    const double alpha = 0.7;
    const int k = 3;
    const std::size_t m = 2;
    const auto spec = FamilySpec::sieved_second(alpha, 0.4, k);
    const std::size_t n = k * (2 * m + 1) - 2;
    const auto r = check_pattern(reversed_measure(spec, n), pattern_catalog(spec, n));
    CHECK(r.pass);
    const double denom = 2.0 * m * k + (2 * alpha + 1) * (k - 1);
    CHECK(r.groups[0].set == PointSet::ChebyshevUZeros);
    CHECK(r.groups[0].expected_mass == doctest::Approx((2 * alpha + 1) / denom).epsilon(1e-14));
    CHECK(r.groups[0].mean_mass == doctest::Approx((2 * alpha + 1) / denom).epsilon(1e-10));
    CHECK(r.groups[1].mean_mass == doctest::Approx(1.0 / denom).epsilon(1e-10));
  }
  SUBCASE("mismatched degree") {
    CHECK_THROWS_AS(pattern_catalog(FamilySpec::sieved_first(0.5, 1.0, 3), 4), StructureError);
    CHECK_THROWS_AS(pattern_catalog(FamilySpec::sieved_second(0.5, 1.0, 3), 5), StructureError);
  }
}

TEST_CASE("check_pattern examples") {
  SUBCASE("Hermite odd case: equal masses 1/(2m)") {
    for (std::size_t m = 1; m <= 6; ++m) {
      const auto spec = FamilySpec::gen_hermite(1.7);
      const auto r = check_pattern(reversed_measure(spec, 2 * m - 1),
                                   pattern_catalog(spec, 2 * m - 1));
      CHECK(r.pass);
      REQUIRE(r.groups.size() == 1);
      CHECK(r.groups[0].expected_mass == doctest::Approx(1.0 / (2 * m)));
    }
  }
  SUBCASE("first kind, n = k(2m+1)-1") {
    const double gamma = 1.3;
    const int k = 3;
    const std::size_t m = 2;
    const auto spec = FamilySpec::sieved_first(0.4, gamma, k);
    const std::size_t n = k * (2 * m + 1) - 1;
    const auto r = check_pattern(reversed_measure(spec, n), pattern_catalog(spec, n));
    CHECK(r.pass);
    CHECK(r.groups[0].count == static_cast<std::size_t>(k));
    CHECK(r.groups[0].mean_mass ==
          doctest::Approx((gamma + 1) / (k * (2 * m + 1 + gamma))).epsilon(1e-10));
    CHECK(r.groups[1].count == 2 * m * k);
    CHECK(r.groups[1].mean_mass == doctest::Approx(1 / (k * (2 * m + 1 + gamma))).epsilon(1e-10));
  }
  SUBCASE("first kind, n = 2mk-1 is uniform") {
    const auto spec = FamilySpec::sieved_first(0.4, 1.3, 3);
    const auto r = check_pattern(reversed_measure(spec, 11), pattern_catalog(spec, 11));
    CHECK(r.pass);
    CHECK(r.groups[0].count == 12);
    CHECK(r.groups[0].mean_mass == doctest::Approx(1.0 / 12).epsilon(1e-10));
  }
  SUBCASE("unclaimed point") {
    MassPattern only_t{"T only", 2, {{PointSet::ChebyshevTZeros, 1.0}}};
    CHECK_THROWS_AS(check_pattern(reversed_measure(FamilySpec::gen_hermite(1.0), 4), only_t),
                    StructureError);
  }
  SUBCASE("forward measures do not show the pattern") {
    const auto spec = FamilySpec::gen_hermite(2.0);
    const auto r = check_pattern(zeros_and_masses(family_coeffs(spec, 6)), pattern_catalog(spec, 6));
    CHECK_FALSE(r.pass);
  }
}

TEST_CASE("every pattern holds across the parameter grid") {
  std::size_t checked = 0;
  double worst = 0;
  for (const auto& spec : grid_families()) {
    for (std::size_t n : pattern_degrees(spec)) {
      const auto r = check_pattern(reversed_measure(spec, n), pattern_catalog(spec, n), 1e-9);
      CHECK_MESSAGE(r.pass, r.label, " n=", n, " alpha=", spec.alpha(), " gamma=", spec.gamma(),
                    " k=", spec.k());
      worst = std::max(worst, r.max_deviation);
      ++checked;
    }
  }
  MESSAGE("patterns checked: ", checked, ", worst deviation ", worst);
  CHECK(worst < 1e-12);
}

TEST_CASE("Jacobi matrix") {
  const auto j = JacobiMatrix::from(CoefficientSequence({0.1, 0.2, 0.3}, {0.25, 4.0}));
  CHECK(j.size() == 3);
  CHECK(j.offdiag[0] == doctest::Approx(0.5));
  CHECK(j.offdiag[1] == doctest::Approx(2.0));
  CHECK(j.diag[2] == 0.3);
  // nonsymmetric b: points shift with the diagonal
  const auto m = zeros_and_masses(CoefficientSequence({1.0, 1.0}, {0.25}));
  CHECK(m.points[0] == doctest::Approx(0.5));
  CHECK(m.points[1] == doctest::Approx(1.5));
}
