#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "bemc/drift.hpp"
#include "bemc/errors.hpp"
#include "bemc/gaussian.hpp"
#include "bemc/innovation.hpp"
#include "bemc/model.hpp"
#include "bemc/quadrature.hpp"

using namespace bemc;

namespace {

// E[(1+|Y|)^p] for Y ~ N(0,1) and integer p, by binomial expansion in the
// absolute moments E|Y|^k = 2^{k/2} Gamma((k+1)/2) / sqrt(pi).
double gaussian_weighted_mass(int p) {
  double sum = 0.0;
  for (int k = 0; k <= p; ++k) {
    const double log_choose = std::lgamma(p + 1.0) - std::lgamma(k + 1.0) -
                              std::lgamma(p - k + 1.0);
    const double log_moment = 0.5 * k * std::log(2.0) +
                              std::lgamma(0.5 * (k + 1.0)) -
                              0.5 * std::log(std::acos(-1.0));
    sum += std::exp(log_choose + log_moment);
  }
  return sum;
}

ParamBox canonical_box() {
  return ParamBox::lattice(0.1, 0.5, 1.0, 0.01, 0.04, 7.0);
}

}  // namespace

TEST_CASE("adaptive Simpson meets its absolute tolerance") {
  const auto cubic = [](double x) { return x * x * x; };
  CHECK(std::abs(adaptive_simpson(cubic, 0.0, 1.0, 1e-10) - 0.25) <= 1e-12);

  const auto bell = [](double x) { return std::exp(-x * x); };
  // sqrt(pi)/2 * erf(1)
  const double exact = 0.74682413281242702;
  CHECK(std::abs(adaptive_simpson(bell, 0.0, 1.0, 1e-10) - exact) <= 1e-9);

  // Degenerate interval integrates to zero.
  CHECK_EQ(adaptive_simpson(bell, 1.0, 1.0, 1e-10), 0.0);
  CHECK_EQ(adaptive_simpson(bell, 2.0, 1.0, 1e-10), 0.0);
}

TEST_CASE("weighted polynomial mass matches the binomial-expansion oracle") {
  const InnovationLaw g = InnovationLaw::gaussian();
  const double oracle = gaussian_weighted_mass(7);
  CHECK(std::abs(g.weighted_polynomial_mass(7.0, 1e-8) - oracle) <= 1e-7);
  CHECK(std::abs(g.weighted_polynomial_mass(2.0, 1e-8) -
                 gaussian_weighted_mass(2)) <= 1e-7);
}

TEST_CASE("gaussian tail bounds shrink and cover the support search") {
  const InnovationLaw g = InnovationLaw::gaussian();
  const double t8 = g.tail_bound(7.0, 8.0);
  const double t10 = g.tail_bound(7.0, 10.0);
  CHECK(t8 > t10);
  CHECK(t10 > 0.0);
  const double T = g.support_halfwidth(7.0, 1e-10);
  CHECK(g.tail_bound(7.0, T) <= 1e-10);
}

TEST_CASE("iota on the canonical box matches the closed-form oracle") {
  const ParamBox box = canonical_box();
  const double oracle =
      std::pow(0.1 + std::sqrt(0.04), 7.0) * gaussian_weighted_mass(7);
  const double iota = check_iota(box);
  CHECK(std::abs(iota - oracle) <= 1e-6);
  CHECK(iota < 1.0);
}

TEST_CASE("iota is monotone in the contraction base") {
  const ParamBox narrow = ParamBox::lattice(0.05, 0.5, 1.0, 0.01, 0.04, 7.0);
  const ParamBox wide = ParamBox::lattice(0.3, 0.5, 1.0, 0.01, 0.04, 7.0);
  const ParamBox fat_b = ParamBox::lattice(0.1, 0.5, 1.0, 0.01, 0.09, 7.0);
  const double mid = check_iota(canonical_box());
  CHECK(check_iota(narrow) < mid);
  CHECK(mid < check_iota(wide));
  CHECK(mid < check_iota(fat_b));
}

TEST_CASE("iota above one analytically on the wide box") {
  ParamBox fail_box;
  fail_box.rho_bar = 0.9;
  fail_box.M_b = 0.25;
  // (0.9 + 0.5)^p >= 1 and the weighted mass is >= 1, so iota > 1.
  CHECK(check_iota(fail_box) > 1.0);
}

TEST_CASE("moment order above the student tail is rejected") {
  ParamBox box;
  box.p = 14.0;
  box.innovation = InnovationLaw::student(14);
  CHECK_THROWS_AS(check_iota(box), MomentOrderError);
  CHECK(InnovationLaw::student(14).has_moment(13.5));
  CHECK_FALSE(InnovationLaw::student(14).has_moment(14.0));
  CHECK_EQ(InnovationLaw::student(14).fourth_moment(),
           doctest::Approx(3.6).epsilon(1e-12));
}

TEST_CASE("drift package verdict on the canonical box") {
  const ParamBox box = canonical_box();
  const DriftReport report = check_drift(box);
  CHECK(report.iota_pass);
  CHECK(report.drift_pass);
  CHECK(report.minorization_pass);
  CHECK(report.pass);
  CHECK_EQ(report.varrho, doctest::Approx(0.5 * (report.iota + 1.0)));
  CHECK(report.varrho < 1.0);
  CHECK_EQ(report.s, 2.0);
  CHECK(report.varsigma > 1.0);
  CHECK(std::isfinite(report.varsigma));

  // Closed form for the minorization mass: the integrand is a shifted
  // gaussian density, so the integral reduces to normal cdf differences.
  const double c = std::sqrt(box.m_a);
  const double shift = box.rho_bar * report.s;
  const double sigma_max =
      std::sqrt(box.M_a + box.M_b * report.s * report.s);
  const double oracle = 2.0 * c *
                        (gaussian_cdf((report.s + shift) / c) -
                         gaussian_cdf(shift / c)) /
                        sigma_max;
  CHECK(std::abs(report.minorization_mass - oracle) <= 1e-6);
  CHECK(report.minorization_mass > 0.0);

  const std::string json = drift_report_json(report);
  CHECK(json.find("\"iota\"") != std::string::npos);
  CHECK(json.find("\"minorization_mass\"") != std::string::npos);
  CHECK(json.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("iota failure short-circuits the drift search") {
  ParamBox fail_box;
  fail_box.rho_bar = 0.9;
  fail_box.M_b = 0.25;
  const DriftReport report = check_drift(fail_box, 7.0, {1.0, 2.0});
  CHECK_FALSE(report.iota_pass);
  CHECK_FALSE(report.drift_pass);
  CHECK_FALSE(report.pass);
  CHECK_EQ(report.s, 0.0);
}

TEST_CASE("drift ratio contracts far out and not at the origin") {
  const ParamBox box = canonical_box();
  const double varrho = 0.5 * (check_iota(box) + 1.0);
  CHECK(drift_ratio(box.grid.front(), 100.0, 7.0) <= varrho);
  CHECK(drift_ratio(box.grid.back(), 100.0, 7.0) <= varrho);
  CHECK(drift_ratio(box.grid.front(), 0.0, 7.0) > 1.0);
}

TEST_CASE("empty ladders and grids are rejected once iota passes") {
  const ParamBox box = canonical_box();
  CHECK_THROWS_AS(check_drift(box, 7.0, {}), DomainError);
  ParamBox no_grid = box;
  no_grid.grid.clear();
  CHECK_THROWS_AS(check_drift(no_grid, 7.0, {1.0}), DomainError);
}
