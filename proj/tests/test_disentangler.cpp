#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "nosignal/disentangler.hpp"

using namespace nosignal;
using namespace nosignal::disentangler;
using Catch::Approx;

namespace {

const double inv_root2 = 1.0 / std::numbers::sqrt2;

Target random_target(std::mt19937& gen) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double x = unit(gen);
  const double phi1 = 2.0 * std::numbers::pi * unit(gen);
  const double phi2 = 2.0 * std::numbers::pi * unit(gen);
  return Target{std::sqrt(x) * std::polar(1.0, phi1),
                std::sqrt(1.0 - x) * std::polar(1.0, phi2)};
}

}  // namespace

TEST_CASE("target validation and the signalling margin") {
  CHECK_THROWS_AS((Target{cplx(1, 0), cplx(1, 0)}.validate()), validation_error);
  CHECK_NOTHROW((Target{cplx(0.8, 0), cplx(0, 0.6)}.validate()));

  CHECK((Target{cplx(0.8, 0), cplx(0.6, 0)}.signalling()));
  CHECK_FALSE((Target{cplx(inv_root2, 0), cplx(0, inv_root2)}.signalling()));
}

TEST_CASE("solve returns the forced coefficients") {
  const Target target{cplx(0.8, 0), cplx(0, 0.6)};
  const auto c = solve(target);
  CHECK(c.a == std::numbers::sqrt2 * target.alpha);
  CHECK(c.d == std::numbers::sqrt2 * target.beta);
  CHECK(c.b == cplx(0, 0));
  CHECK(c.c == cplx(0, 0));
}

TEST_CASE("balanced targets produce no contradiction") {
  const auto verdict = audit(Target{cplx(inv_root2, 0), cplx(inv_root2, 0)});
  CHECK_FALSE(verdict.contradiction);
  CHECK_FALSE(verdict.signalling);
  CHECK(verdict.unitarity_row1 == Approx(1.0).margin(1e-12));
  CHECK(verdict.unitarity_row2 == Approx(1.0).margin(1e-12));
  for (const auto& step : verdict.narrative) CHECK(step.holds);

  // Phases do not matter, only moduli do.
  const auto phased = audit(Target{std::polar(inv_root2, 1.234),
                                   std::polar(inv_root2, -0.618)});
  CHECK_FALSE(phased.contradiction);
}

TEST_CASE("signalling targets force a unitarity contradiction") {
  const Target target{cplx(0.8, 0), cplx(0.6, 0)};
  const auto verdict = audit(target);

  CHECK(verdict.contradiction);
  CHECK(verdict.signalling);
  CHECK(verdict.unitarity_row1 == Approx(2.0 * 0.64).margin(1e-12));
  CHECK(verdict.unitarity_row2 == Approx(2.0 * 0.36).margin(1e-12));

  REQUIRE(verdict.narrative.size() == 9);
  // Everything up to the unitarity rows is a forced algebraic identity.
  for (std::size_t i = 0; i + 2 < verdict.narrative.size(); ++i)
    CHECK(verdict.narrative[i].holds);
  CHECK_FALSE(verdict.narrative[7].holds);  // |a|^2 + |b|^2 = 1
  CHECK_FALSE(verdict.narrative[8].holds);  // |c|^2 + |d|^2 = 1
}

TEST_CASE("the margins leave a deliberate microscopic band") {
  // |alpha| barely off 1/sqrt(2): non-unitary at eps_unitary resolution yet
  // below the statistical-visibility margin eps_sig. Both flags are honest.
  const double delta = 5e-10;
  const double mod_a = inv_root2 + delta;
  const double mod_b = std::sqrt(1.0 - mod_a * mod_a);
  const auto verdict = audit(Target{cplx(mod_a, 0), cplx(mod_b, 0)});
  CHECK(verdict.contradiction);
  CHECK_FALSE(verdict.signalling);
}

TEST_CASE("receiver shift is computed through state machinery") {
  const Target target{cplx(0, 0.8), cplx(0.6, 0)};
  const auto shift = receiver_shift(target);
  CHECK(shift.before == Approx(0.5).margin(1e-12));
  CHECK(shift.after == Approx(0.64).margin(1e-12));
  CHECK(shift.shift == Approx(0.14).margin(1e-12));

  const auto balanced = receiver_shift(Target{cplx(inv_root2, 0),
                                              cplx(0, inv_root2)});
  CHECK(balanced.shift == Approx(0.0).margin(1e-12));
}

TEST_CASE("induced map's Gram matrix is diag(2|alpha|^2, 2|beta|^2)") {
  const Target target{cplx(0.8, 0), cplx(0.6, 0)};
  const auto report = linmaps::gram(induced_map(solve(target)));
  CHECK(report.gram(0, 0).real() == Approx(1.28).margin(1e-12));
  CHECK(report.gram(1, 1).real() == Approx(0.72).margin(1e-12));
  CHECK(std::abs(report.gram(0, 1)) == 0.0);
  CHECK_FALSE(report.is_isometry);
}

TEST_CASE("audit verdict agrees with the Gram audit of the induced map") {
  std::mt19937 gen(601);
  for (int trial = 0; trial < 200; ++trial) {
    const Target target = random_target(gen);
    const auto verdict = audit(target);
    const auto report = linmaps::gram(induced_map(verdict.coefficients));
    CHECK(verdict.contradiction == !report.is_isometry);
  }
}
