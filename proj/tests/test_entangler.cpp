#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "nosignal/entangler.hpp"

using namespace nosignal;
using namespace nosignal::entangler;
using Catch::Approx;

namespace {
const double inv_root2 = 1.0 / std::numbers::sqrt2;
}

TEST_CASE("params validation") {
  CHECK_NOTHROW((Params{}.validate()));
  CHECK_THROWS_AS((Params{+2, +1}.validate()), validation_error);
  CHECK_THROWS_AS((Params{+1, +1, cplx(0.5, 0)}).validate(), validation_error);

  Params general;
  general.general = {cplx(1, 0), cplx(1, 0)};
  CHECK_THROWS_AS(general.validate(), validation_error);

  CHECK((Params{+1, -1}.signs()) == "+-");
  CHECK((Params{-1, -1}.signs()) == "--");
}

TEST_CASE("build writes the published images") {
  const auto spec = build(Params{+1, +1});
  REQUIRE(spec.images.size() == 2);
  CHECK(spec.images[0][0] == cplx(inv_root2, 0));
  CHECK(spec.images[0][1] == cplx(inv_root2, 0));
  CHECK(spec.images[1][0] == cplx(0, inv_root2));  // i/sqrt(2)
  CHECK(spec.images[1][1] == cplx(0, inv_root2));

  const auto minus = build(Params{+1, -1});
  CHECK(minus.images[1][1] == cplx(0, -inv_root2));
}

TEST_CASE("same-sign readings fail the Gram audit with a unit off-diagonal") {
  for (const auto& params : {Params{+1, +1}, Params{-1, -1}}) {
    const auto a = audit(params);
    CHECK_FALSE(a.gram.is_isometry);
    CHECK(std::abs(a.gram.gram(0, 1)) == Approx(1.0).margin(1e-12));
    CHECK(std::abs(a.gram.gram(0, 1) - cplx(0, 1)) < 1e-12);

    REQUIRE(a.witness.has_value());
    CHECK(a.witness->eigenvalue == Approx(1.0).margin(1e-10));
    CHECK(a.witness->image_norm_sq == Approx(2.0).margin(1e-10));
    // The doubling input weights both span directions equally.
    CHECK(std::abs(a.witness->input[0]) == Approx(inv_root2).margin(1e-10));
    CHECK(std::abs(a.witness->input[1]) == Approx(inv_root2).margin(1e-10));
  }
}

TEST_CASE("opposite-sign readings are exact isometries") {
  for (const auto& params : {Params{+1, -1}, Params{-1, +1}}) {
    const auto a = audit(params);
    CHECK(a.gram.is_isometry);
    CHECK(a.gram.max_deviation < 1e-12);
    CHECK_FALSE(a.witness.has_value());
  }
}

TEST_CASE("the published single-input norm check passes for all readings") {
  // This is the whole point of the side-by-side report: one normalized input
  // cannot distinguish the readings, the Gram matrix can.
  int isometric = 0;
  for (const auto& params : four_readings()) {
    const auto a = audit(params);
    CHECK(a.single_input_check_passes);
    CHECK(a.single_input_norm == Approx(1.0).margin(1e-12));
    if (a.gram.is_isometry) ++isometric;
  }
  CHECK(isometric == 2);
}

TEST_CASE("general form completes a Gram-compatible partner") {
  Params params;
  params.general = {cplx(inv_root2, 0), cplx(0, inv_root2)};
  const auto spec = build(params);
  // partner = phase2 * (-conj(b), conj(a)) with phase2 = i.
  CHECK(std::abs(spec.images[1][0] - cplx(-inv_root2, 0)) < 1e-15);
  CHECK(std::abs(spec.images[1][1] - cplx(0, inv_root2)) < 1e-15);

  const auto a = audit(params);
  CHECK(a.gram.is_isometry);
  CHECK(a.completion == "gram-compatible partner, phase fixed by phase2");
  CHECK(a.single_input_check_passes);
}

TEST_CASE("full-space embedding acts on the span and fixes the complement") {
  const auto m = linmaps::matrix_of(embed_full(Params{+1, +1}));
  CHECK(std::abs(m(0, 0) - cplx(inv_root2, 0)) < 1e-15);
  CHECK(std::abs(m(3, 0) - cplx(inv_root2, 0)) < 1e-15);
  CHECK(std::abs(m(0, 3) - cplx(0, inv_root2)) < 1e-15);
  CHECK(std::abs(m(3, 3) - cplx(0, inv_root2)) < 1e-15);
  CHECK(m(1, 1) == cplx(1, 0));
  CHECK(m(2, 2) == cplx(1, 0));
  CHECK(m(1, 0) == cplx(0, 0));
  CHECK(m(2, 0) == cplx(0, 0));
}

TEST_CASE("demo turns a product state into a balanced entangled one") {
  const auto initial =
      qcore::StateVector::basis(qcore::Space::photon_pair(), {"H", "H"});
  const auto report = demo(initial, Params{+1, +1});

  CHECK(report.marginal_before == Approx(1.0).margin(1e-12));
  CHECK(report.marginal_after == Approx(0.5).margin(1e-12));
  CHECK(report.schmidt_before.rank == 1);
  CHECK(report.schmidt_after.rank == 2);
  CHECK(report.schmidt_after.coefficients[0] ==
        Approx(inv_root2).margin(1e-12));
  CHECK(report.identity_on_complement);

  CHECK(std::abs(report.output.amplitude(0) - cplx(inv_root2, 0)) < 1e-15);
  CHECK(std::abs(report.output.amplitude(3) - cplx(inv_root2, 0)) < 1e-15);
  CHECK(report.output.amplitude(1) == cplx(0, 0));
  CHECK(report.output.is_physical());
}

TEST_CASE("demo rejects entangled or unnormalized inputs") {
  const qcore::Space space = qcore::Space::photon_pair();
  const auto entangled = qcore::superpose(
      {{inv_root2, qcore::StateVector::basis(space, {"H", "H"})},
       {inv_root2, qcore::StateVector::basis(space, {"V", "V"})}});
  CHECK_THROWS_AS(demo(entangled, Params{+1, +1}), validation_error);

  const auto wrong_space =
      qcore::StateVector::basis(qcore::Space::boxes(), {"0", "0"});
  CHECK_THROWS_AS(demo(wrong_space, Params{+1, +1}), validation_error);
}
