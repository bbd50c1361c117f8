#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "nosignal/common.hpp"
#include "nosignal/linmaps.hpp"
#include "nosignal/qcore.hpp"

namespace nosignal::disentangler {

/// Requested one-sided evolution of the balanced entangled photon pair:
///   (|H1H2> + |V1V2>)/sqrt(2)  ->  alpha|H1H2> + beta|V1V2>.
/// The device is statistically visible (can signal) only when |alpha|
/// differs from 1/sqrt(2); eps_sig gives that condition a numeric margin.
struct Target {
  cplx alpha;
  cplx beta;

  void validate() const {
    const double total = std::norm(alpha) + std::norm(beta);
    require(std::abs(total - 1.0) <= eps_norm,
            "target coefficients must satisfy |alpha|^2 + |beta|^2 = 1");
  }

  bool signalling() const {
    return std::abs(std::abs(alpha) - 1.0 / std::numbers::sqrt2) > eps_sig;
  }
};

/// Coefficients of the device's action on each photon-1 basis state:
///   |H1> -> a|H1> + b|V1>   (applied when photon 2 is H)
///   |V1> -> c|H1> + d|V1>   (applied when photon 2 is V)
struct LocalCoefficients {
  cplx a, b, c, d;
};

/// One replayable step of the derivation: an equality with both sides
/// evaluated, checkable as |lhs - rhs| <= tolerance.
struct DerivationStep {
  std::string claim;
  cplx lhs;
  cplx rhs;
  double tolerance = 0.0;
  bool holds = false;
};

struct AuditVerdict {
  LocalCoefficients coefficients;
  double unitarity_row1 = 0.0;  // |a|^2 + |b|^2
  double unitarity_row2 = 0.0;  // |c|^2 + |d|^2
  bool contradiction = false;
  bool signalling = false;
  std::vector<DerivationStep> narrative;
};

struct ShiftReport {
  double before = 0.0;  // receiver H probability, sender idle
  double after = 0.0;   // receiver H probability, device applied
  double shift = 0.0;
};

/// The unique local coefficients forced by matching the linear expansion of
/// the device's action against the target state: cross terms must vanish and
/// the surviving amplitudes must carry the full target weight.
inline LocalCoefficients solve(const Target& target) {
  target.validate();
  const double root2 = std::sqrt(2.0);
  return LocalCoefficients{root2 * target.alpha, cplx(0, 0), cplx(0, 0),
                           root2 * target.beta};
}

namespace detail {

inline DerivationStep step(std::string claim, cplx lhs, cplx rhs,
                           double tolerance) {
  DerivationStep s{std::move(claim), lhs, rhs, tolerance, false};
  s.holds = std::abs(lhs - rhs) <= tolerance;
  return s;
}

}  // namespace detail

/// Replay the forced-coefficient derivation and test it against unitarity.
/// A contradiction is the expected outcome for every signalling target; it
/// is reported, never thrown.
inline AuditVerdict audit(const Target& target) {
  target.validate();
  const LocalCoefficients c = solve(target);

  AuditVerdict verdict;
  verdict.coefficients = c;
  verdict.unitarity_row1 = std::norm(c.a) + std::norm(c.b);
  verdict.unitarity_row2 = std::norm(c.c) + std::norm(c.d);
  verdict.signalling = target.signalling();

  const double root2 = std::sqrt(2.0);
  auto& steps = verdict.narrative;
  steps.push_back(detail::step("|alpha|^2 + |beta|^2 = 1",
                               std::norm(target.alpha) + std::norm(target.beta),
                               1.0, eps_norm));
  steps.push_back(detail::step("b = 0 (no V1H2 cross term)", c.b, 0.0, 1e-12));
  steps.push_back(detail::step("c = 0 (no H1V2 cross term)", c.c, 0.0, 1e-12));
  steps.push_back(detail::step("a = sqrt(2) alpha", c.a, root2 * target.alpha,
                               1e-12));
  steps.push_back(detail::step("d = sqrt(2) beta", c.d, root2 * target.beta,
                               1e-12));
  steps.push_back(detail::step("|a|^2 = 2 |alpha|^2", std::norm(c.a),
                               2.0 * std::norm(target.alpha), 1e-12));
  steps.push_back(detail::step("|d|^2 = 2 |beta|^2", std::norm(c.d),
                               2.0 * std::norm(target.beta), 1e-12));
  steps.push_back(detail::step("unitarity row 1: |a|^2 + |b|^2 = 1",
                               verdict.unitarity_row1, 1.0, eps_unitary));
  steps.push_back(detail::step("unitarity row 2: |c|^2 + |d|^2 = 1",
                               verdict.unitarity_row2, 1.0, eps_unitary));

  const DerivationStep& row1 = steps[steps.size() - 2];
  const DerivationStep& row2 = steps[steps.size() - 1];
  verdict.contradiction = !(row1.holds && row2.holds);
  return verdict;
}

/// Receiver-side statistics, computed through the state machinery rather
/// than read off the coefficients: H probability on photon 2 before and
/// after the requested evolution.
inline ShiftReport receiver_shift(const Target& target) {
  target.validate();
  const qcore::Space space = qcore::Space::photon_pair();
  const auto hh = qcore::StateVector::basis(space, {"H", "H"});
  const auto vv = qcore::StateVector::basis(space, {"V", "V"});
  const double inv_root2 = 1.0 / std::sqrt(2.0);

  const auto entangled =
      qcore::superpose({{inv_root2, hh}, {inv_root2, vv}});
  const auto disentangled =
      qcore::superpose({{target.alpha, hh}, {target.beta, vv}});

  ShiftReport report;
  report.before = qcore::marginal(entangled, 1, "H");
  report.after = qcore::marginal(disentangled, 1, "H");
  report.shift = report.after - report.before;
  return report;
}

/// The single-photon map the solved coefficients describe, as a basis-map
/// spec: |H1> -> a|H1> + b|V1>, |V1> -> c|H1> + d|V1>. Running the Gram
/// audit on this map must agree with the verdict above.
inline linmaps::BasisMapSpec induced_map(const LocalCoefficients& c) {
  const qcore::Space photon = qcore::Space::single_photon();
  linmaps::BasisMapSpec spec{photon, photon, {}};
  spec.images.push_back({c.a, c.b});
  spec.images.push_back({c.c, c.d});
  return spec;
}

}  // namespace nosignal::disentangler
