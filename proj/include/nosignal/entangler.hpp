#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nosignal/common.hpp"
#include "nosignal/linmaps.hpp"
#include "nosignal/qcore.hpp"

namespace nosignal::entangler {

/// The product-to-entangled device on span{|Psi1>, |Psi2>}:
///   |Psi1> -> (|Psi1> + s1|Psi2>)/sqrt(2)
///   |Psi2> -> phase2 * (|Psi1> + s2|Psi2>)/sqrt(2)
/// Both "+/-" occurrences are parameters because the published map leaves
/// them ambiguous, and the unitarity verdict flips with the reading.
/// The general form sends |Psi1> to a|Psi1> + b|Psi2>; the partner image is
/// completed to the Gram-compatible one (see build).
struct Params {
  int sign1 = +1;
  int sign2 = +1;
  cplx phase2 = cplx(0, 1);
  std::optional<std::pair<cplx, cplx>> general;  // (a, b), overrides signs

  Params() = default;
  Params(int s1, int s2) : sign1(s1), sign2(s2) {}
  Params(int s1, int s2, cplx ph) : sign1(s1), sign2(s2), phase2(ph) {}

  void validate() const {
    require(sign1 == 1 || sign1 == -1, "sign1 must be +1 or -1");
    require(sign2 == 1 || sign2 == -1, "sign2 must be +1 or -1");
    require(std::abs(std::abs(phase2) - 1.0) <= eps_norm,
            "phase2 must have unit modulus");
    if (general) {
      const double total = std::norm(general->first) + std::norm(general->second);
      require(std::abs(total - 1.0) <= eps_norm,
              "general form requires |a|^2 + |b|^2 = 1");
    }
  }

  std::string signs() const {
    std::string s;
    s += (sign1 > 0) ? '+' : '-';
    s += (sign2 > 0) ? '+' : '-';
    return s;
  }
};

inline qcore::Space span_space() { return qcore::Space::span2("Psi1", "Psi2"); }

/// Basis-map spec of the device on the 2-dim span. For the general form the
/// published map fixes only the image of |Psi1>; in a 2-dim codomain the
/// orthonormal partner is unique up to phase, so the image of |Psi2> is
/// completed to phase2 * (-conj(b)|Psi1> + conj(a)|Psi2>).
inline linmaps::BasisMapSpec build(const Params& params) {
  params.validate();
  const qcore::Space space = span_space();
  linmaps::BasisMapSpec spec{space, space, {}};
  if (params.general) {
    const cplx a = params.general->first;
    const cplx b = params.general->second;
    spec.images.push_back({a, b});
    spec.images.push_back(
        {params.phase2 * -std::conj(b), params.phase2 * std::conj(a)});
  } else {
    const double inv_root2 = 1.0 / std::sqrt(2.0);
    spec.images.push_back({inv_root2, double(params.sign1) * inv_root2});
    spec.images.push_back({params.phase2 * inv_root2,
                           params.phase2 * double(params.sign2) * inv_root2});
  }
  return spec;
}

/// Full Gram verdict next to the published norm check, which applies the map
/// to the single input (|Psi1> + |Psi2>)/sqrt(2) and inspects the output
/// norm. The two are reported side by side because the single-input check
/// passes for every sign reading while the Gram verdict does not.
struct Audit {
  Params params;
  linmaps::GramReport gram;
  double single_input_norm = 0.0;      // the published check's quantity
  bool single_input_check_passes = false;
  std::optional<linmaps::NonIsometryWitness> witness;
  std::string completion;  // set when the general form's partner was derived
};

inline Audit audit(const Params& params) {
  Audit out;
  out.params = params;
  const linmaps::BasisMapSpec spec = build(params);
  out.gram = linmaps::gram(spec);
  out.witness = linmaps::non_isometry_witness(out.gram);
  if (params.general) out.completion = "gram-compatible partner, phase fixed by phase2";

  const double inv_root2 = 1.0 / std::sqrt(2.0);
  const auto probe = qcore::StateVector::physical(
      span_space(), {cplx(inv_root2, 0), cplx(inv_root2, 0)});
  out.single_input_norm = linmaps::extend(spec, probe).norm();
  out.single_input_check_passes =
      std::abs(out.single_input_norm - 1.0) <= eps_unitary;
  return out;
}

/// The four sign readings of the published map, phase2 = i.
inline std::array<Params, 4> four_readings() {
  return {Params{+1, +1}, Params{+1, -1}, Params{-1, +1}, Params{-1, -1}};
}

/// The device embedded in the full photon-pair space, acting on
/// span{|H1H2>, |V1V2>} and as the identity on the complement.
inline linmaps::BasisMapSpec embed_full(const Params& params) {
  return linmaps::embed_identity_on_complement(
      build(params), qcore::Space::photon_pair(), {0, 3});
}

/// Receiver-visible effect of one application to a product photon pair:
/// Schmidt rank and photon-2 H marginal, before and after.
struct DemoReport {
  qcore::StateVector initial;
  qcore::StateVector output;
  qcore::SchmidtReport schmidt_before;
  qcore::SchmidtReport schmidt_after;
  double marginal_before = 0.0;
  double marginal_after = 0.0;
  bool identity_on_complement = true;  // extension flag, always explicit
};

inline DemoReport demo(const qcore::StateVector& initial, const Params& params) {
  require(initial.space() == qcore::Space::photon_pair(),
          "demo expects a photon-pair state");
  require(initial.is_physical(), "demo expects a normalized initial state");
  auto before = qcore::schmidt(initial);
  require(before.rank == 1, "demo starts from a product state");

  const auto spec = embed_full(params);
  auto output = linmaps::extend(spec, initial);

  DemoReport report{initial,
                    output,
                    std::move(before),
                    qcore::schmidt(output),
                    qcore::marginal(initial, 1, "H"),
                    qcore::marginal(output, 1, "H"),
                    true};
  return report;
}

}  // namespace nosignal::entangler
