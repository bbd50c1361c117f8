// Walks the two device audits end to end: the disentangler's forced
// coefficients colliding with unitarity, and the entangler's four sign
// readings with their Gram verdicts.

#include <cstdio>

#include "nosignal/disentangler.hpp"
#include "nosignal/entangler.hpp"

using namespace nosignal;

int main() {
  std::printf("== disentangler: (|H1H2> + |V1V2>)/sqrt(2) -> 0.8|H1H2> + "
              "0.6|V1V2>\n\n");
  const disentangler::Target target{cplx(0.8, 0), cplx(0.6, 0)};
  const auto verdict = disentangler::audit(target);
  for (const auto& step : verdict.narrative)
    std::printf("  %-36s lhs=%+.6f%+.6fi rhs=%+.6f%+.6fi  %s\n",
                step.claim.c_str(), step.lhs.real(), step.lhs.imag(),
                step.rhs.real(), step.rhs.imag(),
                step.holds ? "holds" : "VIOLATED");
  std::printf("\n  contradiction: %s, statistically visible: %s\n",
              verdict.contradiction ? "yes" : "no",
              verdict.signalling ? "yes" : "no");

  const auto shift = disentangler::receiver_shift(target);
  std::printf("  receiver H probability: %.4f -> %.4f (shift %+.4f)\n\n",
              shift.before, shift.after, shift.shift);

  std::printf("== entangler: |Psi1> -> (|Psi1> +- |Psi2>)/sqrt(2), four sign "
              "readings\n\n");
  for (const auto& params : entangler::four_readings()) {
    const auto audit = entangler::audit(params);
    std::printf("  reading %s: single-input norm %.6f (%s), Gram %s",
                params.signs().c_str(), audit.single_input_norm,
                audit.single_input_check_passes ? "passes" : "fails",
                audit.gram.is_isometry ? "isometry" : "NOT an isometry");
    if (audit.witness)
      std::printf(", witness input maps to norm^2 = %.6f",
                  audit.witness->image_norm_sq);
    std::printf("\n");
  }

  std::printf("\n  one application to |H1H2> (reading ++):\n");
  const auto initial =
      qcore::StateVector::basis(qcore::Space::photon_pair(), {"H", "H"});
  const auto demo = entangler::demo(initial, entangler::Params{+1, +1});
  std::printf("    receiver H marginal %.4f -> %.4f, Schmidt rank %zu -> %zu\n",
              demo.marginal_before, demo.marginal_after,
              demo.schmidt_before.rank, demo.schmidt_after.rank);
  return 0;
}
