// The two-box story in numbers: how long the barrier must stay open to
// balance the occupations, and how many particles the receiver needs before
// the statistics carry a reliable bit.

#include <cstdio>
#include <numbers>

#include "nosignal/sigstat.hpp"
#include "nosignal/tunnel.hpp"

using namespace nosignal;

int main() {
  const double gamma = 1.0;
  const tunnel::TunnelConfig config{
      gamma, tunnel::Schedule::always(tunnel::Barrier::open), {}};
  const tunnel::TwoBoxState start{cplx(1, 0), cplx(0, 0)};

  std::printf("== barrier open, coupling gamma = %.1f\n\n", gamma);
  std::printf("  %8s %10s %10s\n", "t", "P(X1)", "P(X2)");
  const double balance = tunnel::time_to_balance(config).value();
  for (int i = 0; i <= 8; ++i) {
    const double t = balance * double(i) / 4.0;
    const auto [p1, p2] =
        tunnel::occupations(tunnel::evolve(config, start, t));
    std::printf("  %8.4f %10.6f %10.6f%s\n", t, p1, p2,
                i == 4 ? "   <- balance, open time pi/(4 gamma)" : "");
  }

  std::printf("\n== receiver statistics: idle keeps the particle in X1 "
              "(p0 = 1), opening the barrier leaves p1 = 0.5\n\n");
  const auto single =
      sigstat::decision_errors(sigstat::SignalBudget{1.0, 0.5, 1, 0});
  std::printf("  one particle: type II error %.3f - a coin flip, no reliable "
              "bit\n", single.type2);

  for (double epsilon : {0.1, 0.01, 0.001}) {
    const auto req = sigstat::required_samples(1.0, 0.5, epsilon);
    std::printf("  error budget %.3f: %d particles per bit (threshold %d, "
                "type2 = %.2e)\n",
                epsilon, req.n, req.k_threshold, req.type2);
  }

  std::printf("\n== pushing \"1 0 1 1 0 1 0 0\" through the channel, 10 "
              "particles per bit, seed 42\n\n");
  const sigstat::SignalBudget budget{1.0, 0.5, 10, 9};
  const auto sim = sigstat::simulate(budget, {1, 0, 1, 1, 0, 1, 0, 0}, 42);
  std::printf("  sent    :");
  for (int b : sim.sent) std::printf(" %d", b);
  std::printf("\n  decoded :");
  for (int b : sim.decoded) std::printf(" %d", b);
  std::printf("\n  counts  :");
  for (int c : sim.success_counts) std::printf(" %d", c);
  std::printf("\n  empirical error rate: %.3f\n", sim.empirical_error_rate);
  return 0;
}
