#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nosignal/common.hpp"

namespace nosignal::sigstat {

// ---------------------------------------------------------------------------
// Counter-based deterministic randomness.
//
// Generator: the SplitMix64 finalizer (Steele/Lea/Doug's splittable PRNG mix,
// popularized by Vigna), applied twice as a keyed hash of the draw's
// coordinates:
//
//   z = mix(seed + GOLDEN * (stream + 1))
//   z = mix(z    + GOLDEN * (index  + 1))
//   u = (z >> 11) * 2^-53            in [0, 1)
//
// Each (seed, stream, index) triple maps to one double with no sequential
// state, so draws may be evaluated in any order or in parallel and still
// reproduce bit-identically. Streams are assigned one per message bit,
// indices one per particle sample.
// ---------------------------------------------------------------------------

namespace rng {

inline constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;

inline constexpr std::uint64_t mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t index) {
  std::uint64_t z = mix(seed + golden * (stream + 1));
  z = mix(z + golden * (index + 1));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

}  // namespace rng

// ---------------------------------------------------------------------------
// Exact binomial tails. Terms come from log-space factorials so n up to 10^4
// stays finite; tails are summed term by term in the tail's own direction
// (never via 1 - cdf) so tiny probabilities keep their relative accuracy.
// No normal approximation anywhere.
// ---------------------------------------------------------------------------

inline double binomial_pmf(int n, int k, double p) {
  require(n >= 0 && k >= 0 && k <= n, "binomial pmf needs 0 <= k <= n");
  require(p >= 0.0 && p <= 1.0, "probability outside [0, 1]");
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const double log_choose = std::lgamma(double(n) + 1.0) -
                            std::lgamma(double(k) + 1.0) -
                            std::lgamma(double(n - k) + 1.0);
  return std::exp(log_choose + double(k) * std::log(p) +
                  double(n - k) * std::log1p(-p));
}

/// P(X <= k); k < 0 gives 0.
inline double binomial_cdf(int n, int k, double p) {
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  double total = 0.0;
  for (int i = 0; i <= k; ++i) total += binomial_pmf(n, i, p);
  return std::min(total, 1.0);
}

/// P(X > k); k >= n gives 0.
inline double binomial_tail_above(int n, int k, double p) {
  if (k >= n) return 0.0;
  if (k < 0) return 1.0;
  double total = 0.0;
  for (int i = n; i > k; --i) total += binomial_pmf(n, i, p);
  return std::min(total, 1.0);
}

// ---------------------------------------------------------------------------
// The many-particle signalling protocol: the receiver measures n identically
// prepared particles per message bit and counts outcomes consistent with the
// idle distribution, then thresholds the count.
// ---------------------------------------------------------------------------

/// p0: per-particle success probability with the sender idle.
/// p1: the same probability after the sender acted.
/// Decision rule: for p1 <= p0, declare "acted" iff successes <= k_threshold;
/// for p1 > p0 the mirrored rule, declare "acted" iff successes >= k_threshold.
struct SignalBudget {
  double p0 = 1.0;
  double p1 = 0.5;
  int n = 1;
  int k_threshold = 0;

  void validate() const {
    require(p0 >= 0.0 && p0 <= 1.0, "p0 outside [0, 1]");
    require(p1 >= 0.0 && p1 <= 1.0, "p1 outside [0, 1]");
    require(n >= 1, "need at least one sample per symbol");
    require(k_threshold >= 0 && k_threshold <= n,
            "threshold must lie in [0, n]");
  }

  bool low_count_rule() const { return p1 <= p0; }

  std::string rule() const {
    return low_count_rule() ? "declare acted iff successes <= k_threshold"
                            : "declare acted iff successes >= k_threshold";
  }
};

/// type1: probability of declaring "acted" when idle.
/// type2: probability of declaring "idle" when acted.
/// total_min: the best achievable type1 + type2 over all n+1 thresholds —
/// equal to 1 exactly when the two distributions are indistinguishable.
struct ErrorReport {
  double type1 = 0.0;
  double type2 = 0.0;
  double total_min = 0.0;
  int best_threshold = 0;
  std::string rule;
};

namespace detail {

struct ThresholdErrors {
  double type1 = 0.0;
  double type2 = 0.0;
};

inline ThresholdErrors errors_at(const SignalBudget& budget, int k) {
  if (budget.low_count_rule())
    return {binomial_cdf(budget.n, k, budget.p0),
            binomial_tail_above(budget.n, k, budget.p1)};
  return {binomial_tail_above(budget.n, k - 1, budget.p0),
          binomial_cdf(budget.n, k - 1, budget.p1)};
}

}  // namespace detail

inline ErrorReport decision_errors(const SignalBudget& budget) {
  budget.validate();
  ErrorReport report;
  report.rule = budget.rule();
  const auto at = detail::errors_at(budget, budget.k_threshold);
  report.type1 = at.type1;
  report.type2 = at.type2;

  report.total_min = 2.0;
  for (int k = 0; k <= budget.n; ++k) {
    const auto e = detail::errors_at(budget, k);
    if (e.type1 + e.type2 < report.total_min) {
      report.total_min = e.type1 + e.type2;
      report.best_threshold = k;
    }
  }
  return report;
}

/// Minimal sample count whose best threshold pushes both error kinds to
/// epsilon or below, by upward scan with exact tails. possible = false when
/// the distributions coincide; found = false when the scan cap is hit.
struct SampleRequirement {
  bool possible = true;
  bool found = false;
  int n = 0;
  int k_threshold = 0;
  double type1 = 0.0;
  double type2 = 0.0;
};

inline SampleRequirement required_samples(double p0, double p1, double epsilon,
                                          int n_max = 10000) {
  require(p0 >= 0.0 && p0 <= 1.0, "p0 outside [0, 1]");
  require(p1 >= 0.0 && p1 <= 1.0, "p1 outside [0, 1]");
  require(epsilon > 0.0 && epsilon <= 0.5, "epsilon must lie in (0, 0.5]");
  require(n_max >= 1, "scan cap must be positive");

  SampleRequirement out;
  if (p0 == p1) {
    out.possible = false;
    return out;
  }
  for (int n = 1; n <= n_max; ++n) {
    SignalBudget budget{p0, p1, n, 0};
    double best = 2.0;
    int best_k = 0;
    detail::ThresholdErrors best_errors;
    for (int k = 0; k <= n; ++k) {
      const auto e = detail::errors_at(budget, k);
      const double worst = std::max(e.type1, e.type2);
      if (worst < best) {
        best = worst;
        best_k = k;
        best_errors = e;
      }
    }
    if (best <= epsilon) {
      out.found = true;
      out.n = n;
      out.k_threshold = best_k;
      out.type1 = best_errors.type1;
      out.type2 = best_errors.type2;
      return out;
    }
  }
  return out;
}

/// Seeded end-to-end channel run: per message bit, n particle outcomes drawn
/// from the idle or acted distribution, thresholded back into a bit.
struct SimReport {
  std::vector<int> sent;
  std::vector<int> decoded;
  std::vector<int> success_counts;
  double empirical_error_rate = 0.0;
  std::uint64_t seed = 0;
  std::string rule;
};

inline SimReport simulate(const SignalBudget& budget,
                          const std::vector<int>& message,
                          std::uint64_t seed) {
  budget.validate();
  for (int bit : message)
    require(bit == 0 || bit == 1, "message bits must be 0 or 1");

  SimReport report;
  report.sent = message;
  report.seed = seed;
  report.rule = budget.rule();

  std::size_t wrong = 0;
  for (std::size_t i = 0; i < message.size(); ++i) {
    const double p = message[i] ? budget.p1 : budget.p0;
    int successes = 0;
    for (int j = 0; j < budget.n; ++j)
      if (rng::uniform01(seed, i, static_cast<std::uint64_t>(j)) < p)
        ++successes;
    const bool acted = budget.low_count_rule()
                           ? successes <= budget.k_threshold
                           : successes >= budget.k_threshold;
    report.success_counts.push_back(successes);
    report.decoded.push_back(acted ? 1 : 0);
    if (report.decoded.back() != message[i]) ++wrong;
  }
  report.empirical_error_rate =
      message.empty() ? 0.0 : double(wrong) / double(message.size());
  return report;
}

}  // namespace nosignal::sigstat
