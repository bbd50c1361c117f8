#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nosignal/common.hpp"
#include "nosignal/qcore.hpp"

namespace nosignal::tunnel {

/// Single particle over two boxes, restricted to the one-particle subspace:
///   amp1 multiplies |X1=1, X2=0>, amp2 multiplies |X1=0, X2=1>.
struct TwoBoxState {
  cplx amp1;
  cplx amp2;

  double norm_sq() const { return std::norm(amp1) + std::norm(amp2); }

  void validate() const {
    require(std::abs(norm_sq() - 1.0) <= eps_norm,
            "two-box state must be normalized");
  }
};

enum class Barrier { open, blocked };

struct Segment {
  double begin = 0.0;
  std::optional<double> end;  // empty = unbounded
  Barrier barrier = Barrier::open;
};

/// Piecewise barrier schedule starting at t = 0: contiguous, non-overlapping
/// segments, the last one optionally unbounded.
class Schedule {
 public:
  explicit Schedule(std::vector<Segment> segments)
      : segments_(std::move(segments)) {
    require(!segments_.empty(), "schedule must contain at least one segment");
    require(segments_.front().begin == 0.0, "schedule must start at t = 0");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      const Segment& seg = segments_[i];
      if (seg.end) {
        require(*seg.end > seg.begin, "segment must have positive duration");
        if (i + 1 < segments_.size())
          require(segments_[i + 1].begin == *seg.end,
                  "segments must be contiguous");
      } else {
        require(i + 1 == segments_.size(),
                "only the last segment may be unbounded");
      }
    }
  }

  static Schedule always(Barrier barrier) {
    return Schedule({Segment{0.0, std::nullopt, barrier}});
  }

  const std::vector<Segment>& segments() const { return segments_; }

  double cover_end() const {
    const auto& last = segments_.back();
    return last.end ? *last.end : std::numeric_limits<double>::infinity();
  }

  bool covers(double t) const { return t >= 0.0 && t <= cover_end(); }

  /// Accumulated open-barrier duration in [0, t].
  double open_time(double t) const {
    require(covers(t), "time outside the schedule's cover");
    double acc = 0.0;
    for (const Segment& seg : segments_) {
      if (seg.begin >= t) break;
      const double stop = seg.end ? std::min(*seg.end, t) : t;
      if (seg.barrier == Barrier::open) acc += stop - seg.begin;
    }
    return acc;
  }

  double total_open_time() const {
    double acc = 0.0;
    for (const Segment& seg : segments_) {
      if (!seg.end) {
        if (seg.barrier == Barrier::open)
          return std::numeric_limits<double>::infinity();
        continue;
      }
      if (seg.barrier == Barrier::open) acc += *seg.end - seg.begin;
    }
    return acc;
  }

  /// Earliest t at which the accumulated open time reaches tau.
  std::optional<double> time_when_open_reaches(double tau) const {
    if (tau <= 0.0) return 0.0;
    double acc = 0.0;
    for (const Segment& seg : segments_) {
      if (seg.barrier != Barrier::open) continue;
      const double length = seg.end
                                ? (*seg.end - seg.begin)
                                : std::numeric_limits<double>::infinity();
      if (acc + length >= tau) return seg.begin + (tau - acc);
      acc += length;
    }
    return std::nullopt;
  }

 private:
  std::vector<Segment> segments_;
};

/// Two-level hopping dynamics with a blockable coupling. The model: while
/// the barrier is open the amplitudes rotate at rate gamma (generator
/// gamma * sigma_x, supported on both boxes); while blocked they are frozen.
/// gamma is a model parameter, not a published value. Negative gamma runs
/// the inverse rotation; zero is rejected.
struct TunnelConfig {
  double gamma = 1.0;
  Schedule schedule = Schedule::always(Barrier::open);
  std::vector<double> t_grid;

  void validate() const {
    require(gamma != 0.0, "gamma must be non-zero");
    for (double t : t_grid)
      require(schedule.covers(t), "grid point outside the schedule's cover");
  }
};

/// Closed-form rotation by angle theta = gamma * (open time):
///   amp1 -> cos(theta) amp1 - i sin(theta) amp2
///   amp2 -> -i sin(theta) amp1 + cos(theta) amp2
inline TwoBoxState rotate(const TwoBoxState& s, double theta) {
  const double c = std::cos(theta);
  const cplx mis(0, -std::sin(theta));
  return TwoBoxState{c * s.amp1 + mis * s.amp2, mis * s.amp1 + c * s.amp2};
}

inline TwoBoxState evolve(const TunnelConfig& config, const TwoBoxState& initial,
                          double t_from, double t_to) {
  config.validate();
  initial.validate();
  require(t_from <= t_to, "evolution interval must run forward");
  require(config.schedule.covers(t_from) && config.schedule.covers(t_to),
          "time outside the schedule's cover");
  const double open =
      config.schedule.open_time(t_to) - config.schedule.open_time(t_from);
  return rotate(initial, config.gamma * open);
}

inline TwoBoxState evolve(const TunnelConfig& config, const TwoBoxState& initial,
                          double t) {
  return evolve(config, initial, 0.0, t);
}

/// Occupation probabilities (P(X1), P(X2)).
inline std::pair<double, double> occupations(const TwoBoxState& s) {
  s.validate();
  return {std::norm(s.amp1), std::norm(s.amp2)};
}

/// Earliest time at which a particle starting in box 1 reaches P(X2) = 0.5,
/// i.e. accumulated open time pi/(4|gamma|). Empty when the schedule never
/// opens long enough.
inline std::optional<double> time_to_balance(const TunnelConfig& config) {
  config.validate();
  const double tau = std::numbers::pi / (4.0 * std::abs(config.gamma));
  return config.schedule.time_when_open_reaches(tau);
}

enum class Spin { plus, minus };

/// Isomorphism from the spin-exchange subspace onto the two-box model:
///   |+>_1 |->_2  <->  |X1=1, X2=0>,   |->_1 |+>_2  <->  |X1=0, X2=1>.
/// Aligned spins are outside the exchange subspace and rejected; with this
/// mapping every box operation applies to the spin pair verbatim.
inline TwoBoxState spin_map(Spin first, Spin second) {
  require(first != second,
          "spin state must be |+->, or |-+>: aligned spins do not exchange");
  return first == Spin::plus ? TwoBoxState{cplx(1, 0), cplx(0, 0)}
                             : TwoBoxState{cplx(0, 0), cplx(1, 0)};
}

struct TraceSample {
  double t = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  cplx amp1;
  cplx amp2;
};

inline std::vector<TraceSample> trace(const TunnelConfig& config,
                                      const TwoBoxState& initial) {
  config.validate();
  initial.validate();
  std::vector<TraceSample> out;
  out.reserve(config.t_grid.size());
  for (double t : config.t_grid) {
    const TwoBoxState s = evolve(config, initial, t);
    const auto [p1, p2] = occupations(s);
    out.push_back({t, p1, p2, s.amp1, s.amp2});
  }
  return out;
}

/// Embed into the labeled two-slot occupation (or spin) space, zero
/// amplitude outside the one-particle (one-exchange) subspace. Lets the
/// entanglement machinery run on tunnelling states directly.
inline qcore::StateVector to_qcore_state(const TwoBoxState& s,
                                         bool spin_basis = false) {
  const qcore::Space space =
      spin_basis ? qcore::Space::spin_pair() : qcore::Space::boxes();
  std::vector<cplx> amps(4, cplx(0, 0));
  if (spin_basis) {
    amps[space.index_of({"+", "-"})] = s.amp1;
    amps[space.index_of({"-", "+"})] = s.amp2;
  } else {
    amps[space.index_of({"1", "0"})] = s.amp1;
    amps[space.index_of({"0", "1"})] = s.amp2;
  }
  return qcore::StateVector::intermediate(space, std::move(amps));
}

}  // namespace nosignal::tunnel
