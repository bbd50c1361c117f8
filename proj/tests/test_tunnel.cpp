#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

#include "nosignal/tunnel.hpp"

using namespace nosignal;
using namespace nosignal::tunnel;
using Catch::Approx;

namespace {

const TwoBoxState in_box1{cplx(1, 0), cplx(0, 0)};

Schedule mixed_schedule() {
  return Schedule({Segment{0.0, 1.0, Barrier::blocked},
                   Segment{1.0, 3.0, Barrier::open},
                   Segment{3.0, 5.0, Barrier::blocked},
                   Segment{5.0, std::nullopt, Barrier::open}});
}

// Independent oracle: RK4 on psi' = -i gamma sigma_x psi while open,
// frozen while blocked. Steps never straddle a segment edge because the
// callers integrate segment by segment.
TwoBoxState rk4_evolve(const TunnelConfig& config, TwoBoxState s,
                       double t_end, double h) {
  double t = 0.0;
  for (const Segment& seg : config.schedule.segments()) {
    if (seg.begin >= t_end) break;
    const double stop = seg.end ? std::min(*seg.end, t_end) : t_end;
    if (seg.barrier == Barrier::blocked) {
      t = stop;
      continue;
    }
    const int steps = std::max(1, int(std::ceil((stop - t) / h)));
    const double dt = (stop - t) / steps;
    const cplx mi(0, -1);
    for (int i = 0; i < steps; ++i) {
      auto deriv = [&](const TwoBoxState& v) {
        return TwoBoxState{mi * config.gamma * v.amp2,
                           mi * config.gamma * v.amp1};
      };
      const auto k1 = deriv(s);
      const auto k2 = deriv({s.amp1 + 0.5 * dt * k1.amp1,
                             s.amp2 + 0.5 * dt * k1.amp2});
      const auto k3 = deriv({s.amp1 + 0.5 * dt * k2.amp1,
                             s.amp2 + 0.5 * dt * k2.amp2});
      const auto k4 = deriv({s.amp1 + dt * k3.amp1, s.amp2 + dt * k3.amp2});
      s.amp1 += dt / 6.0 * (k1.amp1 + 2.0 * k2.amp1 + 2.0 * k3.amp1 + k4.amp1);
      s.amp2 += dt / 6.0 * (k1.amp2 + 2.0 * k2.amp2 + 2.0 * k3.amp2 + k4.amp2);
    }
    t = stop;
  }
  return s;
}

}  // namespace

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS(Schedule({}), validation_error);
  CHECK_THROWS_AS(Schedule({Segment{1.0, 2.0, Barrier::open}}),
                  validation_error);
  CHECK_THROWS_AS(Schedule({Segment{0.0, 1.0, Barrier::open},
                            Segment{2.0, 3.0, Barrier::open}}),
                  validation_error);
  CHECK_THROWS_AS(Schedule({Segment{0.0, std::nullopt, Barrier::open},
                            Segment{1.0, 2.0, Barrier::open}}),
                  validation_error);
  CHECK_THROWS_AS(Schedule({Segment{0.0, 0.0, Barrier::open}}),
                  validation_error);
  CHECK_NOTHROW(mixed_schedule());
}

TEST_CASE("open-time bookkeeping") {
  const Schedule s = mixed_schedule();
  CHECK(s.open_time(0.5) == 0.0);
  CHECK(s.open_time(1.0) == 0.0);
  CHECK(s.open_time(2.0) == Approx(1.0).margin(1e-15));
  CHECK(s.open_time(4.0) == Approx(2.0).margin(1e-15));
  CHECK(s.open_time(7.0) == Approx(4.0).margin(1e-15));
  CHECK(std::isinf(s.total_open_time()));
  CHECK_THROWS_AS(s.open_time(-1.0), validation_error);

  const Schedule bounded({Segment{0.0, 1.0, Barrier::blocked},
                          Segment{1.0, 2.5, Barrier::open},
                          Segment{2.5, 4.0, Barrier::blocked}});
  CHECK(bounded.total_open_time() == Approx(1.5).margin(1e-15));
  CHECK(bounded.cover_end() == 4.0);
  CHECK_FALSE(bounded.covers(4.5));
  CHECK_THROWS_AS(bounded.open_time(4.5), validation_error);
}

TEST_CASE("time_when_open_reaches walks segments") {
  const Schedule s = mixed_schedule();
  CHECK(s.time_when_open_reaches(0.0) == 0.0);
  CHECK(s.time_when_open_reaches(1.5).value() == Approx(2.5).margin(1e-15));
  CHECK(s.time_when_open_reaches(2.0).value() == Approx(3.0).margin(1e-15));
  CHECK(s.time_when_open_reaches(3.0).value() == Approx(6.0).margin(1e-15));

  const Schedule never = Schedule::always(Barrier::blocked);
  CHECK_FALSE(never.time_when_open_reaches(0.1).has_value());

  const Schedule capped({Segment{0.0, 2.0, Barrier::open},
                         Segment{2.0, 3.0, Barrier::blocked}});
  CHECK_FALSE(capped.time_when_open_reaches(2.5).has_value());
}

TEST_CASE("rotation closed form") {
  const auto same = rotate(in_box1, 0.0);
  CHECK(same.amp1 == cplx(1, 0));
  CHECK(same.amp2 == cplx(0, 0));

  const auto quarter = rotate(in_box1, std::numbers::pi / 2.0);
  CHECK(std::abs(quarter.amp1) < 1e-15);
  CHECK(std::abs(quarter.amp2 - cplx(0, -1)) < 1e-15);

  const TwoBoxState skew{cplx(0.6, 0.0), cplx(0.0, 0.8)};
  for (double theta : {0.3, 1.1, 2.9}) {
    const auto rotated = rotate(skew, theta);
    CHECK(rotated.norm_sq() == Approx(1.0).margin(1e-14));
    const auto back = rotate(rotated, -theta);
    CHECK(std::abs(back.amp1 - skew.amp1) < 1e-14);
    CHECK(std::abs(back.amp2 - skew.amp2) < 1e-14);
  }
}

TEST_CASE("occupations follow sin^2 while open") {
  const TunnelConfig config{1.7, Schedule::always(Barrier::open), {}};
  for (double t : {0.0, 0.2, 0.7, 1.3, 2.9}) {
    const auto s = evolve(config, in_box1, t);
    const auto [p1, p2] = occupations(s);
    CHECK(p2 == Approx(std::sin(1.7 * t) * std::sin(1.7 * t)).margin(1e-12));
    CHECK(p1 + p2 == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("evolution composes over subintervals") {
  const TunnelConfig config{0.9, mixed_schedule(), {}};
  const TwoBoxState start{cplx(0.6, 0.0), cplx(0.0, 0.8)};
  for (double t_mid : {0.5, 1.7, 3.2, 5.5}) {
    const auto direct = evolve(config, start, 6.0);
    const auto first = evolve(config, start, 0.0, t_mid);
    const auto second = evolve(config, first, t_mid, 6.0);
    CHECK(std::abs(direct.amp1 - second.amp1) < 1e-13);
    CHECK(std::abs(direct.amp2 - second.amp2) < 1e-13);
  }
}

TEST_CASE("blocked barriers freeze the state exactly") {
  const TunnelConfig config{2.5, Schedule::always(Barrier::blocked), {}};
  const TwoBoxState skew{cplx(0.6, 0.0), cplx(0.0, 0.8)};
  const auto later = evolve(config, skew, 123.0);
  CHECK(later.amp1 == skew.amp1);
  CHECK(later.amp2 == skew.amp2);

  // Mixed schedule: blocked stretches contribute exactly nothing.
  const TunnelConfig mixed{2.5, mixed_schedule(), {}};
  const auto at_open_end = evolve(mixed, skew, 3.0);
  const auto frozen = evolve(mixed, skew, 5.0);
  CHECK(at_open_end.amp1 == frozen.amp1);
  CHECK(at_open_end.amp2 == frozen.amp2);
}

TEST_CASE("negative gamma runs the inverse rotation") {
  const TunnelConfig forward{1.3, Schedule::always(Barrier::open), {}};
  const TunnelConfig backward{-1.3, Schedule::always(Barrier::open), {}};
  const auto there = evolve(forward, in_box1, 0.8);
  const auto back = evolve(backward, there, 0.0, 0.8);
  CHECK(std::abs(back.amp1 - in_box1.amp1) < 1e-14);
  CHECK(std::abs(back.amp2 - in_box1.amp2) < 1e-14);
}

TEST_CASE("config validation") {
  TunnelConfig bad{0.0, Schedule::always(Barrier::open), {}};
  CHECK_THROWS_AS(bad.validate(), validation_error);

  TunnelConfig off_grid{1.0,
                        Schedule({Segment{0.0, 1.0, Barrier::open}}),
                        {0.0, 2.0}};
  CHECK_THROWS_AS(off_grid.validate(), validation_error);

  const TwoBoxState unnorm{cplx(1, 0), cplx(1, 0)};
  TunnelConfig ok{1.0, Schedule::always(Barrier::open), {}};
  CHECK_THROWS_AS(evolve(ok, unnorm, 1.0), validation_error);
  CHECK_THROWS_AS(evolve(ok, in_box1, 2.0, 1.0), validation_error);
}

TEST_CASE("time_to_balance is pi/(4 gamma) of accumulated open time") {
  const TunnelConfig plain{2.0, Schedule::always(Barrier::open), {}};
  CHECK(time_to_balance(plain).value() ==
        Approx(std::numbers::pi / 8.0).margin(1e-12));

  const TunnelConfig delayed{1.0, mixed_schedule(), {}};
  CHECK(time_to_balance(delayed).value() ==
        Approx(1.0 + std::numbers::pi / 4.0).margin(1e-12));

  const TunnelConfig shut{1e-3,
                          Schedule({Segment{0.0, 1.0, Barrier::open},
                                    Segment{1.0, 2.0, Barrier::blocked}}),
                          {}};
  CHECK_FALSE(time_to_balance(shut).has_value());

  // Occupations really balance there.
  const auto t = time_to_balance(delayed).value();
  const auto [p1, p2] = occupations(evolve(delayed, in_box1, t));
  CHECK(p1 == Approx(0.5).margin(1e-12));
  CHECK(p2 == Approx(0.5).margin(1e-12));
}

TEST_CASE("closed form agrees with an independent integrator") {
  const TunnelConfig config{1.3, mixed_schedule(), {}};
  for (double t : {0.5, 1.9, 3.5, 6.2}) {
    const auto closed = evolve(config, in_box1, t);
    const auto stepped = rk4_evolve(config, in_box1, t, 1e-3);
    CHECK(std::abs(closed.amp1 - stepped.amp1) < 1e-8);
    CHECK(std::abs(closed.amp2 - stepped.amp2) < 1e-8);
  }
}

TEST_CASE("spin exchange rides the two-box dynamics") {
  const auto up_down = spin_map(Spin::plus, Spin::minus);
  CHECK(up_down.amp1 == cplx(1, 0));
  const auto down_up = spin_map(Spin::minus, Spin::plus);
  CHECK(down_up.amp2 == cplx(1, 0));
  CHECK_THROWS_AS(spin_map(Spin::plus, Spin::plus), validation_error);

  const TunnelConfig config{1.0, Schedule::always(Barrier::open), {}};
  const auto t = time_to_balance(config).value();
  const auto [p_up_down, p_down_up] =
      occupations(evolve(config, up_down, t));
  CHECK(p_up_down == Approx(0.5).margin(1e-12));
  CHECK(p_down_up == Approx(0.5).margin(1e-12));
}

TEST_CASE("trace samples the grid with consistent occupations") {
  TunnelConfig config{1.0, Schedule::always(Barrier::open), {}};
  for (double t = 0.0; t <= 2.0; t += 0.25) config.t_grid.push_back(t);

  const auto samples = trace(config, in_box1);
  REQUIRE(samples.size() == config.t_grid.size());
  for (const auto& s : samples) {
    CHECK(s.p1 == Approx(std::norm(s.amp1)).margin(1e-14));
    CHECK(s.p2 == Approx(std::sin(s.t) * std::sin(s.t)).margin(1e-12));
  }
}

TEST_CASE("two-box states embed into the labeled spaces") {
  const TwoBoxState skew{cplx(0.6, 0.0), cplx(0.0, 0.8)};

  const auto boxes = to_qcore_state(skew);
  CHECK(boxes.space() == qcore::Space::boxes());
  CHECK(boxes.is_physical());
  CHECK(boxes.amplitude(boxes.space().index_of({"1", "0"})) == skew.amp1);
  CHECK(boxes.amplitude(boxes.space().index_of({"0", "1"})) == skew.amp2);
  CHECK(boxes.amplitude(boxes.space().index_of({"0", "0"})) == cplx(0, 0));
  CHECK(qcore::marginal(boxes, 0, "1") == Approx(0.36).margin(1e-14));

  const auto spins = to_qcore_state(skew, true);
  CHECK(spins.space() == qcore::Space::spin_pair());
  CHECK(spins.amplitude(spins.space().index_of({"+", "-"})) == skew.amp1);
  CHECK(qcore::marginal(spins, 1, "+") == Approx(0.64).margin(1e-14));
}
