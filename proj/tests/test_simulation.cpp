#include <catch2/catch.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "swarmgear/analysis.hpp"
#include "swarmgear/apf.hpp"
#include "swarmgear/scenario.hpp"
#include "swarmgear/simulation.hpp"
#include "swarmgear/units.hpp"

using namespace swarmgear;
using nlohmann::ordered_json;
using scenario::ScenarioConfig;
using sim::TrajectoryLog;

namespace {

ScenarioConfig make_config(const std::vector<std::string>& overrides) {
  ordered_json doc = ordered_json::object();
  for (const std::string& entry : overrides) {
    scenario::apply_override(doc, entry);
  }
  return scenario::parse_config(doc);
}

Eigen::Vector3d tracking_error(const TrajectoryLog& log, std::size_t tick, int agent) {
  return log.reference(tick, agent) - log.sample(tick, agent).position;
}

std::string to_csv(const TrajectoryLog& log) {
  std::ostringstream out;
  sim::write_trajectory_csv(out, log);
  return out.str();
}

}  // namespace

TEST_CASE("potential-field command") {
  swarm::ApfParams params;  // k_att 2, k_rep 0.05, d0 0.6, v_max 0.12
  const Eigen::Vector3d origin = Eigen::Vector3d::Zero();

  SECTION("pure attraction toward the slot, clamped to the speed cap") {
    const Eigen::Vector3d slot(0.03, 0.0, 0.0);
    const Eigen::Vector3d cmd = swarm::apf_velocity_command(params, origin, slot, {});
    CHECK(cmd == Eigen::Vector3d(0.06, 0.0, 0.0));  // -k_att * (p - slot), below the cap

    const Eigen::Vector3d far_slot(10.0, 0.0, 0.0);
    const Eigen::Vector3d capped = swarm::apf_velocity_command(params, origin, far_slot, {});
    CHECK(capped.norm() == Approx(params.v_max).margin(1e-15));
    CHECK(capped.y() == 0.0);
  }

  SECTION("repulsion magnitude inside the influence radius") {
    swarm::ApfParams wide = params;
    wide.v_max = 10.0;  // keep the clamp from masking the raw field
    const Eigen::Vector3d neighbor(-0.3, 0.0, 0.0);
    const Eigen::Vector3d cmd = swarm::apf_velocity_command(wide, origin, origin, {neighbor});
    // k_rep * (1/d - 1/d0) / d^2 with d = 0.3: 0.05 * (5/3) / 0.09.
    CHECK(cmd.x() == Approx(0.925925925925926).margin(1e-12));
    CHECK(cmd.y() == 0.0);
    CHECK(cmd.z() == 0.0);
  }

  SECTION("no repulsion at or beyond the influence radius") {
    const Eigen::Vector3d at_radius(0.6, 0.0, 0.0);
    const Eigen::Vector3d beyond(0.7, 0.0, 0.0);
    CHECK(swarm::apf_velocity_command(params, origin, origin, {at_radius}) ==
          Eigen::Vector3d::Zero());
    CHECK(swarm::apf_velocity_command(params, origin, origin, {beyond}) ==
          Eigen::Vector3d::Zero());
  }

  SECTION("distance floor keeps the field finite") {
    const Eigen::Vector3d touching(1e-9, 0.0, 0.0);
    const Eigen::Vector3d cmd = swarm::apf_velocity_command(params, origin, origin, {touching});
    REQUIRE(cmd.allFinite());
    CHECK(cmd.norm() == Approx(params.v_max).margin(1e-12));
    CHECK(cmd.x() < 0.0);  // pushed away from the neighbor
  }

  SECTION("exactly coincident neighbors exert no force") {
    const Eigen::Vector3d cmd = swarm::apf_velocity_command(params, origin, origin, {origin});
    CHECK(cmd == Eigen::Vector3d::Zero());
  }

  SECTION("parameter validation") {
    swarm::ApfParams bad = params;
    bad.k_att = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = params;
    bad.d0 = -0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  }
}

TEST_CASE("scripted line leader") {
  const ScenarioConfig config = make_config({"sim.duration=14", "sim.path.length=1",
                                             "sim.path.speed=0.1", "topology.followers=1"});
  const TrajectoryLog log = sim::run_simulation(config, 0);

  REQUIRE(log.n_ticks() == 561);  // 14 s at 25 ms plus the initial tick
  CHECK(log.n_agents == 2);
  CHECK(log.dt == 0.025);

  SECTION("the undisturbed leader walks its reference exactly") {
    for (std::size_t k = 0; k < log.n_ticks(); ++k) {
      REQUIRE(log.sample(k, 0).position == log.reference(k, 0));
    }
  }

  SECTION("constant speed while moving, parked after one traversal") {
    const std::size_t moving = 200;  // t = 5 s
    CHECK(log.sample(moving, 0).velocity == Eigen::Vector3d(0.1, 0.0, 0.0));
    CHECK(log.sample(moving, 0).position.x() == Approx(0.5).margin(1e-12));

    const std::size_t done = 480;  // t = 12 s, past the 10 s traversal
    CHECK(log.sample(done, 0).velocity == Eigen::Vector3d(0.0, 0.0, 0.0));
    CHECK(log.sample(done, 0).position == Eigen::Vector3d(1.0, 0.0, 0.0));
  }

  SECTION("heading rotates the whole path") {
    const ScenarioConfig rotated = make_config(
        {"sim.duration=14", "sim.path.length=1", "sim.path.speed=0.1",
         "sim.path.heading_deg=90", "topology.followers=1"});
    const TrajectoryLog vertical = sim::run_simulation(rotated, 0);
    const Eigen::Vector3d end = vertical.sample(vertical.n_ticks() - 1, 0).position;
    CHECK(end.x() == Approx(0.0).margin(1e-12));
    CHECK(end.y() == Approx(1.0).margin(1e-12));
    CHECK(vertical.leader_yaw.back() == Approx(kPi / 2.0).margin(1e-12));
  }

  SECTION("path origin shifts everything") {
    const ScenarioConfig shifted = make_config(
        {"sim.duration=14", "sim.path.length=1", "sim.path.speed=0.1",
         "sim.path.origin=[2,3,0.5]", "topology.followers=1"});
    const TrajectoryLog moved = sim::run_simulation(shifted, 0);
    CHECK(moved.sample(0, 0).position == Eigen::Vector3d(2.0, 3.0, 0.5));
    CHECK(moved.sample(moved.n_ticks() - 1, 0).position ==
          Eigen::Vector3d(3.0, 3.0, 0.5));
  }
}

TEST_CASE("scripted square leader") {
  const ScenarioConfig config = make_config({"sim.duration=45", "sim.path.shape=square",
                                             "sim.path.side=1", "sim.path.speed=0.1",
                                             "topology.followers=1"});
  const TrajectoryLog log = sim::run_simulation(config, 0);

  SECTION("counterclockwise corners at the expected times") {
    CHECK(log.sample(400, 0).position.isApprox(Eigen::Vector3d(1.0, 0.0, 0.0), 1e-9));
    CHECK((log.sample(800, 0).position - Eigen::Vector3d(1.0, 1.0, 0.0)).norm() < 1e-12);
    CHECK((log.sample(1200, 0).position - Eigen::Vector3d(0.0, 1.0, 0.0)).norm() < 1e-12);
    // One full lap returns to the origin and holds.
    CHECK((log.sample(1600, 0).position - Eigen::Vector3d(0.0, 0.0, 0.0)).norm() < 1e-12);
    CHECK(log.sample(1750, 0).velocity == Eigen::Vector3d(0.0, 0.0, 0.0));
  }

  SECTION("logged heading follows the active side") {
    CHECK(log.leader_yaw[200] == Approx(0.0).margin(1e-12));
    CHECK(log.leader_yaw[600] == Approx(kPi / 2.0).margin(1e-12));
    CHECK(log.leader_yaw[1000] == Approx(kPi).margin(1e-9));
    CHECK(log.leader_yaw[1400] == Approx(-kPi / 2.0).margin(1e-9));
    // After the lap the last moving heading is retained.
    CHECK(log.leader_yaw.back() == Approx(-kPi / 2.0).margin(1e-9));
  }
}

TEST_CASE("impedance followers trail the leader by the velocity-force deflection") {
  // Per axis at steady state: K * lag = K_v * v, so lag = K_v v / K. Exact
  // critical damping (D=null) makes the propagator's lambda^2 M equal K; the
  // rounded default D = 12.6 would shift the effective stiffness to
  // D^2/(4M) = 20.8895 and the lag by ~5e-4 relative.
  const ScenarioConfig config =
      make_config({"sim.duration=8", "sim.path.length=2", "sim.path.speed=0.1",
                   "impedance.D=null", "topology.followers=1"});
  const TrajectoryLog log = sim::run_simulation(config, 0);
  const double expected = 12.6 * 0.1 / 20.88;

  const Eigen::Vector3d err = tracking_error(log, log.n_ticks() - 1, 1);
  CHECK(err.x() == Approx(expected).margin(1e-9));
  CHECK(err.y() == 0.0);  // no cross-axis coupling, bitwise
  CHECK(err.z() == 0.0);

  SECTION("the lag scales linearly with the leader speed") {
    const ScenarioConfig faster =
        make_config({"sim.duration=8", "sim.path.length=6", "sim.path.speed=0.5",
                     "impedance.D=null", "topology.followers=1"});
    const TrajectoryLog fast_log = sim::run_simulation(faster, 0);
    const Eigen::Vector3d fast_err = tracking_error(fast_log, fast_log.n_ticks() - 1, 1);
    CHECK(fast_err.x() == Approx(5.0 * expected).margin(1e-8));
  }

  SECTION("follower velocity matches the leader once settled") {
    const Eigen::Vector3d vel = log.sample(200, 1).velocity;  // t = 5 s
    CHECK(vel.x() == Approx(0.1).margin(1e-6));
    CHECK(vel.y() == 0.0);
  }
}

TEST_CASE("chained links split the settled lag") {
  // In a two-follower chain (leader - f1 - f2) the steady state solves
  //   K l1 = K_v v + K (l2 - l1),   K l2 = K (l1 - l2)
  // giving l1 = (2/3) K_v v / K and l2 = (1/3) K_v v / K.
  const ScenarioConfig config = make_config({"sim.duration=14", "sim.path.length=3",
                                             "sim.path.speed=0.1", "impedance.D=null",
                                             "topology.kind=tree", "topology.followers=2"});
  const TrajectoryLog log = sim::run_simulation(config, 0);
  const double unit = 12.6 * 0.1 / 20.88;

  const std::size_t tick = log.n_ticks() - 1;
  CHECK(tracking_error(log, tick, 1).x() == Approx(2.0 / 3.0 * unit).margin(1e-6));
  CHECK(tracking_error(log, tick, 2).x() == Approx(1.0 / 3.0 * unit).margin(1e-6));
}

TEST_CASE("ring links share the lag between both leader neighbors") {
  // Symmetric three-follower ring: the leader-adjacent followers settle at
  // (3/4) K_v v / K and the middle one at (1/2) K_v v / K.
  const ScenarioConfig config = make_config({"sim.duration=14", "sim.path.length=3",
                                             "sim.path.speed=0.1", "impedance.D=null",
                                             "topology.kind=ring", "topology.followers=3"});
  const TrajectoryLog log = sim::run_simulation(config, 0);
  const double unit = 12.6 * 0.1 / 20.88;

  const std::size_t tick = log.n_ticks() - 1;
  CHECK(tracking_error(log, tick, 1).x() == Approx(0.75 * unit).margin(1e-6));
  CHECK(tracking_error(log, tick, 2).x() == Approx(0.5 * unit).margin(1e-6));
  CHECK(tracking_error(log, tick, 3).x() == Approx(0.75 * unit).margin(1e-6));
}

TEST_CASE("formation reconverges after the leader parks") {
  const ScenarioConfig config = make_config(
      {"sim.duration=8", "sim.path.length=0.2", "sim.path.speed=0.05", "impedance.K_v=0.4",
       "impedance.D=null", "topology.followers=3"});
  const TrajectoryLog log = sim::run_simulation(config, 0);

  // The leader stops at t = 4 s; within 10 / omega_n ~ 3.02 s the formation
  // residual decays below a micron.
  const double omega = std::sqrt(20.88 / 1.9);
  const double settle_after = 4.0 + 10.0 / omega;
  double residual = 0.0;
  for (std::size_t k = 0; k < log.n_ticks(); ++k) {
    if (log.times[k] < settle_after) continue;
    for (int agent = 1; agent < log.n_agents; ++agent) {
      residual = std::max(residual, tracking_error(log, k, agent).norm());
    }
  }
  CHECK(residual < 1e-6);
  CHECK(residual > 0.0);  // still decaying, not frozen at zero

  SECTION("spawn displacement is applied at the first tick only") {
    const ScenarioConfig shifted = make_config(
        {"sim.duration=8", "sim.path.length=0.2", "sim.path.speed=0.05",
         "sim.spawn_shift=[0.1,-0.05,0.02]", "topology.followers=2"});
    const TrajectoryLog slog = sim::run_simulation(shifted, 0);
    for (int agent = 1; agent < slog.n_agents; ++agent) {
      const Eigen::Vector3d err = tracking_error(slog, 0, agent);
      // A few ulps of slack: the slot is composed and decomposed in fp.
      CHECK(err.x() == Approx(-0.1).margin(1e-14));
      CHECK(err.y() == Approx(0.05).margin(1e-14));
      CHECK(err.z() == Approx(-0.02).margin(1e-14));
      CHECK(slog.sample(0, agent).velocity == Eigen::Vector3d::Zero());
    }
    // The displacement decays: by the end the spawn offset is gone.
    const Eigen::Vector3d final_err = tracking_error(slog, slog.n_ticks() - 1, 1);
    CHECK(final_err.norm() < 1e-4);
  }
}

TEST_CASE("lateral oscillation disturbs the actual path but not the reference") {
  const ScenarioConfig config = make_config(
      {"sim.duration=10", "sim.path.length=1.2", "sim.path.speed=0.1",
       "sim.disturbance.enabled=true", "sim.disturbance.amplitude=0.02",
       "sim.disturbance.frequency=1.5", "topology.followers=1"});
  const TrajectoryLog log = sim::run_simulation(config, 0);

  SECTION("leader offset is exactly the lateral sinusoid") {
    for (std::size_t k = 0; k < log.n_ticks(); k += 7) {
      const double t = log.times[k];
      const double expected = 0.02 * std::sin(2.0 * kPi * 1.5 * t);
      const Eigen::Vector3d offset = log.sample(k, 0).position - log.reference(k, 0);
      REQUIRE(offset.x() == 0.0);
      REQUIRE(offset.y() == Approx(expected).margin(1e-15));
      REQUIRE(offset.z() == 0.0);
    }
  }

  SECTION("references stay the clean formation slots") {
    CHECK(log.reference(0, 1) == Eigen::Vector3d(-0.8, 0.8, 1.0));
    const std::size_t k = 100;  // t = 2.5 s
    CHECK(log.reference(k, 1) == (log.reference(k, 0) + Eigen::Vector3d(-0.8, 0.8, 1.0)).eval());
  }

  SECTION("followers inherit the oscillation energy") {
    const auto [rmse, max_err] = analysis::rmse_and_max(log, 1);
    const ScenarioConfig clean_config = make_config(
        {"sim.duration=10", "sim.path.length=1.2", "sim.path.speed=0.1",
         "topology.followers=1"});
    const TrajectoryLog clean = sim::run_simulation(clean_config, 0);
    const auto [clean_rmse, clean_max] = analysis::rmse_and_max(clean, 1);
    CHECK(rmse > clean_rmse);
    CHECK(max_err > clean_max);
  }
}

TEST_CASE("measurement noise is seeded and reproducible") {
  const std::vector<std::string> overrides{
      "sim.duration=5",          "sim.path.length=1",
      "sim.path.speed=0.1",      "sim.disturbance.enabled=true",
      "sim.disturbance.noise_std=0.005", "topology.followers=1"};
  const ScenarioConfig config = make_config(overrides);

  const TrajectoryLog a = sim::run_simulation(config, 7);
  const TrajectoryLog b = sim::run_simulation(config, 7);
  const TrajectoryLog c = sim::run_simulation(config, 8);

  CHECK(to_csv(a) == to_csv(b));
  CHECK(to_csv(a) != to_csv(c));

  // Noise perturbs the logged leader but never the reference column.
  bool saw_offset = false;
  for (std::size_t k = 0; k < a.n_ticks(); ++k) {
    if ((a.sample(k, 0).position - a.reference(k, 0)).norm() > 1e-4) {
      saw_offset = true;
      break;
    }
  }
  CHECK(saw_offset);
}

TEST_CASE("determinism of the undisturbed scenarios") {
  const ScenarioConfig config = make_config({"sim.duration=6", "topology.followers=3"});
  const TrajectoryLog a = sim::run_simulation(config, 0);
  const TrajectoryLog b = sim::run_simulation(config, 0);
  CHECK(to_csv(a) == to_csv(b));
}

TEST_CASE("zero duration logs exactly the initial state") {
  const ScenarioConfig config = make_config({"sim.duration=0", "topology.followers=2"});
  const TrajectoryLog log = sim::run_simulation(config, 0);
  REQUIRE(log.n_ticks() == 1);
  CHECK(log.times[0] == 0.0);
  CHECK(log.sample(0, 1).position == log.reference(0, 1));
  CHECK(log.sample(0, 2).velocity == Eigen::Vector3d::Zero());
}

TEST_CASE("potential-field swarm respects its speed cap and spacing") {
  const ScenarioConfig config = make_config(
      {"sim.duration=20", "sim.path.shape=square", "sim.path.side=1", "sim.path.speed=0.18",
       "sim.controller=apf", "topology.followers=3"});
  const TrajectoryLog log = sim::run_simulation(config, 0);

  double top_speed = 0.0;
  double min_spacing = 1e9;
  for (std::size_t k = 0; k < log.n_ticks(); ++k) {
    for (int agent = 1; agent < log.n_agents; ++agent) {
      top_speed = std::max(top_speed, log.sample(k, agent).velocity.norm());
      for (int other = 0; other < agent; ++other) {
        min_spacing = std::min(min_spacing, (log.sample(k, agent).position -
                                             log.sample(k, other).position)
                                                .norm());
      }
    }
  }
  CHECK(top_speed <= 0.12 + 1e-12);
  CHECK(min_spacing > 0.3);  // no near-collisions anywhere in the run
}

TEST_CASE("hybrid controller hands over from approach to link tracking") {
  const std::vector<std::string> base{
      "sim.duration=12", "sim.path.length=1.2", "sim.path.speed=0.1",
      "sim.controller=hybrid", "sim.hybrid.switch_time=2", "topology.followers=2",
      "sim.spawn_shift=[0.3,0.3,-0.2]"};
  const ScenarioConfig config = make_config(base);
  const TrajectoryLog log = sim::run_simulation(config, 0);

  SECTION("approach phase obeys the potential-field speed cap") {
    for (std::size_t k = 1; k < log.n_ticks() && log.times[k] <= 2.0; ++k) {
      for (int agent = 1; agent < log.n_agents; ++agent) {
        REQUIRE(log.sample(k, agent).velocity.norm() <= 0.12 + 1e-12);
      }
    }
  }

  SECTION("handover keeps positions continuous") {
    double max_jump = 0.0;
    for (std::size_t k = 1; k < log.n_ticks(); ++k) {
      for (int agent = 1; agent < log.n_agents; ++agent) {
        max_jump = std::max(max_jump, (log.sample(k, agent).position -
                                       log.sample(k - 1, agent).position)
                                          .norm());
      }
    }
    CHECK(max_jump < 0.02);  // well under one tick of the speed caps
  }

  SECTION("after the switch the swarm settles into the link equilibrium") {
    const Eigen::Vector3d err = tracking_error(log, log.n_ticks() - 1, 1);
    CHECK(err.x() == Approx(12.6 * 0.1 / 20.88).margin(1e-4));
    CHECK(std::abs(err.y()) < 1e-4);
  }

  SECTION("zero switch time degenerates to the pure impedance controller") {
    ScenarioConfig immediate = make_config(
        {"sim.duration=4", "sim.path.length=1.2", "sim.path.speed=0.1",
         "sim.controller=hybrid", "sim.hybrid.switch_time=0", "topology.followers=2"});
    ScenarioConfig impedance_only = make_config(
        {"sim.duration=4", "sim.path.length=1.2", "sim.path.speed=0.1",
         "topology.followers=2"});
    const TrajectoryLog h = sim::run_simulation(immediate, 0);
    const TrajectoryLog i = sim::run_simulation(impedance_only, 0);
    REQUIRE(h.n_ticks() == i.n_ticks());
    for (std::size_t k = 0; k < h.n_ticks(); ++k) {
      for (int agent = 0; agent < h.n_agents; ++agent) {
        REQUIRE(h.sample(k, agent).position == i.sample(k, agent).position);
      }
    }
  }
}

TEST_CASE("walking leader feeds the swarm its body trajectory") {
  const ScenarioConfig config = make_config(
      {"sim.duration=32", "sim.leader=gait", "gait.type=2", "gait.step_length=0.19",
       "gait.steps=6", "sim.path.length=1.14", "topology.followers=1"});
  const TrajectoryLog log = sim::run_simulation(config, 0);

  SECTION("total advance equals steps times step length") {
    const Eigen::Vector3d end = log.sample(log.n_ticks() - 1, 0).position;
    CHECK(end.x() == Approx(6.0 * 0.19).margin(1e-6));
    CHECK(end.y() == Approx(0.0).margin(1e-12));
  }

  SECTION("the leader parks once the plan is exhausted") {
    CHECK(log.sample(log.n_ticks() - 1, 0).velocity == Eigen::Vector3d::Zero());
    const Eigen::Vector3d follower_err = tracking_error(log, log.n_ticks() - 1, 1);
    CHECK(follower_err.norm() < 1e-6);  // fully reconverged during the hold
  }

  SECTION("heading rotates the walk") {
    const ScenarioConfig rotated = make_config(
        {"sim.duration=32", "sim.leader=gait", "gait.type=2", "gait.step_length=0.19",
         "gait.steps=6", "sim.path.heading_deg=90", "topology.followers=1"});
    const TrajectoryLog vertical = sim::run_simulation(rotated, 0);
    const Eigen::Vector3d end = vertical.sample(vertical.n_ticks() - 1, 0).position;
    CHECK(end.x() == Approx(0.0).margin(1e-9));
    CHECK(end.y() == Approx(6.0 * 0.19).margin(1e-6));
  }
}

TEST_CASE("state divergence aborts with the failing tick") {
  const ScenarioConfig config = make_config(
      {"sim.duration=0.05", "sim.path.length=1", "sim.path.speed=1e10",
       "impedance.K_v=1e308", "topology.followers=1"});
  try {
    sim::run_simulation(config, 0);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& err) {
    CHECK(err.tick() == 1);
    CHECK(std::string(err.what()).find("diverged") != std::string::npos);
  }
}

TEST_CASE("trajectory CSV round trip") {
  ScenarioConfig config = make_config({"sim.duration=2", "topology.followers=2"});
  TrajectoryLog log = sim::run_simulation(config, 0);
  log.config_digest = "0123456789abcdef";

  const std::string text = to_csv(log);

  SECTION("config-hash comment and column header") {
    std::istringstream in(text);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "# config_hash=0123456789abcdef");
    REQUIRE(std::getline(in, line));
    CHECK(line ==
          "time_s,agent_id,x_m,y_m,z_m,vx_mps,vy_mps,vz_mps,ref_x_m,ref_y_m,ref_z_m");
  }

  SECTION("parsing recovers every value bit for bit") {
    std::istringstream in(text);
    const TrajectoryLog parsed = sim::read_trajectory_csv(in);
    REQUIRE(parsed.n_agents == log.n_agents);
    REQUIRE(parsed.n_ticks() == log.n_ticks());
    CHECK(parsed.dt == log.dt);
    CHECK(parsed.config_digest == log.config_digest);
    for (std::size_t k = 0; k < log.n_ticks(); ++k) {
      REQUIRE(parsed.times[k] == log.times[k]);
      for (int agent = 0; agent < log.n_agents; ++agent) {
        REQUIRE(parsed.sample(k, agent).position == log.sample(k, agent).position);
        REQUIRE(parsed.sample(k, agent).velocity == log.sample(k, agent).velocity);
        REQUIRE(parsed.reference(k, agent) == log.reference(k, agent));
      }
    }
  }

  SECTION("malformed inputs are rejected") {
    std::istringstream empty("");
    CHECK_THROWS_WITH(sim::read_trajectory_csv(empty), Catch::Matchers::Contains("no samples"));

    std::istringstream bad_header("time_s,agent\n0,0\n");
    CHECK_THROWS_WITH(sim::read_trajectory_csv(bad_header),
                      Catch::Matchers::Contains("header mismatch"));

    std::string short_row = text;
    short_row += "0.5,0,1,2\n";
    std::istringstream truncated_fields(short_row);
    CHECK_THROWS_WITH(sim::read_trajectory_csv(truncated_fields),
                      Catch::Matchers::Contains("expected 11"));

    // Drop the last line: the row count stops being a multiple of the agents.
    const std::size_t cut = text.rfind('\n', text.size() - 2);
    std::istringstream missing(text.substr(0, cut + 1));
    CHECK_THROWS_WITH(sim::read_trajectory_csv(missing),
                      Catch::Matchers::Contains("not a multiple"));
  }
}
