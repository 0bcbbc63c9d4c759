#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "swarmgear/kinematics.hpp"
#include "swarmgear/units.hpp"

using namespace swarmgear;
using kinematics::JointAngles;
using kinematics::LegGeometry;
using kinematics::PlanarPoint;

TEST_CASE("leg geometry defaults and reach bounds") {
  LegGeometry geom;
  CHECK(geom.shoulder == Approx(0.093));
  CHECK(geom.upperarm == Approx(0.154));
  CHECK(geom.forearm == Approx(0.206));
  CHECK(geom.wrist == Approx(0.044));
  CHECK(geom.max_reach() == Approx(0.36).margin(1e-15));
  CHECK(geom.min_reach() == Approx(0.052).margin(1e-15));
  CHECK_NOTHROW(geom.validate());

  LegGeometry bad = geom;
  bad.forearm = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.forearm = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("standing height of the default geometry") {
  LegGeometry geom;
  // sin(30 deg) * 0.154 + 0.206 and sin(45 deg) * 0.154 + 0.206.
  CHECK(kinematics::robot_height(geom, deg_to_rad(30.0)) == Approx(0.283).margin(1e-15));
  CHECK(kinematics::robot_height(geom, deg_to_rad(45.0)) ==
        Approx(0.31489444430272834).margin(1e-14));

  CHECK_THROWS_AS(kinematics::robot_height(geom, 0.0), std::domain_error);
  CHECK_THROWS_AS(kinematics::robot_height(geom, kPi / 2.0), std::domain_error);
  CHECK_THROWS_AS(kinematics::robot_height(geom, -0.3), std::domain_error);
}

TEST_CASE("stride extreme of the straightened limb") {
  LegGeometry geom;
  const double h30 = kinematics::robot_height(geom, deg_to_rad(30.0));
  const double h45 = kinematics::robot_height(geom, deg_to_rad(45.0));
  CHECK(kinematics::stride_extreme(geom, h30) == Approx(0.22251067390127602).margin(1e-13));
  CHECK(kinematics::stride_extreme(geom, h45) == Approx(0.17447489489114454).margin(1e-13));

  // Height equal to the full reach is the degenerate vertical limb.
  CHECK(kinematics::stride_extreme(geom, geom.max_reach()) == Approx(0.0).margin(1e-9));
  CHECK_THROWS_AS(kinematics::stride_extreme(geom, 0.0), std::domain_error);
  CHECK_THROWS_AS(kinematics::stride_extreme(geom, geom.max_reach() + 1e-9), std::domain_error);

  SECTION("consistent with forward kinematics of the straight limb") {
    for (double height : {0.1, 0.2, h30, h45, 0.3}) {
      const double x0 = kinematics::stride_extreme(geom, height);
      const JointAngles straight{0.0, std::atan2(-height, x0), 0.0};
      const PlanarPoint foot = kinematics::forward_kinematics(geom, straight);
      CHECK(foot.x == Approx(x0).margin(1e-12));
      CHECK(foot.y == Approx(-height).margin(1e-12));
    }
  }
}

TEST_CASE("forward kinematics spot values") {
  LegGeometry geom;

  const PlanarPoint straight = kinematics::forward_kinematics(geom, {0.0, 0.0, 0.0});
  CHECK(straight.x == Approx(0.36).margin(1e-15));
  CHECK(straight.y == Approx(0.0).margin(1e-15));

  // Standing posture: upperarm raised by beta_init above the foot plane,
  // forearm vertical. Foot sits at (l_ua cos beta_init, -H).
  const double beta_init = deg_to_rad(45.0);
  const PlanarPoint standing = kinematics::forward_kinematics(
      geom, {0.0, -beta_init, beta_init - kPi / 2.0});
  CHECK(standing.x == Approx(0.10889444430272832).margin(1e-14));
  CHECK(standing.y == Approx(-0.31489444430272834).margin(1e-14));

  const PlanarPoint folded = kinematics::forward_kinematics(geom, {0.0, kPi / 2.0, -kPi / 2.0});
  CHECK(folded.x == Approx(0.206).margin(1e-14));
  CHECK(folded.y == Approx(0.154).margin(1e-14));
}

TEST_CASE("inverse kinematics uses the one-sided elbow branch") {
  LegGeometry geom;

  const double height = kinematics::robot_height(geom, deg_to_rad(45.0));
  const JointAngles standing =
      kinematics::inverse_kinematics(geom, {geom.upperarm * std::cos(deg_to_rad(45.0)), -height});
  CHECK(standing.yaw == 0.0);
  CHECK(standing.upperarm == Approx(-deg_to_rad(45.0)).margin(1e-12));
  CHECK(standing.forearm == Approx(-deg_to_rad(45.0)).margin(1e-12));

  // A target on the outer boundary straightens the elbow instead of being
  // rejected (the law-of-cosines value is clamped within 1e-12 of +-1).
  const JointAngles boundary = kinematics::inverse_kinematics(geom, {0.36, 0.0});
  CHECK(boundary.forearm == Approx(0.0).margin(1e-6));
  CHECK(boundary.forearm <= 0.0);
}

TEST_CASE("inverse kinematics round trip over the reachable annulus") {
  LegGeometry geom;
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> radius(geom.min_reach() + 1e-9,
                                                geom.max_reach() - 1e-9);
  std::uniform_real_distribution<double> angle(-kPi, kPi);

  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double r = radius(rng);
    const double phi = angle(rng);
    const PlanarPoint target{r * std::cos(phi), r * std::sin(phi)};

    const JointAngles joints = kinematics::inverse_kinematics(geom, target);
    REQUIRE(joints.forearm <= 0.0);
    REQUIRE(joints.yaw == 0.0);
    // The elbow-down branch keeps gamma in [-pi, 0]; the shoulder angle is
    // the target bearing plus the interior-triangle correction.
    REQUIRE(joints.forearm >= -kPi - 1e-12);

    const PlanarPoint foot = kinematics::forward_kinematics(geom, joints);
    worst = std::max(worst, std::hypot(foot.x - target.x, foot.y - target.y));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("unreachable targets carry the nearest boundary point") {
  LegGeometry geom;

  SECTION("outside the outer circle") {
    try {
      kinematics::inverse_kinematics(geom, {1.0, 0.0});
      FAIL("expected UnreachableTarget");
    } catch (const kinematics::UnreachableTarget& err) {
      CHECK(err.target().x == 1.0);
      CHECK(err.target().y == 0.0);
      CHECK(err.clamped().x == Approx(geom.max_reach()).margin(1e-15));
      CHECK(err.clamped().y == Approx(0.0).margin(1e-15));
    }
  }

  SECTION("inside the inner circle") {
    try {
      kinematics::inverse_kinematics(geom, {0.01, 0.02});
      FAIL("expected UnreachableTarget");
    } catch (const kinematics::UnreachableTarget& err) {
      CHECK(err.clamped().norm() == Approx(geom.min_reach()).margin(1e-12));
      // Clamp preserves the target direction.
      CHECK(err.clamped().x * err.target().y == Approx(err.clamped().y * err.target().x)
                                                    .margin(1e-12));
    }
  }

  SECTION("origin clamps to an arbitrary inner-circle point") {
    try {
      kinematics::inverse_kinematics(geom, {0.0, 0.0});
      FAIL("expected UnreachableTarget");
    } catch (const kinematics::UnreachableTarget& err) {
      CHECK(err.clamped().norm() == Approx(geom.min_reach()).margin(1e-15));
    }
  }

  SECTION("it is an infeasibility error with a descriptive message") {
    CHECK_THROWS_AS(kinematics::inverse_kinematics(geom, {1.0, 0.0}), InfeasibleError);
    CHECK_THROWS_WITH(kinematics::inverse_kinematics(geom, {1.0, 0.0}),
                      Catch::Matchers::Contains("outside reachable annulus"));
  }
}

TEST_CASE("reachability predicate matches the annulus bounds") {
  LegGeometry geom;
  CHECK(kinematics::reachable(geom, {0.36, 0.0}));
  CHECK(kinematics::reachable(geom, {0.052, 0.0}));
  CHECK(kinematics::reachable(geom, {0.0, -0.2}));
  CHECK_FALSE(kinematics::reachable(geom, {0.361, 0.0}));
  CHECK_FALSE(kinematics::reachable(geom, {0.03, 0.0}));
  CHECK_FALSE(kinematics::reachable(geom, {0.0, 0.0}));
}
