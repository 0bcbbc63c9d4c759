#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "swarmgear/kinematics.hpp"
#include "swarmgear/units.hpp"

namespace swarmgear::gait {

enum class GaitType { type1, type2 };

/// Leg indices used throughout plans and CSV output.
enum class LegId : int { front_left = 0, front_right = 1, rear_left = 2, rear_right = 3 };

/// Diagonal pairs: (FL, RR) lead, (FR, RL) follow half a cycle later.
inline constexpr std::array<LegId, 2> kLeadPair{LegId::front_left, LegId::rear_right};
inline constexpr std::array<LegId, 2> kLagPair{LegId::front_right, LegId::rear_left};

struct GaitParams {
  GaitType gait_type = GaitType::type1;
  double beta_init = deg_to_rad(45.0);    // standing upperarm angle magnitude, rad
  double step_length = 0.12;              // body advance per step, m
  double servo_speed = deg_to_rad(45.0);  // per-joint angular speed limit, rad/s
  double command_period = 0.025;          // tick spacing, s
  double swing_height = 0.03;             // swing clearance above ground, m
  int steps = 1;                          // number of steps to plan
  std::optional<double> pause;            // type-2 inter-beat pause, s; defaults to one tick

  double effective_pause() const { return pause.value_or(command_period); }

  /// Throws ConfigError on invalid values (including step_length > 2*x0).
  void validate(const kinematics::LegGeometry& geom) const;
};

struct BodyPose {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
};

struct GaitTick {
  double time_s = 0.0;
  std::array<kinematics::JointAngles, 4> legs;  // indexed by LegId
  std::array<bool, 4> stance{};                 // true = foot on the ground
  BodyPose body;
};

/// Shoulder-rotation bookkeeping for one tick of a type-2 plan: the current
/// support-shoulder rotation magnitude, the matching compensation angle, and
/// the standing ground projection of the upperarm.
struct ShiftState {
  double alpha_sh = 0.0;  // rad
  double xi = 0.0;        // rad
  double l_p = 0.0;       // m
};

struct GaitPlan {
  GaitType gait_type = GaitType::type1;
  double command_period = 0.025;
  std::vector<GaitTick> ticks;
  std::vector<ShiftState> shift_states;  // type 2: one entry per tick; empty for type 1
};

/// Base-width compression produced by rotating both support shoulders by
/// alpha_sh: delta = 2 (1 - cos alpha_sh) l_p.
double horizontal_shift(double alpha_sh, double l_p);

/// Reach gained by dropping the upperarm from beta_init by xi:
/// delta = (cos beta_init - cos(beta_init + xi)) l_ua.
/// Throws std::domain_error if beta_init + xi > pi/2.
double vertical_compensation(double beta_init, double xi, double l_ua);

/// Compensation angle balancing the two shifts above with l_p = l_ua cos
/// beta_init: xi = arccos((2 cos alpha_sh - 1) cos beta_init) - beta_init.
/// Exactly zero at alpha_sh = 0. Throws std::domain_error outside the
/// arccos domain or for alpha_sh outside [0, 60 deg].
double xi_of_alpha(double alpha_sh, double beta_init);

/// Closed foot curve of the type-1 gait in the leg's sagittal plane, solved
/// once from (geometry, params) and then evaluated by phase. Phase [0, 0.5)
/// is stance: the foot slides along the ground line y = -H from +L/2 to
/// -L/2 at constant speed. Phase [0.5, 1) is swing: the foot returns along
/// a spiral arc r = b (theta0 - psi) about the lift-off point, traversed at
/// constant arc speed, whose apex clearance equals swing_height.
class Type1Curve {
 public:
  static Type1Curve build(const kinematics::LegGeometry& geom, const GaitParams& params);

  kinematics::PlanarPoint at(double phase) const;

  double height() const { return height_; }
  double spiral_sweep() const { return theta0_; }
  double spiral_pitch() const { return pitch_; }

 private:
  Type1Curve() = default;
  double step_length_ = 0.0;
  double height_ = 0.0;
  double theta0_ = 0.0;  // total polar sweep of the swing arc, rad
  double pitch_ = 0.0;   // spiral pitch b, m/rad
  double arc_length_ = 0.0;
};

/// Single-call convenience wrapper around Type1Curve.
kinematics::PlanarPoint type1_foot_trajectory(const kinematics::LegGeometry& geom,
                                              const GaitParams& params, double phase);

/// Builds the type-1 plan: diagonal pairs half a cycle apart, hind-leg
/// curves mirrored front-to-back in their own planes, body advancing
/// step_length per half cycle under the no-slip stance assumption. The tick
/// count per cycle is sized so every joint respects the servo rate limit.
/// Throws InfeasibleError if the foot curve leaves the reachable annulus.
GaitPlan type1_plan(const kinematics::LegGeometry& geom, const GaitParams& params);

/// Builds the type-2 plan. Each step has two beats: the support pair sweeps
/// its shoulders from 0 to alpha_max (body pushed forward, feet planted,
/// height and base width held exactly by in-plane IK) while the other pair
/// swings forward and plants vertically at alpha_max; the pairs then swap
/// roles and the new support pair sweeps back to 0. alpha_max is found by
/// bisecting the stance-chord displacement map against step_length. A pause
/// separates beats. Throws InfeasibleError when step_length is not
/// achievable within the shoulder-rotation and reach limits.
GaitPlan type2_plan(const kinematics::LegGeometry& geom, const GaitParams& params);

/// Writes the plan in the stable schema
///   time_s,leg_id,alpha_deg,beta_deg,gamma_deg,stance_flag,body_x_m,body_y_m,body_yaw_deg
/// (one row per tick per leg). A non-empty header_comment is emitted first
/// as a '#'-prefixed line.
void write_csv(std::ostream& os, const GaitPlan& plan, std::string_view header_comment = {});

}  // namespace swarmgear::gait
