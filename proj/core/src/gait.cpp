#include "swarmgear/gait.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <utility>

#include "swarmgear/csv.hpp"
#include "swarmgear/errors.hpp"
#include "swarmgear/mathutil.hpp"

namespace swarmgear::gait {
namespace {

using kinematics::JointAngles;
using kinematics::LegGeometry;
using kinematics::PlanarPoint;

constexpr double kMaxShoulderRotation = deg_to_rad(60.0);
constexpr double kJointLimit = kPi;

double smoothstep(double s) { return s * s * (3.0 - 2.0 * s); }

// Arc length of the spiral r = b*phi is b * G(phi) with
// G(u) = (u sqrt(u^2 + 1) + asinh(u)) / 2.
double spiral_arc_integral(double u) {
  return 0.5 * (u * std::sqrt(u * u + 1.0) + std::asinh(u));
}

double max_joint_delta(const JointAngles& a, const JointAngles& b) {
  return std::max({std::abs(a.yaw - b.yaw), std::abs(a.upperarm - b.upperarm),
                   std::abs(a.forearm - b.forearm)});
}

void check_joint_limits(const JointAngles& a) {
  if (std::abs(a.yaw) > kJointLimit || std::abs(a.upperarm) > kJointLimit ||
      std::abs(a.forearm) > kJointLimit) {
    throw InfeasibleError("gait: joint angle outside the +-pi joint limits");
  }
}

std::string describe_length(double v) { return csv::format_double(v); }

}  // namespace

void GaitParams::validate(const LegGeometry& geom) const {
  geom.validate();
  if (!(command_period > 0.0)) {
    throw ConfigError("gait: command_period must be positive");
  }
  if (!(servo_speed > 0.0)) {
    throw ConfigError("gait: servo_angular_speed must be positive");
  }
  if (!(beta_init > 0.0) || !(beta_init < kPi / 2.0)) {
    throw ConfigError("gait: beta_init must lie in (0 deg, 90 deg)");
  }
  if (!(swing_height > 0.0)) {
    throw ConfigError("gait: swing_height must be positive");
  }
  if (steps < 0) {
    throw ConfigError("gait: steps must be non-negative");
  }
  if (pause && !(*pause >= 0.0)) {
    throw ConfigError("gait: pause must be non-negative");
  }
  const double H = kinematics::robot_height(geom, beta_init);
  const double x0 = kinematics::stride_extreme(geom, H);
  if (!(step_length > 0.0) || !(step_length <= 2.0 * x0)) {
    throw InfeasibleError("gait: step_length " + describe_length(step_length) +
                          " outside (0, 2*x0] with 2*x0 = " + describe_length(2.0 * x0) +
                          " at the standing height");
  }
}

double horizontal_shift(double alpha_sh, double l_p) {
  if (!(l_p > 0.0)) {
    throw std::domain_error("horizontal_shift: l_p must be positive");
  }
  return 2.0 * (1.0 - std::cos(alpha_sh)) * l_p;
}

double vertical_compensation(double beta_init, double xi, double l_ua) {
  if (beta_init + xi > kPi / 2.0 + 1e-9) {
    throw std::domain_error("vertical_compensation: beta_init + xi exceeds pi/2");
  }
  return (std::cos(beta_init) - std::cos(beta_init + xi)) * l_ua;
}

double xi_of_alpha(double alpha_sh, double beta_init) {
  if (!(alpha_sh >= 0.0) || alpha_sh > kMaxShoulderRotation + 1e-12) {
    throw std::domain_error("xi_of_alpha: alpha_sh must lie in [0, 60 deg]");
  }
  if (alpha_sh == 0.0) return 0.0;  // rest point, exact by definition
  const double u = (2.0 * std::cos(alpha_sh) - 1.0) * std::cos(beta_init);
  if (u < -1.0 || u > 1.0) {
    throw std::domain_error("xi_of_alpha: argument outside the arccos domain");
  }
  return std::acos(u) - beta_init;
}

Type1Curve Type1Curve::build(const LegGeometry& geom, const GaitParams& params) {
  params.validate(geom);
  const double H = kinematics::robot_height(geom, params.beta_init);
  const double L = params.step_length;

  // Apex clearance of the swing arc as a function of the total sweep theta0.
  // The inner maximum of b*phi*sin(theta0 - phi) sits where tan(theta) =
  // theta0 - theta (theta = theta0 - phi); clearance grows monotonically
  // with theta0.
  auto apex_clearance = [L](double theta0) {
    const double hi = std::min(theta0, kPi / 2.0 - 1e-12);
    const double theta_star = mathutil::bisect(
        [theta0](double th) { return std::tan(th) - (theta0 - th); }, 0.0, hi, 1e-14);
    return (L / theta0) * (theta0 - theta_star) * std::sin(theta_star);
  };

  const double max_clearance = apex_clearance(kPi);
  if (params.swing_height > max_clearance) {
    throw InfeasibleError("gait: swing_height " + describe_length(params.swing_height) +
                          " exceeds the maximum spiral clearance " +
                          describe_length(max_clearance) + " for step_length " +
                          describe_length(L));
  }

  Type1Curve curve;
  curve.step_length_ = L;
  curve.height_ = H;
  curve.theta0_ = mathutil::bisect(
      [&](double t0) { return apex_clearance(t0) - params.swing_height; }, 1e-12, kPi, 1e-13);
  curve.pitch_ = L / curve.theta0_;
  curve.arc_length_ = spiral_arc_integral(curve.theta0_);

  // The whole closed curve must stay inside the reachable annulus.
  for (int i = 0; i <= 1024; ++i) {
    const PlanarPoint p = curve.at(i / 1024.0);
    if (!kinematics::reachable(geom, p)) {
      throw InfeasibleError("gait: foot curve leaves the reachable annulus at phase " +
                            describe_length(i / 1024.0));
    }
  }
  return curve;
}

PlanarPoint Type1Curve::at(double phase) const {
  phase -= std::floor(phase);
  if (phase < 0.5) {
    const double u = phase * 2.0;
    return {step_length_ * (0.5 - u), -height_};
  }
  const double u = (phase - 0.5) * 2.0;
  const double target = u * arc_length_;
  const double phi = mathutil::bisect(
      [&](double p) { return spiral_arc_integral(p) - target; }, 0.0, theta0_, 1e-13);
  const double psi = theta0_ - phi;
  return {-0.5 * step_length_ + pitch_ * phi * std::cos(psi),
          -height_ + pitch_ * phi * std::sin(psi)};
}

kinematics::PlanarPoint type1_foot_trajectory(const LegGeometry& geom, const GaitParams& params,
                                              double phase) {
  return Type1Curve::build(geom, params).at(phase);
}

namespace {

// Per-leg type-1 pattern: (hind mirror, phase offset in half cycles).
constexpr std::array<std::pair<bool, int>, 4> kType1LegPattern{{
    {false, 0},  // front_left
    {false, 1},  // front_right
    {true, 1},   // rear_left
    {true, 0},   // rear_right
}};

std::array<JointAngles, 4> type1_legs_at(const Type1Curve& curve, const LegGeometry& geom,
                                         long tick, long ticks_per_cycle) {
  std::array<JointAngles, 4> out;
  const long half = ticks_per_cycle / 2;
  for (int i = 0; i < 4; ++i) {
    long m = (tick + kType1LegPattern[i].second * half) % ticks_per_cycle;
    // Hind-leg curves are the x-mirrored shape traversed in reverse: the
    // stance sweep stays rear-ward (no slip), while the asymmetric swing
    // arc is reflected about the base center.
    if (kType1LegPattern[i].first) {
      m = ((half - m) % ticks_per_cycle + ticks_per_cycle) % ticks_per_cycle;
    }
    PlanarPoint p = curve.at(static_cast<double>(m) / static_cast<double>(ticks_per_cycle));
    if (kType1LegPattern[i].first) p.x = -p.x;
    out[i] = kinematics::inverse_kinematics(geom, p);
    check_joint_limits(out[i]);
  }
  return out;
}

}  // namespace

GaitPlan type1_plan(const LegGeometry& geom, const GaitParams& params) {
  if (params.gait_type != GaitType::type1) {
    throw ConfigError("type1_plan: params.gait_type must be type1");
  }
  const Type1Curve curve = Type1Curve::build(geom, params);
  const double limit = params.servo_speed * params.command_period;

  // Estimate the per-phase joint speed on a dense grid, then verify the
  // actual tick schedule and grow the cycle until the rate limit holds.
  const int grid = 4096;
  double slope = 0.0;
  JointAngles prev = kinematics::inverse_kinematics(geom, curve.at(0.0));
  for (int i = 1; i <= grid; ++i) {
    const JointAngles a =
        kinematics::inverse_kinematics(geom, curve.at(static_cast<double>(i) / grid));
    slope = std::max(slope, max_joint_delta(a, prev) * grid);
    prev = a;
  }

  long n = static_cast<long>(std::ceil(1.01 * slope / limit));
  if (n < 2) n = 2;
  if (n % 2 != 0) ++n;

  bool sized = false;
  for (int attempt = 0; attempt < 512 && !sized; ++attempt) {
    sized = true;
    std::array<JointAngles, 4> a = type1_legs_at(curve, geom, 0, n);
    for (long m = 1; m <= n && sized; ++m) {
      const std::array<JointAngles, 4> b = type1_legs_at(curve, geom, m % n, n);
      for (int leg = 0; leg < 4; ++leg) {
        if (max_joint_delta(a[leg], b[leg]) > limit) {
          sized = false;
          break;
        }
      }
      a = b;
    }
    if (!sized) n += 2;
  }
  if (!sized) {
    throw InfeasibleError("gait: cannot satisfy the servo rate limit for the type-1 cycle");
  }

  GaitPlan plan;
  plan.gait_type = GaitType::type1;
  plan.command_period = params.command_period;
  const long half = n / 2;
  const long total = static_cast<long>(params.steps) * half;
  plan.ticks.reserve(static_cast<std::size_t>(total + 1));
  for (long k = 0; k <= total; ++k) {
    GaitTick tick;
    tick.time_s = static_cast<double>(k) * params.command_period;
    tick.legs = type1_legs_at(curve, geom, k % n, n);
    for (int i = 0; i < 4; ++i) {
      const long m = (k + kType1LegPattern[i].second * half) % n;
      tick.stance[i] = m < half;
    }
    tick.body.x =
        params.step_length * (2.0 * static_cast<double>(k) / static_cast<double>(n));
    plan.ticks.push_back(tick);
  }
  return plan;
}

namespace {

// Shared geometry for the type-2 two-beat step.
struct Type2Layout {
  const LegGeometry* geom = nullptr;
  double H = 0.0;
  double l_p = 0.0;
  double alpha_max = 0.0;
  double d_max = 0.0;
  double swing_height = 0.0;

  JointAngles support_at(double magnitude, double yaw_sign) const {
    JointAngles a = kinematics::inverse_kinematics(
        *geom, {l_p / std::cos(magnitude), -H});
    a.yaw = yaw_sign * magnitude;
    check_joint_limits(a);
    return a;
  }

  // progress in [0,1] moves yaw magnitude and in-plane distance from the
  // rest posture to the planted extreme; height_s in [0,1] is the lift arc
  // parameter (sin profile, vertical at both ends of the extension).
  JointAngles swing_at(double progress, double height_s, double yaw_sign) const {
    JointAngles a = kinematics::inverse_kinematics(
        *geom, {l_p + (d_max - l_p) * progress,
                -H + swing_height * std::sin(kPi * height_s)});
    a.yaw = yaw_sign * alpha_max * progress;
    check_joint_limits(a);
    return a;
  }

  // Legs at a beat-local parameter s in [0,1]. Beat 1: lead pair (FL, RR)
  // supports sweeping out, lag pair (FR, RL) swings forward. Beat 2: roles
  // and directions reverse, ending at the rest posture.
  std::array<JointAngles, 4> legs_at(int beat, double s) const {
    std::array<JointAngles, 4> out;
    JointAngles support, swing;
    if (beat == 1) {
      support = support_at(alpha_max * s, -1.0);
      swing = swing_at(smoothstep(s), s, 1.0);
    } else {
      support = support_at(alpha_max * (1.0 - s), 1.0);
      swing = swing_at(smoothstep(1.0 - s), s, -1.0);
    }
    const auto& lead = (beat == 1) ? support : swing;
    const auto& lag = (beat == 1) ? swing : support;
    out[static_cast<int>(LegId::front_left)] = lead;
    out[static_cast<int>(LegId::rear_right)] = lead;
    out[static_cast<int>(LegId::front_right)] = lag;
    out[static_cast<int>(LegId::rear_left)] = lag;
    return out;
  }
};

}  // namespace

GaitPlan type2_plan(const LegGeometry& geom, const GaitParams& params) {
  if (params.gait_type != GaitType::type2) {
    throw ConfigError("type2_plan: params.gait_type must be type2");
  }
  params.validate(geom);

  Type2Layout layout;
  layout.geom = &geom;
  layout.H = kinematics::robot_height(geom, params.beta_init);
  layout.l_p = geom.upperarm * std::cos(params.beta_init);
  layout.swing_height = params.swing_height;
  const double x0 = kinematics::stride_extreme(geom, layout.H);
  if (!(layout.l_p < x0)) {
    throw InfeasibleError("gait: standing posture already at the reach boundary");
  }
  const double alpha_cap =
      std::min(kMaxShoulderRotation, std::acos(layout.l_p / x0));

  // Body displacement per step equals the summed chord lengths of the two
  // stance-foot segments traversed in the body frame; invert that map for
  // the shoulder sweep amplitude.
  const double l_p = layout.l_p;
  auto chord_displacement = [l_p](double alpha) {
    const double forward = l_p * std::tan(alpha);
    return 2.0 * std::hypot(forward, 0.0);
  };
  const double max_step = chord_displacement(alpha_cap);
  if (params.step_length > max_step) {
    throw InfeasibleError(
        "gait: step_length " + describe_length(params.step_length) +
        " exceeds the maximum " + describe_length(max_step) +
        " reachable within the 60 deg shoulder sweep and the leg reach");
  }
  layout.alpha_max =
      (chord_displacement(alpha_cap) <= params.step_length)
          ? alpha_cap
          : mathutil::bisect(
                [&](double a) { return chord_displacement(a) - params.step_length; }, 0.0,
                alpha_cap, 1e-9);
  layout.d_max = layout.l_p / std::cos(layout.alpha_max);

  // Swing targets must stay reachable along the whole lift arc.
  for (int i = 0; i <= 256; ++i) {
    const double s = i / 256.0;
    const PlanarPoint p{layout.l_p + (layout.d_max - layout.l_p) * smoothstep(s),
                        -layout.H + layout.swing_height * std::sin(kPi * s)};
    if (!kinematics::reachable(geom, p)) {
      throw InfeasibleError("gait: swing arc leaves the reachable annulus");
    }
  }

  const double limit = params.servo_speed * params.command_period;

  // Size the beat so every joint respects the rate limit; beat 2 is the
  // time reverse of beat 1, so one estimate covers both.
  const int grid = 2048;
  double slope = 0.0;
  std::array<JointAngles, 4> prev = layout.legs_at(1, 0.0);
  for (int i = 1; i <= grid; ++i) {
    const std::array<JointAngles, 4> cur = layout.legs_at(1, static_cast<double>(i) / grid);
    for (int leg = 0; leg < 4; ++leg) {
      slope = std::max(slope, max_joint_delta(cur[leg], prev[leg]) * grid);
    }
    prev = cur;
  }

  long n_beat = std::max<long>(1, static_cast<long>(std::ceil(1.01 * slope / limit)));
  bool sized = false;
  for (int attempt = 0; attempt < 4096 && !sized; ++attempt) {
    sized = true;
    std::array<JointAngles, 4> a = layout.legs_at(2, 1.0);  // rest posture
    for (long k = 1; k <= 2 * n_beat && sized; ++k) {
      const int beat = k <= n_beat ? 1 : 2;
      const double s = beat == 1 ? static_cast<double>(k) / n_beat
                                 : static_cast<double>(k - n_beat) / n_beat;
      const std::array<JointAngles, 4> b = layout.legs_at(beat, s);
      for (int leg = 0; leg < 4; ++leg) {
        if (max_joint_delta(a[leg], b[leg]) > limit) {
          sized = false;
          break;
        }
      }
      a = b;
    }
    if (!sized) ++n_beat;
  }
  if (!sized) {
    throw InfeasibleError("gait: cannot satisfy the servo rate limit for the type-2 beat");
  }

  const long n_pause =
      std::max<long>(0, std::lround(params.effective_pause() / params.command_period));

  GaitPlan plan;
  plan.gait_type = GaitType::type2;
  plan.command_period = params.command_period;
  const long ticks_per_step = 2 * n_beat + n_pause;
  plan.ticks.reserve(static_cast<std::size_t>(params.steps) * ticks_per_step + 1);
  plan.shift_states.reserve(plan.ticks.capacity());

  const double half_increment = layout.l_p * std::tan(layout.alpha_max);
  const std::array<JointAngles, 4> rest_legs = layout.legs_at(2, 1.0);

  long k_global = 0;
  double base_x = 0.0;
  auto push_tick = [&](const std::array<JointAngles, 4>& legs,
                       const std::array<bool, 4>& stance, double body_x, double alpha_sh) {
    GaitTick tick;
    tick.time_s = static_cast<double>(k_global) * params.command_period;
    tick.legs = legs;
    tick.stance = stance;
    tick.body.x = body_x;
    plan.ticks.push_back(tick);
    plan.shift_states.push_back(
        {alpha_sh, xi_of_alpha(alpha_sh, params.beta_init), layout.l_p});
    ++k_global;
  };

  const std::array<bool, 4> all_down{true, true, true, true};
  push_tick(rest_legs, all_down, 0.0, 0.0);

  for (int step = 0; step < params.steps; ++step) {
    for (int beat = 1; beat <= 2; ++beat) {
      for (long k = 1; k <= n_beat; ++k) {
        const double s = static_cast<double>(k) / n_beat;
        const double alpha_sh =
            beat == 1 ? layout.alpha_max * s : layout.alpha_max * (1.0 - s);
        const double body_x =
            beat == 1 ? base_x + layout.l_p * std::tan(layout.alpha_max * s)
                      : base_x + 2.0 * half_increment -
                            layout.l_p * std::tan(layout.alpha_max * (1.0 - s));
        std::array<bool, 4> stance = all_down;
        if (k < n_beat) {
          // the swinging pair is airborne strictly inside the beat
          const auto& pair = (beat == 1) ? kLagPair : kLeadPair;
          stance[static_cast<int>(pair[0])] = false;
          stance[static_cast<int>(pair[1])] = false;
        }
        push_tick(layout.legs_at(beat, s), stance, body_x, alpha_sh);
      }
    }
    base_x += 2.0 * half_increment;
    for (long k = 0; k < n_pause; ++k) {
      push_tick(rest_legs, all_down, base_x, 0.0);
    }
  }
  return plan;
}

void write_csv(std::ostream& os, const GaitPlan& plan, std::string_view header_comment) {
  if (!header_comment.empty()) {
    os << "# " << header_comment << '\n';
  }
  os << "time_s,leg_id,alpha_deg,beta_deg,gamma_deg,stance_flag,body_x_m,body_y_m,"
        "body_yaw_deg\n";
  for (const GaitTick& tick : plan.ticks) {
    for (int leg = 0; leg < 4; ++leg) {
      const JointAngles& a = tick.legs[leg];
      os << csv::format_double(tick.time_s) << ',' << leg << ','
         << csv::format_double(rad_to_deg(a.yaw)) << ','
         << csv::format_double(rad_to_deg(a.upperarm)) << ','
         << csv::format_double(rad_to_deg(a.forearm)) << ','
         << (tick.stance[static_cast<std::size_t>(leg)] ? '1' : '0') << ','
         << csv::format_double(tick.body.x) << ',' << csv::format_double(tick.body.y)
         << ',' << csv::format_double(rad_to_deg(tick.body.yaw)) << '\n';
    }
  }
}

}  // namespace swarmgear::gait
