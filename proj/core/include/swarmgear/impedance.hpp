#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "swarmgear/errors.hpp"

namespace swarmgear::impedance {

/// Virtual mass-spring-damper parameters of one impedance link, plus the
/// force-scaling gain that couples leader velocity into the link.
struct ImpedanceParams {
  double M = 1.9;    // virtual mass, kg
  double D = 12.6;   // damping, N*s/m
  double K = 20.88;  // stiffness, N/m
  double K_v = 12.6; // leader-velocity force gain, N*s/m

  double omega_n() const { return std::sqrt(K / M); }
  double zeta() const { return D / (2.0 * std::sqrt(M * K)); }

  /// True iff the damping ratio is within 1e-3 of 1. The discretizer only
  /// accepts such parameter sets (repeated-eigenvalue closed form).
  bool critically_damped() const { return std::abs(zeta() - 1.0) < 1e-3; }

  /// Throws ConfigError unless M, K > 0 and D >= 0.
  void validate() const;
};

/// Damping that makes the system exactly critically damped: D = 2*sqrt(M*K).
double solve_critical_damping(double M, double K);

/// Force exerted on a link by leader motion, per axis: F = K_v * v_leader.
inline double external_force(double K_v, double v_leader) { return K_v * v_leader; }

/// Per-axis state of one link: displacement of the virtual mass from its
/// rest point and its rate of change.
struct LinkState {
  double disp = 0.0;
  double vel = 0.0;
};

/// Exact zero-order-hold discretization of the critically damped link at a
/// fixed period. Immutable after construction; see discretize().
struct DiscreteImpedance {
  Eigen::Matrix2d A_d;
  Eigen::Vector2d B_d;
  double T = 0.0;      // discretization period, s
  double lambda = 0.0; // repeated eigenvalue -D/(2M), 1/s
};

/// Builds the discrete propagator from the closed form for a repeated
/// eigenvalue lambda = -D/(2M):
///   A_d = e^{lambda T} (I + (A - lambda I) T),   B_d = integral of e^{A tau} B
/// where A is the companion matrix [[0,1],[lambda^2 changed sign, 2 lambda]]
/// and B = [0, 1/M]. Parameters must be critically damped (within the 1e-3
/// damping-ratio tolerance); the propagator is then built from lambda, which
/// coincides with [[0,1],[-K/M,-D/M]] when zeta = 1 exactly. Both matrices
/// are verified against a scaling-and-squaring matrix exponential to 1e-12
/// at construction.
///
/// Throws ConfigError for invalid or non-critically-damped parameters and
/// std::logic_error if the construction-time oracle check fails.
DiscreteImpedance discretize(const ImpedanceParams& params, double T);

/// One zero-order-hold step: state_{k+1} = A_d state_k + B_d F_ext.
inline LinkState step(const DiscreteImpedance& disc, const LinkState& state, double F_ext) {
  return {disc.A_d(0, 0) * state.disp + disc.A_d(0, 1) * state.vel + disc.B_d(0) * F_ext,
          disc.A_d(1, 0) * state.disp + disc.A_d(1, 1) * state.vel + disc.B_d(1) * F_ext};
}

/// JSON view of the discrete propagator (full round-trip precision).
nlohmann::ordered_json to_json(const DiscreteImpedance& disc);

}  // namespace swarmgear::impedance
