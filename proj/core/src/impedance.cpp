#include "swarmgear/impedance.hpp"

#include <cmath>
#include <sstream>

#include "swarmgear/mathutil.hpp"

namespace swarmgear::impedance {

void ImpedanceParams::validate() const {
  if (!(M > 0.0) || !(K > 0.0)) {
    throw ConfigError("impedance: M and K must be positive");
  }
  if (!(D >= 0.0)) {
    throw ConfigError("impedance: D must be non-negative");
  }
}

double solve_critical_damping(double M, double K) {
  if (!(M > 0.0) || !(K > 0.0)) {
    throw ConfigError("solve_critical_damping: M and K must be positive");
  }
  return 2.0 * std::sqrt(M * K);
}

DiscreteImpedance discretize(const ImpedanceParams& params, double T) {
  params.validate();
  if (!(T > 0.0)) {
    throw ConfigError("discretize: period must be positive");
  }
  if (!params.critically_damped()) {
    std::ostringstream os;
    os << "discretize: damping ratio " << params.zeta()
       << " is outside the critically damped tolerance |zeta - 1| < 1e-3; "
          "use solve_critical_damping(M, K) to pick D";
    throw ConfigError(os.str());
  }

  const double lambda = -params.D / (2.0 * params.M);

  // Companion matrix sharing the repeated eigenvalue; N = A - lambda*I is
  // nilpotent, which collapses the exponential series after the linear term.
  Eigen::Matrix2d A;
  A << 0.0, 1.0, -lambda * lambda, 2.0 * lambda;
  const Eigen::Matrix2d N = A - lambda * Eigen::Matrix2d::Identity();

  const double eLT = std::exp(lambda * T);
  DiscreteImpedance disc;
  disc.T = T;
  disc.lambda = lambda;
  disc.A_d = eLT * (Eigen::Matrix2d::Identity() + N * T);

  // B_d = (a1*I + a2*N) B with a1 = int e^{lambda t} dt = T*phi1(lambda T)
  // and a2 = int t e^{lambda t} dt = T^2*phi2(lambda T), where
  // phi1(x) = (e^x - 1)/x and phi2(x) = (e^x (x - 1) + 1)/x^2. Near x = 0
  // both closed forms cancel catastrophically (the 1/x^2 amplifies exp()
  // rounding), so small arguments use the power series instead.
  const double x = lambda * T;
  double phi1 = 0.0;
  double phi2 = 0.0;
  if (std::abs(x) < 0.25) {
    double term = 1.0;  // x^n / n!
    for (int n = 0; n < 17; ++n) {
      phi1 += term / (n + 1.0);
      phi2 += term / (n + 2.0);
      term *= x / (n + 1.0);
    }
  } else {
    phi1 = std::expm1(x) / x;
    phi2 = (std::exp(x) * (x - 1.0) + 1.0) / (x * x);
  }
  const double a1 = T * phi1;
  const double a2 = T * T * phi2;
  const Eigen::Vector2d B(0.0, 1.0 / params.M);
  disc.B_d = (a1 * Eigen::Matrix2d::Identity() + a2 * N) * B;

  // Construction-time check against an independent matrix exponential: the
  // augmented exponential of [[A,B],[0,0]] carries both A_d and B_d.
  Eigen::Matrix3d aug = Eigen::Matrix3d::Zero();
  aug.topLeftCorner<2, 2>() = A;
  aug.topRightCorner<2, 1>() = B;
  const Eigen::Matrix3d aug_exp = mathutil::expm((aug * T).eval());
  const double err_A = (aug_exp.topLeftCorner<2, 2>() - disc.A_d).lpNorm<Eigen::Infinity>();
  const double err_B = (aug_exp.topRightCorner<2, 1>() - disc.B_d).lpNorm<Eigen::Infinity>();
  if (err_A > 1e-12 || err_B > 1e-12) {
    std::ostringstream os;
    os << "discretize: closed form disagrees with the matrix-exponential check "
          "(A err "
       << err_A << ", B err " << err_B << ")";
    throw std::logic_error(os.str());
  }
  return disc;
}

nlohmann::ordered_json to_json(const DiscreteImpedance& disc) {
  return nlohmann::ordered_json{
      {"T", disc.T},
      {"lambda", disc.lambda},
      {"A_d", {{disc.A_d(0, 0), disc.A_d(0, 1)}, {disc.A_d(1, 0), disc.A_d(1, 1)}}},
      {"B_d", {disc.B_d(0), disc.B_d(1)}},
  };
}

}  // namespace swarmgear::impedance
