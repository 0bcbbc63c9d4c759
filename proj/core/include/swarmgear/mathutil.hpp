#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>

#include <Eigen/Dense>

namespace swarmgear::mathutil {

/// Dense matrix exponential by scaling-and-squaring with a Taylor kernel.
/// The argument is scaled by 2^-s until its infinity norm is below 0.25,
/// the series is summed to machine precision, and the result squared back.
/// Intended for the small fixed-size matrices used by the discretizer.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>
expm(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  static_assert(Derived::RowsAtCompileTime == Derived::ColsAtCompileTime,
                "expm requires a square matrix");

  Mat a = input;
  int squarings = 0;
  double norm = a.template lpNorm<Eigen::Infinity>();
  while (norm > 0.25) {
    a /= Scalar(2);
    norm /= 2.0;
    ++squarings;
  }

  Mat result = Mat::Identity();
  Mat term = Mat::Identity();
  for (int k = 1; k <= 40; ++k) {
    term = (term * a / Scalar(k)).eval();
    result += term;
    if (term.template lpNorm<Eigen::Infinity>() < 1e-300) break;
  }
  for (int i = 0; i < squarings; ++i) result = (result * result).eval();
  return result;
}

/// Bisection root finder for a continuous function with a sign change on
/// [lo, hi]. Runs until the bracket width falls below tol (or 200 splits).
/// Throws std::invalid_argument if f(lo) and f(hi) have the same sign.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::invalid_argument("bisect: no sign change on the given interval");
  }
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// FNV-1a 64-bit hash, used to stamp outputs with a config fingerprint.
inline std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t hash = 14695981039346656037ull;
  for (const char c : data) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  return hash;
}

}  // namespace swarmgear::mathutil
