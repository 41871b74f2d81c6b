#pragma once

// Thin adapter so numeric templates can be instantiated with __float128.
// Only the handful of functions the kernel evaluations need.

#include <cmath>
#include <quadmath.h>

namespace spec2 {

using qfloat = __float128;

inline double f_abs(double x) { return std::fabs(x); }
inline double f_sqrt(double x) { return std::sqrt(x); }
inline double f_exp(double x) { return std::exp(x); }
inline double f_log(double x) { return std::log(x); }
inline double f_lgamma(double x) { return std::lgamma(x); }
inline double f_tgamma(double x) { return std::tgamma(x); }
inline bool f_finite(double x) { return std::isfinite(x); }

inline qfloat f_abs(qfloat x) { return fabsq(x); }
inline qfloat f_sqrt(qfloat x) { return sqrtq(x); }
inline qfloat f_exp(qfloat x) { return expq(x); }
inline qfloat f_log(qfloat x) { return logq(x); }
inline qfloat f_lgamma(qfloat x) { return lgammaq(x); }
inline qfloat f_tgamma(qfloat x) { return tgammaq(x); }
inline bool f_finite(qfloat x) { return finiteq(x) != 0; }

template <typename Real>
inline constexpr Real f_eps();
template <>
inline constexpr double f_eps<double>() { return 2.220446049250313e-16; }
template <>
inline constexpr qfloat f_eps<qfloat>() { return FLT128_EPSILON; }

template <typename Real>
inline Real f_pi();
template <>
inline double f_pi<double>() { return 3.14159265358979323846; }
template <>
inline qfloat f_pi<qfloat>() { return M_PIq; }

}  // namespace spec2
