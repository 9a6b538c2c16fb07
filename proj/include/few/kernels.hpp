#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>

namespace few::kernels {

// Protected-arithmetic constants. Every float-valued operator clamps its
// result to [-kValueCap, kValueCap], which makes tree evaluation total for
// any finite input regardless of tree depth.
inline constexpr double kDivisorFloor = 1e-9;  // div(a,b)=1 when |b| <= floor
inline constexpr double kLogFloor = 1e-9;      // log(x)=0 when |x| <= floor
inline constexpr double kExpArgCap = 32.0;     // exp(min(x, cap))
inline constexpr double kValueCap = 1e30;
inline constexpr double kEqTolerance = 1e-9;   // ==(a,b) means |a-b| <= tol

// Scalar reference semantics. These single-value helpers are the definition;
// the array kernels (scalar and SIMD alike) must agree with them bit for bit.
namespace ref {

inline double clamp_value(double v) {
    if (v > kValueCap) return kValueCap;
    if (v < -kValueCap) return -kValueCap;
    return v;
}
inline double add(double a, double b) { return clamp_value(a + b); }
inline double sub(double a, double b) { return clamp_value(a - b); }
inline double mul(double a, double b) { return clamp_value(a * b); }
inline double div_protected(double a, double b) {
    return std::fabs(b) > kDivisorFloor ? clamp_value(a / b) : 1.0;
}
inline double square(double a) { return clamp_value(a * a); }
inline double cube(double a) { return clamp_value(a * a * a); }
inline double sqrt_abs(double a) { return clamp_value(std::sqrt(std::fabs(a))); }
inline double exp_capped(double a) { return std::exp(a < kExpArgCap ? a : kExpArgCap); }
inline double log_protected(double a) {
    return std::fabs(a) > kLogFloor ? std::log(std::fabs(a)) : 0.0;
}
inline double cmp_eq(double a, double b) { return std::fabs(a - b) <= kEqTolerance ? 1.0 : 0.0; }
inline double cmp_gt(double a, double b) { return a > b ? 1.0 : 0.0; }
inline double cmp_geq(double a, double b) { return a >= b ? 1.0 : 0.0; }
inline double cmp_lt(double a, double b) { return a < b ? 1.0 : 0.0; }
inline double cmp_leq(double a, double b) { return a <= b ? 1.0 : 0.0; }
inline double logic_and(double a, double b) { return (a > 0.5 && b > 0.5) ? 1.0 : 0.0; }
inline double logic_or(double a, double b) { return (a > 0.5 || b > 0.5) ? 1.0 : 0.0; }
inline double logic_xor(double a, double b) { return ((a > 0.5) != (b > 0.5)) ? 1.0 : 0.0; }
inline double logic_not(double a) { return a > 0.5 ? 0.0 : 1.0; }
// Numeric-to-boolean coercion: any nonzero value counts as true.
inline double to_bool(double a) { return a != 0.0 ? 1.0 : 0.0; }

}  // namespace ref

// Runtime backend selection. The library auto-detects the best supported
// backend once; tests and the CLI can pin one explicitly.
enum class Backend { scalar, avx2 };

Backend active_backend() noexcept;
bool backend_supported(Backend) noexcept;
void force_backend(Backend);  // throws UnsupportedError if not supported here
void reset_backend() noexcept;
std::string_view backend_name(Backend) noexcept;

// Elementwise kernels. dst may alias a or b; all spans must have equal length.
void add(std::span<const double> a, std::span<const double> b, std::span<double> dst);
void sub(std::span<const double> a, std::span<const double> b, std::span<double> dst);
void mul(std::span<const double> a, std::span<const double> b, std::span<double> dst);
void div_protected(std::span<const double> a, std::span<const double> b, std::span<double> dst);
void square(std::span<const double> a, std::span<double> dst);
void cube(std::span<const double> a, std::span<double> dst);
void sqrt_abs(std::span<const double> a, std::span<double> dst);
void exp_capped(std::span<const double> a, std::span<double> dst);     // scalar path
void log_protected(std::span<const double> a, std::span<double> dst);  // scalar path
void sin(std::span<const double> a, std::span<double> dst);            // scalar path
void cos(std::span<const double> a, std::span<double> dst);            // scalar path

// Comparisons and boolean algebra over {0,1}-encoded columns.
void cmp_eq(std::span<const double> a, std::span<const double> b, std::span<double> dst);
void cmp_gt(std::span<const double> a, std::span<const double> b, std::span<double> dst);
void cmp_geq(std::span<const double> a, std::span<const double> b, std::span<double> dst);
void cmp_lt(std::span<const double> a, std::span<const double> b, std::span<double> dst);
void cmp_leq(std::span<const double> a, std::span<const double> b, std::span<double> dst);
void logic_and(std::span<const double> a, std::span<const double> b, std::span<double> dst);
void logic_or(std::span<const double> a, std::span<const double> b, std::span<double> dst);
void logic_xor(std::span<const double> a, std::span<const double> b, std::span<double> dst);
void logic_not(std::span<const double> a, std::span<double> dst);
void to_bool(std::span<const double> a, std::span<double> dst);

// Fused elementwise helpers used by standardization and the linear solvers.
// These avoid FMA contraction so scalar and SIMD results stay bit-identical.
void scale_shift(std::span<const double> a, double scale, double shift, std::span<double> dst);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void acc_sq_dev(std::span<const double> a, double center, std::span<double> acc);

// Reductions. SIMD variants reassociate the sum (and may use FMA), so they
// match the scalar reference only to rounding error, not bitwise.
double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
double sum_sq_diff(std::span<const double> a, std::span<const double> b);  // sum (a-b)^2
double sum_sq_dev(std::span<const double> a, double center);               // sum (a-c)^2

}  // namespace few::kernels
