#include "few/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "few/errors.hpp"
#include "kernels_backend.hpp"

namespace few::kernels {

namespace detail {

namespace {

void add_scalar(const double* a, const double* b, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::add(a[i], b[i]);
}
void sub_scalar(const double* a, const double* b, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::sub(a[i], b[i]);
}
void mul_scalar(const double* a, const double* b, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::mul(a[i], b[i]);
}
void div_scalar(const double* a, const double* b, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::div_protected(a[i], b[i]);
}
void square_scalar(const double* a, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::square(a[i]);
}
void cube_scalar(const double* a, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::cube(a[i]);
}
void sqrt_abs_scalar(const double* a, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::sqrt_abs(a[i]);
}
void cmp_eq_scalar(const double* a, const double* b, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::cmp_eq(a[i], b[i]);
}
void cmp_gt_scalar(const double* a, const double* b, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::cmp_gt(a[i], b[i]);
}
void cmp_geq_scalar(const double* a, const double* b, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::cmp_geq(a[i], b[i]);
}
void cmp_lt_scalar(const double* a, const double* b, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::cmp_lt(a[i], b[i]);
}
void cmp_leq_scalar(const double* a, const double* b, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::cmp_leq(a[i], b[i]);
}
void logic_and_scalar(const double* a, const double* b, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::logic_and(a[i], b[i]);
}
void logic_or_scalar(const double* a, const double* b, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::logic_or(a[i], b[i]);
}
void logic_xor_scalar(const double* a, const double* b, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::logic_xor(a[i], b[i]);
}
void logic_not_scalar(const double* a, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::logic_not(a[i]);
}
void to_bool_scalar(const double* a, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ref::to_bool(a[i]);
}
void scale_shift_scalar(const double* a, double scale, double shift, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * scale + shift;
}
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}
void acc_sq_dev_scalar(const double* a, double center, double* acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - center;
        acc[i] += d * d;
    }
}
double sum_scalar(const double* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i];
    return s;
}
double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}
double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}
double sum_sq_dev_scalar(const double* a, double center, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - center;
        s += d * d;
    }
    return s;
}

}  // namespace

const OpsTable& scalar_table() {
    static const OpsTable table = {
        add_scalar,     sub_scalar,       mul_scalar,      div_scalar,
        square_scalar,  cube_scalar,      sqrt_abs_scalar, cmp_eq_scalar,
        cmp_gt_scalar,  cmp_geq_scalar,   cmp_lt_scalar,   cmp_leq_scalar,
        logic_and_scalar, logic_or_scalar, logic_xor_scalar, logic_not_scalar, to_bool_scalar,
        scale_shift_scalar, axpy_scalar,  acc_sq_dev_scalar,
        sum_scalar,     dot_scalar,       sum_sq_diff_scalar, sum_sq_dev_scalar,
    };
    return table;
}

}  // namespace detail

namespace {

Backend detect_backend() {
    if (const char* env = std::getenv("FEW_KERNELS")) {
        std::string_view v(env);
        if (v == "scalar") return Backend::scalar;
#if defined(FEW_HAVE_AVX2)
        if (v == "avx2" && detail::avx2_available()) return Backend::avx2;
#endif
    }
#if defined(FEW_HAVE_AVX2)
    if (detail::avx2_available()) return Backend::avx2;
#endif
    return Backend::scalar;
}

std::atomic<const detail::OpsTable*> g_ops{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

const detail::OpsTable& table_for(Backend b) {
#if defined(FEW_HAVE_AVX2)
    if (b == Backend::avx2) return detail::avx2_table();
#endif
    (void)b;
    return detail::scalar_table();
}

const detail::OpsTable& ops() {
    const detail::OpsTable* t = g_ops.load(std::memory_order_acquire);
    if (t == nullptr) {
        const Backend b = detect_backend();
        g_backend.store(b, std::memory_order_relaxed);
        t = &table_for(b);
        g_ops.store(t, std::memory_order_release);
    }
    return *t;
}

}  // namespace

Backend active_backend() noexcept {
    ops();
    return g_backend.load(std::memory_order_relaxed);
}

bool backend_supported(Backend b) noexcept {
    if (b == Backend::scalar) return true;
#if defined(FEW_HAVE_AVX2)
    if (b == Backend::avx2) return detail::avx2_available();
#endif
    return false;
}

void force_backend(Backend b) {
    if (!backend_supported(b)) {
        throw UnsupportedError("kernel backend not supported on this machine");
    }
    g_backend.store(b, std::memory_order_relaxed);
    g_ops.store(&table_for(b), std::memory_order_release);
}

void reset_backend() noexcept {
    const Backend b = detect_backend();
    g_backend.store(b, std::memory_order_relaxed);
    g_ops.store(&table_for(b), std::memory_order_release);
}

std::string_view backend_name(Backend b) noexcept {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

void add(std::span<const double> a, std::span<const double> b, std::span<double> dst) {
    ops().add(a.data(), b.data(), dst.data(), dst.size());
}
void sub(std::span<const double> a, std::span<const double> b, std::span<double> dst) {
    ops().sub(a.data(), b.data(), dst.data(), dst.size());
}
void mul(std::span<const double> a, std::span<const double> b, std::span<double> dst) {
    ops().mul(a.data(), b.data(), dst.data(), dst.size());
}
void div_protected(std::span<const double> a, std::span<const double> b, std::span<double> dst) {
    ops().div_protected(a.data(), b.data(), dst.data(), dst.size());
}
void square(std::span<const double> a, std::span<double> dst) {
    ops().square(a.data(), dst.data(), dst.size());
}
void cube(std::span<const double> a, std::span<double> dst) {
    ops().cube(a.data(), dst.data(), dst.size());
}
void sqrt_abs(std::span<const double> a, std::span<double> dst) {
    ops().sqrt_abs(a.data(), dst.data(), dst.size());
}
void exp_capped(std::span<const double> a, std::span<double> dst) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = ref::clamp_value(ref::exp_capped(a[i]));
}
void log_protected(std::span<const double> a, std::span<double> dst) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = ref::log_protected(a[i]);
}
void sin(std::span<const double> a, std::span<double> dst) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::sin(a[i]);
}
void cos(std::span<const double> a, std::span<double> dst) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::cos(a[i]);
}
void cmp_eq(std::span<const double> a, std::span<const double> b, std::span<double> dst) {
    ops().cmp_eq(a.data(), b.data(), dst.data(), dst.size());
}
void cmp_gt(std::span<const double> a, std::span<const double> b, std::span<double> dst) {
    ops().cmp_gt(a.data(), b.data(), dst.data(), dst.size());
}
void cmp_geq(std::span<const double> a, std::span<const double> b, std::span<double> dst) {
    ops().cmp_geq(a.data(), b.data(), dst.data(), dst.size());
}
void cmp_lt(std::span<const double> a, std::span<const double> b, std::span<double> dst) {
    ops().cmp_lt(a.data(), b.data(), dst.data(), dst.size());
}
void cmp_leq(std::span<const double> a, std::span<const double> b, std::span<double> dst) {
    ops().cmp_leq(a.data(), b.data(), dst.data(), dst.size());
}
void logic_and(std::span<const double> a, std::span<const double> b, std::span<double> dst) {
    ops().logic_and(a.data(), b.data(), dst.data(), dst.size());
}
void logic_or(std::span<const double> a, std::span<const double> b, std::span<double> dst) {
    ops().logic_or(a.data(), b.data(), dst.data(), dst.size());
}
void logic_xor(std::span<const double> a, std::span<const double> b, std::span<double> dst) {
    ops().logic_xor(a.data(), b.data(), dst.data(), dst.size());
}
void logic_not(std::span<const double> a, std::span<double> dst) {
    ops().logic_not(a.data(), dst.data(), dst.size());
}
void to_bool(std::span<const double> a, std::span<double> dst) {
    ops().to_bool(a.data(), dst.data(), dst.size());
}
void scale_shift(std::span<const double> a, double scale, double shift, std::span<double> dst) {
    ops().scale_shift(a.data(), scale, shift, dst.data(), dst.size());
}
void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    ops().axpy(alpha, x.data(), y.data(), y.size());
}
void acc_sq_dev(std::span<const double> a, double center, std::span<double> acc) {
    ops().acc_sq_dev(a.data(), center, acc.data(), acc.size());
}
double sum(std::span<const double> a) { return ops().sum(a.data(), a.size()); }
double dot(std::span<const double> a, std::span<const double> b) {
    return ops().dot(a.data(), b.data(), a.size());
}
double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
    return ops().sum_sq_diff(a.data(), b.data(), a.size());
}
double sum_sq_dev(std::span<const double> a, double center) {
    return ops().sum_sq_dev(a.data(), center, a.size());
}

}  // namespace few::kernels
