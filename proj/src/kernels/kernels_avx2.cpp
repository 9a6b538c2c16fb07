// AVX2 kernel variants. This translation unit is compiled with
// -mavx2 -mfma -ffp-contract=off; fp-contract stays off so the tail loops and
// the non-reduction bodies produce bit-identical results to the scalar
// reference backend. Only the reductions use FMA explicitly.

#if defined(FEW_HAVE_AVX2)

#include <immintrin.h>

#include "few/kernels.hpp"
#include "kernels_backend.hpp"

namespace few::kernels::detail {

namespace {

constexpr std::size_t kWidth = 4;  // doubles per __m256d

inline __m256d clamp4(__m256d v) {
    const __m256d lo = _mm256_set1_pd(-kValueCap);
    const __m256d hi = _mm256_set1_pd(kValueCap);
    return _mm256_min_pd(_mm256_max_pd(v, lo), hi);
}

inline __m256d abs4(__m256d v) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    return _mm256_andnot_pd(sign, v);
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

void add_avx2(const double* a, const double* b, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d v = _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(dst + i, clamp4(v));
    }
    for (; i < n; ++i) dst[i] = ref::add(a[i], b[i]);
}

void sub_avx2(const double* a, const double* b, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d v = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(dst + i, clamp4(v));
    }
    for (; i < n; ++i) dst[i] = ref::sub(a[i], b[i]);
}

void mul_avx2(const double* a, const double* b, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d v = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(dst + i, clamp4(v));
    }
    for (; i < n; ++i) dst[i] = ref::mul(a[i], b[i]);
}

void div_avx2(const double* a, const double* b, double* dst, std::size_t n) {
    const __m256d ones = _mm256_set1_pd(1.0);
    const __m256d floor4 = _mm256_set1_pd(kDivisorFloor);
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        __m256d ok = _mm256_cmp_pd(abs4(vb), floor4, _CMP_GT_OQ);
        __m256d safe = _mm256_blendv_pd(ones, vb, ok);
        __m256d q = clamp4(_mm256_div_pd(va, safe));
        _mm256_storeu_pd(dst + i, _mm256_blendv_pd(ones, q, ok));
    }
    for (; i < n; ++i) dst[i] = ref::div_protected(a[i], b[i]);
}

void square_avx2(const double* a, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d v = _mm256_loadu_pd(a + i);
        _mm256_storeu_pd(dst + i, clamp4(_mm256_mul_pd(v, v)));
    }
    for (; i < n; ++i) dst[i] = ref::square(a[i]);
}

void cube_avx2(const double* a, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d v = _mm256_loadu_pd(a + i);
        __m256d v3 = _mm256_mul_pd(_mm256_mul_pd(v, v), v);
        _mm256_storeu_pd(dst + i, clamp4(v3));
    }
    for (; i < n; ++i) dst[i] = ref::cube(a[i]);
}

void sqrt_abs_avx2(const double* a, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d v = _mm256_sqrt_pd(abs4(_mm256_loadu_pd(a + i)));
        _mm256_storeu_pd(dst + i, clamp4(v));
    }
    for (; i < n; ++i) dst[i] = ref::sqrt_abs(a[i]);
}

template <int Cmp>
void cmp_avx2(const double* a, const double* b, double* dst, std::size_t n,
              double (*tail)(double, double)) {
    const __m256d ones = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d m = _mm256_cmp_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), Cmp);
        _mm256_storeu_pd(dst + i, _mm256_and_pd(m, ones));
    }
    for (; i < n; ++i) dst[i] = tail(a[i], b[i]);
}

void cmp_eq_avx2(const double* a, const double* b, double* dst, std::size_t n) {
    const __m256d ones = _mm256_set1_pd(1.0);
    const __m256d tol = _mm256_set1_pd(kEqTolerance);
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d d = abs4(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        __m256d m = _mm256_cmp_pd(d, tol, _CMP_LE_OQ);
        _mm256_storeu_pd(dst + i, _mm256_and_pd(m, ones));
    }
    for (; i < n; ++i) dst[i] = ref::cmp_eq(a[i], b[i]);
}

void cmp_gt_avx2(const double* a, const double* b, double* dst, std::size_t n) {
    cmp_avx2<_CMP_GT_OQ>(a, b, dst, n, ref::cmp_gt);
}
void cmp_geq_avx2(const double* a, const double* b, double* dst, std::size_t n) {
    cmp_avx2<_CMP_GE_OQ>(a, b, dst, n, ref::cmp_geq);
}
void cmp_lt_avx2(const double* a, const double* b, double* dst, std::size_t n) {
    cmp_avx2<_CMP_LT_OQ>(a, b, dst, n, ref::cmp_lt);
}
void cmp_leq_avx2(const double* a, const double* b, double* dst, std::size_t n) {
    cmp_avx2<_CMP_LE_OQ>(a, b, dst, n, ref::cmp_leq);
}

enum class Gate { and_, or_, xor_ };

template <Gate G>
void logic_avx2(const double* a, const double* b, double* dst, std::size_t n,
                double (*tail)(double, double)) {
    const __m256d ones = _mm256_set1_pd(1.0);
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d ma = _mm256_cmp_pd(_mm256_loadu_pd(a + i), half, _CMP_GT_OQ);
        __m256d mb = _mm256_cmp_pd(_mm256_loadu_pd(b + i), half, _CMP_GT_OQ);
        __m256d m;
        if constexpr (G == Gate::and_) m = _mm256_and_pd(ma, mb);
        else if constexpr (G == Gate::or_) m = _mm256_or_pd(ma, mb);
        else m = _mm256_xor_pd(ma, mb);
        _mm256_storeu_pd(dst + i, _mm256_and_pd(m, ones));
    }
    for (; i < n; ++i) dst[i] = tail(a[i], b[i]);
}

void logic_and_avx2(const double* a, const double* b, double* dst, std::size_t n) {
    logic_avx2<Gate::and_>(a, b, dst, n, ref::logic_and);
}
void logic_or_avx2(const double* a, const double* b, double* dst, std::size_t n) {
    logic_avx2<Gate::or_>(a, b, dst, n, ref::logic_or);
}
void logic_xor_avx2(const double* a, const double* b, double* dst, std::size_t n) {
    logic_avx2<Gate::xor_>(a, b, dst, n, ref::logic_xor);
}

void logic_not_avx2(const double* a, double* dst, std::size_t n) {
    const __m256d ones = _mm256_set1_pd(1.0);
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d m = _mm256_cmp_pd(_mm256_loadu_pd(a + i), half, _CMP_LE_OQ);
        _mm256_storeu_pd(dst + i, _mm256_and_pd(m, ones));
    }
    for (; i < n; ++i) dst[i] = ref::logic_not(a[i]);
}

void to_bool_avx2(const double* a, double* dst, std::size_t n) {
    const __m256d ones = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d m = _mm256_cmp_pd(_mm256_loadu_pd(a + i), zero, _CMP_NEQ_OQ);
        _mm256_storeu_pd(dst + i, _mm256_and_pd(m, ones));
    }
    for (; i < n; ++i) dst[i] = ref::to_bool(a[i]);
}

void scale_shift_avx2(const double* a, double scale, double shift, double* dst, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(scale);
    const __m256d vb = _mm256_set1_pd(shift);
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d v = _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(a + i), vs), vb);
        _mm256_storeu_pd(dst + i, v);
    }
    for (; i < n; ++i) dst[i] = a[i] * scale + shift;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d v = _mm256_add_pd(_mm256_loadu_pd(y + i),
                                  _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, v);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void acc_sq_dev_avx2(const double* a, double center, double* acc, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(center);
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), vc);
        __m256d v = _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_mul_pd(d, d));
        _mm256_storeu_pd(acc + i, v);
    }
    for (; i < n; ++i) {
        const double d = a[i] - center;
        acc[i] += d * d;
    }
}

double sum_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i];
    return s;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double sum_sq_dev_avx2(const double* a, double center, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(center);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kWidth <= n; i += kWidth) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), vc);
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - center;
        s += d * d;
    }
    return s;
}

}  // namespace

const OpsTable& avx2_table() {
    static const OpsTable table = {
        add_avx2,     sub_avx2,      mul_avx2,      div_avx2,
        square_avx2,  cube_avx2,     sqrt_abs_avx2, cmp_eq_avx2,
        cmp_gt_avx2,  cmp_geq_avx2,  cmp_lt_avx2,   cmp_leq_avx2,
        logic_and_avx2, logic_or_avx2, logic_xor_avx2, logic_not_avx2, to_bool_avx2,
        scale_shift_avx2, axpy_avx2, acc_sq_dev_avx2,
        sum_avx2,     dot_avx2,      sum_sq_diff_avx2, sum_sq_dev_avx2,
    };
    return table;
}

bool avx2_available() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace few::kernels::detail

#endif  // FEW_HAVE_AVX2
