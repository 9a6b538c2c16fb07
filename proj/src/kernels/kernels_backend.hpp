#pragma once

#include <cstddef>

// Internal dispatch table shared by the scalar reference backend and the
// SIMD backends. Not installed; includes stay within src/kernels.

namespace few::kernels::detail {

using BinaryFn = void (*)(const double*, const double*, double*, std::size_t);
using UnaryFn = void (*)(const double*, double*, std::size_t);
using ScaleShiftFn = void (*)(const double*, double, double, double*, std::size_t);
using AxpyFn = void (*)(double, const double*, double*, std::size_t);
using AccSqDevFn = void (*)(const double*, double, double*, std::size_t);
using ReduceFn = double (*)(const double*, std::size_t);
using Reduce2Fn = double (*)(const double*, const double*, std::size_t);
using ReduceDevFn = double (*)(const double*, double, std::size_t);

struct OpsTable {
    BinaryFn add;
    BinaryFn sub;
    BinaryFn mul;
    BinaryFn div_protected;
    UnaryFn square;
    UnaryFn cube;
    UnaryFn sqrt_abs;
    BinaryFn cmp_eq;
    BinaryFn cmp_gt;
    BinaryFn cmp_geq;
    BinaryFn cmp_lt;
    BinaryFn cmp_leq;
    BinaryFn logic_and;
    BinaryFn logic_or;
    BinaryFn logic_xor;
    UnaryFn logic_not;
    UnaryFn to_bool;
    ScaleShiftFn scale_shift;
    AxpyFn axpy;
    AccSqDevFn acc_sq_dev;
    ReduceFn sum;
    Reduce2Fn dot;
    Reduce2Fn sum_sq_diff;
    ReduceDevFn sum_sq_dev;
};

const OpsTable& scalar_table();

#if defined(FEW_HAVE_AVX2)
const OpsTable& avx2_table();
bool avx2_available();
#endif

}  // namespace few::kernels::detail
