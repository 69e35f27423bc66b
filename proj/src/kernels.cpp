#include "wfa/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>

#if defined(WFA_HAVE_AVX2_KERNELS)
#include <immintrin.h>
#endif
#if defined(WFA_HAVE_NEON_KERNELS)
#include <arm_neon.h>
#endif

namespace wfa::kernels {

const char* to_string(Isa isa) {
    switch (isa) {
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    default: return "scalar";
    }
}

namespace scalar {

void fir4(const double* x, const double* w, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = ((w[0] * x[i] + w[1] * x[i + 1]) + w[2] * x[i + 2]) + w[3] * x[i + 3];
}

double blend_maxdiff(double* y, const double* target, double d, std::size_t n) {
    const double keep = 1.0 - d;
    double m = 0.0;
    bool nan = false;
    for (std::size_t i = 0; i < n; ++i) {
        double v = keep * y[i] + d * target[i];
        double diff = std::abs(v - y[i]);
        nan |= std::isnan(diff);
        m = diff > m ? diff : m;
        y[i] = v;
    }
    return nan ? std::numeric_limits<double>::quiet_NaN() : m;
}

double stencil_maxabs(const double* y, const double* g, std::size_t n, double a, double b) {
    double m = 0.0;
    bool nan = false;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double r = a * ((y[i + 1] - 2.0 * y[i]) + y[i - 1]) - b * (y[i + 1] - y[i - 1]) + g[i];
        r = std::abs(r);
        nan |= std::isnan(r);
        m = r > m ? r : m;
    }
    return nan ? std::numeric_limits<double>::quiet_NaN() : m;
}

void central_diff(const double* y, double* out, std::size_t n, double s) {
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = s * (y[i + 1] - y[i - 1]);
}

}  // namespace scalar

#if defined(WFA_HAVE_AVX2_KERNELS)
namespace avx2 {

namespace {
__attribute__((target("avx2"))) inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v), hi = _mm256_extractf128_pd(v, 1);
    __m128d m = _mm_max_pd(lo, hi);
    m = _mm_max_pd(m, _mm_unpackhi_pd(m, m));
    return _mm_cvtsd_f64(m);
}
__attribute__((target("avx2"))) inline __m256d vabs(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}
}  // namespace

__attribute__((target("avx2"))) void fir4(const double* x, const double* w, double* out, std::size_t n) {
    const __m256d w0 = _mm256_set1_pd(w[0]), w1 = _mm256_set1_pd(w[1]);
    const __m256d w2 = _mm256_set1_pd(w[2]), w3 = _mm256_set1_pd(w[3]);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_add_pd(_mm256_mul_pd(w0, _mm256_loadu_pd(x + i)),
                                    _mm256_mul_pd(w1, _mm256_loadu_pd(x + i + 1)));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(w2, _mm256_loadu_pd(x + i + 2)));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(w3, _mm256_loadu_pd(x + i + 3)));
        _mm256_storeu_pd(out + i, acc);
    }
    scalar::fir4(x + i, w, out + i, n - i);
}

__attribute__((target("avx2"))) double blend_maxdiff(double* y, const double* target, double d,
                                                     std::size_t n) {
    const __m256d keep = _mm256_set1_pd(1.0 - d), dd = _mm256_set1_pd(d);
    __m256d m = _mm256_setzero_pd(), nan = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d old = _mm256_loadu_pd(y + i);
        __m256d v = _mm256_add_pd(_mm256_mul_pd(keep, old), _mm256_mul_pd(dd, _mm256_loadu_pd(target + i)));
        __m256d diff = vabs(_mm256_sub_pd(v, old));
        nan = _mm256_or_pd(nan, _mm256_cmp_pd(diff, diff, _CMP_UNORD_Q));
        m = _mm256_max_pd(m, diff);
        _mm256_storeu_pd(y + i, v);
    }
    double tail = scalar::blend_maxdiff(y + i, target + i, d, n - i);
    if (_mm256_movemask_pd(nan) || std::isnan(tail)) return std::numeric_limits<double>::quiet_NaN();
    double r = hmax(m);
    return tail > r ? tail : r;
}

__attribute__((target("avx2"))) double stencil_maxabs(const double* y, const double* g, std::size_t n,
                                                      double a, double b) {
    if (n < 3) return 0.0;
    const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b), two = _mm256_set1_pd(2.0);
    __m256d m = _mm256_setzero_pd(), nan = _mm256_setzero_pd();
    std::size_t i = 1;
    for (; i + 4 + 1 <= n; i += 4) {
        __m256d ym = _mm256_loadu_pd(y + i - 1), y0 = _mm256_loadu_pd(y + i), yp = _mm256_loadu_pd(y + i + 1);
        __m256d lap = _mm256_add_pd(_mm256_sub_pd(yp, _mm256_mul_pd(two, y0)), ym);
        __m256d r = _mm256_sub_pd(_mm256_mul_pd(va, lap), _mm256_mul_pd(vb, _mm256_sub_pd(yp, ym)));
        r = vabs(_mm256_add_pd(r, _mm256_loadu_pd(g + i)));
        nan = _mm256_or_pd(nan, _mm256_cmp_pd(r, r, _CMP_UNORD_Q));
        m = _mm256_max_pd(m, r);
    }
    // remaining rows i .. n-2 need y[i-1 .. n-1]
    double tail = scalar::stencil_maxabs(y + i - 1, g + i - 1, n - i + 1, a, b);
    if (_mm256_movemask_pd(nan) || std::isnan(tail)) return std::numeric_limits<double>::quiet_NaN();
    double r = hmax(m);
    return tail > r ? tail : r;
}

__attribute__((target("avx2"))) void central_diff(const double* y, double* out, std::size_t n, double s) {
    if (n < 3) return;
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 1;
    for (; i + 4 + 1 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(y + i + 1), _mm256_loadu_pd(y + i - 1));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(vs, d));
    }
    scalar::central_diff(y + i - 1, out + i - 1, n - i + 1, s);
}

}  // namespace avx2
#endif

#if defined(WFA_HAVE_NEON_KERNELS)
namespace neon {

void fir4(const double* x, const double* w, double* out, std::size_t n) {
    const float64x2_t w0 = vdupq_n_f64(w[0]), w1 = vdupq_n_f64(w[1]);
    const float64x2_t w2 = vdupq_n_f64(w[2]), w3 = vdupq_n_f64(w[3]);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t acc = vaddq_f64(vmulq_f64(w0, vld1q_f64(x + i)), vmulq_f64(w1, vld1q_f64(x + i + 1)));
        acc = vaddq_f64(acc, vmulq_f64(w2, vld1q_f64(x + i + 2)));
        acc = vaddq_f64(acc, vmulq_f64(w3, vld1q_f64(x + i + 3)));
        vst1q_f64(out + i, acc);
    }
    scalar::fir4(x + i, w, out + i, n - i);
}

double blend_maxdiff(double* y, const double* target, double d, std::size_t n) {
    const float64x2_t keep = vdupq_n_f64(1.0 - d), dd = vdupq_n_f64(d);
    float64x2_t m = vdupq_n_f64(0.0);
    bool nan = false;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t old = vld1q_f64(y + i);
        float64x2_t v = vaddq_f64(vmulq_f64(keep, old), vmulq_f64(dd, vld1q_f64(target + i)));
        float64x2_t diff = vabsq_f64(vsubq_f64(v, old));
        uint64x2_t ok = vceqq_f64(diff, diff);
        nan |= (vgetq_lane_u64(ok, 0) & vgetq_lane_u64(ok, 1)) == 0;
        m = vmaxq_f64(m, diff);
        vst1q_f64(y + i, v);
    }
    double tail = scalar::blend_maxdiff(y + i, target + i, d, n - i);
    if (nan || std::isnan(tail)) return std::numeric_limits<double>::quiet_NaN();
    double r = vmaxvq_f64(m);
    return tail > r ? tail : r;
}

double stencil_maxabs(const double* y, const double* g, std::size_t n, double a, double b) {
    if (n < 3) return 0.0;
    const float64x2_t va = vdupq_n_f64(a), vb = vdupq_n_f64(b), two = vdupq_n_f64(2.0);
    float64x2_t m = vdupq_n_f64(0.0);
    bool nan = false;
    std::size_t i = 1;
    for (; i + 2 + 1 <= n; i += 2) {
        float64x2_t ym = vld1q_f64(y + i - 1), y0 = vld1q_f64(y + i), yp = vld1q_f64(y + i + 1);
        float64x2_t lap = vaddq_f64(vsubq_f64(yp, vmulq_f64(two, y0)), ym);
        float64x2_t r = vsubq_f64(vmulq_f64(va, lap), vmulq_f64(vb, vsubq_f64(yp, ym)));
        r = vabsq_f64(vaddq_f64(r, vld1q_f64(g + i)));
        uint64x2_t ok = vceqq_f64(r, r);
        nan |= (vgetq_lane_u64(ok, 0) & vgetq_lane_u64(ok, 1)) == 0;
        m = vmaxq_f64(m, r);
    }
    double tail = scalar::stencil_maxabs(y + i - 1, g + i - 1, n - i + 1, a, b);
    if (nan || std::isnan(tail)) return std::numeric_limits<double>::quiet_NaN();
    double r = vmaxvq_f64(m);
    return tail > r ? tail : r;
}

void central_diff(const double* y, double* out, std::size_t n, double s) {
    if (n < 3) return;
    const float64x2_t vs = vdupq_n_f64(s);
    std::size_t i = 1;
    for (; i + 2 + 1 <= n; i += 2)
        vst1q_f64(out + i, vmulq_f64(vs, vsubq_f64(vld1q_f64(y + i + 1), vld1q_f64(y + i - 1))));
    scalar::central_diff(y + i - 1, out + i - 1, n - i + 1, s);
}

}  // namespace neon
#endif

bool available(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return true;
#if defined(WFA_HAVE_AVX2_KERNELS)
    case Isa::Avx2: return __builtin_cpu_supports("avx2");
#endif
#if defined(WFA_HAVE_NEON_KERNELS)
    case Isa::Neon: return true;
#endif
    default: return false;
    }
}

Isa active() {
    static const Isa isa = [] {
        const char* env = std::getenv("WFA_KERNELS");
        if (env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
        if (available(Isa::Avx2)) return Isa::Avx2;
        if (available(Isa::Neon)) return Isa::Neon;
        return Isa::Scalar;
    }();
    return isa;
}

#if defined(WFA_HAVE_AVX2_KERNELS)
#define WFA_DISPATCH(fn, ...)                                   \
    switch (active()) {                                        \
    case Isa::Avx2: return avx2::fn(__VA_ARGS__);              \
    default: return scalar::fn(__VA_ARGS__);                   \
    }
#elif defined(WFA_HAVE_NEON_KERNELS)
#define WFA_DISPATCH(fn, ...)                                   \
    switch (active()) {                                        \
    case Isa::Neon: return neon::fn(__VA_ARGS__);              \
    default: return scalar::fn(__VA_ARGS__);                   \
    }
#else
#define WFA_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__);
#endif

void fir4(const double* x, const double* w, double* out, std::size_t n) { WFA_DISPATCH(fir4, x, w, out, n) }
double blend_maxdiff(double* y, const double* target, double d, std::size_t n) {
    WFA_DISPATCH(blend_maxdiff, y, target, d, n)
}
double stencil_maxabs(const double* y, const double* g, std::size_t n, double a, double b) {
    WFA_DISPATCH(stencil_maxabs, y, g, n, a, b)
}
void central_diff(const double* y, double* out, std::size_t n, double s) {
    WFA_DISPATCH(central_diff, y, out, n, s)
}

}  // namespace wfa::kernels
