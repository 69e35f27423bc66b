#pragma once

#include <cstddef>

// Inner loops of the profile solver. Each kernel has a scalar reference and
// SIMD variants that must agree bit for bit (the build disables FP contraction).

namespace wfa::kernels {

enum class Isa { Scalar, Avx2, Neon };
const char* to_string(Isa isa);

// Variant picked at first use. WFA_KERNELS=scalar forces the reference path.
Isa active();
bool available(Isa isa);

// out[i] = w0*x[i] + w1*x[i+1] + w2*x[i+2] + w3*x[i+3]
void fir4(const double* x, const double* w, double* out, std::size_t n);
// y = (1-d)*y + d*target, returns max |y_new - y_old| (NaN if any NaN)
double blend_maxdiff(double* y, const double* target, double d, std::size_t n);
// max over i in [1, n-1) of |a*((y[i+1] - 2y[i]) + y[i-1]) - b*(y[i+1] - y[i-1]) + g[i]|
double stencil_maxabs(const double* y, const double* g, std::size_t n, double a, double b);
// out[i] = s*(y[i+1] - y[i-1]) for i in [1, n-1)
void central_diff(const double* y, double* out, std::size_t n, double s);

namespace scalar {
void fir4(const double* x, const double* w, double* out, std::size_t n);
double blend_maxdiff(double* y, const double* target, double d, std::size_t n);
double stencil_maxabs(const double* y, const double* g, std::size_t n, double a, double b);
void central_diff(const double* y, double* out, std::size_t n, double s);
}  // namespace scalar

#if defined(__x86_64__) || defined(__i386__)
#define WFA_HAVE_AVX2_KERNELS 1
namespace avx2 {
void fir4(const double* x, const double* w, double* out, std::size_t n);
double blend_maxdiff(double* y, const double* target, double d, std::size_t n);
double stencil_maxabs(const double* y, const double* g, std::size_t n, double a, double b);
void central_diff(const double* y, double* out, std::size_t n, double s);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define WFA_HAVE_NEON_KERNELS 1
namespace neon {
void fir4(const double* x, const double* w, double* out, std::size_t n);
double blend_maxdiff(double* y, const double* target, double d, std::size_t n);
double stencil_maxabs(const double* y, const double* g, std::size_t n, double a, double b);
void central_diff(const double* y, double* out, std::size_t n, double s);
}  // namespace neon
#endif

}  // namespace wfa::kernels
