#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "wfa/kernels.hpp"

namespace k = wfa::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

template <class Fir, class Blend, class Stencil, class Diff>
void compare(Fir fir, Blend blend, Stencil stencil, Diff cdiff) {
    std::mt19937_64 rng(7);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 31u, 64u, 1023u}) {
        CAPTURE(n);
        auto x = random_vec(rng, n + 3, 10);
        auto w = random_vec(rng, 4, 1);
        std::vector<double> a(n), b(n);
        k::scalar::fir4(x.data(), w.data(), a.data(), n);
        fir(x.data(), w.data(), b.data(), n);
        CHECK(same_bits(a, b));

        auto y = random_vec(rng, n, 1), t = random_vec(rng, n, 1);
        auto y2 = y;
        double m1 = k::scalar::blend_maxdiff(y.data(), t.data(), 0.37, n);
        double m2 = blend(y2.data(), t.data(), 0.37, n);
        CHECK(std::memcmp(&m1, &m2, sizeof m1) == 0);
        CHECK(same_bits(y, y2));

        auto g = random_vec(rng, n, 1);
        double s1 = k::scalar::stencil_maxabs(y.data(), g.data(), n, 1e4, 37.5);
        double s2 = stencil(y.data(), g.data(), n, 1e4, 37.5);
        CHECK(std::memcmp(&s1, &s2, sizeof s1) == 0);

        std::vector<double> d1(n, 0.0), d2(n, 0.0);
        k::scalar::central_diff(y.data(), d1.data(), n, 12.5);
        cdiff(y.data(), d2.data(), n, 12.5);
        CHECK(same_bits(d1, d2));
    }
    // NaN propagation
    std::vector<double> y(9, 1.0), t(9, 2.0);
    t[6] = std::numeric_limits<double>::quiet_NaN();
    auto y2 = y;
    CHECK(std::isnan(k::scalar::blend_maxdiff(y.data(), t.data(), 0.5, 9)));
    CHECK(std::isnan(blend(y2.data(), t.data(), 0.5, 9)));
}

}  // namespace

TEST_CASE("scalar reference") {
    double x[] = {1, 2, 3, 4, 5};
    double w[] = {1, 10, 100, 1000};
    double out[2];
    k::scalar::fir4(x, w, out, 2);
    CHECK(out[0] == 4321);
    CHECK(out[1] == 5432);
    double y[] = {0, 1, 4, 9};
    double g[] = {0, 0, 0, 0};
    // second difference of t^2 is 2
    CHECK(k::scalar::stencil_maxabs(y, g, 4, 1.0, 0.0) == 2.0);
    double d[4] = {};
    k::scalar::central_diff(y, d, 4, 0.5);
    CHECK(d[1] == 2.0);
    CHECK(d[2] == 4.0);
}

TEST_CASE("dispatch") {
    CHECK(k::available(k::Isa::Scalar));
    CHECK(k::available(k::active()));
    CHECK(std::string(k::to_string(k::Isa::Avx2)) == "avx2");
}

#if defined(WFA_HAVE_AVX2_KERNELS)
TEST_CASE("avx2 variants are bit-identical to the reference") {
    if (!k::available(k::Isa::Avx2)) {
        MESSAGE("AVX2 not available on this CPU, skipped");
        return;
    }
    compare(k::avx2::fir4, k::avx2::blend_maxdiff, k::avx2::stencil_maxabs, k::avx2::central_diff);
}
#endif

#if defined(WFA_HAVE_NEON_KERNELS)
TEST_CASE("neon variants are bit-identical to the reference") {
    compare(k::neon::fir4, k::neon::blend_maxdiff, k::neon::stencil_maxabs, k::neon::central_diff);
}
#endif

TEST_CASE("dispatched entry points match the reference") {
    compare(k::fir4, k::blend_maxdiff, k::stencil_maxabs, k::central_diff);
}
