#include <doctest.h>

#include <cmath>
#include <vector>

#include "wfa/charspec.hpp"

using namespace wfa;

namespace {

// Oracle: strict local minima of |chi| on a dense grid, polished by Newton.
std::vector<cplx> grid_roots(const CharFunction& cf, const Strip& st, double step) {
    std::vector<cplx> out;
    int nx = static_cast<int>((st.re_max - st.re_min) / step) + 1;
    int ny = static_cast<int>(2 * st.im_max / step) + 1;
    auto mod = [&](int i, int j) { return std::abs(chi(cf, cplx(st.re_min + i * step, -st.im_max + j * step))); };
    for (int i = 1; i + 1 < nx; ++i) {
        for (int j = 1; j + 1 < ny; ++j) {
            double m = mod(i, j);
            bool minimum = true;
            for (int di = -1; di <= 1 && minimum; ++di)
                for (int dj = -1; dj <= 1; ++dj)
                    if ((di || dj) && mod(i + di, j + dj) <= m) minimum = false;
            if (!minimum) continue;
            cplx z(st.re_min + i * step, -st.im_max + j * step);
            for (int k = 0; k < 50; ++k) z -= chi(cf, z) / dchi(cf, z);
            if (std::abs(chi(cf, z)) < 1e-9 && z.real() > st.re_min && z.real() < st.re_max &&
                std::abs(z.imag()) < st.im_max)
                out.push_back(z);
        }
    }
    return out;
}

bool listed(const RootSet& rs, cplx z, double tol) {
    for (const auto& r : rs.real_roots)
        if (std::abs(z - cplx(r.value, 0)) < tol) return true;
    for (const auto& r : rs.complex_roots)
        if (std::abs(z - r.z) < tol) return true;
    return false;
}

}  // namespace

TEST_CASE("real roots of the delay-free characteristic function") {
    LinearizationData kpp{1, 0, 0, -1};
    auto rs = real_roots(CharFunction::make(Side::AtZero, 3, 0, kpp));
    REQUIRE(rs.size() == 2);
    CHECK(rs[0].value == doctest::Approx((3 - std::sqrt(5.0)) / 2).epsilon(1e-14));
    CHECK(rs[1].value == doctest::Approx((3 + std::sqrt(5.0)) / 2).epsilon(1e-14));
    CHECK(lambda_zero(3, 0, kpp).value() == doctest::Approx(rs[0].value));
    CHECK_FALSE(lambda_zero(1, 0, kpp).has_value());
}

TEST_CASE("strip roots agree with the dense-grid minimum-modulus oracle") {
    LinearizationData nich{-1, 6, -1, 1 - std::log(6.0)};
    struct Case {
        Side side;
        double c, h;
    };
    for (auto [side, c, h] : {Case{Side::AtZero, 1.0, 1.0}, Case{Side::AtZero, 2.5, 0.4},
                              Case{Side::AtKappa, 1.2, 0.8}, Case{Side::AtKappa, 0.5, 2.0}}) {
        CAPTURE(c);
        CAPTURE(h);
        auto cf = CharFunction::make(side, c, h, nich);
        Strip st{-4.0, 4.0, 25.0};
        auto rs = complex_roots_in_strip(cf, st);
        CHECK(rs.winding_count == rs.total_count());
        for (const auto& r : rs.complex_roots) CHECK(std::abs(chi(cf, r.z)) < 1e-8);
        auto oracle = grid_roots(cf, st, 0.05);
        for (auto z : oracle) {
            CAPTURE(z);
            CHECK(listed(rs, z, 1e-6));
        }
        int simple = 0;
        for (const auto& r : rs.real_roots) simple += r.multiplicity;
        CHECK(static_cast<int>(oracle.size()) >= simple - 1);
    }
}

TEST_CASE("root laws hold at a random-looking sample") {
    LinearizationData nich{-1, 6, -1, 1 - std::log(6.0)};
    for (double c : {1.4, 2.0, 3.5}) {
        for (double h : {0.3, 0.6}) {
            auto cf = CharFunction::make(Side::AtZero, c, h, nich);
            auto rs = complex_roots_in_strip(cf, default_strip(cf));
            auto laws = verify_root_laws(cf, rs);
            CHECK(laws.ordering != Flag::Fail);
            CHECK(laws.imag_bound != Flag::Fail);
        }
    }
}

TEST_CASE("winding count of an empty rectangle") {
    LinearizationData kpp{1, 0, 0, -1};
    auto cf = CharFunction::make(Side::AtZero, 3, 0, kpp);
    CHECK(winding_count(cf, -1.0, 0.2, -1.0, 1.0) == 0);
    CHECK(winding_count(cf, 0.0, 1.0, -1.0, 1.0) == 1);
    CHECK(winding_count(cf, 0.0, 3.0, -1.0, 1.0) == 2);
}
