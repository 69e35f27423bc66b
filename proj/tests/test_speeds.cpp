#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wfa/speeds.hpp"

using namespace wfa;

namespace {
const LinearizationData kKpp{1, 0, 0, -1};
LinearizationData nich(double p) {
    return {-1, p, -1, 1 - std::log(p)};
}
}  // namespace

TEST_CASE("closed-form speeds at h = 0") {
    CHECK(critical_speed_zero(0, kKpp).c_star.value == doctest::Approx(2).epsilon(1e-15));
    CHECK(critical_speed_zero(0, nich(6)).c_star.value == doctest::Approx(2 * std::sqrt(5.0)).epsilon(1e-14));
    CHECK(critical_speed_kappa(0, nich(6)).c_star.is_inf());
    CHECK(critical_speed_zero(1.7, kKpp).c_star.value == doctest::Approx(2).epsilon(1e-15));
}

TEST_CASE("double-root certificates") {
    for (double h : {0.1, 0.5, 1.0, 3.0}) {
        auto r = critical_speed_zero(h, nich(6));
        REQUIRE(r.double_root.has_value());
        CHECK(r.chi_residual < 1e-10);
        CHECK(r.dchi_residual < 1e-10);
        auto cf = CharFunction::make(Side::AtZero, r.c_star.value, h, nich(6));
        // just below c* there is no positive real root
        auto below = CharFunction::make(Side::AtZero, r.c_star.value * (1 - 1e-6), h, nich(6));
        CHECK(real_roots(below).empty());
        CHECK(real_roots(cf).size() >= 1);
    }
}

TEST_CASE("frozen reference values") {
    auto c0 = critical_speed_zero(1, nich(6)).c_star.value;
    auto ck = critical_speed_kappa(1, nich(6)).c_star.value;
    CHECK(c0 == doctest::Approx(1.3385661990458504).epsilon(1e-12));
    CHECK(ck == doctest::Approx(0.90811997102564468).epsilon(1e-12));
    CHECK(h_fin(kKpp) == doctest::Approx(1 / std::numbers::e).epsilon(1e-14));
    CHECK(kappa_speed_infinite(0.3, kKpp));
    CHECK_FALSE(kappa_speed_infinite(0.4, kKpp));
    auto a = asymptotic_constants(nich(6));
    CHECK(a.omega_k == doctest::Approx(-2.2628430411179545).epsilon(1e-12));
    CHECK(omega_const(-1, 2, RootSign::Positive) == doctest::Approx(1.1461932206205825).epsilon(1e-13));
    CHECK(omega_const(-1, -1, RootSign::Negative) == doctest::Approx(-2.21771510575709).epsilon(1e-12));
}

TEST_CASE("intersection of the two boundaries") {
    auto x = h_star_intersection(nich(5));
    REQUIRE(x.has_value());
    CHECK(x->h0 == doctest::Approx(0.8189003163691628).epsilon(1e-12));
    CHECK(x->transversal);
    auto n = h_star_newton(nich(5), x->h0 * 1.1);
    CHECK(n.h0 == doctest::Approx(x->h0).epsilon(1e-12));
    CHECK_FALSE(h_star_intersection(nich(2.75)).has_value());
}

TEST_CASE("speed curves are non-increasing and thread independent") {
    auto a = speed_curve(nich(6), Side::AtZero, 0, 4, 41, 1);
    auto b = speed_curve(nich(6), Side::AtZero, 0, 4, 41, 4);
    CHECK(a.monotone);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i].c_star.value == b.samples[i].c_star.value);
    auto k = speed_curve(kKpp, Side::AtKappa, 0.4, 3, 30, 2);
    CHECK(k.monotone);
}

TEST_CASE("precondition errors") {
    CHECK_THROWS_AS(critical_speed_zero(-1, kKpp), std::invalid_argument);
    CHECK_THROWS_AS(omega_const(1, 1, RootSign::Positive), std::invalid_argument);
}
