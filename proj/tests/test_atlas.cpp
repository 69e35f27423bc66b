#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wfa/atlas.hpp"

using namespace wfa;

TEST_CASE("classification of points") {
    auto lin = linearization(nicholson(6, 1));
    CHECK(classify_point(0.2, 3.0, lin).region == Region::InDomain);
    CHECK(classify_point(0.2, 1.0, lin).region == Region::BelowLower);
    CHECK(classify_point(1.0, 1.5, lin).region == Region::AboveUpper);
    CHECK(classify_point(1.0, 1.2, lin).region == Region::BelowLower);
    auto c0 = critical_speed_zero(0.2, lin).c_star.value;
    CHECK(classify_point(0.2, c0, lin).region == Region::OnBoundary);
    CHECK_THROWS_AS(classify_point(-1, 1, lin), std::invalid_argument);
}

TEST_CASE("KPP upper boundary") {
    CHECK(kpp_upper_boundary(0.3, -1).is_inf());
    CHECK(kpp_upper_boundary(1 / std::numbers::e - 1e-9, -1).is_inf());
    double prev = INFINITY;
    for (double h = 0.4; h <= 2.0; h += 0.1) {
        auto s = kpp_upper_boundary(h, -1);
        REQUIRE_FALSE(s.is_inf());
        CHECK(s.value < prev);
        prev = s.value;
        CHECK(s.value == doctest::Approx(critical_speed_kappa(h, {1, 0, 0, -1}).c_star.value).epsilon(1e-9));
    }
    // c ~ (h - 1/e)^(-1/2) near the asymptote
    for (double d : {1e-4, 1e-6, 1e-8}) {
        auto s = kpp_upper_boundary(1 / std::numbers::e + d, -1);
        CHECK(s.value * std::sqrt(d) == doctest::Approx(1).epsilon(1e-3));
    }
}

TEST_CASE("Nicholson explicit boundaries against the generic solver") {
    for (double h : {0.5, 1.0, 2.0, 5.0}) {
        auto b = nicholson_boundaries(h, 6, 1);
        CHECK(b.mismatch < 1e-10);
    }
    CHECK(nicholson_h_a(1 - std::log(6.0), 1) == doctest::Approx(0.333027585839018).epsilon(1e-12));
    CHECK(nicholson_kappa_explicit(0.3, 6, 1, 1 - std::log(6.0)).is_inf());
}

TEST_CASE("Nicholson constants") {
    auto nu = nicholson_nu0();
    CHECK(nu.nu0 == doctest::Approx(2.8084382193510793).epsilon(1e-13));
    CHECK(nu.t0 == doctest::Approx(2.95378297127132).epsilon(1e-12));
    CHECK(std::abs(nu.nu0 - nu.nu0_theta) < 1e-12);

    auto m10 = beta_kappa_minus(nicholson(10, 1));
    CHECK_FALSE(m10.equals_beta_k);
    CHECK(m10.beta_minus == doctest::Approx(-1.33969).epsilon(1e-5));
    CHECK(beta_kappa_minus(nicholson(5, 1)).equals_beta_k);

    auto k = nicholson_constants(6, 1);
    REQUIRE(k.h0.has_value());
    CHECK(k.h0->h0 == doctest::Approx(0.63178308508163494).epsilon(1e-10));
}

TEST_CASE("atlas trace") {
    auto a = trace_atlas(kpp_fisher(), 2.0, 41, 2);
    CHECK(a.subtangent);
    CHECK(a.label == "cl(D_N) = D_L");
    REQUIRE(a.h_fin.has_value());
    CHECK(*a.h_fin == doctest::Approx(1 / std::numbers::e));
    bool vertical = false, horizontal = false;
    for (const auto& s : a.asymptotes) {
        if (s.kind == "vertical") vertical = std::abs(s.value - 1 / std::numbers::e) < 1e-12;
        if (s.kind == "horizontal") horizontal = std::abs(s.value - 2) < 1e-12;
    }
    CHECK(vertical);
    CHECK(horizontal);
    CHECK(a.lower.monotone);
    CHECK(a.upper.monotone);

    auto b = trace_atlas(nicholson(10, 1), 2.0, 21, 2);
    CHECK_FALSE(b.subtangent);
    CHECK(b.label == "D_L (necessary region only)");
}
