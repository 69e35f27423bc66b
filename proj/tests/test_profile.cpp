#include <doctest.h>

#include <cmath>
#include <vector>

#include "wfa/numeric.hpp"
#include "wfa/profile.hpp"

using namespace wfa;

namespace {

WaveProfile fixture(double lm, double lp, int n = 2401, double L = 60) {
    std::vector<double> t(n), phi(n);
    for (int i = 0; i < n; ++i) {
        t[i] = -L + 2 * L * i / (n - 1);
        phi[i] = t[i] <= 0 ? 0.5 * std::exp(lm * t[i]) : 1 - 0.5 * std::exp(-lp * t[i]);
    }
    return make_profile(t, phi, 2.0, 0.0, 1.0, lm, -lp);
}

}  // namespace

TEST_CASE("exponent fit on synthetic tails") {
    auto w = fixture(0.7, 0.3);
    auto e = estimate_exponents(w);
    CHECK(e.lambda_minus == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(e.lambda_plus == doctest::Approx(-0.3).epsilon(1e-9));
    CHECK(e.r2_minus > 0.999999);
    CHECK(e.nodes_minus >= 20);
    REQUIRE(e.ratio_minus.has_value());
    CHECK(*e.ratio_minus == doctest::Approx(1).epsilon(1e-9));

    auto short_tail = fixture(0.7, 0.3, 41, 1);
    CHECK_THROWS_AS(estimate_exponents(short_tail), NumericError);
}

TEST_CASE("residual of fixtures") {
    auto kpp = kpp_fisher();
    std::vector<double> t(101), phi(101, 0.5);
    for (int i = 0; i < 101; ++i) t[i] = -5 + 0.1 * i;
    auto flat = make_profile(t, phi, 2.0, 0.0, 1.0);
    CHECK(residual(flat, kpp) == doctest::Approx(0.25).epsilon(1e-12));

    auto w = solve_profile(kpp, 0.2, 2.5);
    REQUIRE(w.converged);
    CHECK(w.residual < 1e-6);
    CHECK(residual(w, kpp) == doctest::Approx(w.residual).epsilon(1e-6));
    // a corrupted node shows up where it was placed
    auto bad = w;
    std::size_t k = w.size() / 3;
    bad.phi[k] += 1e-3;
    bad.psi[k] -= 1e-3;
    auto r = residual_nodes(bad, kpp);
    std::size_t arg = 1;
    for (std::size_t i = 1; i + 1 < r.size(); ++i)
        if (std::abs(r[i]) > std::abs(r[arg])) arg = i;
    CHECK(arg == k);
    // spike of 1e-3 gives about 2e-3/dt^2
    CHECK(residual(bad, kpp) > 0.1);
}

TEST_CASE("monotonicity check finds a dip") {
    auto w = fixture(0.7, 0.3);
    CHECK(check_monotone(w).monotone);
    CHECK(strictly_between(w));
    std::vector<double> phi = w.phi;
    for (std::size_t i = 1300; i < 1310; ++i) phi[i] -= 0.01 * (i - 1299);
    auto d = make_profile(w.t, phi, 2.0, 0.0, 1.0, 0.7, -0.3);
    auto mc = check_monotone(d);
    CHECK_FALSE(mc.monotone);
    REQUIRE(mc.t.has_value());
    CHECK(*mc.t == doctest::Approx(d.t[1300]).epsilon(1e-2));
}

TEST_CASE("sign changes and V-") {
    CHECK(sign_changes({1, -1, 1}) == 2);
    CHECK(sign_changes({1, 0, 0, 2}) == 0);
    CHECK(sign_changes({-1, 0, 1}) == 1);
    CHECK(sign_changes({}) == 0);
    CHECK(lyapunov_vminus({1, 1, 1}, -1) == 1);
    CHECK(lyapunov_vminus({1, 1, 1}, 1) == 1);
    CHECK(lyapunov_vminus({1, -1, 1}, -1) == 3);
    CHECK(lyapunov_vminus({1, -1, 1}, 1) == 3);
    CHECK_THROWS_AS(lyapunov_vminus({}, 1), std::invalid_argument);
}

TEST_CASE("KPP profiles") {
    auto kpp = kpp_fisher();
    for (double h : {0.0, 0.2}) {
        auto w = solve_profile(kpp, h, 2.5);
        CHECK(w.converged);
        CHECK(check_monotone(w).monotone);
        CHECK(strictly_between(w));
        CHECK(w.phi_at(0) == doctest::Approx(0.5).epsilon(1e-6));
        auto e = estimate_exponents(w);
        CHECK(e.lambda_minus == doctest::Approx(w.lambda).epsilon(5e-3));
        CHECK(e.lambda_plus == doctest::Approx(w.lambda2).epsilon(5e-3));
        CHECK(operator_change(w, kpp) < 1e-7);
    }
}

TEST_CASE("seeds and quadratures agree") {
    auto kpp = kpp_fisher();
    ProfileOptions o;
    o.L = 80;
    auto a = solve_profile(kpp, 0.2, 3.0, o);
    o.seed = Seed::Ramp;
    auto b = solve_profile(kpp, 0.2, 3.0, o);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    double mx = 0;
    for (std::size_t i = 0; i < a.size(); ++i) mx = std::max(mx, std::abs(a.phi[i] - b.phi[i]));
    CHECK(mx < 1e-6);
    o.quadrature = Quadrature::Trapezoid;
    auto c = solve_profile(kpp, 0.2, 3.0, o);
    REQUIRE(c.converged);
    CHECK(std::abs(c.phi_at(5) - a.phi_at(5)) < 1e-4);
}

TEST_CASE("verdicts") {
    auto m = nicholson(5, 1);
    auto v = oscillation_verdict(m, 1.3189, 3.0);
    CHECK(v.verdict == Verdict::EventuallyMonotoneExcluded);
    auto kpp = oscillation_verdict(kpp_fisher(), 0.2, 2.5);
    CHECK(kpp.verdict == Verdict::Monotone);
    REQUIRE(kpp.diagnostic.has_value());
    CHECK(kpp.diagnostic->all_odd);
}

TEST_CASE("solver preconditions") {
    auto kpp = kpp_fisher();
    CHECK_THROWS_AS(solve_profile(kpp, 0.2, 1.0), std::invalid_argument);
    ProfileOptions o;
    o.damping = 0;
    CHECK_THROWS_AS(solve_profile(kpp, 0.2, 2.5, o), std::invalid_argument);
    o = {};
    o.max_iter = 3;
    CHECK_FALSE(solve_profile(kpp, 0.2, 2.5, o).converged);
}
