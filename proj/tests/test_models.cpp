#include <doctest.h>

#include <cmath>

#include "wfa/models.hpp"

using namespace wfa;

TEST_CASE("built-in linearizations") {
    auto k = linearization(kpp_fisher());
    CHECK(k.alpha0 == 1);
    CHECK(k.beta0 == 0);
    CHECK(k.alpha_k == 0);
    CHECK(k.beta_k == -1);

    auto m = nicholson(6, 1);
    CHECK(m.kappa == doctest::Approx(std::log(6.0)).epsilon(1e-15));
    auto n = linearization(m);
    CHECK(n.alpha0 == -1);
    CHECK(n.beta0 == doctest::Approx(6));
    CHECK(n.beta_k == doctest::Approx(1 - std::log(6.0)).epsilon(1e-14));
    CHECK(m.f(m.kappa, m.kappa) == doctest::Approx(0).epsilon(1e-14));

    auto g = mackey_glass(2, 1, 8);
    CHECK(g.kappa == doctest::Approx(1.0));
    CHECK(linearization(g).beta_k == doctest::Approx(1 - 8.0 * 0.5).epsilon(1e-13));
}

TEST_CASE("custom models") {
    CustomModel cm;
    cm.f = "r*u*(1 - v/K)";
    cm.params = {{"r", 2.0}, {"K", 3.0}};
    cm.kappa_bracket = std::pair{1.0, 5.0};
    auto m = custom_model(cm);
    CHECK(m.kappa == doctest::Approx(3.0).epsilon(1e-11));
    auto lin = linearization(m);
    CHECK(lin.alpha0 == doctest::Approx(2));
    CHECK(lin.beta_k == doctest::Approx(-2).epsilon(1e-9));

    CustomModel g;
    g.g = "p*v*exp(-v)";
    g.delta = 1.0;
    g.params = {{"p", 6.0}};
    g.kappa = std::log(6.0);
    auto mg = custom_model(g);
    CHECK(mg.has_g());
    CHECK(linearization(mg).beta0 == doctest::Approx(6));
}

TEST_CASE("model preconditions") {
    CHECK_THROWS_AS(nicholson(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(nicholson(6, 0), std::invalid_argument);
    CustomModel bad;
    bad.f = "u*(1 - v)";
    CHECK_THROWS_AS(custom_model(bad), std::invalid_argument);  // no kappa
    bad.kappa = 2.0;
    CHECK_THROWS_AS(custom_model(bad), std::invalid_argument);  // f(2,2) != 0
    CustomModel neg;
    neg.f = "-u*(1 - v)";
    neg.kappa = 1.0;
    CHECK_THROWS_AS(custom_model(neg), std::invalid_argument);  // not monostable
    CustomModel gx;
    gx.g = "u*v";
    gx.delta = 1.0;
    gx.kappa = 1.0;
    CHECK_THROWS_AS(custom_model(gx), std::invalid_argument);
}

TEST_CASE("hypotheses and sub-tangency") {
    CHECK(check_hypotheses(kpp_fisher()) == Hypothesis::KPPSatisfied);
    CHECK(check_hypotheses(nicholson(4, 1)) == Hypothesis::MGSatisfied);
    CHECK(check_subtangency(kpp_fisher()));
    CHECK(check_subtangency(nicholson(4, 1)));
    CHECK(check_subtangency(nicholson(std::exp(2.0), 1)));
    CHECK_FALSE(check_subtangency(nicholson(10, 1)));
}
