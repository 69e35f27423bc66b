#include <doctest.h>

#include <cmath>

#include "wfa/expr.hpp"

using namespace wfa;

TEST_CASE("parse and print round trip") {
    for (const char* s : {"u*(1 - v)", "-delta*u + p*v*exp(-v)", "p*v/(1 + v^n)", "sin(x)^2 + cos(x)^2"}) {
        auto e = parse(s);
        CHECK(print(e) == s);
        CHECK(equal(parse(print(e)), e));
    }
    CHECK(print(parse("2^3^2")) == print(parse("2^(3^2)")));
    CHECK(eval(parse("2^3^2"), {}) == doctest::Approx(512));
    CHECK(eval(parse("-2^2"), {}) == doctest::Approx(-4));
}

TEST_CASE("evaluation and bindings") {
    auto e = parse("-delta*u + p*v*exp(-v)");
    Bindings b{{"u", 0.5}, {"v", 1.5}, {"delta", 1.0}, {"p", 6.0}};
    CHECK(eval(e, b) == doctest::Approx(-0.5 + 9 * std::exp(-1.5)).epsilon(1e-15));
    auto names = free_names(e);
    CHECK(names == std::set<std::string>{"delta", "p", "u", "v"});
    Compiled c(e, {{"delta", 1.0}, {"p", 6.0}});
    CHECK(c(0.5, 1.5) == eval(e, b));
}

TEST_CASE("parse errors carry offsets") {
    struct Case {
        const char* text;
        std::size_t offset;
    };
    for (auto [text, off] : {Case{"u*(1-", 5}, Case{"2+*3", 2}, Case{"u v", 2}, Case{"foo(u)", 0}, Case{"", 0},
                             Case{"(u+v", 4}}) {
        CAPTURE(text);
        try {
            parse(text);
            FAIL("no ParseError");
        } catch (const ParseError& e) {
            CHECK(e.offset() == off);
        }
    }
}

TEST_CASE("evaluation errors name the subexpression") {
    CHECK_THROWS_AS(eval(parse("ln(u)"), {{"u", -1.0}}), EvalError);
    CHECK_THROWS_AS(eval(parse("1/(u - 1)"), {{"u", 1.0}}), EvalError);
    CHECK_THROWS_AS(eval(parse("u + q"), {{"u", 1.0}}), EvalError);
    try {
        eval(parse("2 + ln(u - 3)"), {{"u", 1.0}});
    } catch (const EvalError& e) {
        CHECK(e.subexpr() == "ln(u - 3)");
    }
}

// oracle: fourth-order central differences
TEST_CASE("symbolic derivative matches finite differences") {
    const char* exprs[] = {"u*(1 - v)", "-delta*u + p*v*exp(-v)", "p*v/(1 + v^n)", "sin(u*v) + cos(v)^3",
                           "ln(1 + u^2)*exp(-v/2)", "u^v", "(u - v)/(2 + u*v)"};
    Bindings pars{{"delta", 1.3}, {"p", 6.0}, {"n", 8.0}};
    for (const char* s : exprs) {
        auto e = parse(s);
        for (const char* var : {"u", "v"}) {
            auto d = diff(e, var);
            for (double u : {0.3, 0.9, 1.7}) {
                for (double v : {0.4, 1.1, 2.2}) {
                    Bindings b = pars;
                    b["u"] = u;
                    b["v"] = v;
                    const double hstep = 1e-3;
                    auto at = [&](double dx) {
                        Bindings c = b;
                        c[var] += dx;
                        return eval(e, c);
                    };
                    double fd = (-at(2 * hstep) + 8 * at(hstep) - 8 * at(-hstep) + at(-2 * hstep)) / (12 * hstep);
                    CAPTURE(s);
                    CAPTURE(var);
                    CHECK(eval(d, b) == doctest::Approx(fd).epsilon(1e-8));
                }
            }
        }
    }
}

TEST_CASE("substitute and simplify") {
    auto e = substitute(parse("u*(1 - v)"), "v", parse("u"));
    CHECK(eval(e, {{"u", 0.25}}) == doctest::Approx(0.1875));
    CHECK(print(diff(parse("3*u"), "v")) == "0");
}
