#include "wfa/models.hpp"

#include <cmath>
#include <stdexcept>

namespace wfa {

namespace {
constexpr double kSlack = 1e-12;
}

const char* to_string(ModelClass c) {
    switch (c) {
    case ModelClass::KPPClass: return "KPPClass";
    case ModelClass::MGClass: return "MGClass";
    default: return "Custom";
    }
}

const char* to_string(Hypothesis h) {
    switch (h) {
    case Hypothesis::MGSatisfied: return "MG-satisfied";
    case Hypothesis::KPPSatisfied: return "KPP-satisfied";
    default: return "neither";
    }
}

std::vector<std::string> lin_issues(const LinearizationData& l) {
    std::vector<std::string> out;
    if (!(l.alpha0 + l.beta0 > 0)) out.emplace_back("alpha0 + beta0 > 0");
    if (!(l.alpha_k + l.beta_k < 0)) out.emplace_back("alpha_kappa + beta_kappa < 0");
    if (!(l.beta0 >= 0)) out.emplace_back("beta0 >= 0");
    if (!(l.beta_k < 0)) out.emplace_back("beta_kappa < 0");
    return out;
}

void ModelSpec::finalize() {
    f1_expr = diff(f_expr, "u");
    f2_expr = diff(f_expr, "v");
    f_ = Compiled(f_expr, params);
    f1_ = Compiled(f1_expr, params);
    f2_ = Compiled(f2_expr, params);
    if (g_expr) {
        g_ = Compiled(g_expr, params);
        dg_ = Compiled(diff(g_expr, "v"), params);
    }

    if (!(kappa > 0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be positive");
    if (std::abs(f(0, 0)) > 1e-10) throw std::invalid_argument("f(0,0) = 0 violated");
    if (std::abs(f(kappa, kappa)) > 1e-10) throw std::invalid_argument("f(kappa,kappa) = 0 violated");
    if (!(f1(0, 0) + f2(0, 0) > 0)) throw std::invalid_argument("monostability g'(0) > 0 violated");
    if (!(f1(kappa, kappa) + f2(kappa, kappa) < 0))
        throw std::invalid_argument("monostability g'(kappa) < 0 violated");
    for (int i = 1; i <= 1000; ++i) {
        double x = kappa * i / 1001.0;
        if (!(f(x, x) > 0))
            throw std::invalid_argument("monostability f(x,x) > 0 on (0,kappa) violated at x = " +
                                        std::to_string(x));
    }
}

ModelSpec kpp_fisher() {
    ModelSpec m;
    m.name = "kpp";
    m.cls = ModelClass::KPPClass;
    m.kappa = 1.0;
    m.f_expr = parse("u*(1-v)");
    m.finalize();
    return m;
}

ModelSpec nicholson(double p, double delta) {
    if (!(delta > 0)) throw std::invalid_argument("nicholson requires delta > 0");
    if (!(p / delta > 1)) throw std::invalid_argument("nicholson requires p/delta > 1");
    ModelSpec m;
    m.name = "nicholson";
    m.cls = ModelClass::MGClass;
    m.params = {{"p", p}, {"delta", delta}};
    m.delta = delta;
    m.g_expr = parse("p*v*exp(-v)");
    m.f_expr = parse("-delta*u + p*v*exp(-v)");
    m.kappa = std::log(p / delta);
    m.finalize();
    return m;
}

ModelSpec mackey_glass(double p, double delta, double n, const std::string& g) {
    if (!(delta > 0)) throw std::invalid_argument("mackey-glass requires delta > 0");
    if (g.empty()) {
        if (!(p / delta > 1)) throw std::invalid_argument("mackey-glass requires p/delta > 1");
        if (!(n > 0)) throw std::invalid_argument("mackey-glass requires n > 0");
    }
    CustomModel cm;
    cm.g = g.empty() ? "p*v/(1+v^n)" : g;
    cm.delta = delta;
    cm.params = {{"p", p}, {"n", n}};
    if (g.empty()) cm.kappa = std::pow(p / delta - 1, 1.0 / n);
    ModelSpec m = custom_model(cm);
    m.name = "mackey-glass";
    return m;
}

ModelSpec custom_model(const CustomModel& spec) {
    ModelSpec m;
    m.name = "custom";
    m.params = spec.params;
    if (!spec.g.empty()) {
        if (!spec.delta || !(*spec.delta > 0)) throw std::invalid_argument("g-form model requires delta > 0");
        m.cls = ModelClass::MGClass;
        m.delta = *spec.delta;
        m.params["delta"] = m.delta;
        m.g_expr = substitute(parse(spec.g), "x", var("v"));
        for (const auto& n : free_names(m.g_expr))
            if (n == "u") throw std::invalid_argument("g must not depend on u");
        m.f_expr = add(neg(mul(var("delta"), var("u"))), m.g_expr);
    } else {
        if (spec.f.empty()) throw std::invalid_argument("custom model needs f or g");
        m.cls = ModelClass::Custom;
        m.f_expr = parse(spec.f);
        for (const auto& n : free_names(m.f_expr))
            if (n == "x") throw std::invalid_argument("f uses variables u and v only");
    }
    if (spec.kappa) {
        m.kappa = *spec.kappa;
    } else if (spec.kappa_bracket) {
        Compiled fc(m.f_expr, m.params);
        double a = spec.kappa_bracket->first, b = spec.kappa_bracket->second;
        double fa = fc(a, a), fb = fc(b, b);
        if (!(fa > 0 && fb < 0)) throw std::invalid_argument("kappa bracket needs f(a,a) > 0 > f(b,b)");
        while (b - a > 1e-12) {
            double mid = 0.5 * (a + b);
            (fc(mid, mid) > 0 ? a : b) = mid;
        }
        m.kappa = 0.5 * (a + b);
    } else {
        throw std::invalid_argument("custom model needs kappa or a kappa bracket");
    }
    m.finalize();
    return m;
}

LinearizationData linearization(const ModelSpec& m) {
    return {m.f1(0, 0), m.f2(0, 0), m.f1(m.kappa, m.kappa), m.f2(m.kappa, m.kappa)};
}

bool check_subtangency(const ModelSpec& m, int n_grid) {
    if (n_grid < 64) throw std::invalid_argument("check_subtangency needs n_grid >= 64");
    auto l = linearization(m);
    double k = m.kappa;
    for (int i = 0; i < n_grid; ++i) {
        double x = k * i / (n_grid - 1);
        for (int j = 0; j < n_grid; ++j) {
            double y = k * j / (n_grid - 1);
            double fv = m.f(x, y);
            if (fv > l.alpha0 * x + l.beta0 * y + kSlack) return false;
            if (fv > l.alpha_k * (x - k) + l.beta_k * (y - k) + kSlack) return false;
        }
    }
    return true;
}

Hypothesis check_hypotheses(const ModelSpec& m) {
    auto l = linearization(m);
    double k = m.kappa;
    if (m.has_g() && m.delta > 0 && l.alpha0 < 0 && l.beta0 > 0 && l.alpha_k < 0 && l.beta_k < 0 &&
        l.alpha0 + l.beta0 > 0) {
        // one critical point of g on (0,kappa)
        int changes = 0;
        double prev = m.dg(k * 1e-4);
        for (int i = 2; i < 10000; ++i) {
            double d = m.dg(k * i * 1e-4);
            if (d == 0.0) continue;
            if ((d > 0) != (prev > 0)) ++changes;
            prev = d;
        }
        if (changes == 1) return Hypothesis::MGSatisfied;
    }
    if (std::abs(l.beta0) <= kSlack && std::abs(l.alpha_k) <= kSlack && l.beta_k < 0 && l.alpha0 > 0) {
        const int n = 101;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double x = k * i / (n - 1), y = k * j / (n - 1);
                double a = m.f1(x, y), b = m.f2(x, y);
                if (a < -kSlack || a > l.alpha0 + kSlack || b > kSlack) return Hypothesis::Neither;
            }
        }
        return Hypothesis::KPPSatisfied;
    }
    return Hypothesis::Neither;
}

}  // namespace wfa
