#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wfa/expr.hpp"

namespace wfa {

enum class ModelClass { KPPClass, MGClass, Custom };
enum class Hypothesis { MGSatisfied, KPPSatisfied, Neither };

const char* to_string(ModelClass c);
const char* to_string(Hypothesis h);

struct LinearizationData {
    double alpha0 = 0, beta0 = 0, alpha_k = 0, beta_k = 0;
};

// Invariant violations of the linearization, empty when all hold.
std::vector<std::string> lin_issues(const LinearizationData& lin);

class ModelSpec {
public:
    std::string name;  // kpp, nicholson, mackey-glass, custom
    ModelClass cls = ModelClass::Custom;
    double kappa = 1.0;
    Bindings params;
    Expr f_expr, f1_expr, f2_expr;
    Expr g_expr;          // in the variable v, MG form only
    double delta = 0.0;   // MG form only

    double f(double u, double v) const { return f_(u, v); }
    double f1(double u, double v) const { return f1_(u, v); }
    double f2(double u, double v) const { return f2_(u, v); }
    double g(double x) const { return g_(0.0, x); }
    double dg(double x) const { return dg_(0.0, x); }
    bool has_g() const { return static_cast<bool>(g_expr); }

    // compiles evaluators and checks the construction invariants
    void finalize();

private:
    Compiled f_, f1_, f2_, g_, dg_;
};

struct CustomModel {
    std::string f;                       // f(u,v); empty if g is given
    std::string g;                       // g in v or x, MG form -delta*u + g(v)
    std::optional<double> delta;
    Bindings params;
    std::optional<double> kappa;
    std::optional<std::pair<double, double>> kappa_bracket;
};

ModelSpec kpp_fisher();
ModelSpec nicholson(double p, double delta);
ModelSpec mackey_glass(double p, double delta, double n = 8.0, const std::string& g = "");
ModelSpec custom_model(const CustomModel& spec);

LinearizationData linearization(const ModelSpec& m);
bool check_subtangency(const ModelSpec& m, int n_grid = 256);
Hypothesis check_hypotheses(const ModelSpec& m);

}  // namespace wfa
