// wfa: wavefront atlas command line.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wfa/atlas.hpp"
#include "wfa/io.hpp"
#include "wfa/kernels.hpp"
#include "wfa/numeric.hpp"
#include "wfa/parallel.hpp"
#include "wfa/profile.hpp"
#include "wfa/verify.hpp"

using namespace wfa;

namespace {

struct ModelOpts {
    std::string model = "kpp";
    std::optional<double> p, delta, mg_n;
    std::string f, g;
    std::optional<double> kappa;
    std::string kappa_bracket;
    std::vector<std::string> params;
};

struct Global {
    bool json = false;
    std::string csv;
    int threads = 0;
    std::optional<std::uint64_t> seed;  // reserved, every algorithm is deterministic
};

std::pair<double, double> parse_pair(const std::string& s, char sep, const char* what) {
    auto k = s.find(sep);
    if (k == std::string::npos) throw std::invalid_argument(std::string(what) + ": expected a" + sep + "b");
    try {
        return {std::stod(s.substr(0, k)), std::stod(s.substr(k + 1))};
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(what) + ": not a number in '" + s + "'");
    }
}

ModelSpec build_model(const ModelOpts& o) {
    auto reject = [&](bool given, const char* flag) {
        if (given) throw std::invalid_argument(std::string(flag) + " does not apply to --model " + o.model);
    };
    if (o.model != "custom") {
        reject(!o.f.empty(), "--f");
        reject(!o.g.empty(), "--g");
        reject(o.kappa.has_value(), "--kappa");
        reject(!o.kappa_bracket.empty(), "--kappa-bracket");
        reject(!o.params.empty(), "--param");
    }
    if (o.model == "kpp") {
        reject(o.p.has_value(), "--p");
        reject(o.delta.has_value(), "--delta");
        reject(o.mg_n.has_value(), "--mg-n");
        return kpp_fisher();
    }
    if (o.model == "nicholson") {
        reject(o.mg_n.has_value(), "--mg-n");
        return nicholson(o.p.value_or(6.0), o.delta.value_or(1.0));
    }
    if (o.model == "mackey-glass") return mackey_glass(o.p.value_or(2.0), o.delta.value_or(1.0), o.mg_n.value_or(8.0));
    reject(o.p.has_value(), "--p");
    reject(o.mg_n.has_value(), "--mg-n");
    CustomModel cm;
    cm.f = o.f;
    cm.g = o.g;
    cm.delta = o.delta;
    cm.kappa = o.kappa;
    if (!o.kappa_bracket.empty()) cm.kappa_bracket = parse_pair(o.kappa_bracket, ':', "--kappa-bracket");
    for (const auto& kv : o.params) {
        auto k = kv.find('=');
        if (k == std::string::npos || k == 0) throw std::invalid_argument("--param expects name=value, got '" + kv + "'");
        try {
            cm.params[kv.substr(0, k)] = std::stod(kv.substr(k + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("--param: bad value in '" + kv + "'");
        }
    }
    return custom_model(cm);
}

Json model_json(const ModelSpec& m) {
    Json j;
    j["name"] = m.name;
    j["class"] = to_string(m.cls);
    j["kappa"] = m.kappa;
    j["f"] = print(m.f_expr);
    Json p = Json::object();
    for (const auto& [k, v] : m.params) p[k] = v;
    j["params"] = p;
    if (m.has_g()) {
        j["g"] = print(m.g_expr);
        j["delta"] = m.delta;
    }
    auto lin = linearization(m);
    j["linearization"] = {{"alpha0", lin.alpha0}, {"beta0", lin.beta0}, {"alpha_kappa", lin.alpha_k},
                          {"beta_kappa", lin.beta_k}};
    return j;
}

// plain output: one "path = value" line per leaf
void flatten(const Json& j, const std::string& path, std::vector<std::string>& out) {
    if (j.is_object() && j.size() == 1 && j.contains("inf")) {
        out.push_back(path + " = inf");
    } else if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    } else if (j.is_array()) {
        if (j.empty()) out.push_back(path + " = []");
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
    } else if (j.is_string()) {
        out.push_back(path + " = " + j.get<std::string>());
    } else {
        out.push_back(path + " = " + dump_json(j, false));
    }
}

class Runner {
public:
    ModelOpts mo;
    Global g;
    std::string sub;
    Json options = Json::object();

    Json config() const {
        Json c;
        c["subcommand"] = sub;
        c["options"] = options;
        c["threads"] = resolve_threads(g.threads);
        c["kernels"] = kernels::to_string(kernels::active());
        if (g.seed) c["seed"] = *g.seed;
        if (!g.csv.empty()) c["csv"] = g.csv;
        return c;
    }

    Json config(const ModelSpec& m) const {
        Json c = config();
        c["model"] = model_json(m);
        return c;
    }

    void emit(Json doc, const Json& cfg) const {
        doc["config"] = cfg;
        if (g.json) {
            std::cout << dump_json(doc) << '\n';
            return;
        }
        std::cout << "# config " << dump_json(cfg, false) << '\n';
        doc.erase("config");
        std::vector<std::string> lines;
        flatten(doc, "", lines);
        for (const auto& l : lines) std::cout << l << '\n';
    }

    std::ofstream open_csv(const std::string& path) const {
        std::ofstream f(path);
        if (!f) throw std::invalid_argument("cannot write " + path);
        return f;
    }
};

Json root_json(const RealRoot& r) {
    return {{"value", r.value}, {"multiplicity", r.multiplicity}, {"residual", r.residual}};
}

Json critical_json(const CriticalSpeedResult& r) {
    Json j{{"h", r.h}, {"c", speed_json(r.c_star)}, {"side", to_string(r.side)}};
    if (r.double_root) {
        j["double_root"] = *r.double_root;
        j["chi_residual"] = r.chi_residual;
        j["dchi_residual"] = r.dchi_residual;
    } else {
        j["double_root"] = nullptr;
    }
    return j;
}

Json intersection_json(const std::optional<Intersection>& x) {
    if (!x) return nullptr;
    return {{"h0", x->h0}, {"c0", x->c0}, {"slope", x->slope}, {"transversal", x->transversal}};
}

// theta1 is infinite when alpha0 >= 0 or beta0 = 0 (c_zero bounded as h grows)
Json constants_json(const LinearizationData& lin) {
    Json j;
    if (lin.alpha0 >= 0 || lin.beta0 == 0) {
        j["omega0"] = nullptr;
        j["theta1"] = {{"inf", true}};
    } else {
        try {
            double w = omega_const(lin.alpha0, lin.beta0, RootSign::Positive);
            j["omega0"] = w;
            j["theta1"] = theta_const(lin.alpha0, lin.beta0, RootSign::Positive);
        } catch (const std::exception&) {
            j["omega0"] = nullptr;
            j["theta1"] = nullptr;
        }
    }
    try {
        j["omega_kappa"] = omega_const(lin.alpha_k, lin.beta_k, RootSign::Negative);
        j["theta"] = theta_const(lin.alpha_k, lin.beta_k, RootSign::Negative);
    } catch (const std::exception&) {
        j["omega_kappa"] = nullptr;
        j["theta"] = nullptr;
    }
    return j;
}

Json exponents_json(const TailExponents& e) {
    Json j{{"lambda_minus", e.lambda_minus}, {"lambda_plus", e.lambda_plus}, {"r2_minus", e.r2_minus},
           {"r2_plus", e.r2_plus}, {"nodes_minus", e.nodes_minus}, {"nodes_plus", e.nodes_plus},
           {"window_minus", {e.window_minus[0], e.window_minus[1]}},
           {"window_plus", {e.window_plus[0], e.window_plus[1]}}};
    j["ratio_minus"] = e.ratio_minus ? Json(*e.ratio_minus) : Json(nullptr);
    j["ratio_plus"] = e.ratio_plus ? Json(*e.ratio_plus) : Json(nullptr);
    return j;
}

Json profile_summary(const WaveProfile& w) {
    Json j{{"c", w.c}, {"h", w.h}, {"L", w.L}, {"n", w.size()}, {"dt", w.dt}, {"kappa", w.kappa},
           {"converged", w.converged}, {"anchored", w.anchored}, {"diverged", w.diverged},
           {"iterations", w.iterations}, {"rounds", w.rounds}, {"last_change", w.last_change},
           {"residual", w.residual}, {"lambda", w.lambda}, {"lambda2", w.lambda2},
           {"lambda_fallback", w.lambda_fallback}, {"phi_at_0", w.phi_at(0.0)},
           {"phi_left_end", w.phi.front()}, {"phi_right_end", w.phi.back()},
           {"quadrature", to_string(w.quadrature)}, {"region", to_string(w.region)}};
    auto mc = check_monotone(w);
    j["monotone"] = mc.monotone;
    j["min_dphi"] = mc.min_dphi;
    j["first_violation_t"] = mc.t ? Json(*mc.t) : Json(nullptr);
    j["strictly_between"] = strictly_between(w);
    try {
        j["exponents"] = exponents_json(estimate_exponents(w));
    } catch (const NumericError& e) {
        j["exponents"] = {{"error", e.what()}};
    }
    return j;
}

void write_profile_csv(std::ostream& os, const WaveProfile& w, const std::string& comment) {
    CsvWriter csv(os, {"t", "phi", "dphi"}, comment);
    for (std::size_t i = 0; i < w.size(); ++i) csv.row({csv_cell(w.t[i]), csv_cell(w.phi[i]), csv_cell(w.dphi[i])});
}

struct ProfileFlags {
    double h = 0, c = 0;
    std::optional<double> L;
    int n = 4096;
    double tol = 1e-8;
    int max_iter = 20000;
    double damping = 0.5;
    bool force = false;
    std::string seed_shape = "tanh";
    std::string quadrature = "green";
    std::string out;

    void add(CLI::App* s, bool with_out) {
        s->add_option("--h", h, "delay")->required()->check(CLI::NonNegativeNumber);
        s->add_option("--c", c, "wave speed")->required()->check(CLI::PositiveNumber);
        s->add_option("--L", L, "half width of the grid (default from tail rates)");
        s->add_option("--n", n, "grid nodes")->check(CLI::Range(16, 1 << 24));
        s->add_option("--tol", tol, "sup-norm change for convergence")->check(CLI::PositiveNumber);
        s->add_option("--max-iter", max_iter, "total sweeps")->check(CLI::Range(1, 100000000));
        s->add_option("--damping", damping, "blend factor d in (0,1]")->check(CLI::Range(1e-6, 1.0));
        s->add_flag("--force", force, "solve outside the closed domain (diagnostic)");
        s->add_option("--seed-shape", seed_shape, "initial guess")->check(CLI::IsMember({"tanh", "ramp"}));
        s->add_option("--quadrature", quadrature, "fixed-point kernel")->check(CLI::IsMember({"green", "trapezoid"}));
        if (with_out) s->add_option("--out", out, "CSV file with columns t, phi, dphi");
    }

    ProfileOptions options() const {
        ProfileOptions o;
        o.L = L;
        o.n = n;
        o.tol = tol;
        o.max_iter = max_iter;
        o.damping = damping;
        o.force = force;
        o.seed = seed_shape == "ramp" ? Seed::Ramp : Seed::Tanh;
        o.quadrature = quadrature == "trapezoid" ? Quadrature::Trapezoid : Quadrature::Green;
        return o;
    }

    Json json() const {
        Json j{{"h", h}, {"c", c}, {"n", n}, {"tol", tol}, {"max_iter", max_iter}, {"damping", damping},
               {"force", force}, {"seed_shape", seed_shape}, {"quadrature", quadrature}};
        j["L"] = L ? Json(*L) : Json("auto");
        if (!out.empty()) j["out"] = out;
        return j;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Existence domains and profiles of monotone travelling wavefronts for delayed reaction-diffusion models"};
    app.name("wfa");
    // -h would collide with the delay option --h
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);
    app.fallthrough();

    Runner R;
    auto& mo = R.mo;
    app.add_option("--model", mo.model, "kpp | nicholson | mackey-glass | custom")
        ->check(CLI::IsMember({"kpp", "nicholson", "mackey-glass", "custom"}));
    app.add_option("--p", mo.p, "birth rate p (nicholson 6, mackey-glass 2)");
    app.add_option("--delta", mo.delta, "death rate delta (default 1)");
    app.add_option("--mg-n", mo.mg_n, "Mackey-Glass exponent (default 8)");
    app.add_option("--f", mo.f, "custom f(u,v)");
    app.add_option("--g", mo.g, "custom g(v) for f = -delta*u + g(v)");
    app.add_option("--kappa", mo.kappa, "custom positive equilibrium");
    app.add_option("--kappa-bracket", mo.kappa_bracket, "a:b with f(a,a) > 0 > f(b,b)");
    app.add_option("--param", mo.params, "name=value, repeatable");
    app.add_flag("--json", R.g.json, "JSON output");
    app.add_option("--csv", R.g.csv, "write the tabular part to this CSV file");
    app.add_option("--threads", R.g.threads, "worker threads, 0 = all (WFA_THREADS overrides)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", R.g.seed, "reserved; all algorithms are deterministic");

    std::function<int()> action;

    // roots
    auto* roots = app.add_subcommand("roots", "real and complex roots of a characteristic function");
    std::string side = "zero";
    double rc = 0, rh = 0;
    std::optional<double> re_min, re_max, im_max;
    roots->add_option("--side", side, "zero | kappa")->check(CLI::IsMember({"zero", "kappa"}));
    roots->add_option("--c", rc, "wave speed")->required()->check(CLI::PositiveNumber);
    roots->add_option("--h", rh, "delay (default 0)")->check(CLI::NonNegativeNumber);
    roots->add_option("--re-min", re_min);
    roots->add_option("--re-max", re_max);
    roots->add_option("--im-max", im_max);
    roots->callback([&] {
        action = [&] {
            R.sub = "roots";
            auto m = build_model(mo);
            auto lin = linearization(m);
            auto cf = CharFunction::make(side == "zero" ? Side::AtZero : Side::AtKappa, rc, rh, lin);
            Strip st = default_strip(cf);
            if (re_min) st.re_min = *re_min;
            if (re_max) st.re_max = *re_max;
            if (im_max) st.im_max = *im_max;
            R.options = {{"side", side}, {"c", rc}, {"h", rh},
                         {"strip", {{"re_min", st.re_min}, {"re_max", st.re_max}, {"im_max", st.im_max}}}};
            auto rs = complex_roots_in_strip(cf, st);
            auto laws = verify_root_laws(cf, rs);
            Json doc;
            doc["real"] = Json::array();
            doc["real_roots"] = Json::array();
            for (const auto& r : rs.real_roots) {
                doc["real"].push_back(r.value);
                doc["real_roots"].push_back(root_json(r));
            }
            doc["complex"] = Json::array();
            for (const auto& z : rs.complex_roots)
                doc["complex"].push_back({{"re", z.z.real()}, {"im", z.z.imag()}, {"residual", z.residual}});
            doc["winding_count"] = rs.winding_count;
            doc["total_count"] = rs.total_count();
            doc["laws"] = {{"ordering", to_string(laws.ordering)}, {"separation", to_string(laws.separation)},
                           {"imag_bound", to_string(laws.imag_bound)}};
            auto l = side == "zero" ? lambda_zero(rc, rh, lin) : lambda2_kappa(rc, rh, lin);
            doc[side == "zero" ? "lambda" : "lambda2"] = l ? Json(*l) : Json(nullptr);
            auto cfg = R.config(m);
            if (!R.g.csv.empty()) {
                auto f = R.open_csv(R.g.csv);
                CsvWriter csv(f, {"re", "im", "multiplicity", "residual"}, dump_json(cfg, false));
                for (const auto& r : rs.real_roots)
                    csv.row({csv_cell(r.value), "0", std::to_string(r.multiplicity), csv_cell(r.residual)});
                for (const auto& z : rs.complex_roots)
                    csv.row({csv_cell(z.z.real()), csv_cell(z.z.imag()), "1", csv_cell(z.residual)});
            }
            R.emit(doc, cfg);
            return 0;
        };
    });

    // speeds
    auto* speeds = app.add_subcommand("speeds", "critical speeds c_zero(h), c_kappa(h) and constants");
    std::optional<double> sh, sh_min, sh_max;
    int sn = 101;
    speeds->add_option("--h", sh, "single delay")->check(CLI::NonNegativeNumber);
    speeds->add_option("--h-min", sh_min, "curve start (default 0)")->check(CLI::NonNegativeNumber);
    speeds->add_option("--h-max", sh_max, "curve end")->check(CLI::PositiveNumber);
    speeds->add_option("--n", sn, "curve samples")->check(CLI::Range(2, 1000000));
    speeds->callback([&] {
        action = [&] {
            R.sub = "speeds";
            if (sh.has_value() == sh_max.has_value()) throw std::invalid_argument("speeds: give either --h or --h-max");
            auto m = build_model(mo);
            auto lin = linearization(m);
            bool kappa_ok = lin.beta_k < 0 && lin.alpha_k + lin.beta_k < 0;
            Json doc;
            if (sh) {
                R.options = {{"h", *sh}};
                doc["zero"] = critical_json(critical_speed_zero(*sh, lin));
                if (kappa_ok) doc["kappa"] = critical_json(critical_speed_kappa(*sh, lin));
            } else {
                double a = sh_min.value_or(0.0);
                R.options = {{"h_min", a}, {"h_max", *sh_max}, {"n", sn}};
                auto lo = speed_curve(lin, Side::AtZero, a, *sh_max, sn, R.g.threads);
                std::optional<SpeedCurve> up;
                if (kappa_ok) up = speed_curve(lin, Side::AtKappa, a, *sh_max, sn, R.g.threads);
                doc["samples"] = Json::array();
                for (int i = 0; i < sn; ++i) {
                    Json s{{"h", lo.samples[i].h}, {"c_zero", speed_json(lo.samples[i].c_star)}};
                    s["c_kappa"] = up ? speed_json(up->samples[i].c_star) : speed_json(Speed::inf());
                    doc["samples"].push_back(s);
                }
                doc["zero_monotone"] = lo.monotone;
                if (up) doc["kappa_monotone"] = up->monotone;
                if (!R.g.csv.empty()) {
                    auto f = R.open_csv(R.g.csv);
                    CsvWriter csv(f, {"h", "c_zero", "c_kappa"}, dump_json(R.config(m), false));
                    for (int i = 0; i < sn; ++i)
                        csv.row({csv_cell(lo.samples[i].h), csv_cell(lo.samples[i].c_star),
                                 up ? csv_cell(up->samples[i].c_star) : ""});
                }
            }
            if (kappa_ok) {
                double hf = h_fin(lin);
                doc["h_fin"] = std::isfinite(hf) ? Json(hf) : Json{{"inf", true}};
                doc["intersection"] = intersection_json(h_star_intersection(lin));
                doc["constants"] = constants_json(lin);
            }
            R.emit(doc, R.config(m));
            return 0;
        };
    });

    // atlas
    auto* atlas = app.add_subcommand("atlas", "domain of existence in the (h, c) plane");
    atlas->require_subcommand(1);
    auto* trace = atlas->add_subcommand("trace", "both boundary curves, intersection and asymptotes");
    double th_max = 5;
    int tn = 201;
    trace->add_option("--h-max", th_max, "largest delay")->check(CLI::PositiveNumber);
    trace->add_option("--n", tn, "samples")->check(CLI::Range(16, 1000000));
    trace->callback([&] {
        action = [&] {
            R.sub = "atlas trace";
            R.options = {{"h_max", th_max}, {"n", tn}};
            auto m = build_model(mo);
            auto a = trace_atlas(m, th_max, tn, R.g.threads);
            Json doc;
            doc["samples"] = Json::array();
            for (std::size_t i = 0; i < a.lower.samples.size(); ++i)
                doc["samples"].push_back({{"h", a.lower.samples[i].h},
                                          {"c_zero", speed_json(a.lower.samples[i].c_star)},
                                          {"c_kappa", speed_json(a.upper.samples[i].c_star)}});
            doc["intersection"] = intersection_json(a.h0);
            doc["h_fin"] = a.h_fin ? (std::isfinite(*a.h_fin) ? Json(*a.h_fin) : Json{{"inf", true}}) : Json(nullptr);
            doc["asymptotes"] = Json::array();
            for (const auto& s : a.asymptotes)
                doc["asymptotes"].push_back({{"kind", s.kind}, {"value", s.value}, {"label", s.label}});
            doc["subtangent"] = a.subtangent;
            doc["hypothesis"] = to_string(a.hypothesis);
            doc["label"] = a.label;
            doc["lower_monotone"] = a.lower.monotone;
            doc["upper_monotone"] = a.upper.monotone;
            auto cfg = R.config(m);
            if (!R.g.csv.empty()) {
                auto f = R.open_csv(R.g.csv);
                CsvWriter csv(f, {"h", "c_zero", "c_kappa"}, dump_json(cfg, false));
                for (std::size_t i = 0; i < a.lower.samples.size(); ++i)
                    csv.row({csv_cell(a.lower.samples[i].h), csv_cell(a.lower.samples[i].c_star),
                             csv_cell(a.upper.samples[i].c_star)});
            }
            R.emit(doc, cfg);
            return 0;
        };
    });
    auto* classify = atlas->add_subcommand("classify", "locate a point (h, c) relative to the domain");
    double ch = 0, cc = 0, ctol = 1e-8;
    classify->add_option("--h", ch)->required()->check(CLI::NonNegativeNumber);
    classify->add_option("--c", cc)->required()->check(CLI::PositiveNumber);
    classify->add_option("--tol", ctol, "relative boundary tolerance")->check(CLI::PositiveNumber);
    classify->callback([&] {
        action = [&] {
            R.sub = "atlas classify";
            R.options = {{"h", ch}, {"c", cc}, {"tol", ctol}};
            auto m = build_model(mo);
            auto k = classify_point(ch, cc, linearization(m), ctol);
            Json doc{{"class", to_string(k.region)}, {"c_zero", speed_json(k.c_zero)},
                     {"c_kappa", speed_json(k.c_kappa)}};
            R.emit(doc, R.config(m));
            return 0;
        };
    });

    // nicholson
    auto* nich = app.add_subcommand("nicholson", "constants of the Nicholson blowflies model");
    nich->require_subcommand(1);
    auto* nconst = nich->add_subcommand("constants", "kappa, beta_kappa, h_a, beta_kappa-, h0");
    nconst->callback([&] {
        action = [&] {
            R.sub = "nicholson constants";
            double p = mo.p.value_or(6.0), d = mo.delta.value_or(1.0);
            R.options = {{"p", p}, {"delta", d}};
            auto k = nicholson_constants(p, d);
            Json doc{{"p", k.p}, {"delta", k.delta}, {"ratio", k.p / k.delta}, {"kappa", k.kappa},
                     {"beta_kappa", k.beta_k}, {"nu0", k.nu.nu0}, {"t0", k.nu.t0}};
            doc["h_a"] = k.h_a ? Json(*k.h_a) : Json(nullptr);
            doc["intersection"] = intersection_json(k.h0);
            doc["domain"] = k.p / k.delta <= k.nu.nu0 ? "unbounded" : "bounded";
            if (k.minus) {
                doc["beta_kappa_minus"] = {{"value", k.minus->beta_minus},
                                           {"equals_beta_kappa", k.minus->equals_beta_k},
                                           {"h_a_minus", k.minus->h_a_minus},
                                           {"h0_minus", k.minus->h0_minus ? Json(*k.minus->h0_minus) : Json(nullptr)}};
            }
            Json cfg = R.config();
            cfg["model"] = model_json(nicholson(p, d));
            R.emit(doc, cfg);
            return 0;
        };
    });
    auto* nnu = nich->add_subcommand("nu0", "threshold ratio p/delta for a bounded domain");
    nnu->callback([&] {
        action = [&] {
            R.sub = "nicholson nu0";
            auto nu = nicholson_nu0();
            Json doc{{"nu0", nu.nu0}, {"t0", nu.t0}, {"nu0_theta", nu.nu0_theta},
                     {"routes_agree", std::abs(nu.nu0 - nu.nu0_theta)}};
            R.emit(doc, R.config());
            return 0;
        };
    });
    auto* nb = nich->add_subcommand("boundaries", "explicit boundary equations against the generic solver");
    double nbh = 1;
    nb->add_option("--h", nbh)->required()->check(CLI::NonNegativeNumber);
    nb->callback([&] {
        action = [&] {
            R.sub = "nicholson boundaries";
            double p = mo.p.value_or(6.0), d = mo.delta.value_or(1.0);
            R.options = {{"p", p}, {"delta", d}, {"h", nbh}};
            auto b = nicholson_boundaries(nbh, p, d);
            Json doc{{"c_zero", speed_json(b.c_zero)}, {"c_kappa", speed_json(b.c_kappa)}, {"mismatch", b.mismatch}};
            Json cfg = R.config();
            cfg["model"] = model_json(nicholson(p, d));
            R.emit(doc, cfg);
            return 0;
        };
    });

    // profile
    auto* prof = app.add_subcommand("profile", "travelling-wave profiles");
    prof->require_subcommand(1);
    ProfileFlags ps, pd;
    auto* psolve = prof->add_subcommand("solve", "fixed point of the integral operator");
    ps.add(psolve, true);
    psolve->callback([&] {
        action = [&] {
            R.sub = "profile solve";
            R.options = ps.json();
            auto m = build_model(mo);
            auto w = solve_profile(m, ps.h, ps.c, ps.options());
            auto cfg = R.config(m);
            std::string path = !ps.out.empty() ? ps.out : R.g.csv;
            if (!path.empty()) {
                auto f = R.open_csv(path);
                write_profile_csv(f, w, dump_json(cfg, false));
            }
            R.emit(profile_summary(w), cfg);
            if (!w.converged) {
                std::cerr << "wfa: profile did not converge after " << w.iterations << " sweeps (last change "
                          << w.last_change << ")\n";
                return 2;
            }
            return 0;
        };
    });
    auto* pdiag = prof->add_subcommand("diagnose", "oscillation verdict with exponents and V- trace");
    pd.add(pdiag, false);
    int stride = 16;
    pdiag->add_option("--stride", stride, "report every k-th window")->check(CLI::Range(1, 1 << 20));
    pdiag->callback([&] {
        action = [&] {
            R.sub = "profile diagnose";
            R.options = pd.json();
            R.options["stride"] = stride;
            auto m = build_model(mo);
            auto v = oscillation_verdict(m, pd.h, pd.c, pd.options());
            Json doc{{"verdict", to_string(v.verdict)}, {"class", to_string(v.cls.region)},
                     {"c_zero", speed_json(v.cls.c_zero)}, {"c_kappa", speed_json(v.cls.c_kappa)}};
            if (v.profile) doc["profile"] = profile_summary(*v.profile);
            if (v.diagnostic) {
                Json tr = Json::array();
                for (std::size_t i = 0; i < v.diagnostic->windows.size(); i += static_cast<std::size_t>(stride)) {
                    const auto& wd = v.diagnostic->windows[i];
                    tr.push_back({{"t", wd.t}, {"sc", wd.sc}, {"vminus", wd.vminus}});
                }
                doc["vminus"] = {{"max", v.diagnostic->max_vminus}, {"all_odd", v.diagnostic->all_odd},
                                 {"windows", v.diagnostic->windows.size()}, {"trace", tr}};
            }
            R.emit(doc, R.config(m));
            return 0;
        };
    });

    // verify
    auto* ver = app.add_subcommand("verify", "run the built-in acceptance checks");
    std::string suite = "fast";
    ver->add_option("--suite", suite, "fast | full")->check(CLI::IsMember({"fast", "full"}));
    ver->callback([&] {
        action = [&] {
            R.sub = "verify";
            R.options = {{"suite", suite}};
            bool all = true;
            Json checks = Json::array();
            auto res = run_verification(suite == "full" ? Suite::Full : Suite::Fast, R.g.threads,
                                        [&](const CheckResult& r) {
                                            if (!R.g.json) std::cout << format_check(r) << std::endl;
                                        });
            for (const auto& r : res) {
                all = all && r.pass;
                checks.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"value", r.value},
                                  {"tolerance", r.tolerance}, {"detail", r.detail},
                                  {"documented_deviation", r.documented_deviation}});
            }
            if (R.g.json) {
                Json doc{{"checks", checks}, {"all_pass", all}};
                doc["config"] = R.config();
                std::cout << dump_json(doc) << '\n';
            } else {
                std::cout << (all ? "all checks passed" : "some checks failed") << '\n';
            }
            return all ? 0 : 2;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    try {
        return action ? action() : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "wfa: " << e.what() << '\n';
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "wfa: " << e.what() << '\n';
        return 1;
    } catch (const EvalError& e) {
        std::cerr << "wfa: evaluation error: " << e.what() << " in " << e.subexpr() << '\n';
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "wfa: numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "wfa: " << e.what() << '\n';
        return 2;
    }
}
