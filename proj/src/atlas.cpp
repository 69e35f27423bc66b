#include "wfa/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "wfa/numeric.hpp"

namespace wfa {

namespace {

constexpr double kCap = 1e6;  // speeds beyond this are reported as +inf

double rel_diff(const Speed& a, const Speed& b) {
    if (a.is_inf() && b.is_inf()) return 0.0;
    if (a.is_inf() != b.is_inf()) return std::numeric_limits<double>::infinity();
    return std::abs(a.value - b.value) / std::max(1.0, std::abs(b.value));
}

}  // namespace

const char* to_string(Region r) {
    switch (r) {
    case Region::BelowLower: return "BelowLower";
    case Region::InDomain: return "InDomain";
    case Region::AboveUpper: return "AboveUpper";
    default: return "OnBoundary";
    }
}

Classification classify_point(double h, double c, const LinearizationData& lin, double tol) {
    if (!(h >= 0)) throw std::invalid_argument("classify_point needs h >= 0");
    if (!(c > 0)) throw std::invalid_argument("classify_point needs c > 0");
    Classification out;
    out.c_zero = critical_speed_zero(h, lin).c_star;
    out.c_kappa = critical_speed_kappa(h, lin).c_star;
    double c0 = out.c_zero.value;
    double t0 = tol * std::max(1.0, c0);
    bool finite_k = !out.c_kappa.is_inf();
    double ck = out.c_kappa.value;
    double tk = finite_k ? tol * std::max(1.0, ck) : 0.0;
    bool inside = c >= c0 - t0 && (!finite_k || c <= ck + tk);
    if (!inside) {
        out.region = c < c0 - t0 ? Region::BelowLower : Region::AboveUpper;
    } else if (std::abs(c - c0) <= t0 || (finite_k && std::abs(c - ck) <= tk)) {
        out.region = Region::OnBoundary;
    } else {
        out.region = Region::InDomain;
    }
    return out;
}

DomainAtlas trace_atlas(const ModelSpec& m, double h_max, int n, int threads) {
    if (n < 16) throw std::invalid_argument("trace_atlas needs n >= 16");
    if (!(h_max > 0)) throw std::invalid_argument("trace_atlas needs h_max > 0");
    auto lin = linearization(m);
    DomainAtlas a;
    a.lower = speed_curve(lin, Side::AtZero, 0.0, h_max, n, threads);
    bool kappa_ok = lin.beta_k < 0 && lin.alpha_k + lin.beta_k < 0;
    if (kappa_ok) {
        a.upper = speed_curve(lin, Side::AtKappa, 0.0, h_max, n, threads);
        a.h_fin = h_fin(lin);
        a.h0 = h_star_intersection(lin);
        std::string lbl = m.cls == ModelClass::KPPClass ? "h = -1/(e beta_kappa)"
                          : m.name == "nicholson"       ? "h = h_a"
                                                        : "h = h_fin";
        a.asymptotes.push_back({"vertical", *a.h_fin, lbl});
    } else {
        a.upper.side = Side::AtKappa;
        for (const auto& s : a.lower.samples) {
            CriticalSpeedResult r;
            r.h = s.h;
            r.side = Side::AtKappa;
            r.c_star = Speed::inf();
            a.upper.samples.push_back(r);
        }
    }
    if (lin.alpha0 > 0) a.asymptotes.push_back({"horizontal", 2 * std::sqrt(lin.alpha0), "c = 2 sqrt(alpha0)"});
    a.subtangent = check_subtangency(m, 256);
    a.hypothesis = check_hypotheses(m);
    a.label = a.subtangent ? "cl(D_N) = D_L" : "D_L (necessary region only)";
    return a;
}

Speed kpp_upper_boundary(double h, double beta_k) {
    if (!(beta_k < 0)) throw std::invalid_argument("kpp_upper_boundary needs beta_kappa < 0");
    if (!(h > 0)) throw std::invalid_argument("kpp_upper_boundary needs h > 0");
    auto R = [&](double c) {
        double q = std::sqrt(c * c * c * c * h * h + 4);
        return -beta_k * c * c * h * h * std::exp(1 + 2 / (c * c * h + q)) - (2 + q);
    };
    double c = 1e-3;
    if (R(c) >= 0) {
        while (c > 1e-12 && R(c / 2) >= 0) c /= 2;
        if (c <= 1e-12) throw NumericError("kpp_upper_boundary: residual positive near c = 0");
        return Speed::of(bisect(R, c / 2, c, 1e-16 * c));
    }
    while (R(c) < 0) {
        c *= 2;
        if (c > kCap) return Speed::inf();
    }
    return Speed::of(bisect(R, c / 2, c, 1e-16 * c));
}

Speed nicholson_zero_explicit(double h, double p, double delta) {
    auto r = [&](double c) {
        double c2 = c * c;
        double S = std::sqrt(c2 * c2 * h * h + 4 * c2 * h * h * delta + 4);
        return std::log(c2 + 4 * delta) - std::log(2 + S) - 1 - std::log(p) + 0.5 * (S + c2 * h);
    };
    double c = 1e-3;
    while (r(c) < 0) {
        c *= 2;
        if (c > kCap) throw NumericError("nicholson zero boundary: no root below 1e6");
    }
    return Speed::of(bisect(r, c / 2, c, 1e-16 * c));
}

double nicholson_h_a(double beta_k, double delta) {
    if (!(beta_k < 0)) throw std::invalid_argument("h_a needs beta_kappa < 0");
    double b = std::abs(beta_k);
    auto q = [&](double h) { return 1 + std::log(b * h) + delta * h; };
    return solve_bracketed(q, 1e-300, 1 / (std::numbers::e * b));
}

Speed nicholson_kappa_explicit(double h, double p, double delta, double beta_k) {
    (void)p;
    if (h <= nicholson_h_a(beta_k, delta)) return Speed::inf();
    double b = std::abs(beta_k);
    auto R = [&](double c) {
        double c2 = c * c;
        double S = std::sqrt(c2 * c2 * h * h + 4 * c2 * h * h * delta + 4);
        double diff = (4 * c2 * h * h * delta + 4) / (S + c2 * h);  // S - c^2 h
        return std::log(2 + S) - std::log(std::numbers::e * c2 * h * h * b) - 0.5 * diff;
    };
    // smallest root: R > 0 near c = 0
    double c = 1e-3;
    while (R(c) > 0) {
        c *= 1.1;
        if (c > kCap) return Speed::inf();
    }
    return Speed::of(bisect(R, c / 1.1, c, 1e-16 * c));
}

NicholsonBoundaries nicholson_boundaries(double h, double p, double delta) {
    if (!(p / delta > 1)) throw std::invalid_argument("nicholson requires p/delta > 1");
    if (!(h >= 0)) throw std::invalid_argument("h must be non-negative");
    double bk = delta * std::log(std::numbers::e * delta / p);
    NicholsonBoundaries out;
    out.c_zero = nicholson_zero_explicit(h, p, delta);
    LinearizationData lin{-delta, p, -delta, bk};
    double m0 = rel_diff(out.c_zero, critical_speed_zero(h, lin).c_star);
    double mk = 0.0;
    if (bk < 0) {
        out.c_kappa = nicholson_kappa_explicit(h, p, delta, bk);
        mk = rel_diff(out.c_kappa, critical_speed_kappa(h, lin).c_star);
    } else {
        out.c_kappa = Speed::inf();  // kappa side has no negative real root constraint
    }
    out.mismatch = std::max(m0, mk);
    if (out.mismatch > 1e-6)
        throw NumericError("nicholson boundary cross-validation failed at h = " + std::to_string(h));
    return out;
}

Nu0 nicholson_nu0() {
    Nu0 out;
    auto s_of = [](double t) { return std::sqrt(1 + 2 * t); };
    // log form of the t0 equation
    auto F = [&](double t) {
        double s = s_of(t);
        return std::log((s - 1) / t) - 2 + s - (1 + s) * std::exp(-1 - s) / t;
    };
    double a = 0.1, b = a * 1.5;
    while (b < 1e3 && (F(a) > 0) == (F(b) > 0)) {
        a = b;
        b *= 1.5;
    }
    if ((F(a) > 0) == (F(b) > 0)) throw NumericError("nu0: no sign change for t0");
    out.t0 = bisect(F, a, b, 1e-16 * b);
    double s = s_of(out.t0);
    out.nu0 = (s - 1) / out.t0 * std::exp(-1 + s);

    // theta(alpha_k, beta_k) = theta1(alpha0, beta0) along p/delta with delta = 1
    auto D = [](double nu) {
        return theta_const(-1.0, 1 - std::log(nu), RootSign::Negative) -
               theta_const(-1.0, nu, RootSign::Positive);
    };
    double lo = std::numbers::e * (1 + 1e-6), hi = std::exp(2.0);
    out.nu0_theta = bisect(D, lo, hi, 1e-15);
    return out;
}

Speed c_kappa_minus(double h, double p, double delta, double beta_minus) {
    return nicholson_kappa_explicit(h, p, delta, beta_minus);
}

BetaKappaMinus beta_kappa_minus(const ModelSpec& m) {
    if (!m.has_g()) throw std::invalid_argument("beta_kappa_minus needs an MG-form model");
    const double u2 = m.kappa;
    const double gu = m.g(u2), dgu = m.dg(u2);
    auto secant = [&](double x) { return (m.g(x) - gu) / (x - u2); };
    const int n = 10000;
    int best = 0;
    double best_v = secant(0.0);
    for (int i = 1; i < n; ++i) {
        double v = secant(u2 * i / n);
        if (v < best_v) {
            best_v = v;
            best = i;
        }
    }
    double lo = u2 * std::max(0, best - 1) / n, hi = u2 * std::min(n - 1, best + 1) / n;
    auto r = boost::math::tools::brent_find_minima(secant, lo, hi, 50);
    double inf_sec = std::min(best_v, r.second);

    BetaKappaMinus out;
    if (inf_sec >= dgu - 1e-12) {
        out.beta_minus = dgu;  // infimum attained at the endpoint
        out.equals_beta_k = true;
    } else {
        out.beta_minus = inf_sec;
        out.equals_beta_k = false;
    }
    if (out.beta_minus < 0) {
        out.h_a_minus = nicholson_h_a(out.beta_minus, m.delta);
        auto lin = linearization(m);
        LinearizationData lm{lin.alpha0, lin.beta0, -m.delta, out.beta_minus};
        if (auto x = h_star_intersection(lm)) out.h0_minus = x->h0;
    }
    return out;
}

NicholsonConstants nicholson_constants(double p, double delta) {
    ModelSpec m = nicholson(p, delta);
    NicholsonConstants k;
    k.p = p;
    k.delta = delta;
    k.kappa = m.kappa;
    k.beta_k = delta * std::log(std::numbers::e * delta / p);
    k.nu = nicholson_nu0();
    if (k.beta_k < 0) {
        k.h_a = nicholson_h_a(k.beta_k, delta);
        k.minus = beta_kappa_minus(m);
        k.h0 = h_star_intersection(linearization(m));
    }
    return k;
}

}  // namespace wfa
