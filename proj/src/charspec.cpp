#include "wfa/charspec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wfa/numeric.hpp"

namespace wfa {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kMergeTol = 1e-8;

struct ContourTooClose : NumericError {
    using NumericError::NumericError;
};

double scale_at(const CharFunction& cf, double x) {
    return x * x + std::abs(cf.c * x) + std::abs(cf.alpha) + std::abs(cf.beta * std::exp(-cf.r() * x));
}

std::vector<RealRoot> quadratic_roots(double c, double q) {
    // x^2 - c x + q
    double d = c * c - 4 * q;
    double scale = std::max({1.0, c * c, std::abs(4 * q)});
    if (std::abs(d) <= 4 * kEps * scale) return {{0.5 * c, 2, 0.0}};
    if (d < 0) return {};
    double s = std::sqrt(d);
    double big = c >= 0 ? 0.5 * (c + s) : 0.5 * (c - s);
    double small = big != 0.0 ? q / big : 0.0;
    std::vector<RealRoot> out{{std::min(small, big), 1, 0.0}, {std::max(small, big), 1, 0.0}};
    return out;
}

// expand from x0 in direction dir until pred holds
template <class P>
double expand(double x0, double dir, P&& pred) {
    double step = std::max(1.0, std::abs(x0)) * 0.25;
    double x = x0 + dir * step;
    for (int i = 0; i < 200 && !pred(x); ++i) {
        step *= 2;
        x = x0 + dir * step;
    }
    return x;
}

double refine(const CharFunction& cf, double lo, double hi) {
    if (lo > hi) std::swap(lo, hi);
    double flo = chi(cf, lo), fhi = chi(cf, hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    double x0 = solve_bracketed([&](double x) { return chi(cf, x); }, lo, hi);
    return x0;
}

void push_root(std::vector<RealRoot>& out, const CharFunction& cf, double x, int mult) {
    out.push_back({x, mult, std::abs(chi(cf, x))});
}

std::vector<RealRoot> merge_close(std::vector<RealRoot> roots, const CharFunction& cf) {
    std::sort(roots.begin(), roots.end(), [](auto& a, auto& b) { return a.value < b.value; });
    std::vector<RealRoot> out;
    for (const auto& r : roots) {
        if (!out.empty() && std::abs(r.value - out.back().value) <= kMergeTol * std::max(1.0, std::abs(r.value))) {
            double x = 0.5 * (r.value + out.back().value);
            out.back() = {x, out.back().multiplicity + r.multiplicity, std::abs(chi(cf, x))};
        } else {
            out.push_back(r);
        }
    }
    return out;
}

}  // namespace

const char* to_string(Side s) { return s == Side::AtZero ? "zero" : "kappa"; }

const char* to_string(Flag f) {
    switch (f) {
    case Flag::Pass: return "pass";
    case Flag::Fail: return "fail";
    default: return "not applicable";
    }
}

CharFunction CharFunction::make(Side side, double c, double h, const LinearizationData& lin) {
    CharFunction cf;
    cf.side = side;
    cf.c = c;
    cf.h = h;
    cf.alpha = side == Side::AtZero ? lin.alpha0 : lin.alpha_k;
    cf.beta = side == Side::AtZero ? lin.beta0 : lin.beta_k;
    return cf;
}

cplx chi(const CharFunction& cf, cplx z) { return z * z - cf.c * z + cf.alpha + cf.beta * std::exp(-cf.r() * z); }

cplx dchi(const CharFunction& cf, cplx z) { return 2.0 * z - cf.c - cf.r() * cf.beta * std::exp(-cf.r() * z); }

double chi(const CharFunction& cf, double x) { return x * x - cf.c * x + cf.alpha + cf.beta * std::exp(-cf.r() * x); }

double dchi(const CharFunction& cf, double x) { return 2 * x - cf.c - cf.r() * cf.beta * std::exp(-cf.r() * x); }

int RootSet::total_count() const {
    int n = static_cast<int>(complex_roots.size());
    for (const auto& r : real_roots) n += r.multiplicity;
    return n;
}

std::vector<RealRoot> real_roots(const CharFunction& cf) {
    const double r = cf.r();
    if (r == 0.0 || cf.beta == 0.0) {
        auto out = quadratic_roots(cf.c, cf.alpha + (r == 0.0 ? cf.beta : 0.0));
        for (auto& q : out) q.residual = std::abs(chi(cf, q.value));
        return out;
    }
    auto F = [&](double x) { return chi(cf, x); };
    auto dF = [&](double x) { return dchi(cf, x); };
    auto near_zero = [&](double x, double fx) { return std::abs(fx) <= 64 * kEps * scale_at(cf, x); };
    std::vector<RealRoot> out;

    if (cf.beta > 0) {
        // convex: F' increasing, F -> +inf at both ends
        double a = 0.5 * cf.c;
        double b = expand(a, 1.0, [&](double x) { return dF(x) > 0; });
        double xm = solve_bracketed(dF, a, b);
        double fm = F(xm);
        if (near_zero(xm, fm)) {
            push_root(out, cf, xm, 2);
            return out;
        }
        if (fm > 0) return out;
        double lo = expand(xm, -1.0, [&](double x) { return F(x) > 0; });
        double hi = expand(xm, 1.0, [&](double x) { return F(x) > 0; });
        push_root(out, cf, refine(cf, lo, xm), 1);
        push_root(out, cf, refine(cf, xm, hi), 1);
        return merge_close(out, cf);
    }

    // beta < 0: F''' > 0, inflection at xs
    double xs = std::log(std::abs(cf.beta) * r * r / 2) / r;
    double dmin = dF(xs);
    if (dmin >= 0) {
        double lo = expand(xs, -1.0, [&](double x) { return F(x) < 0; });
        double hi = expand(xs, 1.0, [&](double x) { return F(x) > 0; });
        push_root(out, cf, refine(cf, lo, hi), 1);
        return out;
    }
    double a = solve_bracketed(dF, expand(xs, -1.0, [&](double x) { return dF(x) > 0; }), xs);
    double b = solve_bracketed(dF, xs, expand(xs, 1.0, [&](double x) { return dF(x) > 0; }));
    double fa = F(a), fb = F(b);  // local max, local min
    bool da = near_zero(a, fa), db = near_zero(b, fb);
    auto right_of_b = [&] {
        double hi = expand(b, 1.0, [&](double x) { return F(x) > 0; });
        push_root(out, cf, refine(cf, b, hi), 1);
    };
    if (da) {
        push_root(out, cf, a, 2);
        if (!db) right_of_b();
    } else if (fa > 0) {
        double lo = expand(a, -1.0, [&](double x) { return F(x) < 0; });
        push_root(out, cf, refine(cf, lo, a), 1);
        if (db) {
            push_root(out, cf, b, 2);
        } else if (fb < 0) {
            push_root(out, cf, refine(cf, a, b), 1);
            right_of_b();
        }
    } else {
        right_of_b();
    }
    return merge_close(out, cf);
}

// ---------------------------------------------------------------- winding

namespace {

double seg_arg(const CharFunction& cf, cplx za, cplx fa, cplx zb, cplx fb, int depth) {
    double d = std::arg(fb / fa);
    if (std::abs(d) > std::numbers::pi / 4 && depth < 40) {
        cplx zm = 0.5 * (za + zb);
        cplx fm = chi(cf, zm);
        if (std::abs(fm) < 1e-9 * (1 + std::norm(zm))) throw ContourTooClose("contour passes through a root");
        return seg_arg(cf, za, fa, zm, fm, depth + 1) + seg_arg(cf, zm, fm, zb, fb, depth + 1);
    }
    return d;
}

double edge_arg(const CharFunction& cf, cplx p, cplx q) {
    const int n = 512;
    double total = 0.0;
    cplx zprev = p, fprev = chi(cf, p);
    if (std::abs(fprev) < 1e-9 * (1 + std::norm(p))) throw ContourTooClose("contour passes through a root");
    for (int k = 1; k <= n; ++k) {
        cplx z = p + (q - p) * (static_cast<double>(k) / n);
        cplx fz = chi(cf, z);
        if (std::abs(fz) < 1e-9 * (1 + std::norm(z))) throw ContourTooClose("contour passes through a root");
        total += seg_arg(cf, zprev, fprev, z, fz, 0);
        zprev = z;
        fprev = fz;
    }
    return total;
}

struct Rect {
    double x0, x1, y0, y1;
};

std::optional<cplx> newton(const CharFunction& cf, cplx z) {
    for (int i = 0; i < 60; ++i) {
        cplx f = chi(cf, z), d = dchi(cf, z);
        if (d == 0.0) return std::nullopt;
        cplx dz = f / d;
        z -= dz;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
        if (std::abs(dz) <= 1e-14 * (1 + std::abs(z))) return z;
    }
    if (std::abs(chi(cf, z)) <= 1e-9 * (1 + std::norm(z))) return z;
    return std::nullopt;
}

// count with the split line nudged away from roots
int count_split(const CharFunction& cf, Rect r, bool vertical, double& at) {
    double w = vertical ? r.x1 - r.x0 : r.y1 - r.y0;
    double mid = vertical ? 0.5 * (r.x0 + r.x1) : 0.5 * (r.y0 + r.y1);
    for (int k = 0; k < 12; ++k) {
        at = mid + (k % 2 ? 1 : -1) * (k / 2 + (k % 2)) * 0.0371 * w;
        try {
            if (vertical) return winding_count(cf, r.x0, at, r.y0, r.y1);
            return winding_count(cf, r.x0, r.x1, r.y0, at);
        } catch (const ContourTooClose&) {
        }
    }
    throw NumericError("unable to place a subdivision line away from roots");
}

void locate(const CharFunction& cf, Rect r, int k, int depth, std::vector<cplx>& out) {
    if (k <= 0) return;
    if (depth > 40) throw NumericError("strip subdivision exceeded depth 40");
    if (k == 1) {
        auto z = newton(cf, cplx(0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1)));
        if (z && z->real() >= r.x0 && z->real() <= r.x1 && z->imag() >= r.y0 && z->imag() <= r.y1) {
            out.push_back(*z);
            return;
        }
    }
    bool vertical = (r.x1 - r.x0) >= (r.y1 - r.y0);
    double at = 0.0;
    int k1 = count_split(cf, r, vertical, at);
    if (vertical) {
        locate(cf, {r.x0, at, r.y0, r.y1}, k1, depth + 1, out);
        locate(cf, {at, r.x1, r.y0, r.y1}, k - k1, depth + 1, out);
    } else {
        locate(cf, {r.x0, r.x1, r.y0, at}, k1, depth + 1, out);
        locate(cf, {r.x0, r.x1, at, r.y1}, k - k1, depth + 1, out);
    }
}

}  // namespace

int winding_count(const CharFunction& cf, double x0, double x1, double y0, double y1) {
    cplx a(x0, y0), b(x1, y0), c(x1, y1), d(x0, y1);
    double total = edge_arg(cf, a, b) + edge_arg(cf, b, c) + edge_arg(cf, c, d) + edge_arg(cf, d, a);
    double w = total / (2 * std::numbers::pi);
    double n = std::round(w);
    if (std::abs(w - n) > 1e-3) throw NumericError("winding number did not settle to an integer");
    return static_cast<int>(n);
}

RootSet complex_roots_in_strip(const CharFunction& cf, const Strip& strip) {
    RootSet rs;
    // nudge the outer contour off roots, at most 1e-6
    Strip s = strip;
    int total = -1;
    for (int k = 0; k <= 10 && total < 0; ++k) {
        double e = 1e-7 * k;
        s = {strip.re_min - e, strip.re_max + e, strip.im_max + e};
        try {
            total = winding_count(cf, s.re_min, s.re_max, -s.im_max, s.im_max);
        } catch (const ContourTooClose&) {
        }
    }
    if (total < 0) throw NumericError("strip contour too close to a root after nudging");
    rs.strip = s;
    rs.winding_count = total;

    for (const auto& r : real_roots(cf))
        if (r.value > s.re_min && r.value < s.re_max) rs.real_roots.push_back(r);
    int m = 0;
    for (const auto& r : rs.real_roots) m += r.multiplicity;
    if ((total - m) % 2 != 0 || total < m) throw NumericError("real root count inconsistent with winding count");

    int upper = (total - m) / 2;
    std::vector<cplx> found;
    if (upper > 0) {
        double ylo = std::min(1e-3, s.im_max / 100);
        bool ok = false;
        for (int k = 0; k < 8 && !ok; ++k, ylo /= 16) {
            int cnt = -1;
            try {
                cnt = winding_count(cf, s.re_min, s.re_max, ylo, s.im_max);
            } catch (const ContourTooClose&) {
                continue;
            }
            if (cnt == upper) {
                locate(cf, {s.re_min, s.re_max, ylo, s.im_max}, upper, 0, found);
                ok = true;
            }
        }
        if (!ok) throw NumericError("upper half-strip count does not match");
    }
    std::sort(found.begin(), found.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() < b.imag();
    });
    for (cplx z : found) {
        double res = std::abs(chi(cf, z));
        rs.complex_roots.push_back({z, res});
        rs.complex_roots.push_back({std::conj(z), res});
    }
    return rs;
}

Strip default_strip(const CharFunction& cf) {
    auto reals = real_roots(cf);
    double hi = 0.5 * cf.c, lo = -1.0;
    for (const auto& r : reals) {
        hi = std::max(hi, r.value);
        lo = std::min(lo, r.value);
    }
    double re_min = lo - 1.0;
    if (cf.r() > 0 && cf.beta != 0) re_min = std::min(re_min, -std::log(1e6 / std::abs(cf.beta)) / cf.r());
    re_min = std::max(re_min, lo - 20.0);
    return {re_min, hi + 1.0, 40.0};
}

std::optional<double> lambda_zero(double c, double h, const LinearizationData& lin) {
    for (const auto& r : real_roots(CharFunction::make(Side::AtZero, c, h, lin)))
        if (r.value > 0) return r.value;
    return std::nullopt;
}

std::optional<double> lambda2_kappa(double c, double h, const LinearizationData& lin) {
    std::optional<double> best;
    for (const auto& r : real_roots(CharFunction::make(Side::AtKappa, c, h, lin)))
        if (r.value < 0) best = r.value;
    return best;
}

bool RootLawReport::all_pass() const {
    return ordering != Flag::Fail && separation != Flag::Fail && imag_bound != Flag::Fail;
}

RootLawReport verify_root_laws(const CharFunction& cf, const RootSet& roots) {
    RootLawReport rep;
    if (cf.side == Side::AtZero) {
        std::vector<double> pos;
        for (const auto& r : roots.real_roots)
            if (r.value > 0)
                for (int k = 0; k < r.multiplicity; ++k) pos.push_back(r.value);
        if (cf.beta > 0 && pos.size() >= 2 && pos[0] < pos[1]) {
            double lam = pos[0];
            rep.ordering = Flag::Pass;
            for (const auto& z : roots.complex_roots) {
                if (!(z.z.real() < lam)) {
                    rep.ordering = Flag::Fail;
                    rep.ordering_offender = z.z;
                    break;
                }
            }
            if (cf.r() > 0) {
                rep.imag_bound = Flag::Pass;
                double bound = std::numbers::pi / cf.r();
                for (const auto& z : roots.complex_roots) {
                    if (z.z.real() <= lam && !(std::abs(z.z.imag()) > bound)) {
                        rep.imag_bound = Flag::Fail;
                        rep.imag_offender = z.z;
                        break;
                    }
                }
            }
        }
    } else {
        std::optional<double> lam2;
        for (const auto& r : roots.real_roots)
            if (r.value < 0) lam2 = r.value;
        if (lam2) {
            rep.separation = Flag::Pass;
            for (const auto& z : roots.complex_roots) {
                if (!(z.z.real() < *lam2)) {
                    rep.separation = Flag::Fail;
                    rep.separation_offender = z.z;
                    break;
                }
            }
        }
    }
    return rep;
}

}  // namespace wfa
