#include "wfa/speeds.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "wfa/numeric.hpp"
#include "wfa/parallel.hpp"

namespace wfa {

namespace {

void require_zero(const LinearizationData& l) {
    if (!(l.beta0 >= 0)) throw std::invalid_argument("zero side requires beta0 >= 0");
    if (!(l.alpha0 + l.beta0 > 0)) throw std::invalid_argument("zero side requires alpha0 + beta0 > 0");
}

void require_kappa(const LinearizationData& l) {
    if (!(l.beta_k < 0)) throw std::invalid_argument("kappa side requires beta_kappa < 0");
    if (!(l.alpha_k + l.beta_k < 0)) throw std::invalid_argument("kappa side requires alpha_kappa + beta_kappa < 0");
}

// eps*L^2 - L + a + b e^{-hL} = 0 together with its L-derivative, where eps = 1/c^2, L = c z
void polish(double a, double b, double h, double& eps, double& L) {
    auto res = [&](double e, double l) {
        double ex = b * std::exp(-h * l);
        return std::array<double, 2>{e * l * l - l + a + ex, 2 * e * l - 1 - h * ex};
    };
    auto r = res(eps, L);
    double n0 = std::hypot(r[0], r[1]);
    for (int it = 0; it < 30 && n0 > 0; ++it) {
        double ex = b * std::exp(-h * L);
        double j11 = L * L, j12 = r[1], j21 = 2 * L, j22 = 2 * eps + h * h * ex;
        double det = j11 * j22 - j12 * j21;
        if (det == 0 || !std::isfinite(det)) return;
        double de = (r[0] * j22 - j12 * r[1]) / det;
        double dl = (j11 * r[1] - j21 * r[0]) / det;
        double t = 1.0;
        bool moved = false;
        for (int k = 0; k < 30; ++k, t *= 0.5) {
            auto rn = res(eps - t * de, L - t * dl);
            double n1 = std::hypot(rn[0], rn[1]);
            if (n1 < n0) {
                eps -= t * de;
                L -= t * dl;
                r = rn;
                n0 = n1;
                moved = true;
                break;
            }
        }
        if (!moved) return;
    }
}

CriticalSpeedResult finish(Side side, double h, double c, double z, const LinearizationData& lin) {
    CriticalSpeedResult out;
    out.h = h;
    out.side = side;
    out.c_star = Speed::of(c);
    out.double_root = z;
    auto cf = CharFunction::make(side, c, h, lin);
    out.chi_residual = std::abs(chi(cf, z));
    out.dchi_residual = std::abs(dchi(cf, z));
    return out;
}

}  // namespace

double omega_const(double alpha, double beta, RootSign sign) {
    auto q = [](double w) { return std::exp(-w) * (2 + w); };
    double k = -2 * alpha / beta;
    double w;
    if (sign == RootSign::Positive) {
        if (!(beta > 0) || !(alpha <= 0)) throw std::invalid_argument("positive omega requires alpha <= 0 < beta");
        if (!(k > 0 && k < 2)) throw NumericError("omega: no positive root");
        double hi = 1.0;
        while (q(hi) > k) hi *= 2;
        w = solve_bracketed([&](double x) { return q(x) - k; }, 0.0, hi);
    } else {
        if (!(beta < 0) || !(alpha + beta < 0))
            throw std::invalid_argument("negative omega requires beta < 0 and alpha + beta < 0");
        if (!(k < std::exp(1.0))) throw NumericError("omega: no negative root");
        double lo = -2.0;
        while (q(lo) > k) lo *= 2;
        w = solve_bracketed([&](double x) { return q(x) - k; }, lo, -1.0);
    }
    return w;
}

double theta_const(double alpha, double beta, RootSign sign) {
    double w = omega_const(alpha, beta, sign);
    return std::sqrt(2 * w / beta) * std::exp(w / 2);
}

AsymptoticConstants asymptotic_constants(const LinearizationData& lin) {
    AsymptoticConstants a;
    a.omega0 = omega_const(lin.alpha0, lin.beta0, RootSign::Positive);
    a.omega_k = omega_const(lin.alpha_k, lin.beta_k, RootSign::Negative);
    a.theta1 = std::sqrt(2 * a.omega0 / lin.beta0) * std::exp(a.omega0 / 2);
    a.theta = std::sqrt(2 * a.omega_k / lin.beta_k) * std::exp(a.omega_k / 2);
    return a;
}

CriticalSpeedResult critical_speed_zero(double h, const LinearizationData& lin) {
    require_zero(lin);
    if (!(h >= 0)) throw std::invalid_argument("h must be non-negative");
    const double a = lin.alpha0, b = lin.beta0;
    if (b == 0.0) {
        if (!(a > 0)) throw std::invalid_argument("beta0 = 0 requires alpha0 > 0");
        double c = 2 * std::sqrt(a);
        return finish(Side::AtZero, h, c, 0.5 * c, lin);
    }
    if (h == 0.0) {
        double c = 2 * std::sqrt(a + b);
        return finish(Side::AtZero, h, c, 0.5 * c, lin);
    }
    // G(L) = 2a - L + b e^{-hL}(2 + hL) is strictly decreasing on L > 0, G(0) > 0
    auto G = [&](double L) { return 2 * a - L + b * std::exp(-h * L) * (2 + h * L); };
    double hi = 1.0;
    for (int i = 0; i < 2000 && G(hi) > 0; ++i) hi *= 2;
    double L = solve_bracketed(G, 0.0, hi);
    double eps = (1 + h * b * std::exp(-h * L)) / (2 * L);
    polish(a, b, h, eps, L);
    if (!(eps > 0)) throw NumericError("critical_speed_zero: non-positive eps");
    double c = 1 / std::sqrt(eps);
    if (h > 1e4 && a > 0) c = std::max(c, 2 * std::sqrt(a));
    return finish(Side::AtZero, h, c, L / c, lin);
}

bool kappa_speed_infinite(double h, const LinearizationData& lin) {
    if (h == 0.0) return true;
    double b = std::abs(lin.beta_k);
    return h * b < 1 && 1 + std::log(b * h) - lin.alpha_k * h <= 0;
}

double h_fin(const LinearizationData& lin) {
    require_kappa(lin);
    double b = std::abs(lin.beta_k);
    // q(h) = 1 + ln(|b| h) - a h increases through zero on (0, 1/|b|)
    auto q = [&](double h) { return 1 + std::log(b * h) - lin.alpha_k * h; };
    double lo = 1e-300, hi = 1 / b;
    return solve_bracketed(q, lo, hi);
}

CriticalSpeedResult critical_speed_kappa(double h, const LinearizationData& lin) {
    require_kappa(lin);
    if (!(h >= 0)) throw std::invalid_argument("h must be non-negative");
    CriticalSpeedResult out;
    out.h = h;
    out.side = Side::AtKappa;
    out.c_star = Speed::inf();
    if (kappa_speed_infinite(h, lin)) return out;

    const double a = lin.alpha_k, b = lin.beta_k;
    auto G = [&](double L) { return 2 * a - L + b * std::exp(-h * L) * (2 + h * L); };
    auto E = [&](double L) { return (L - a - b * std::exp(-h * L)) / (L * L); };
    // G > 0 for L < -max(2/h, -2a); G(0-) = 2(a+b) < 0
    double far = 2 * std::max({2 / h, -2 * a, 1e-3});
    while (G(-far) <= 0) far *= 2;
    const int n = 4000;
    double best_e = 0.0, best_l = 0.0;
    bool found = false;
    double near = far * 1e-12;
    double prev_l = -near, prev_g = G(prev_l);
    for (int i = 1; i <= n; ++i) {
        double l = -near * std::pow(far / near, static_cast<double>(i) / n);
        double g = G(l);
        if ((g > 0) != (prev_g > 0)) {
            double root = solve_bracketed(G, l, prev_l);
            double e = E(root);
            if (!found || e < best_e) {
                best_e = e;
                best_l = root;
                found = true;
            }
        }
        prev_l = l;
        prev_g = g;
    }
    if (!found) throw NumericError("critical_speed_kappa: no stationary point of E");
    if (!(best_e > 0)) return out;
    double eps = best_e, L = best_l;
    polish(a, b, h, eps, L);
    if (!(eps > 0) || !(L < 0)) throw NumericError("critical_speed_kappa: polish left the admissible region");
    double c = 1 / std::sqrt(eps);
    return finish(Side::AtKappa, h, c, L / c, lin);
}

CriticalSpeedResult critical_speed(Side side, double h, const LinearizationData& lin) {
    return side == Side::AtZero ? critical_speed_zero(h, lin) : critical_speed_kappa(h, lin);
}

namespace {

double diff_kz(double h, const LinearizationData& lin) {
    auto k = critical_speed_kappa(h, lin);
    auto z = critical_speed_zero(h, lin);
    if (k.c_star.is_inf()) return 1e300;
    return k.c_star.value - z.c_star.value;
}

}  // namespace

std::optional<Intersection> h_star_intersection(const LinearizationData& lin) {
    require_zero(lin);
    require_kappa(lin);
    bool bounded_zero = lin.alpha0 < 0 && lin.beta0 > 0;  // c0 ~ theta1/h, else c0 stays away from 0
    if (bounded_zero) {
        double th1 = theta_const(lin.alpha0, lin.beta0, RootSign::Positive);
        double th = theta_const(lin.alpha_k, lin.beta_k, RootSign::Negative);
        if (th >= th1) return std::nullopt;
    }
    double hf = h_fin(lin);
    double a = hf * (1 + 1e-9) + 1e-15;
    for (int i = 0; i < 50 && diff_kz(a, lin) <= 0; ++i) a = hf + (a - hf) * 0.1;
    if (diff_kz(a, lin) <= 0) throw NumericError("h0: curve difference not positive above h_fin");
    double lo = a, H = std::max(2 * a, 1.0);
    while (diff_kz(H, lin) > 0) {
        lo = H;
        H *= 2;
        if (H > 1e6) throw NumericError("h0: no sign change up to h = 1e6");
    }
    double h0 = bisect([&](double h) { return diff_kz(h, lin); }, lo, H, 1e-14 * H);
    Intersection out;
    out.h0 = h0;
    out.c0 = critical_speed_zero(h0, lin).c_star.value;
    double d = 1e-5 * h0;
    out.slope = (diff_kz(h0 + d, lin) - diff_kz(h0 - d, lin)) / (2 * d);
    out.transversal = out.slope < 0;
    return out;
}

NewtonIntersection h_star_newton(const LinearizationData& lin, double h_seed) {
    auto z0r = critical_speed_zero(h_seed, lin);
    auto zkr = critical_speed_kappa(h_seed, lin);
    if (zkr.c_star.is_inf()) throw NumericError("h0 Newton: seed below h_fin");
    std::array<double, 4> x{h_seed, 0.5 * (z0r.c_star.value + zkr.c_star.value), *z0r.double_root, *zkr.double_root};

    auto residual = [&](const std::array<double, 4>& v) {
        double h = v[0], c = v[1];
        std::array<double, 4> r{};
        const double al[2] = {lin.alpha0, lin.alpha_k}, be[2] = {lin.beta0, lin.beta_k};
        for (int s = 0; s < 2; ++s) {
            double z = v[2 + s];
            double E = be[s] * std::exp(-c * h * z);
            r[2 * s] = z * z - c * z + al[s] + E;
            r[2 * s + 1] = 2 * z - c - c * h * E;
        }
        return r;
    };
    auto norm = [](const std::array<double, 4>& r) {
        double s = 0;
        for (double v : r) s += v * v;
        return std::sqrt(s);
    };

    NewtonIntersection out;
    auto r = residual(x);
    for (int it = 0; it < 100; ++it) {
        double h = x[0], c = x[1];
        std::array<std::array<double, 5>, 4> J{};
        const double be[2] = {lin.beta0, lin.beta_k};
        for (int s = 0; s < 2; ++s) {
            double z = x[2 + s];
            double E = be[s] * std::exp(-c * h * z);
            // d/d(h, c, z) of chi and chi'
            J[2 * s] = {-c * z * E, -z - h * z * E, 0, 0, r[2 * s]};
            J[2 * s][2 + s] = 2 * z - c - c * h * E;
            J[2 * s + 1] = {-c * E + c * c * h * z * E, -1 - h * E + c * h * h * z * E, 0, 0, r[2 * s + 1]};
            J[2 * s + 1][2 + s] = 2 + c * c * h * h * E;
        }
        // Gaussian elimination with partial pivoting
        for (int col = 0; col < 4; ++col) {
            int piv = col;
            for (int row = col + 1; row < 4; ++row)
                if (std::abs(J[row][col]) > std::abs(J[piv][col])) piv = row;
            std::swap(J[col], J[piv]);
            if (J[col][col] == 0) throw NumericError("h0 Newton: singular Jacobian");
            for (int row = col + 1; row < 4; ++row) {
                double f = J[row][col] / J[col][col];
                for (int k = col; k < 5; ++k) J[row][k] -= f * J[col][k];
            }
        }
        std::array<double, 4> dx{};
        for (int row = 3; row >= 0; --row) {
            double s = J[row][4];
            for (int k = row + 1; k < 4; ++k) s -= J[row][k] * dx[k];
            dx[row] = s / J[row][row];
        }
        double n0 = norm(r), t = 1.0;
        std::array<double, 4> xn{};
        bool moved = false;
        for (int k = 0; k < 30; ++k, t *= 0.5) {
            for (int i = 0; i < 4; ++i) xn[i] = x[i] - t * dx[i];
            auto rn = residual(xn);
            if (norm(rn) < n0 || norm(rn) == 0) {
                x = xn;
                r = rn;
                moved = true;
                break;
            }
        }
        out.iterations = it + 1;
        double step = 0;
        for (int i = 0; i < 4; ++i) step = std::max(step, std::abs(t * dx[i]) / (1 + std::abs(x[i])));
        if (!moved || step < 1e-15) break;
    }
    if (norm(r) > 1e-9) throw NumericError("h0 Newton: did not converge");
    out.h0 = x[0];
    out.c0 = x[1];
    out.z0 = x[2];
    out.zk = x[3];
    return out;
}

SpeedCurve speed_curve(const LinearizationData& lin, Side side, double h_min, double h_max, int n, int threads) {
    if (!(h_min >= 0 && h_min < h_max)) throw std::invalid_argument("speed_curve needs 0 <= h_min < h_max");
    if (n < 2) throw std::invalid_argument("speed_curve needs n >= 2");
    SpeedCurve curve;
    curve.side = side;
    curve.samples.resize(n);
    parallel_for(n, threads, [&](int i) {
        double h = i == n - 1 ? h_max : h_min + (h_max - h_min) * i / (n - 1);
        curve.samples[i] = critical_speed(side, h, lin);
    });
    for (int i = 1; i < n; ++i) {
        const Speed& prev = curve.samples[i - 1].c_star;
        const Speed& cur = curve.samples[i].c_star;
        if (prev.is_inf()) continue;
        if (cur.is_inf() || cur.value > prev.value + 1e-8) {
            curve.monotone = false;
            curve.violation_h = curve.samples[i].h;
            break;
        }
    }
    return curve;
}

}  // namespace wfa
