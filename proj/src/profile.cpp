#include "wfa/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wfa/kernels.hpp"
#include "wfa/numeric.hpp"

namespace wfa {

const char* to_string(Seed s) { return s == Seed::Tanh ? "tanh" : "ramp"; }
const char* to_string(Quadrature q) { return q == Quadrature::Green ? "green" : "trapezoid"; }

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Monotone: return "monotone";
    case Verdict::EventuallyMonotoneExcluded: return "eventually-monotone-excluded";
    case Verdict::OscillatoryTail: return "oscillatory-tail";
    default: return "inconclusive";
    }
}

namespace {

// below this psi the right chart uses the linearization at kappa
constexpr double kDeviation = 1e-8;

struct Lagrange {
    double w[4];
};

// cubic through nodes at -1, 0, 1, 2, evaluated at x
Lagrange lagrange(double x) {
    return {{-x * (x - 1) * (x - 2) / 6, (x + 1) * (x - 1) * (x - 2) / 2, -(x + 1) * x * (x - 2) / 2,
             (x + 1) * x * (x - 1) / 6}};
}

// Read-only view of both charts plus the tail extensions.
struct View {
    const double* phi;
    const double* psi;
    std::size_t n;
    double L, dt, kappa, lam, lam2, tail_left, tail_right;

    double left_tail(double s) const { return tail_left * std::exp(lam * (s + L)); }
    double right_tail(double s) const { return tail_right * std::exp(lam2 * (s - L)); }

    // node value including virtual nodes off the grid
    double node(bool want_psi, long j) const {
        if (j < 0) {
            double v = tail_left * std::exp(lam * j * dt);
            return want_psi ? kappa - v : v;
        }
        if (j >= static_cast<long>(n)) {
            double v = tail_right * std::exp(lam2 * (j - static_cast<long>(n) + 1) * dt);
            return want_psi ? v : kappa - v;
        }
        return want_psi ? psi[j] : phi[j];
    }

    double at(bool want_psi, double s) const {
        if (s < -L) return want_psi ? kappa - left_tail(s) : left_tail(s);
        if (s > L) return want_psi ? right_tail(s) : kappa - right_tail(s);
        double u = (s + L) / dt;
        long k = std::clamp(static_cast<long>(std::floor(u)), 0L, static_cast<long>(n) - 2);
        auto lg = lagrange(u - k);
        double v = 0;
        for (int q = 0; q < 4; ++q) v += lg.w[q] * node(want_psi, k - 1 + q);
        return v;
    }
};

View view_of(const WaveProfile& w) {
    return {w.phi.data(), w.psi.data(), w.size(), w.L, w.dt, w.kappa, w.lambda, w.lambda2, w.tail_left,
            w.tail_right};
}

// phi(t_i - r) and psi(t_i - r) for every node: a constant 4-tap filter on the
// padded views, exact left tail where t_i - r < -L.
void delayed(const View& v, double r, std::vector<double>& phit, std::vector<double>& psit,
             std::vector<double>& ext) {
    const std::size_t n = v.n;
    phit.resize(n);
    psit.resize(n);
    double q = r / v.dt;
    auto m = static_cast<std::size_t>(std::floor(q));
    double theta = q - static_cast<double>(m);
    double x = theta == 0.0 ? 1.0 : 1.0 - theta;
    auto lg = lagrange(x);
    std::size_t i_min = theta == 0.0 ? m : m + 1;
    double t0 = -v.L;
    for (std::size_t i = 0; i < std::min(i_min, n); ++i) {
        double s = t0 + i * v.dt - r;
        phit[i] = v.left_tail(s);
        psit[i] = v.kappa - phit[i];
    }
    if (i_min >= n) return;
    ext.resize(n + 3);
    for (int want_psi = 0; want_psi < 2; ++want_psi) {
        for (long j = -2; j <= static_cast<long>(n); ++j) ext[j + 2] = v.node(want_psi, j);
        double* out = want_psi ? psit.data() : phit.data();
        kernels::fir4(ext.data() + (i_min - m), lg.w, out + i_min, n - i_min);
    }
}

std::size_t first_positive(const std::vector<double>& t) {
    return static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), 0.0) - t.begin());
}

struct Rates {
    double lam, lam2;
    bool fallback = false;
};

Rates rates_for(double c, double h, const LinearizationData& lin, Region region) {
    Rates r{};
    auto l = lambda_zero(c, h, lin);
    if (!l && region == Region::OnBoundary) l = critical_speed_zero(h, lin).double_root;
    auto l2 = lambda2_kappa(c, h, lin);
    if (!l2 && region == Region::OnBoundary) l2 = critical_speed_kappa(h, lin).double_root;
    if (l && *l > 0) {
        r.lam = *l;
    } else {
        r.lam = std::max(0.5 * c, 0.1);
        r.fallback = true;
    }
    if (l2 && *l2 < 0) {
        r.lam2 = *l2;
    } else {
        r.lam2 = 0.5 * (c - std::sqrt(c * c + 4));
        r.fallback = true;
    }
    return r;
}

class Solver {
public:
    Solver(const ModelSpec& m, const LinearizationData& lin, double c, double h, double L, std::size_t n,
           double lam, double lam2, Quadrature quad)
        : m_(m), c_(c), r_(c * h), kappa_(m.kappa), L_(L), n_(n), lam_(lam), lam2_(lam2), quad_(quad),
          ak_(lin.alpha_k), bk_(lin.beta_k) {
        dt_ = 2 * L / static_cast<double>(n - 1);
        t_.resize(n);
        for (std::size_t i = 0; i < n; ++i) t_[i] = -L + i * dt_;
        t_[n - 1] = L;
        split_ = first_positive(t_);
        y_.assign(n, 0.0);
        phi_.resize(n);
        psi_.resize(n);
        H_.resize(n);
        G_.resize(n);
        out_.resize(n);
        A_ = 1 / (dt_ * dt_) + c / (2 * dt_);
        B_ = -2 / (dt_ * dt_) - 1;
        C_ = 1 / (dt_ * dt_) - c / (2 * dt_);
        factor();
    }

    const std::vector<double>& t() const { return t_; }
    std::vector<double>& y() { return y_; }
    std::size_t split() const { return split_; }
    double dt() const { return dt_; }
    double K() const { return K_; }
    void set_K(double K) { K_ = K; }

    void sync() {
        for (std::size_t i = 0; i < split_; ++i) {
            phi_[i] = y_[i];
            psi_[i] = kappa_ - y_[i];
        }
        for (std::size_t i = split_; i < n_; ++i) {
            psi_[i] = y_[i];
            phi_[i] = kappa_ - y_[i];
        }
    }

    View view() const {
        return {phi_.data(), psi_.data(), n_, L_, dt_, kappa_, lam_, lam2_, K_ * std::exp(-lam_ * L_),
                psi_[n_ - 1]};
    }

    // out_ = A[y] in chart coordinates
    const std::vector<double>& apply() {
        sync();
        View v = view();
        delayed(v, r_, phit_, psit_, ext_);
        for (std::size_t i = 0; i < split_; ++i) {
            H_[i] = phi_[i] + m_.f(phi_[i], phit_[i]);
            G_[i] = kappa_ - H_[i];
        }
        for (std::size_t i = split_; i < n_; ++i) {
            double f;
            if (std::max(psi_[i], psit_[i]) <= kDeviation * kappa_)
                f = -ak_ * psi_[i] - bk_ * psit_[i];
            else
                f = m_.f(phi_[i], phit_[i]);
            G_[i] = psi_[i] - f;
            H_[i] = kappa_ - G_[i];
        }
        if (quad_ == Quadrature::Green)
            green();
        else
            trapezoid();
        return out_;
    }

private:
    void factor() {
        cp_.resize(n_);
        inv_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            double a = i == 0 ? 0.0 : (i == split_ ? -A_ : A_);
            double b = i == n_ - 1 ? B_ + C_ * std::exp(lam2_ * dt_) : B_;
            double cc = i == n_ - 1 ? 0.0 : (i + 1 == split_ ? -C_ : C_);
            double den = i == 0 ? b : b - a * cp_[i - 1];
            inv_[i] = 1 / den;
            cp_[i] = cc * inv_[i];
        }
    }

    void green() {
        auto& d = out_;
        for (std::size_t i = 0; i < n_; ++i) d[i] = i < split_ ? -H_[i] : -G_[i];
        d[0] -= A_ * K_ * std::exp(lam_ * (-L_ - dt_));
        d[split_ - 1] -= C_ * kappa_;
        d[split_] -= A_ * kappa_;
        d[0] *= inv_[0];
        for (std::size_t i = 1; i < n_; ++i) {
            double a = i == split_ ? -A_ : A_;
            d[i] = (d[i] - a * d[i - 1]) * inv_[i];
        }
        for (std::size_t i = n_ - 1; i-- > 0;) d[i] -= cp_[i] * d[i + 1];
    }

    void trapezoid() {
        const double s = std::sqrt(c_ * c_ + 4);
        const double z1 = 0.5 * (c_ - s), z2 = 0.5 * (c_ + s);
        const double e1 = std::exp(z1 * dt_), e2 = std::exp(-z2 * dt_), hw = 0.5 * dt_;
        std::vector<double>& I1 = tmp1_;
        std::vector<double>& J2 = tmp2_;
        I1.resize(n_);
        J2.resize(n_);
        // left outputs: I1 + I2 in H, right outputs: J1 + J2 in G = kappa - H
        // trapezoid sums of the two kernels against a constant; H and G charts
        // stay consistent only with these, not with the exact 1/|z1| and 1/z2
        const double q1 = hw * (1 + e1) / (1 - e1), q2 = hw * (1 + e2) / (1 - e2);
        I1[0] = (1 + c_ * lam_ - lam_ * lam_) * K_ * std::exp(-lam_ * L_) / (lam_ - z1);
        double J1 = kappa_ * q1 - I1[0];
        for (std::size_t i = 1; i < n_; ++i) I1[i] = e1 * I1[i - 1] + hw * (e1 * H_[i - 1] + H_[i]);
        J2[n_ - 1] = (1 + c_ * lam2_ - lam2_ * lam2_) * psi_[n_ - 1] / (z2 - lam2_);
        double I2 = kappa_ * q2 - J2[n_ - 1];
        for (std::size_t i = n_ - 1; i-- > 0;) J2[i] = e2 * J2[i + 1] + hw * (e2 * G_[i + 1] + G_[i]);
        const double inv = 1 / (q1 + q2);
        // I2 sweeps right to left, J1 left to right
        for (std::size_t i = n_ - 1; i-- > 0;) {
            I2 = e2 * I2 + hw * (e2 * H_[i + 1] + H_[i]);
            if (i < split_) out_[i] = (I1[i] + I2) * inv;
        }
        if (split_ == 0) out_[0] = (J1 + J2[0]) * inv;
        for (std::size_t i = 1; i < n_; ++i) {
            J1 = e1 * J1 + hw * (e1 * G_[i - 1] + G_[i]);
            if (i >= split_) out_[i] = (J1 + J2[i]) * inv;
        }
    }

    const ModelSpec& m_;
    double c_, r_, kappa_, L_;
    std::size_t n_, split_ = 0;
    double lam_, lam2_;
    Quadrature quad_;
    double ak_, bk_;
    double dt_ = 0, K_ = 1;
    double A_ = 0, B_ = 0, C_ = 0;
    std::vector<double> t_, y_, phi_, psi_, phit_, psit_, ext_, H_, G_, out_, cp_, inv_, tmp1_, tmp2_;
};

void fill_views(WaveProfile& w, const std::vector<double>& y) {
    std::size_t n = w.size();
    w.phi.resize(n);
    w.psi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < w.split) {
            w.phi[i] = y[i];
            w.psi[i] = w.kappa - y[i];
        } else {
            w.psi[i] = y[i];
            w.phi[i] = w.kappa - y[i];
        }
    }
}

void fill_derivative(WaveProfile& w) {
    const std::size_t n = w.size();
    View v = view_of(w);
    std::vector<double> dl(n), dr(n);
    const double s = 1 / (2 * w.dt);
    kernels::central_diff(w.phi.data(), dl.data(), n, s);
    kernels::central_diff(w.psi.data(), dr.data(), n, s);
    dl[0] = s * (v.node(false, 1) - v.node(false, -1));
    dr[n - 1] = s * (v.node(true, n) - v.node(true, static_cast<long>(n) - 2));
    dr[0] = s * (v.node(true, 1) - v.node(true, -1));
    w.dphi.resize(n);
    for (std::size_t i = 0; i < n; ++i) w.dphi[i] = i < w.split ? dl[i] : -dr[i];
}

// f at every node in the same form the solver uses
std::vector<double> node_f(const WaveProfile& w, const ModelSpec& m, const LinearizationData& lin) {
    std::vector<double> phit, psit, ext;
    delayed(view_of(w), w.c * w.h, phit, psit, ext);
    std::vector<double> f(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i >= w.split && std::max(w.psi[i], psit[i]) <= kDeviation * w.kappa)
            f[i] = -lin.alpha_k * w.psi[i] - lin.beta_k * psit[i];
        else
            f[i] = m.f(w.phi[i], phit[i]);
    }
    return f;
}

double interp_root(const View& v, std::size_t k, double target, double t_lo) {
    auto g = [&](double s) { return v.at(false, s) - target; };
    double a = t_lo, b = t_lo + v.dt;
    if ((g(a) > 0) == (g(b) > 0)) return a + (target - v.node(false, k)) /
                                             (v.node(false, k + 1) - v.node(false, k)) * v.dt;
    return bisect(g, a, b, 1e-15 * std::max(1.0, std::abs(a)));
}

}  // namespace

double WaveProfile::phi_at(double s) const { return view_of(*this).at(false, s); }
double WaveProfile::psi_at(double s) const { return view_of(*this).at(true, s); }

WaveProfile make_profile(std::vector<double> t, std::vector<double> phi, double c, double h, double kappa,
                         double lambda, double lambda2) {
    if (t.size() != phi.size() || t.size() < 4) throw std::invalid_argument("make_profile: bad sizes");
    WaveProfile w;
    w.c = c;
    w.h = h;
    w.kappa = kappa;
    w.L = t.back();
    w.dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    w.split = first_positive(t);
    w.t = std::move(t);
    w.psi.resize(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) w.psi[i] = kappa - phi[i];
    w.phi = std::move(phi);
    w.lambda = lambda;
    w.lambda2 = lambda2;
    w.tail_left = w.phi.front();
    w.tail_right = w.psi.back();
    fill_derivative(w);
    w.converged = true;
    return w;
}

WaveProfile solve_profile(const ModelSpec& m, double h, double c, const ProfileOptions& opts) {
    if (!(h >= 0)) throw std::invalid_argument("solve_profile: h must be >= 0");
    if (!(c > 0)) throw std::invalid_argument("solve_profile: c must be > 0");
    if (!(opts.damping > 0 && opts.damping <= 1)) throw std::invalid_argument("damping must be in (0, 1]");
    if (opts.n < 16) throw std::invalid_argument("n must be >= 16");
    if (!(opts.tol > 0)) throw std::invalid_argument("tol must be > 0");
    if (opts.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

    auto lin = linearization(m);
    auto cls = classify_point(h, c, lin);
    if (!opts.force && cls.region != Region::InDomain && cls.region != Region::OnBoundary) {
        std::ostringstream os;
        os << "(h, c) = (" << h << ", " << c << ") is " << to_string(cls.region)
           << "; no monotone front exists there (use force for a diagnostic run)";
        throw std::invalid_argument(os.str());
    }
    auto rt = rates_for(c, h, lin, cls.region);
    const double kappa = m.kappa;

    double L = opts.L ? *opts.L : std::max(60 / rt.lam, 60 / std::abs(rt.lam2));
    if (!(L > 0)) throw std::invalid_argument("L must be > 0");

    for (int attempt = 0;; ++attempt) {
        auto n = static_cast<std::size_t>(opts.n);
        // keep the cell Peclet number c*dt <= 1
        if (c * 2 * L / static_cast<double>(n - 1) > 1) n = static_cast<std::size_t>(std::ceil(2 * L * c)) + 1;

        Solver S(m, lin, c, h, L, n, rt.lam, rt.lam2, opts.quadrature);
        const auto& t = S.t();
        auto& y = S.y();
        const std::size_t split = S.split();
        if (opts.seed == Seed::Tanh) {
            S.set_K(kappa);
            // kappa/2 (1 + tanh(lam t/2)); both charts read the same expression in |t|
            for (std::size_t i = 0; i < n; ++i) {
                double e = std::exp(-rt.lam * std::abs(t[i]));
                y[i] = kappa * e / (1 + e);
            }
        } else {
            S.set_K(0.5 * kappa);
            const double wdt = 2 / rt.lam;
            for (std::size_t i = 0; i < n; ++i) {
                double p = kappa * std::clamp((t[i] + wdt) / (2 * wdt), 0.0, 1.0);
                y[i] = i < split ? p : kappa - p;
            }
        }

        WaveProfile w;
        w.c = c;
        w.h = h;
        w.kappa = kappa;
        w.L = L;
        w.dt = S.dt();
        w.t = t;
        w.split = split;
        w.lambda = rt.lam;
        w.lambda2 = rt.lam2;
        w.lambda_fallback = rt.fallback;
        w.quadrature = opts.quadrature;
        w.region = cls.region;

        std::vector<double> target;
        int total = 0;
        bool ok = false;
        for (int round = 0; round < 20 && total < opts.max_iter; ++round) {
            w.rounds = round + 1;
            ok = false;
            while (total < opts.max_iter) {
                target = S.apply();
                double change = kernels::blend_maxdiff(y.data(), target.data(), opts.damping, n);
                ++total;
                w.last_change = change;
                if (!std::isfinite(change) || change > 1e6 * kappa) {
                    w.diverged = true;
                    break;
                }
                if (change <= opts.tol) {
                    ok = true;
                    break;
                }
            }
            if (!ok) break;
            S.sync();
            View v = S.view();
            double mid = 0.5 * kappa;
            if (std::abs(v.at(false, 0.0) - mid) <= opts.tol * kappa) {
                w.anchored = true;
                break;
            }
            // first crossing of kappa/2 from the left
            std::size_t k = 0;
            while (k + 1 < n && !(v.phi[k] < mid && v.phi[k + 1] >= mid)) ++k;
            if (k + 1 >= n) break;
            double ts = interp_root(v, k, mid, t[k]);
            std::vector<double> shifted(n);
            for (std::size_t i = 0; i < n; ++i) shifted[i] = v.at(i >= split, t[i] + ts);
            y = shifted;
            S.set_K(S.K() * std::exp(rt.lam * ts));
        }
        w.iterations = total;
        w.converged = ok;
        S.sync();
        fill_views(w, y);
        w.tail_left = S.K() * std::exp(-rt.lam * L);
        w.tail_right = w.psi[n - 1];
        fill_derivative(w);
        w.residual = residual(w, m);

        bool wide_enough = w.phi.front() < 0.05 * kappa && w.psi.back() < 0.05 * kappa;
        if (wide_enough || w.diverged || attempt >= 4 || !ok) return w;
        L *= 1.5;
    }
}

std::vector<double> residual_nodes(const WaveProfile& w, const ModelSpec& m) {
    auto lin = linearization(m);
    auto f = node_f(w, m, lin);
    const std::size_t n = w.size();
    std::vector<double> r(n, std::numeric_limits<double>::quiet_NaN());
    const double a = 1 / (w.dt * w.dt), b = w.c / (2 * w.dt);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (i < w.split) {
            const double* y = w.phi.data();
            r[i] = a * ((y[i + 1] - 2.0 * y[i]) + y[i - 1]) - b * (y[i + 1] - y[i - 1]) + f[i];
        } else {
            const double* y = w.psi.data();
            r[i] = -(a * ((y[i + 1] - 2.0 * y[i]) + y[i - 1]) - b * (y[i + 1] - y[i - 1])) + f[i];
        }
    }
    return r;
}

double residual(const WaveProfile& w, const ModelSpec& m) {
    auto lin = linearization(m);
    auto g = node_f(w, m, lin);
    const std::size_t n = w.size();
    const double a = 1 / (w.dt * w.dt), b = w.c / (2 * w.dt);
    double left = kernels::stencil_maxabs(w.phi.data(), g.data(), std::min(w.split + 1, n), a, b);
    for (std::size_t i = w.split; i < n; ++i) g[i] = -g[i];
    double right = 0;
    if (w.split > 0 && w.split < n)
        right = kernels::stencil_maxabs(w.psi.data() + w.split - 1, g.data() + w.split - 1, n - w.split + 1, a, b);
    if (std::isnan(left) || std::isnan(right)) return std::numeric_limits<double>::quiet_NaN();
    return std::max(left, right);
}

double operator_change(const WaveProfile& w, const ModelSpec& m) {
    auto lin = linearization(m);
    Solver S(m, lin, w.c, w.h, w.L, w.size(), w.lambda, w.lambda2, w.quadrature);
    S.set_K(w.tail_left * std::exp(w.lambda * w.L));
    auto& y = S.y();
    for (std::size_t i = 0; i < w.size(); ++i) y[i] = i < S.split() ? w.phi[i] : w.psi[i];
    const auto& out = S.apply();
    double mx = 0;
    for (std::size_t i = 0; i < w.size(); ++i) mx = std::max(mx, std::abs(out[i] - y[i]));
    return mx;
}

MonotoneCheck check_monotone(const WaveProfile& w, std::optional<double> tol) {
    double tl = tol ? *tol : 1e-8 * w.kappa;
    MonotoneCheck r;
    r.min_dphi = w.dphi.empty() ? 0.0 : w.dphi[0];
    for (std::size_t i = 0; i < w.dphi.size(); ++i) {
        r.min_dphi = std::min(r.min_dphi, w.dphi[i]);
        if (r.monotone && w.dphi[i] < -tl) {
            r.monotone = false;
            r.index = i;
            r.t = w.t[i];
        }
    }
    return r;
}

bool strictly_between(const WaveProfile& w) {
    for (std::size_t i = 1; i + 1 < w.size(); ++i) {
        if (i < w.split ? !(w.phi[i] > 0) : !(w.psi[i] > 0)) return false;
        if (i < w.split ? !(w.psi[i] > 0) : !(w.phi[i] > 0)) return false;
    }
    return true;
}

namespace {

struct Fit {
    double slope, r2;
};

Fit line_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    double slope = sxy / sxx;
    double r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
    return {slope, r2};
}

}  // namespace

TailExponents estimate_exponents(const WaveProfile& w) {
    const double floor = 1e-12 * w.kappa;
    const std::size_t n = w.size();
    TailExponents e;

    // walk outward from the centre while the tail is above the floor
    std::size_t lo = w.split == 0 ? 0 : w.split - 1;
    while (lo > 0 && w.phi[lo - 1] > floor) --lo;
    std::size_t hi = std::min(w.split, n - 1);
    while (hi + 1 < n && w.psi[hi + 1] > floor) ++hi;

    std::vector<double> x, y;
    double t_lo = w.t[lo];
    for (std::size_t i = lo; i < w.split && w.t[i] <= 0.5 * t_lo; ++i) {
        x.push_back(w.t[i]);
        y.push_back(std::log(w.phi[i]));
    }
    if (x.size() < 20)
        throw NumericError("insufficient tail: " + std::to_string(x.size()) + " usable nodes on the left");
    auto fl = line_fit(x, y);
    e.lambda_minus = fl.slope;
    e.r2_minus = fl.r2;
    e.nodes_minus = static_cast<int>(x.size());
    e.window_minus[0] = t_lo;
    e.window_minus[1] = x.back();

    x.clear();
    y.clear();
    double t_hi = w.t[hi];
    for (std::size_t i = w.split; i <= hi; ++i) {
        if (w.t[i] < 0.5 * t_hi) continue;
        x.push_back(w.t[i]);
        y.push_back(std::log(w.psi[i]));
    }
    if (x.size() < 20)
        throw NumericError("insufficient tail: " + std::to_string(x.size()) + " usable nodes on the right");
    auto fr = line_fit(x, y);
    e.lambda_plus = fr.slope;
    e.r2_plus = fr.r2;
    e.nodes_plus = static_cast<int>(x.size());
    e.window_plus[0] = x.front();
    e.window_plus[1] = t_hi;

    if (w.lambda > 0 && !w.lambda_fallback) e.ratio_minus = e.lambda_minus / w.lambda;
    if (w.lambda2 < 0 && !w.lambda_fallback) e.ratio_plus = e.lambda_plus / w.lambda2;
    return e;
}

int sign_changes(const std::vector<double>& v) {
    int sc = 0, last = 0;
    for (double x : v) {
        int s = x > 0 ? 1 : (x < 0 ? -1 : 0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++sc;
        last = s;
    }
    return sc;
}

int lyapunov_vminus(const std::vector<double>& segment, double derivative) {
    if (segment.empty()) throw std::invalid_argument("lyapunov_vminus: empty segment");
    std::vector<double> ext = segment;
    ext.push_back(derivative);
    int sc = sign_changes(ext);
    return sc % 2 == 1 ? sc : sc + 1;
}

OscillationDiagnostic tail_diagnostic(const WaveProfile& w, int samples, int stride) {
    if (samples < 2 || stride < 1) throw std::invalid_argument("tail_diagnostic: samples >= 2, stride >= 1");
    OscillationDiagnostic d;
    const double ch = w.c * w.h;
    std::vector<double> seg;
    for (std::size_t i = w.split; i < w.size(); i += static_cast<std::size_t>(stride)) {
        double t = w.t[i];
        seg.clear();
        if (ch == 0) {
            seg.push_back(w.psi[i]);
        } else {
            for (int k = 0; k < samples; ++k) {
                double s = t - ch + ch * k / (samples - 1);
                seg.push_back(k == samples - 1 ? w.psi[i] : w.psi_at(s));
            }
        }
        WindowDiagnostic wd;
        wd.t = t;
        seg.push_back(-w.dphi[i]);
        wd.sc = sign_changes(seg);
        seg.pop_back();
        wd.vminus = lyapunov_vminus(seg, -w.dphi[i]);
        d.all_odd = d.all_odd && wd.vminus % 2 == 1;
        d.max_vminus = std::max(d.max_vminus, wd.vminus);
        d.windows.push_back(wd);
    }
    return d;
}

VerdictReport oscillation_verdict(const ModelSpec& m, double h, double c, const ProfileOptions& opts) {
    VerdictReport rep;
    auto lin = linearization(m);
    rep.cls = classify_point(h, c, lin);
    bool outside = rep.cls.region == Region::BelowLower || rep.cls.region == Region::AboveUpper;
    if (outside) rep.verdict = Verdict::EventuallyMonotoneExcluded;
    if (outside && !opts.force) return rep;

    ProfileOptions o = opts;
    o.force = true;
    WaveProfile w = solve_profile(m, h, c, o);
    rep.monotone = check_monotone(w);
    rep.diagnostic = tail_diagnostic(w);
    try {
        rep.exponents = estimate_exponents(w);
    } catch (const NumericError&) {
    }
    if (!outside) {
        if (w.converged && rep.monotone->monotone && strictly_between(w))
            rep.verdict = Verdict::Monotone;
        else if (w.converged && rep.diagnostic->max_vminus >= 3)
            rep.verdict = Verdict::OscillatoryTail;
        else
            rep.verdict = Verdict::Inconclusive;
    }
    rep.profile = std::move(w);
    return rep;
}

}  // namespace wfa
