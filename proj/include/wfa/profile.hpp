#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wfa/atlas.hpp"

namespace wfa {

enum class Seed { Tanh, Ramp };
enum class Quadrature { Green, Trapezoid };
const char* to_string(Seed s);
const char* to_string(Quadrature q);

struct ProfileOptions {
    std::optional<double> L;  // default max(60/lambda, 60/|lambda2|)
    int n = 4096;
    double tol = 1e-8;
    int max_iter = 20000;  // total sweeps over all anchoring rounds
    double damping = 0.5;
    Seed seed = Seed::Tanh;
    // Green: exact inverse of the three-point operator (discrete kernel).
    // Trapezoid: the continuous kernels with trapezoid weights and closed-form tails.
    Quadrature quadrature = Quadrature::Green;
    bool force = false;
};

// Nodes t_i = -L + i*dt. Nodes with t <= 0 carry phi, nodes with t > 0 carry
// psi = kappa - phi, so the right tail keeps full relative precision. Both views
// are stored for every node.
struct WaveProfile {
    double c = 0, h = 0, kappa = 1, L = 0, dt = 0;
    std::vector<double> t, phi, psi, dphi;
    std::size_t split = 0;  // first node of the psi chart

    // extensions beyond the grid: phi(s) = tail_left*e^{lambda(s+L)}, psi(s) = tail_right*e^{lambda2(s-L)}
    double lambda = 0, lambda2 = 0;
    double tail_left = 0, tail_right = 0;
    bool lambda_fallback = false;  // outside the domain, rates not from real roots

    double residual = 0;
    double last_change = 0;
    int iterations = 0, rounds = 0;
    bool converged = false, anchored = false, diverged = false;
    Quadrature quadrature = Quadrature::Green;
    Region region = Region::InDomain;

    std::size_t size() const { return t.size(); }
    double phi_at(double s) const;  // cubic interpolation, tail-extended
    double psi_at(double s) const;
};

// Profile built from samples, with flat or given tails; used for fixtures.
WaveProfile make_profile(std::vector<double> t, std::vector<double> phi, double c, double h, double kappa,
                         double lambda = 0.0, double lambda2 = 0.0);

WaveProfile solve_profile(const ModelSpec& m, double h, double c, const ProfileOptions& opts = {});

// sup over interior nodes of |phi'' - c phi' + f(phi, phi(t - ch))| by central differences
double residual(const WaveProfile& w, const ModelSpec& m);
// nodewise values of the same expression, NaN at the two end nodes
std::vector<double> residual_nodes(const WaveProfile& w, const ModelSpec& m);

// One undamped application of the fixed-point map; returns sup |A[phi] - phi|.
double operator_change(const WaveProfile& w, const ModelSpec& m);

struct MonotoneCheck {
    bool monotone = true;
    std::optional<std::size_t> index;
    std::optional<double> t;
    double min_dphi = 0;
};
MonotoneCheck check_monotone(const WaveProfile& w, std::optional<double> tol = {});
bool strictly_between(const WaveProfile& w);  // 0 < phi < kappa at interior nodes

struct TailExponents {
    double lambda_minus = 0, lambda_plus = 0;
    double r2_minus = 0, r2_plus = 0;
    int nodes_minus = 0, nodes_plus = 0;
    double window_minus[2] = {0, 0}, window_plus[2] = {0, 0};
    // ratios against lambda(c) and lambda2(c), when the profile carries them
    std::optional<double> ratio_minus, ratio_plus;
};
// throws NumericError("insufficient tail ...") with fewer than 20 usable nodes
TailExponents estimate_exponents(const WaveProfile& w);

int sign_changes(const std::vector<double>& v);
// segment values on [t - ch, t] followed by the derivative at t
int lyapunov_vminus(const std::vector<double>& segment, double derivative);

struct WindowDiagnostic {
    double t = 0;
    int sc = 0, vminus = 1;
};
struct OscillationDiagnostic {
    std::vector<WindowDiagnostic> windows;
    int max_vminus = 1;
    bool all_odd = true;
};
// V- of psi = kappa - phi on windows [t - ch, t] at every psi-chart node (stride)
OscillationDiagnostic tail_diagnostic(const WaveProfile& w, int samples = 33, int stride = 1);

enum class Verdict { Monotone, EventuallyMonotoneExcluded, OscillatoryTail, Inconclusive };
const char* to_string(Verdict v);

struct VerdictReport {
    Verdict verdict = Verdict::Inconclusive;
    Classification cls;
    std::optional<WaveProfile> profile;
    std::optional<MonotoneCheck> monotone;
    std::optional<OscillationDiagnostic> diagnostic;
    std::optional<TailExponents> exponents;
};

VerdictReport oscillation_verdict(const ModelSpec& m, double h, double c, const ProfileOptions& opts = {});

}  // namespace wfa
