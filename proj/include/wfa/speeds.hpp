#pragma once

#include <optional>
#include <vector>

#include "wfa/charspec.hpp"

namespace wfa {

// Speed value or the +infinity marker. Never an IEEE infinity in arithmetic.
struct Speed {
    double value = 0.0;
    bool infinite = false;

    static Speed inf() { return {0.0, true}; }
    static Speed of(double v) { return {v, false}; }
    bool is_inf() const { return infinite; }
    // ordering with +inf on top
    bool less(const Speed& o) const { return !infinite && (o.infinite || value < o.value); }
};

struct CriticalSpeedResult {
    double h = 0.0;
    Speed c_star;
    std::optional<double> double_root;  // z with chi = chi' = 0
    Side side = Side::AtZero;
    double chi_residual = 0.0, dchi_residual = 0.0;
};

struct AsymptoticConstants {
    double omega0 = 0, omega_k = 0, theta1 = 0, theta = 0;
};

enum class RootSign { Positive, Negative };

double omega_const(double alpha, double beta, RootSign sign);
double theta_const(double alpha, double beta, RootSign sign);  // sqrt(2w/b) e^{w/2}
AsymptoticConstants asymptotic_constants(const LinearizationData& lin);

CriticalSpeedResult critical_speed_zero(double h, const LinearizationData& lin);
CriticalSpeedResult critical_speed_kappa(double h, const LinearizationData& lin);
CriticalSpeedResult critical_speed(Side side, double h, const LinearizationData& lin);

// c_kappa is +inf exactly on [0, h_fin]; h_fin = +inf if never finite.
bool kappa_speed_infinite(double h, const LinearizationData& lin);
double h_fin(const LinearizationData& lin);

struct Intersection {
    double h0 = 0.0;
    double c0 = 0.0;
    double slope = 0.0;  // d/dh (c_kappa - c_zero) at h0
    bool transversal = false;
};

// nullopt when theta >= theta1 (domain unbounded to the right).
std::optional<Intersection> h_star_intersection(const LinearizationData& lin);

// Independent route: Newton on (h, c, z0, zk) for the two simultaneous double roots.
struct NewtonIntersection {
    double h0 = 0, c0 = 0, z0 = 0, zk = 0;
    int iterations = 0;
};
NewtonIntersection h_star_newton(const LinearizationData& lin, double h_seed);

struct SpeedCurve {
    Side side = Side::AtZero;
    std::vector<CriticalSpeedResult> samples;
    bool monotone = true;  // non-increasing within 1e-8
    std::optional<double> violation_h;
};

SpeedCurve speed_curve(const LinearizationData& lin, Side side, double h_min, double h_max, int n,
                       int threads = 0);

}  // namespace wfa
