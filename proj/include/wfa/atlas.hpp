#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wfa/speeds.hpp"

namespace wfa {

enum class Region { BelowLower, InDomain, AboveUpper, OnBoundary };
const char* to_string(Region r);

struct Classification {
    Region region = Region::InDomain;
    Speed c_zero, c_kappa;
};

Classification classify_point(double h, double c, const LinearizationData& lin, double tol = 1e-8);

struct Asymptote {
    std::string kind;  // vertical | horizontal
    double value = 0.0;
    std::string label;
};

struct DomainAtlas {
    SpeedCurve lower, upper;
    std::optional<Intersection> h0;
    std::optional<double> h_fin;
    std::vector<Asymptote> asymptotes;
    bool subtangent = false;
    Hypothesis hypothesis = Hypothesis::Neither;
    std::string label;  // "cl(D_N) = D_L" when sub-tangency holds
};

DomainAtlas trace_atlas(const ModelSpec& m, double h_max, int n, int threads = 0);

// Boundary equation of the KPP class; +inf when no root below c = 1e6.
Speed kpp_upper_boundary(double h, double beta_k);

struct NicholsonBoundaries {
    Speed c_zero, c_kappa;
    double mismatch = 0.0;  // against the generic double-root solver
};

// Explicit equations; throws NumericError if they disagree with the generic solver by more than 1e-6.
NicholsonBoundaries nicholson_boundaries(double h, double p, double delta);
Speed nicholson_zero_explicit(double h, double p, double delta);
Speed nicholson_kappa_explicit(double h, double p, double delta, double beta_k);

struct Nu0 {
    double nu0 = 0, t0 = 0;
    double nu0_theta = 0;  // from theta = theta1 along the family p/delta
};
Nu0 nicholson_nu0();

double nicholson_h_a(double beta_k, double delta);

struct BetaKappaMinus {
    double beta_minus = 0.0;
    bool equals_beta_k = true;  // p/delta <= e^2: the standard curve applies
    double h_a_minus = 0.0;
    std::optional<double> h0_minus;
};

BetaKappaMinus beta_kappa_minus(const ModelSpec& m);
Speed c_kappa_minus(double h, double p, double delta, double beta_minus);

struct NicholsonConstants {
    double p = 0, delta = 0, kappa = 0, beta_k = 0;
    std::optional<double> h_a;  // absent when beta_k >= 0
    Nu0 nu;
    std::optional<BetaKappaMinus> minus;
    std::optional<Intersection> h0;
};

NicholsonConstants nicholson_constants(double p, double delta);

}  // namespace wfa
