#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "wfa/models.hpp"

namespace wfa {

using cplx = std::complex<double>;

enum class Side { AtZero, AtKappa };
const char* to_string(Side s);

struct CharFunction {
    Side side = Side::AtZero;
    double c = 1.0;
    double h = 0.0;
    double alpha = 0.0, beta = 0.0;

    double r() const { return c * h; }
    static CharFunction make(Side side, double c, double h, const LinearizationData& lin);
};

cplx chi(const CharFunction& cf, cplx z);
cplx dchi(const CharFunction& cf, cplx z);
double chi(const CharFunction& cf, double x);
double dchi(const CharFunction& cf, double x);

struct RealRoot {
    double value = 0.0;
    int multiplicity = 1;
    double residual = 0.0;
};

struct ComplexRoot {
    cplx z;
    double residual = 0.0;
};

struct Strip {
    double re_min = -5.0, re_max = 5.0, im_max = 50.0;
};

struct RootSet {
    std::vector<RealRoot> real_roots;        // ascending
    std::vector<ComplexRoot> complex_roots;  // Im != 0, conjugate pairs adjacent
    Strip strip;
    int winding_count = -1;  // argument-principle count over the strip, with multiplicity

    int total_count() const;
};

std::vector<RealRoot> real_roots(const CharFunction& cf);

// Number of zeros inside the rectangle by the argument principle. Throws
// NumericError if the contour passes within |chi| < 1e-9 of a zero.
int winding_count(const CharFunction& cf, double x0, double x1, double y0, double y1);

RootSet complex_roots_in_strip(const CharFunction& cf, const Strip& strip);

// A strip around the interesting part of the spectrum, used when none is given.
Strip default_strip(const CharFunction& cf);

// lambda(c): smallest positive real root at zero; lambda2(c): largest negative real
// root at kappa. Empty when absent.
std::optional<double> lambda_zero(double c, double h, const LinearizationData& lin);
std::optional<double> lambda2_kappa(double c, double h, const LinearizationData& lin);

enum class Flag { Pass, Fail, NotApplicable };
const char* to_string(Flag f);

struct RootLawReport {
    Flag ordering = Flag::NotApplicable;     // complex Re < lambda < mu at zero
    Flag separation = Flag::NotApplicable;   // complex Re < lambda2 at kappa
    Flag imag_bound = Flag::NotApplicable;   // |Im| > pi/(ch) for Re <= lambda at zero
    std::optional<cplx> ordering_offender, separation_offender, imag_offender;
    bool all_pass() const;
};

RootLawReport verify_root_laws(const CharFunction& cf, const RootSet& roots);

}  // namespace wfa
