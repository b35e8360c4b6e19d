#pragma once
#include <functional>
#include <stdexcept>
#include "vfy/complexutil.hpp"

namespace vfy {

using RealFn = std::function<double(double)>;
using CxFn = std::function<Cx(double)>;
using RealFn2 = std::function<double(double, double)>;

// Phase h with derivative oracles and the scale metadata (Y, Q, R):
// |h^{(j)}| ~ Y/Q^j on the support, |h'| >= R where nonstationary.
struct PhaseSpec {
    RealFn h, h1, h2, h3;
    double Y = 1.0, Q = 1.0, R = 0.0;
};

// Amplitude w supported on [a,b], |w^{(j)}| ~ X/U^j.
struct AmplitudeSpec {
    RealFn w, w1, w2;
    double a, b;
    double X = 1.0, U = 1.0;
};

// The standard compactly supported mollifier exp(-1/(1-u^2)) rescaled to
// [center-halfwidth, center+halfwidth], with closed-form first and second
// derivatives.
struct Bump {
    double center, halfwidth;

    Bump(double c, double hw) : center(c), halfwidth(hw) {
        if (!(hw > 0)) throw std::domain_error("Bump: halfwidth must be positive");
    }
    static double base(double u);   // exp(-1/(1-u^2)) on (-1,1), 0 outside
    static double base_d1(double u);
    static double base_d2(double u);
    static double base_mass();      // integral of base over [-1,1]

    double operator()(double x) const { return base((x - center) / halfwidth); }
    double d1(double x) const { return base_d1((x - center) / halfwidth) / halfwidth; }
    double d2(double x) const { return base_d2((x - center) / halfwidth) / (halfwidth * halfwidth); }
    double mass() const { return base_mass() * halfwidth; }
    // value of the unit-mass rescaling (integral 1 over the support)
    double normalized(double x) const { return (*this)(x) / mass(); }

    AmplitudeSpec amplitude() const;
};

// Thrown when an adaptive quadrature runs out of its evaluation budget; the
// partial estimate accumulated so far rides along.
struct QuadratureBudgetError : std::runtime_error {
    Cx partial;
    explicit QuadratureBudgetError(Cx p)
        : std::runtime_error("quadrature evaluation budget exceeded"), partial(p) {}
};

// Adaptive Gauss-Kronrod integration of a complex integrand.
Cx integrate_adaptive(const CxFn& f, double a, double b, double tol,
                      long long budget = 10000000);

// Same, but with a derivative-of-phase hint: panels are pre-split until the
// local phase variation is below pi/2, guarding against spuriously small
// error estimates on oscillatory integrands.
Cx integrate_with_phase_hint(const CxFn& f, const RealFn& dphase, double a, double b,
                             double tol, long long budget = 10000000);

// integral of w(t) e^{i h(t)} dt; panels are halved until the local phase
// variation drops below pi/2, then refined to the error tolerance.
Cx integrate_oscillatory(const AmplitudeSpec& w, const PhaseSpec& h, double tol);

// (b-a) X ((Q R / sqrt(Y))^{-A} + (R U)^{-A}): the negligibility certificate
// when |h'| >= R > 0 throughout the support.
double nonstationary_certificate(const AmplitudeSpec& w, const PhaseSpec& h, int A = 5);

// Stationary-phase asymptotics around the unique interior zero of h':
//   e^{i h(t0)} / sqrt(h''(t0)) * sum_{n < n_terms} p_n(t0),
//   p_n = sqrt(2 pi) e^{i pi/4} / n! (i / (2 h''(t0)))^n G^{(2n)}(t0),
// G = w e^{iH}, H the phase minus its quadratic jet at t0.
Cx stationary_phase_expand(const AmplitudeSpec& w, const PhaseSpec& h, int n_terms);

// 8 Var(w) / sqrt(min h'') with Var(w) = integral of |w'|.
double second_derivative_bound_1d(const AmplitudeSpec& w, const PhaseSpec& h);

// Two-dimensional amplitude on [ax,bx] x [ay,by] with a mixed-derivative
// oracle, and a 2D phase with first and second derivative oracles.
struct Amplitude2D {
    RealFn2 g, gxy;
    double ax, bx, ay, by;
};
struct Phase2D {
    RealFn2 f, fx, fy, fxx, fyy, fxy;
};

// ((1 + log((bx-ax)(by-ay)) + log L1 + log L2)/(L1 L2) + r/L2) * Var(g),
// Var(g) the integral of |g_xy|; preconditions (f_xx ~ L1^2, f_yy ~ L2^2,
// |f_xy| small, nondegenerate Hessian) checked by sampling.
double second_derivative_bound_2d(const Amplitude2D& g, const Phase2D& f,
                                  double L1, double L2, double r);

// integral of g e^{if} over the rectangle.  A separable phase (detected by
// sampling) is integrated as a product of 1D integrals; otherwise nested
// adaptive quadrature under the shared evaluation budget.
Cx integrate_oscillatory_2d(const Amplitude2D& g, const Phase2D& f, double tol);

} // namespace vfy
