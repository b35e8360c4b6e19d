#pragma once
#include <complex>
#include <cmath>

namespace vfy {

using Cx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846264338327950288;
inline constexpr double TWO_PI = 2.0 * PI;

// e(x) = exp(2*pi*i*x), the standard additive character.
inline Cx e_of(double x) {
    return {std::cos(TWO_PI * x), std::sin(TWO_PI * x)};
}

// exp(i*t) without going through a complex exponential.
inline Cx expi(double t) {
    return {std::cos(t), std::sin(t)};
}

inline double sqr(double x) { return x * x; }

} // namespace vfy
