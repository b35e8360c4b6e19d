#pragma once
#include <stdexcept>
#include <vector>
#include "vfy/complexutil.hpp"

namespace vfy {

// Imaginary parts (t1, t2, t3) of the Langlands parameters of a degree-3
// spectral datum.  They must sum to zero.
struct SpectralParams {
    double t1, t2, t3;

    SpectralParams(double a, double b, double c) : t1(a), t2(b), t3(c) {
        double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
        if (std::abs(a + b + c) > 1e-12 * scale)
            throw std::invalid_argument("spectral parameters must sum to zero");
    }
    // Convenience: third parameter forced by the sum-zero constraint.
    static SpectralParams balanced(double a, double b) { return {a, b, -a - b}; }
    double t(int j) const { return j == 0 ? t1 : (j == 1 ? t2 : t3); }
};

// Truncated expansion Gamma(z) ~ sqrt(2 pi / z) (z/e)^z sum_j a_j z^{-j}.
struct StirlingExpansion {
    std::vector<Cx> a; // a[0] = 1 always

    explicit StirlingExpansion(std::vector<Cx> coeffs);
    // The classical coefficients 1, 1/12, 1/288, -139/51840, ... up to order J.
    static StirlingExpansion standard(int J);
    int order() const { return (int)a.size(); }
};

// Principal-branch log Gamma, relative error of exp(log_gamma(z)) <= 1e-12
// for |z| <= 1e3.  Throws std::domain_error at the poles z = 0, -1, -2, ...
Cx log_gamma(Cx z);

// sqrt(2 pi / z) (z/e)^z sum_j a_j z^{-j}; requires |z| >= 5 and
// |arg z| <= pi - 0.01.
Cx stirling_eval(Cx z, const StirlingExpansion& exp);

// Gamma(z)/Gamma(1/2 - z) - cos(pi z) Gamma(2z) / (sqrt(pi) 2^{2z-1}).
// Identically zero in exact arithmetic (Legendre duplication rearranged).
Cx duplication_residual(Cx z);

// log of  pi^{-3s-3/2}/2 * prod_j Gamma((1+s+i t_j+ell)/2) / Gamma((-s-i t_j+ell)/2),
// ell in {0,1}.  All Gamma-ratio work happens in log space.
Cx gamma_ell_log(Cx s, const SpectralParams& t, int ell);
Cx gamma_ell(Cx s, const SpectralParams& t, int ell);

// gamma_{+-}(s) = gamma_0(s) -+ i gamma_1(s); sign = +1 or -1.
Cx gamma_pm(Cx s, const SpectralParams& t, int sign);

// Stirling-based majorant for |gamma_0(sigma + i tau)|:
//   (2 pi)^{-3 sigma} prod_j |tau + t_j|^{1/2+sigma}
//       (1 + (1+sigma)^2/(tau+t_j)^2)^{1/4 + sigma/2}.
double gamma0_majorant(double sigma, double tau, const SpectralParams& t);

// log of prod_{i<=3, j<=2} Gamma_R(s - mu_{f,j} - i t_i) with
// Gamma_R(s) = pi^{-s/2} Gamma(s/2), mu_{f,1} = -(k-1)/2, mu_{f,2} = -k/2.
Cx rankin_gamma_log(Cx s, int weight, const SpectralParams& t);
Cx rankin_gamma_factor(Cx s, int weight, const SpectralParams& t);

// Bessel function of the first kind, non-negative integer order,
// absolute error <= 1e-12 for x <= 1e5.
double bessel_j(int order, double x);

// Writes J_{order}(4 pi z) = e(2z) W + e(-2z) conj(W).  W is slowly varying
// (|W| ~ z^{-1/2}) once z >= 1; below that the same exact Hankel split is
// returned but flagged, since W is no longer "flat".
struct BesselSplit {
    Cx W;
    Cx Wbar;           // = conj(W)
    bool small_z_fallback; // true when z < 1
};
BesselSplit bessel_oscillatory_split(int order, double z);

} // namespace vfy
