#include "vfy/specfn.hpp"
#include <cmath>

namespace vfy {

namespace {

const double LOG_2PI = 1.837877066409345483560659472811;
const double LOG_PI  = 1.144729885849400174143427351353;

bool is_gamma_pole(Cx z) {
    if (z.imag() != 0.0) return false;
    double x = z.real();
    return x <= 0.0 && x == std::floor(x);
}

// "close enough to a pole that the value is numerically meaningless"
bool near_gamma_pole(Cx z, double tol = 1e-9) {
    if (std::abs(z.imag()) > tol) return false;
    double x = z.real();
    return x < 0.5 && std::abs(x - std::round(x)) < tol;
}

// log sin(pi z), stable for large |Im z| where sin itself overflows.
Cx log_sin_pi(Cx z) {
    double y = z.imag();
    if (std::abs(y) < 20.0)
        return std::log(std::sin(PI * z));
    // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / (2i); for Im z > 0 the second
    // exponential dominates, for Im z < 0 the first.
    const Cx I(0, 1);
    if (y > 0) {
        // sin = -e^{-i pi z}/(2i) (1 - e^{2 i pi z})
        return -I * PI * z + std::log(Cx(0, 0.5)) + std::log(1.0 - std::exp(2.0 * I * PI * z));
    }
    return I * PI * z + std::log(Cx(0, -0.5)) + std::log(1.0 - std::exp(-2.0 * I * PI * z));
}

// Stirling series tail sum_{n} c_n / z^{2n-1}, c_n = B_{2n} / (2n (2n-1)),
// accurate to ~1e-16 relative once |z| >= 12.
Cx stirling_tail(Cx z) {
    static const double c[] = {
        1.0 / 12, -1.0 / 360, 1.0 / 1260, -1.0 / 1680, 1.0 / 1188,
        -691.0 / 360360, 7.0 / 1560, -3617.0 / 122400,
    };
    Cx zi = 1.0 / z, zi2 = zi * zi, term = zi, sum = 0.0;
    for (double cn : c) {
        sum += cn * term;
        term *= zi2;
    }
    return sum;
}

} // namespace

Cx log_gamma(Cx z) {
    if (is_gamma_pole(z))
        throw std::domain_error("log_gamma: pole at non-positive integer");
    if (z.real() < 0.5) {
        // Reflection: log Gamma(z) = log pi - log sin(pi z) - log Gamma(1-z).
        return LOG_PI - log_sin_pi(z) - log_gamma(1.0 - z);
    }
    Cx shift = 0.0;
    while (std::abs(z) < 12.0) {
        shift -= std::log(z);
        z += 1.0;
    }
    return shift + (z - 0.5) * std::log(z) - z + 0.5 * LOG_2PI + stirling_tail(z);
}

StirlingExpansion::StirlingExpansion(std::vector<Cx> coeffs) : a(std::move(coeffs)) {
    if (a.empty())
        throw std::invalid_argument("StirlingExpansion: need at least one coefficient");
    if (std::abs(a[0] - 1.0) > 1e-15)
        throw std::invalid_argument("StirlingExpansion: leading coefficient must be 1");
}

StirlingExpansion StirlingExpansion::standard(int J) {
    static const double coef[] = {
        1.0,
        1.0 / 12,
        1.0 / 288,
        -139.0 / 51840,
        -571.0 / 2488320,
        163879.0 / 209018880,
        5246819.0 / 75246796800,
        -534703531.0 / 902961561600,
    };
    if (J < 1 || J > (int)(sizeof coef / sizeof coef[0]))
        throw std::invalid_argument("StirlingExpansion::standard: unsupported order");
    return StirlingExpansion(std::vector<Cx>(coef, coef + J));
}

Cx stirling_eval(Cx z, const StirlingExpansion& exp) {
    if (std::abs(z) < 5.0)
        throw std::domain_error("stirling_eval: |z| must be >= 5");
    if (std::abs(std::arg(z)) > PI - 0.01)
        throw std::domain_error("stirling_eval: too close to the negative real axis");
    Cx sum = 0.0, zp = 1.0;
    for (const Cx& aj : exp.a) {
        sum += aj / zp;
        zp *= z;
    }
    // sqrt(2 pi / z) (z/e)^z, assembled in log space to dodge overflow.
    Cx logpre = 0.5 * (LOG_2PI - std::log(z)) + z * (std::log(z) - 1.0);
    return std::exp(logpre) * sum;
}

Cx duplication_residual(Cx z) {
    for (Cx arg : {z, 0.5 - z, 2.0 * z})
        if (is_gamma_pole(arg) || near_gamma_pole(arg))
            throw std::domain_error("duplication_residual: Gamma pole in one of the arguments");
    Cx lhs = std::exp(log_gamma(z) - log_gamma(0.5 - z));
    const double LOG_2 = 0.693147180559945309417232121458;
    Cx rhs = std::cos(PI * z) * std::exp(log_gamma(2.0 * z) - 0.5 * LOG_PI - (2.0 * z - 1.0) * LOG_2);
    return lhs - rhs;
}

Cx gamma_ell_log(Cx s, const SpectralParams& t, int ell) {
    if (ell != 0 && ell != 1)
        throw std::invalid_argument("gamma_ell: ell must be 0 or 1");
    const Cx I(0, 1);
    Cx acc = (-3.0 * s - 1.5) * LOG_PI - std::log(Cx(2.0));
    for (int j = 0; j < 3; ++j) {
        Cx num = (1.0 + s + I * t.t(j) + (double)ell) / 2.0;
        Cx den = (-s - I * t.t(j) + (double)ell) / 2.0;
        if (near_gamma_pole(num))
            throw std::domain_error("gamma_ell: numerator Gamma pole at factor " + std::to_string(j + 1));
        if (near_gamma_pole(den))
            throw std::domain_error("gamma_ell: denominator Gamma pole at factor " + std::to_string(j + 1));
        acc += log_gamma(num) - log_gamma(den);
    }
    return acc;
}

Cx gamma_ell(Cx s, const SpectralParams& t, int ell) {
    return std::exp(gamma_ell_log(s, t, ell));
}

Cx gamma_pm(Cx s, const SpectralParams& t, int sign) {
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("gamma_pm: sign must be +1 or -1");
    Cx g0 = gamma_ell(s, t, 0), g1 = gamma_ell(s, t, 1);
    // gamma_{+-} = gamma_0 -+ i gamma_1
    return g0 - Cx(0, (double)sign) * g1;
}

double gamma0_majorant(double sigma, double tau, const SpectralParams& t) {
    double val = std::pow(TWO_PI, -3.0 * sigma);
    for (int j = 0; j < 3; ++j) {
        double u = std::abs(tau + t.t(j));
        if (u < 1e-12) u = 1e-12; // the bound degenerates on the exact zero set
        val *= std::pow(u, 0.5 + sigma) *
               std::pow(1.0 + sqr(1.0 + sigma) / sqr(tau + t.t(j)), 0.25 + sigma / 2.0);
    }
    return val;
}

Cx rankin_gamma_log(Cx s, int weight, const SpectralParams& t) {
    const Cx I(0, 1);
    double mu[2] = {-(weight - 1) / 2.0, -weight / 2.0};
    Cx acc = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) {
            Cx arg = s - mu[j] - I * t.t(i);
            if (near_gamma_pole(arg / 2.0))
                throw std::domain_error("rankin_gamma_factor: Gamma_R pole");
            acc += -arg / 2.0 * LOG_PI + log_gamma(arg / 2.0);
        }
    return acc;
}

Cx rankin_gamma_factor(Cx s, int weight, const SpectralParams& t) {
    return std::exp(rankin_gamma_log(s, weight, t));
}

double bessel_j(int order, double x) {
    if (order < 0)
        throw std::domain_error("bessel_j: order must be non-negative");
    if (!(x > 0.0) && !(order == 0 && x == 0.0))
        throw std::domain_error("bessel_j: x must be positive");
    if (order == 0 && x == 0.0) return 1.0;
    return std::cyl_bessel_j((double)order, x);
}

BesselSplit bessel_oscillatory_split(int order, double z) {
    if (order < 0)
        throw std::domain_error("bessel_oscillatory_split: order must be non-negative");
    if (!(z > 0.0))
        throw std::domain_error("bessel_oscillatory_split: z must be positive");
    double x = 4.0 * PI * z;
    // J = (H1 + H2)/2 with H2 = conj(H1) on the positive real axis, so
    // W = H1(x) e^{-ix} / 2 gives J = e(2z) W + e(-2z) conj(W) exactly.
    Cx h1(std::cyl_bessel_j((double)order, x), std::cyl_neumann((double)order, x));
    Cx W = 0.5 * h1 * expi(-x);
    return {W, std::conj(W), z < 1.0};
}

} // namespace vfy
