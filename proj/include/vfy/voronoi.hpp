#pragma once
#include <ostream>
#include <vector>
#include "vfy/complexutil.hpp"
#include "vfy/forms.hpp"
#include "vfy/oscillatory.hpp"
#include "vfy/specfn.hpp"

namespace vfy {

// Amplitude for the summation-formula transforms:
//   psi(y) = shape(y/N) * y^{-i t3v} * e(y * xfreq),
// i.e. a bump on [N(c-hw), N(c+hw)] carrying an archimedean twist and a
// linear exponential (xfreq plays the role of x/(qQ)).
struct TestFunction {
    Bump shape;
    double N;
    double t3v = 0.0;
    double xfreq = 0.0;

    Cx operator()(double y) const;
    double lo() const { return N * (shape.center - shape.halfwidth); }
    double hi() const { return N * (shape.center + shape.halfwidth); }
};

// Parameter pack for the dual-side bookkeeping.  Derived lengths follow the
// fixed formulas with the epsilon-power stand-in frozen at 10; the th2 flag
// switches to the prime-average variant of the pipeline (modulus
// Q = sqrt(NL/K) * 10 and the corresponding dual lengths).
struct TransformParams {
    SpectralParams t;
    double T;
    double N, K;
    long long r = 1;
    long long q = 1;
    double L = 1.0;
    bool th2 = false;
    double eps_pow = 10.0;

    double Neff() const { return th2 ? N * L : N; }
    double Q() const { return std::sqrt(Neff() / K) * eps_pow; }
    double N0() const { return std::max(K, Neff() / ((double)q * Q())); }
    // effective dual length of the degree-3 side (n1^2 n2 <= Ntilde)
    double Ntilde() const {
        double q3 = Q() * Q() * Q();
        return th2 ? (double)r * q3 * K * T * T / (N * L) * eps_pow
                   : (double)r * q3 * K * K * T / N * eps_pow;
    }
    // effective dual length of the degree-2 side
    double Mtilde() const {
        return std::max(T * T * (double)(q * q) / N, th2 ? K * L : K) * eps_pow;
    }
    // q-dependent decay threshold for n1^2 n2 in the degree-3 transform
    // (before taking the sup over q <= Q that defines Ntilde)
    double n2_cutoff() const {
        double n0 = N0();
        return (double)(q * q * q) * (double)r * eps_pow *
               (T + n0) * (K + n0) * n0 / (8.0 * PI * PI * PI * Neff());
    }
};

// -------------------------------------------------------------------------
// degree-2 summation formula (holomorphic, level 1)

struct Gl2VoronoiResult {
    Cx lhs, rhs;
    double residual;      // |lhs - rhs|
    long long dual_terms; // dual terms actually summed
    double dual_tail;     // certified bound on the dropped dual tail
};

// Checks sum lambda(n) e(an/q) g(n) = (1/q) sum lambda(n) e(-dn/q) h(n),
// h(y) = 2 pi i^k int g(x) J_{k-1}(4 pi sqrt(xy)/q) dx, ad = 1 mod q.
// Throws std::domain_error unless gcd(a,q) = 1.
Gl2VoronoiResult gl2_voronoi_check(const HoloForm& f, long long a, long long q,
                                   const TestFunction& g);

// The dual-side oscillatory integral
//   I'(m,x,q) = int U(y) y^{i(t3+v)} e(-xNy/(qQ) +- 2 sqrt(yNm)/q) dy,
// U the bump on [1/2, 5/2]; both sign branches.
struct DualIntegralPair {
    Cx plus, minus;
};
DualIntegralPair gl2_dual_integral(double m, double x, double q, double t3,
                                   double v, double N, double Q);

// -------------------------------------------------------------------------
// degree-3 transforms

// FFT-tabulated Mellin transform along a vertical line:
//   value(tau) = psi~(-(sigma + i tau)) = int psi(u) u^{-sigma - i tau - 1} du.
struct MellinTable {
    double sigma, wc, dtau, tau_max;
    std::vector<Cx> val; // val[k] = e^{i tau_k wc} psi~(...), tau_k = k dtau - tau_max

    Cx operator()(double tau) const; // Catmull-Rom in the demodulated table
};
MellinTable mellin_table(const TestFunction& psi, double sigma, double tau_max);

// G_{+-}(y) = (1/2 pi i) int_(sigma) y^{-s} gamma_{+-}(s) psi~(-s) ds, with
// the contour height chosen adaptively until the certified tail (Stirling
// majorant times the nonstationary decay of psi~) is below 1e-9 of the peak.
// Throws std::runtime_error if the height cap 1e5 is reached first.
Cx gl3_G_contour(double y, const TestFunction& psi, const SpectralParams& t,
                 double sigma, int sign);

// Same contour restricted to the band |tau + t3| > band (for measuring how
// little lives outside the tau-window of the stationary-phase form).
Cx gl3_G_contour_tail(double y, const TestFunction& psi, const SpectralParams& t,
                      double sigma, int sign, double band);

// The stationary-phase form of the same transform: the sigma = -1/2 contour
// with the Gamma factors replaced by their leading Stirling term (the phase
// h_0(tau) - (tau/2pi) log(8 pi^3 y N ...) plus the explicitly-carried
// sub-exponential weights) and the tau-window W1(|tau + t3|/N0) inserted.
// If case2 is given, it is set when some |tau + t_j|, j != 3, dips below the
// inner window edge on the integration range (the non-generic regime: the
// value is still computed but the Stirling main term is less trustworthy).
Cx gl3_G_star(double y, const TestFunction& psi, const SpectralParams& t,
              int sign, double N0, bool* case2 = nullptr);

// Predicted radian frequency of the G-star integrand at tau:
//   2 pi h0'(tau) - log(8 pi^3 y N') where N' rescales psi to unit support.
double gl3_star_frequency(double y, const TestFunction& psi,
                          const SpectralParams& t, double tau);

// -------------------------------------------------------------------------
// the simplified eta-integral

// I(n1n2sq, m, q) = int W1(|eta|/N0) |eta - t3|^{-1/2} (n1n2sq)^{-i(eta-t3)}
//                   e(h(eta)) d eta
// with h(eta) the three-log phase and c = c(q,m).  Throws std::domain_error
// if |eta - t3| < N0 * 1e-3 anywhere on the window (outside the regime).
Cx j_transform(const TransformParams& p, double m, double n1n2sq);

// int V(y) I(Y y, q, m) conj(I(Y y, q, m')) dy over y in [1,2] with an
// optional extra twist e(-n2 Y y / twist_den).  Y defaults to Ntilde;
// scale_override replaces it (the bookkeeping length is often far beyond the
// scale where the eta-integral has its stationary point).
Cx j_decorrelation(const TransformParams& p, double m, double mprime,
                   double n2 = 0.0, double twist_den = 1.0,
                   double scale_override = 0.0);

// -------------------------------------------------------------------------
// truncation bookkeeping

struct TruncationRow {
    std::string name;
    double formula;  // bookkeeping value
    double measured; // measured decay onset (0 if not measured)
    double ratio;    // measured / formula (0 if not measured)
    bool flagged;    // measured onset off by more than factor 100
};
struct TruncationReport {
    std::vector<TruncationRow> rows;
};
TruncationReport truncation_report(const TransformParams& p);
void write_truncation_csv(std::ostream& out, const TruncationReport& rep);

} // namespace vfy
