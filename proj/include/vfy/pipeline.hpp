#pragma once
#include <string>
#include <vector>
#include "vfy/complexutil.hpp"
#include "vfy/forms.hpp"

namespace vfy {

// One desk-scale experiment.  model selects the degree-3 coefficient source
// ("sym2" or "eisenstein"); L > 1 switches the decomposition to the
// prime-average variant (primes ell in [L, 2L], mass transfer on the n-sum).
struct ExperimentConfig {
    std::string model = "sym2";
    double N = 50.0;
    double K = 10.0;
    long long L = 1;
    long long r = 1;
    double t3 = 0.0;        // archimedean twist carried by the v-average
    double tol = 1e-6;      // per-level quadrature tolerance
    unsigned long long seed = 1;
    bool unsafe_scale = false;   // lifts the desk-scale caps
    long long synthetic_m0 = 0;  // if > 0: replace lambda_f by [m == m0]

    GL3Coeffs coeffs() const;
    double lambda(long long m) const; // degree-2 coefficient (or indicator)
};

struct CheckRow {
    std::string name;
    double measured;
    double bound; // measured <= bound required (informational rows: bound = inf)
    bool pass;
};

struct Report {
    std::string experiment;
    std::string config_echo;
    std::vector<CheckRow> rows;
    double wall_seconds = 0.0;

    bool all_pass() const;
};

// sum_n A(r,n) lambda_f(n) W(n/N), W the bump on [1,2]; exact summation.
// For L > 1 the mass-transferred form: (1/mass) sum_{ell prime in [L,2L]}
// conj(A(1,ell)) sum_m A(r, m ell) lambda_f(m) W2(m ell/(N L)) U(m/N).
// Throws std::length_error when the coefficient cache would exceed 1e5.
Cx compute_S_direct(const ExperimentConfig& cfg);

// The same sum evaluated through the full decomposition: q,a-sums and the
// n,m-sums exact, the x-integral through the tabulated expansion of the
// Kronecker delta, the v-average by quadrature.  residual is relative.
struct DecomposedS {
    Cx direct, decomposed;
    double residual;
};
DecomposedS delta_decomposed_S(const ExperimentConfig& cfg);

// Smooth dyadic partition of unity with blocks R = 2^{alpha/2}: verifies
// sum_R U(n/R) = 1 on the range and that recomposition of the coefficient
// sum matches the plain sum.
Report dyadic_decompose_check(const ExperimentConfig& cfg, long long range = 10000);

// |S| / sqrt(sum |A lambda W|^2): recorded, not asserted.
double sqrt_cancellation_ratio(const ExperimentConfig& cfg);

// Spot-check suite per module.  Throws std::invalid_argument on an unknown
// name.  Valid names: special, arith, forms, oscillatory, delta,
// voronoi-gl2, voronoi-gl3, exponents, pipeline, all.
Report run_suite(const std::string& name, const ExperimentConfig& cfg);

} // namespace vfy
