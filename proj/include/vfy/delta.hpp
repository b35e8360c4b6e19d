#pragma once
#include <ostream>
#include <vector>
#include "vfy/complexutil.hpp"
#include "vfy/forms.hpp"
#include "vfy/oscillatory.hpp"

namespace vfy {

// Finite Fourier expansion of the Kronecker delta on [-2L, 2L]:
//   delta(n) = (1/Q) sum_{q<=Q} (1/q) sum*_{a mod q} e(na/q)
//              int V(x) g(q,x) e(nx/(qQ)) dx,     Q = 2 sqrt(L).
// g is built from a seed bump omega supported on [Q/2, Q] and tabulated per q
// on a uniform x-grid (g is real and even in x by construction).
struct DeltaExpansion {
    long long L;
    double Q;
    double x_max;                         // tabulation range in |x|
    std::vector<double> cq;               // cq[q] = sum_m omega(mq)/(mq)
    std::vector<std::vector<double>> gtab; // gtab[q][k] = g(q, k*dx[q]), x >= 0
    std::vector<double> dx;               // x-grid step per q

    // cubic interpolation of the tabulated g; even in x, 0 beyond the table
    double g(long long q, double x) const;
    // the smooth flat-top window V: 1 on [-x_flat, x_flat], 0 outside [-x_max, x_max]
    double x_flat() const { return 0.5 * x_max; }
    double window(double x) const;
};

// Seed bump for the construction: supported on [Q/2, Q].
Bump default_delta_seed(long long L);

// Tabulates g for the DFI expansion.  Throws std::runtime_error if the seed
// normalization residual exceeds 1e-6, std::domain_error on a bad seed.
DeltaExpansion build_g(long long L, const Bump& omega, double x_max = 160.0);
inline DeltaExpansion build_g(long long L) { return build_g(L, default_delta_seed(L)); }

// Evaluates the expansion at integer n, |n| <= 2L.
double delta_eval(const DeltaExpansion& exp, long long n);

// Evaluates the expansion at every integer n with |n| <= n_max in one pass
// (index n + n_max).  For each q the x-integrals over all n are equally
// spaced samples of the cosine transform of one even window, so a single
// periodized FFT per q replaces the per-n quadrature.
std::vector<double> delta_eval_batch(const DeltaExpansion& exp, long long n_max);

// Same but with the q-sum restricted to q <= q_cap and the x-integral to
// |x| <= x_cap (for effective-support diagnostics).
double delta_eval_capped(const DeltaExpansion& exp, long long n, long long q_cap,
                         double x_cap);

// Worst-case ratios of the three g-property bounds over a (q,x) grid; each
// should be <= 10 (slack for the unspecified absolute constants).
struct GPropertiesReport {
    double worst_h_ratio;    // |g-1| vs (Q/q)(q/Q+|x|)^B, B = 2
    double worst_d1_ratio;   // |x g'| vs log Q min(Q/q, 1/|x|)
    double worst_d2_ratio;   // |x^2 g''| vs same
    double worst_tail_ratio; // |g| vs |x|^{-B} for |x| >= 2
};
GPropertiesReport g_properties_check(const DeltaExpansion& exp);

// Diagonal conductor-lowering identity: lhs is the n = m sum, rhs re-inserts
// the v-average (1/K) int W(v/K) (m/n)^{i(t3+v)} dv, identically 1 on the
// diagonal.  W is the unit-mass bump on [1,2].
struct CondLowering {
    Cx lhs, rhs;
};
CondLowering conductor_lowering_check(const HoloForm& f, const GL3Coeffs& c,
                                      double N, double K, long long r, double t3);

// |(1/K) int W(v/K) ratio^{iv} dv| for the unit-mass bump W on [1,2]: the
// off-diagonal damping factor at n/m ratio `ratio`.
double v_damping(double K, double ratio);

// CSV rows "q,x,re,im" for one q of the expansion table.
void write_delta_csv(std::ostream& out, const DeltaExpansion& exp, long long q);

} // namespace vfy
