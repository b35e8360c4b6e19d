#include "vfy/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "vfy/arith.hpp"
#include "vfy/delta.hpp"
#include "vfy/exponents.hpp"
#include "vfy/oscillatory.hpp"
#include "vfy/specfn.hpp"
#include "vfy/voronoi.hpp"

namespace vfy {

namespace {

// shared eigenvalue cache (the deepest consumer is the degree-2 dual sum)
const HoloForm& cached_form() {
    static HoloForm f = delta_eigenvalues(60000);
    return f;
}

// C-infinity step: 0 for t <= 0, 1 for t >= 1
double sstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

// flat-top window: rises on [a,b], 1 on [b,c], falls on [c,d]
double flat_top(double x, double a, double b, double c, double d) {
    if (x <= a || x >= d) return 0.0;
    if (x < b) return sstep((x - a) / (b - a));
    if (x <= c) return 1.0;
    return sstep((d - x) / (d - c));
}

double u_window(double x) { return flat_top(x, 0.5, 1.0, 2.0, 2.5); }
double w_wide(double x) { return flat_top(x, 0.5, 1.0, 4.0, 4.5); }

// v-average factor Phi(w) = int W(u) e^{i K u w} du, W the unit-mass bump
// on [1,2]; tabulated on a uniform w-grid with cubic interpolation
struct VTable {
    double w0, dw;
    std::vector<Cx> val;

    Cx operator()(double w) const {
        double s = (w - w0) / dw;
        long long k = (long long)std::floor(s);
        if (k < 1) k = 1;
        if (k > (long long)val.size() - 3) k = (long long)val.size() - 3;
        double f = s - k;
        const Cx &a = val[k - 1], &b = val[k], &c = val[k + 1], &d = val[k + 2];
        return b + 0.5 * f * (c - a +
               f * (2.0 * a - 5.0 * b + 4.0 * c - d + f * (3.0 * (b - c) + d - a)));
    }
};

VTable build_vtable(double K, double wlo, double whi) {
    VTable t;
    t.dw = std::min(1e-3, 0.02 / (K + 1.0));
    t.w0 = wlo - 2.0 * t.dw;
    size_t n = (size_t)std::ceil((whi - t.w0) / t.dw) + 4;
    t.val.resize(n);
    Bump W(1.5, 0.5);
    const int M = 512; // Simpson panels over [1,2]; integrand frequency <= 2K
    double du = 1.0 / M;
    for (size_t j = 0; j < n; ++j) {
        double w = t.w0 + j * t.dw;
        Cx s = 0.0;
        for (int i = 0; i <= M; ++i) {
            double u = 1.0 + i * du;
            double wt = (i == 0 || i == M) ? 1.0 : (i & 1 ? 4.0 : 2.0);
            s += wt * W.normalized(u) * expi(K * u * w);
        }
        t.val[j] = s * (du / 3.0);
    }
    return t;
}

std::vector<long long> primes_in(long long L, long long H) {
    std::vector<long long> out;
    for (long long p = std::max(2LL, L); p <= H; ++p) {
        bool ok = p >= 2;
        for (long long d = 2; d * d <= p; ++d)
            if (p % d == 0) {
                ok = false;
                break;
            }
        if (ok) out.push_back(p);
    }
    return out;
}

std::string echo(const ExperimentConfig& c) {
    std::ostringstream s;
    s << "model=" << c.model << " N=" << c.N << " K=" << c.K << " L=" << c.L
      << " r=" << c.r << " t3=" << c.t3 << " seed=" << c.seed;
    return s.str();
}

} // namespace

GL3Coeffs ExperimentConfig::coeffs() const {
    if (model == "sym2") return GL3Coeffs::sym2(cached_form());
    if (model == "eisenstein")
        return GL3Coeffs::eisenstein(SpectralParams::balanced(5.0, -2.0));
    throw std::invalid_argument("ExperimentConfig: unknown coefficient model");
}

double ExperimentConfig::lambda(long long m) const {
    if (synthetic_m0 > 0) return m == synthetic_m0 ? 1.0 : 0.0;
    if (m > cached_form().n_max())
        throw std::length_error("coefficient cache exceeded");
    return cached_form().lambda(m);
}

bool Report::all_pass() const {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

Cx compute_S_direct(const ExperimentConfig& cfg) {
    GL3Coeffs A = cfg.coeffs();
    if (cfg.L <= 1) {
        Bump W(1.5, 0.5);
        Cx s = 0.0;
        long long lo = (long long)std::ceil(cfg.N);
        long long hi = (long long)std::floor(2.0 * cfg.N);
        if (hi > cached_form().n_max() && cfg.synthetic_m0 == 0)
            throw std::length_error("coefficient cache exceeded");
        for (long long n = lo; n <= hi; ++n)
            s += A.coeff(cfg.r, n) * cfg.lambda(n) * W(n / cfg.N);
        return s;
    }
    // prime-average variant: mass-transferred direct sum
    std::vector<long long> ells = primes_in(cfg.L, 2 * cfg.L);
    if (ells.empty()) throw std::domain_error("no primes in [L, 2L]");
    double mass = 0.0;
    for (long long l : ells) mass += std::norm(A.coeff(1, l));
    double NL = cfg.N * (double)cfg.L;
    Cx s = 0.0;
    for (long long l : ells) {
        Cx al = std::conj(A.coeff(1, l));
        long long mlo = (long long)std::ceil(0.5 * cfg.N);
        long long mhi = (long long)std::floor(2.5 * cfg.N);
        for (long long m = mlo; m <= mhi; ++m) {
            double win = w_wide(m * (double)l / NL) * u_window(m / cfg.N);
            if (win == 0.0) continue;
            s += al * A.coeff(cfg.r, m * l) * cfg.lambda(m) * win;
        }
    }
    return s / mass;
}

DecomposedS delta_decomposed_S(const ExperimentConfig& cfg) {
    if (!cfg.unsafe_scale &&
        (cfg.N > 400.0 || cfg.K > 20.0 || cfg.N * (double)cfg.L > 2000.0))
        throw std::domain_error(
            "delta_decomposed_S: beyond the desk-scale caps (set unsafe_scale)");
    GL3Coeffs A = cfg.coeffs();
    Cx dir = compute_S_direct(cfg);
    Cx dec = 0.0;

    if (cfg.L <= 1) {
        Bump W(1.5, 0.5);
        long long Ld = std::max<long long>(100, (long long)std::ceil(0.8 * cfg.N) + 4);
        DeltaExpansion ex = build_g(Ld);
        std::vector<double> dval = delta_eval_batch(ex, 2 * Ld);
        double wlo = std::log(0.5 / 2.0) - 0.1, whi = std::log(2.5 / 1.0) + 0.1;
        VTable phi = build_vtable(cfg.K, wlo, whi);
        long long nlo = (long long)std::ceil(cfg.N);
        long long nhi = (long long)std::floor(2.0 * cfg.N);
        long long mlo = (long long)std::ceil(0.5 * cfg.N);
        long long mhi = (long long)std::floor(2.5 * cfg.N);
        for (long long n = nlo; n <= nhi; ++n) {
            Cx an = A.coeff(cfg.r, n) * W(n / cfg.N);
            if (an == Cx(0.0)) continue;
            for (long long m = mlo; m <= mhi; ++m) {
                double um = u_window(m / cfg.N);
                if (um == 0.0) continue;
                double lam = cfg.lambda(m);
                if (lam == 0.0) continue;
                double w = std::log((double)m / (double)n);
                dec += an * lam * um * phi(w) * expi(cfg.t3 * w) *
                       dval[(n - m) + 2 * Ld];
            }
        }
    } else {
        std::vector<long long> ells = primes_in(cfg.L, 2 * cfg.L);
        GL3Coeffs Ac = cfg.coeffs();
        double mass = 0.0;
        for (long long l : ells) mass += std::norm(Ac.coeff(1, l));
        double NL = cfg.N * (double)cfg.L;
        long long Ld = std::max<long long>(100, (long long)std::ceil(2.5 * NL) + 4);
        DeltaExpansion ex = build_g(Ld);
        std::vector<double> dval = delta_eval_batch(ex, 2 * Ld);
        double wlo = std::log(0.5 / 4.5) - 0.1, whi = std::log(5.0 / 0.5) + 0.1;
        VTable phi = build_vtable(cfg.K, wlo, whi);
        long long nlo = (long long)std::ceil(0.5 * NL);
        long long nhi = (long long)std::floor(4.5 * NL);
        long long mlo = (long long)std::ceil(0.5 * cfg.N);
        long long mhi = (long long)std::floor(2.5 * cfg.N);
        for (long long l : ells) {
            Cx al = std::conj(Ac.coeff(1, l));
            for (long long n = nlo; n <= nhi; ++n) {
                Cx an = Ac.coeff(cfg.r, n) * w_wide(n / NL);
                if (an == Cx(0.0)) continue;
                for (long long m = mlo; m <= mhi; ++m) {
                    double um = u_window(m / cfg.N);
                    if (um == 0.0) continue;
                    double lam = cfg.lambda(m);
                    if (lam == 0.0) continue;
                    long long d = n - m * l;
                    if (d < -2 * Ld || d > 2 * Ld) continue;
                    double w = std::log((double)m * l / (double)n);
                    dec += al * an * lam * um * phi(w) * expi(cfg.t3 * w) *
                           dval[d + 2 * Ld];
                }
            }
        }
        dec /= mass;
    }
    double scale = std::max(std::abs(dir), 1e-12);
    return {dir, dec, std::abs(dec - dir) / scale};
}

Report dyadic_decompose_check(const ExperimentConfig& cfg, long long range) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    rep.experiment = "dyadic-decompose";
    rep.config_echo = echo(cfg);
    auto S = [](double t) { return sstep(t); };
    auto Ublock = [&](double y, long long alpha) {
        double x = 2.0 * std::log2(y);
        return S(x - (double)alpha) - S(x - (double)(alpha + 1));
    };
    long long amax = (long long)std::ceil(2.0 * std::log2((double)range)) + 2;

    double worst = 0.0;
    for (long long n = 1; n <= range; ++n) {
        double s = 0.0;
        for (long long a = -1; a <= amax; ++a) s += Ublock((double)n, a);
        worst = std::max(worst, std::abs(s - 1.0));
    }
    rep.rows.push_back({"partition of unity sums to 1", worst, 1e-10, worst <= 1e-10});

    // constant sequence recomposition
    double plain = (double)range;
    double rec = 0.0;
    for (long long a = -1; a <= amax; ++a)
        for (long long n = 1; n <= range; ++n) rec += Ublock((double)n, a);
    double cerr = std::abs(rec - plain) / plain;
    rep.rows.push_back({"constant sequence recomposition", cerr, 1e-12, cerr <= 1e-12});

    // coefficient sequence recomposition
    GL3Coeffs A = cfg.coeffs();
    Cx plainc = 0.0, recc = 0.0;
    for (long long n = 1; n <= range; ++n) {
        Cx an = A.coeff(1, n) * cfg.lambda(n);
        plainc += an;
        for (long long a = -1; a <= amax; ++a) recc += an * Ublock((double)n, a);
    }
    double xerr = std::abs(recc - plainc) / std::max(1.0, std::abs(plainc));
    rep.rows.push_back({"coefficient recomposition", xerr, 1e-9, xerr <= 1e-9});

    // discarded tail at cutoff theta = 3/2: error exponent (3 - theta)/2
    Rational theta(3, 2);
    Rational errexp = (Rational(3) - theta) / Rational(2);
    bool ok = errexp == Rational(3, 4);
    rep.rows.push_back({"tail-split error exponent (3-theta)/2 at theta=3/2",
                        errexp.value(), 0.75, ok});
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

double sqrt_cancellation_ratio(const ExperimentConfig& cfg) {
    GL3Coeffs A = cfg.coeffs();
    Bump W(1.5, 0.5);
    long long lo = (long long)std::ceil(cfg.N), hi = (long long)std::floor(2.0 * cfg.N);
    Cx s = 0.0;
    double s2 = 0.0;
    for (long long n = lo; n <= hi; ++n) {
        Cx t = A.coeff(cfg.r, n) * cfg.lambda(n) * W(n / cfg.N);
        s += t;
        s2 += std::norm(t);
    }
    return s2 > 0.0 ? std::abs(s) / std::sqrt(s2) : 0.0;
}

namespace {

const double INF = 1e300;

void suite_special(Report& r) {
    double d = std::abs(duplication_residual(Cx(0.3, 1.7)));
    r.rows.push_back({"duplication identity residual", d, 1e-10, d <= 1e-10});
    double j = std::abs(bessel_j(0, 1.0) - 0.76519768655796655);
    r.rows.push_back({"bessel J0(1) vs reference", j, 1e-12, j <= 1e-12});
    Cx z(30.0, 10.0);
    Cx st = stirling_eval(z, StirlingExpansion::standard(8));
    double rel = std::abs(st - std::exp(log_gamma(z))) / std::abs(st);
    r.rows.push_back({"Stirling vs log-gamma at 30+10i", rel, 1e-10, rel <= 1e-10});
}

void suite_arith(Report& r) {
    long long cases = 0;
    double worst = 0.0;
    for (long long q : {2, 3, 4, 6, 9, 12})
        for (long long rr : {1, 2, 3})
            for (long long n1 : divisors(q * rr)) {
                CharSumTables tab(q, rr, n1);
                for (long long n2 : {0LL, 1LL, 5LL})
                    for (long long m : {1LL, 7LL})
                        for (int sg : {+1, -1}) {
                            Cx a = tab.a_form(n2, m, sg);
                            Cx c = tab.closed_form(n2, m, sg);
                            worst = std::max(worst, std::abs(a - c));
                            ++cases;
                        }
            }
    r.rows.push_back({"character-sum identity grid, exhaustive case count",
                      (double)cases, INF, cases > 200});
    r.rows.push_back({"character-sum identity worst deviation", worst, 1e-9,
                      worst <= 1e-9});
}

void suite_forms(Report& r) {
    GL3Coeffs A = GL3Coeffs::sym2(cached_form());
    double worst = 0.0;
    for (long long l : {2LL, 3LL, 5LL})
        for (long long n : {1LL, 4LL, 9LL, 10LL})
            for (long long rr : {1LL, 2LL}) {
                Cx lhs = A.coeff(1, l) * A.coeff(rr, n);
                Cx rhs = mass_transfer_expand(A, rr, n, l);
                worst = std::max(worst, std::abs(lhs - rhs));
            }
    r.rows.push_back({"Hecke mass-transfer identity worst deviation", worst, 1e-10,
                      worst <= 1e-10});
    RamanujanAverage ra = ramanujan_average_check(A, 1e4);
    r.rows.push_back({"mean-square coefficient ratio at x=1e4", ra.ratio, 10.0,
                      ra.ratio <= 10.0});
}

void suite_oscillatory(Report& r) {
    AmplitudeSpec w = Bump(0.0, 0.8).amplitude();
    PhaseSpec h;
    h.h = [](double t) { return 400.0 * t * t; };
    h.h1 = [](double t) { return 800.0 * t; };
    h.h2 = [](double) { return 800.0; };
    h.h3 = [](double) { return 0.0; };
    h.Y = 400.0;
    Cx exact = integrate_oscillatory(w, h, 1e-12);
    Cx asym = stationary_phase_expand(w, h, 3);
    double rel = std::abs(exact - asym) / std::abs(exact);
    r.rows.push_back({"stationary phase vs quadrature", rel, 1e-6, rel <= 1e-6});

    PhaseSpec lin;
    lin.h = [](double t) { return 200.0 * t; };
    lin.h1 = [](double) { return 200.0; };
    lin.h2 = [](double) { return 0.0; };
    lin.h3 = [](double) { return 0.0; };
    lin.Y = 200.0;
    lin.Q = 1.0;
    lin.R = 200.0;
    double v = std::abs(integrate_oscillatory(w, lin, 1e-12));
    double cert = nonstationary_certificate(w, lin);
    r.rows.push_back({"nonstationary integral under its certificate", v, cert,
                      v <= cert});
}

void suite_delta(Report& r) {
    DeltaExpansion ex = build_g(1000);
    double worst = 0.0;
    for (long long n : {0LL, 1LL, -7LL, 100LL, -500LL, 1999LL}) {
        double want = n == 0 ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(delta_eval(ex, n) - want));
    }
    r.rows.push_back({"Kronecker-delta fidelity on [-2L,2L]", worst, 1e-4,
                      worst <= 1e-4});
}

void suite_voronoi_gl2(Report& r) {
    TestFunction g{Bump(1.5, 0.5), 500.0, 0.0, 0.0};
    Gl2VoronoiResult res = gl2_voronoi_check(cached_form(), 1, 1, g);
    r.rows.push_back({"summation formula residual (q=1, N=500)", res.residual,
                      1e-6, res.residual <= 1e-6});
    r.rows.push_back({"certified dual tail", res.dual_tail, 1e-4,
                      res.dual_tail <= 1e-4});
}

void suite_voronoi_gl3(Report& r) {
    TestFunction psi{Bump(1.5, 0.5), 1000.0, 25.0, 0.02};
    MellinTable tb = mellin_table(psi, -0.5, 500.0);
    double wa = std::log(psi.lo()), wb = std::log(psi.hi());
    double tau = 13.7;
    Cx direct = integrate_with_phase_hint(
        [&](double w) {
            return psi(std::exp(w)) * std::exp(0.5 * w) * expi(-tau * w);
        },
        [&](double) { return std::abs(tau) + 25.0 + TWO_PI * 0.02 * psi.hi(); },
        wa, wb, 1e-10, 4000000);
    double d = std::abs(tb(tau) - direct);
    r.rows.push_back({"vertical-line transform table vs quadrature", d, 1e-7,
                      d <= 1e-7});
    TransformParams p{SpectralParams::balanced(300.0, -150.0),
                      300.0, 4000.0, 40.0, 1, 1, 1.0, false, 1.0};
    r.rows.push_back({"derived dual length r Q^3 K^2 T / N at the hand instance",
                      p.Ntilde(), 120000.0, p.Ntilde() == 120000.0});
}

void suite_exponents(Report& r) {
    Ledger l1 = theorem1_ledger();
    bool ok1 = l1.bound_terms[0] == AffineQ(Rational(3, 2), Rational(-1, 4)) &&
               l1.bound_terms[1] == AffineQ(Rational(5, 4), Rational(1, 2));
    r.rows.push_back({"bound max{3/2 - xi/4, 3/2 - (1-2xi)/4} on 0 < xi < 1/2",
                      l1.opt_exponent.value(), 17.0 / 12.0, ok1});
    Ledger l2 = theorem2_ledger();
    bool ok2 = l2.opt_exponent == Rational(23, 16) &&
               l2.opt_eta * Rational(4) == l2.opt_xi;
    r.rows.push_back({"prime-average optimum exponent 23/16 at L = K^{1/4}",
                      l2.opt_exponent.value(), 23.0 / 16.0, ok2});
    Rational th = afe_cutoff_optimize([](Rational) { return Rational(17, 12); });
    r.rows.push_back({"dyadic cutoff theta = 3/2", th.value(), 1.5,
                      th == Rational(3, 2)});
}

void suite_pipeline(Report& r, const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.L = 1;
    DecomposedS d = delta_decomposed_S(c);
    r.rows.push_back({"decomposed sum vs direct sum (relative)", d.residual,
                      1e-3, d.residual <= 1e-3});
    Report dy = dyadic_decompose_check(c, 2000);
    for (auto& row : dy.rows) r.rows.push_back(row);
    ExperimentConfig c2 = c;
    c2.N = 100;
    r.rows.push_back({"square-root cancellation ratio at N=100 (informational)",
                      sqrt_cancellation_ratio(c2), INF, true});
}

} // namespace

Report run_suite(const std::string& name, const ExperimentConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    rep.experiment = name;
    rep.config_echo = echo(cfg);
    if (name == "special")
        suite_special(rep);
    else if (name == "arith")
        suite_arith(rep);
    else if (name == "forms")
        suite_forms(rep);
    else if (name == "oscillatory")
        suite_oscillatory(rep);
    else if (name == "delta")
        suite_delta(rep);
    else if (name == "voronoi-gl2")
        suite_voronoi_gl2(rep);
    else if (name == "voronoi-gl3")
        suite_voronoi_gl3(rep);
    else if (name == "exponents")
        suite_exponents(rep);
    else if (name == "pipeline")
        suite_pipeline(rep, cfg);
    else if (name == "all") {
        for (const char* s : {"special", "arith", "forms", "oscillatory", "delta",
                              "voronoi-gl2", "voronoi-gl3", "exponents"}) {
            Report sub = run_suite(s, cfg);
            for (auto& row : sub.rows)
                rep.rows.push_back({std::string(s) + ": " + row.name, row.measured,
                                    row.bound, row.pass});
        }
        Report sub = run_suite("pipeline", cfg);
        for (auto& row : sub.rows)
            rep.rows.push_back({"pipeline: " + row.name, row.measured, row.bound,
                                row.pass});
    } else {
        throw std::invalid_argument("run_suite: unknown suite name");
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace vfy
