#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include "vfy/forms.hpp"
#include "vfy/voronoi.hpp"

using namespace vfy;

// one shared eigenvalue table; the q = 20 dual sum needs ~4e4 terms
static const HoloForm& delta_form() {
    static HoloForm f = delta_eigenvalues(60000);
    return f;
}

TEST_CASE("degree-2 summation formula matches on both sides") {
    const HoloForm& f = delta_form();
    {
        TestFunction g{Bump(1.5, 0.5), 500.0, 0.0, 0.0};
        Gl2VoronoiResult r = gl2_voronoi_check(f, 1, 1, g);
        CHECK(r.residual <= 1e-6);
        CHECK(std::abs(r.rhs.imag()) <= 1e-8);
        CHECK(r.dual_tail < 1e-4); // converged, not the 1e30 sentinel
    }
    {
        TestFunction g{Bump(1.5, 0.5), 1000.0, 0.0, 0.0};
        Gl2VoronoiResult r = gl2_voronoi_check(f, 2, 5, g);
        CHECK(r.residual <= 1e-6);
        CHECK(r.dual_tail < 1e-4);
    }
    {
        // large modulus, short sharp cutoff: the dual sum is genuinely long
        TestFunction g{Bump(1.4, 0.35), 250.0, 0.0, 0.0};
        Gl2VoronoiResult r = gl2_voronoi_check(f, 3, 20, g);
        CHECK(r.residual <= 1e-6);
        CHECK(r.dual_terms > 10000);
        CHECK(r.dual_tail < 1e-4);
    }
    {
        // archimedean twist and linear exponential on the test function
        TestFunction g{Bump(1.5, 0.5), 1000.0, 17.0, 0.013};
        Gl2VoronoiResult r = gl2_voronoi_check(f, 3, 7, g);
        CHECK(r.residual <= 1e-6);
        CHECK(r.dual_tail < 1e-4);
    }
}

TEST_CASE("degree-2 summation formula guards") {
    const HoloForm& f = delta_form();
    TestFunction g{Bump(1.5, 0.5), 500.0, 0.0, 0.0};
    CHECK_THROWS_AS(gl2_voronoi_check(f, 4, 8, g), std::domain_error);
    CHECK_THROWS_AS(gl2_voronoi_check(f, 5, 0, g), std::domain_error);
    HoloForm short_f = delta_eigenvalues(100);
    CHECK_THROWS_AS(gl2_voronoi_check(short_f, 1, 1, g), std::domain_error);
}

TEST_CASE("dual-side integral: plain, stationary and nonstationary regimes") {
    double mass = Bump(1.5, 1.0).mass();
    {
        // no oscillation at all: the integral is exactly the bump mass
        DualIntegralPair d = gl2_dual_integral(0.0, 0.0, 1.0, 0.0, 0.0, 1000.0, 30.0);
        CHECK(std::abs(d.plus - mass) <= 1e-9);
        CHECK(std::abs(d.minus - mass) <= 1e-9);
    }
    {
        // tiny frequency: still essentially the mass
        DualIntegralPair d = gl2_dual_integral(1e-12, 0.0, 1.0, 0.0, 0.0, 1000.0, 30.0);
        CHECK(std::abs(d.plus - mass) <= 1e-3);
    }
    {
        // interior stationary point at y0 = 1.5: first-order expansion agrees
        double A = TWO_PI * 24.5 * 1000.0 / 30.0;
        double B = TWO_PI * 2.0 * std::sqrt(1000.0 * 1000.0);
        DualIntegralPair d = gl2_dual_integral(1000.0, 24.5, 1.0, 0.0, 0.0, 1000.0, 30.0);
        AmplitudeSpec w = Bump(1.5, 1.0).amplitude();
        PhaseSpec h;
        h.h = [=](double y) { return A * y - B * std::sqrt(y); };
        h.h1 = [=](double y) { return A - 0.5 * B / std::sqrt(y); };
        h.h2 = [=](double y) { return 0.25 * B * std::pow(y, -1.5); };
        h.h3 = [=](double y) { return -0.375 * B * std::pow(y, -2.5); };
        h.Y = B;
        Cx sp = std::conj(stationary_phase_expand(w, h, 3));
        CHECK(std::abs(d.plus - sp) / std::abs(d.plus) <= 0.05);
        // the opposite sign branch has no stationary point and vanishes
        CHECK(std::abs(d.minus) <= 1e-12);
    }
    {
        // decay across the dual-length scale (t3 twist, modulus 10)
        DualIntegralPair in = gl2_dual_integral(64.0, 1.0, 10.0, -150.0, 0.0, 1000.0, 100.0);
        DualIntegralPair out = gl2_dual_integral(4096.0, 1.0, 10.0, -150.0, 0.0, 1000.0, 100.0);
        CHECK(std::max(std::abs(in.plus), std::abs(in.minus)) > 1e-3);
        CHECK(std::max(std::abs(out.plus), std::abs(out.minus)) < 1e-10);
    }
}

TEST_CASE("vertical-line transform table matches direct quadrature") {
    TestFunction psi{Bump(1.5, 0.5), 1000.0, 25.0, 0.02};
    double sigma = -0.5;
    MellinTable tb = mellin_table(psi, sigma, 500.0);
    double wa = std::log(psi.lo()), wb = std::log(psi.hi());
    for (double tau : {0.0, 13.7, 211.3, -377.7}) {
        RealFn dp = [&](double) {
            return std::abs(tau) + 25.0 + TWO_PI * 0.02 * psi.hi();
        };
        Cx direct = integrate_with_phase_hint(
            [&](double w) {
                return psi(std::exp(w)) * std::exp(-sigma * w) * expi(-tau * w);
            },
            dp, wa, wb, 1e-10, 4000000);
        CHECK(std::abs(tb(tau) - direct) <= 1e-7);
    }
}

TEST_CASE("contour transform: sigma independence and conjugate symmetry") {
    SpectralParams t{120.0, 85.0, -205.0};
    TestFunction psi{Bump(1.5, 0.5), 1000.0, t.t3, 0.8 / 300.0};
    Cx a = gl3_G_contour(10.0, psi, t, -0.5, -1);
    Cx b = gl3_G_contour(10.0, psi, t, 0.0, -1);
    CHECK(std::abs(a) > 1.0);
    CHECK(std::abs(a - b) / std::abs(a) <= 1e-8);

    // real test function, symmetric spectral point: the two signs conjugate
    SpectralParams t0{0.0, 0.0, 0.0};
    TestFunction psi0{Bump(1.5, 0.5), 50.0, 0.0, 0.0};
    Cx gp = gl3_G_contour(2.0, psi0, t0, 0.5, +1);
    Cx gm = gl3_G_contour(2.0, psi0, t0, 0.5, -1);
    CHECK(std::abs(gp) > 1e-3);
    CHECK(std::abs(gp - std::conj(gm)) <= 1e-8 * std::abs(gp));
}

TEST_CASE("contour transform guards") {
    SpectralParams t{120.0, 85.0, -205.0};
    TestFunction psi{Bump(1.5, 0.5), 1000.0, t.t3, 0.0};
    CHECK_THROWS_AS(gl3_G_contour(-1.0, psi, t, -0.5, +1), std::domain_error);
    CHECK_THROWS_AS(gl3_G_contour(1.0, psi, t, -1.5, +1), std::domain_error);
    // an absurd linear twist pushes the needed height past the hard cap
    TestFunction wild{Bump(1.5, 0.5), 1000.0, t.t3, 1e5};
    CHECK_THROWS_AS(gl3_G_contour(1.0, wild, t, -0.5, +1), std::runtime_error);
}

TEST_CASE("stationary-phase form cross-validates the contour transform") {
    SpectralParams t{120.0, 85.0, -205.0};
    double q = 3, K = 10, N = 1000;
    double Q = std::sqrt(N / K) * 10.0;
    double N0 = std::max(K, N / (q * Q));
    double xs[5] = {0.5, 0.5, 0.8, 0.8, 1.1};
    double ys[5] = {5.0, 15.0, 8.0, 10.0, 3.0};
    for (int i = 0; i < 5; ++i) {
        TestFunction psi{Bump(1.5, 0.5), N, t.t3, xs[i] / (q * Q)};
        Cx ex = gl3_G_contour(ys[i], psi, t, -0.5, -1);
        bool case2 = true;
        Cx st = gl3_G_star(ys[i], psi, t, -1, N0, &case2);
        CHECK(!case2);
        CHECK(std::abs(st - ex) / std::abs(ex) <= 0.10);
    }
    // the opposite sign branch is exponentially suppressed here
    TestFunction psi{Bump(1.5, 0.5), N, t.t3, 0.8 / (q * Q)};
    Cx gm = gl3_G_contour(10.0, psi, t, -0.5, -1);
    Cx gp = gl3_G_contour(10.0, psi, t, -0.5, +1);
    CHECK(std::abs(gp) <= 0.05 * std::abs(gm));
    // and the contour mass outside the tau-window is a small correction
    Cx tail = gl3_G_contour_tail(10.0, psi, t, -0.5, -1, 10.0 * N0);
    CHECK(std::abs(tail) <= 1e-2 * std::abs(gm));
}

TEST_CASE("transform peaks where the predicted frequency vanishes") {
    // scan |G*(y)|: at the peak y* the integrand is stationary on the support
    // of the test function, so the bookkeeping frequency evaluated there must
    // sit in the band 2 + log(y1) with y1 in the unit-normalized support
    SpectralParams t{120.0, 85.0, -205.0};
    double q = 3, K = 10, N = 1000;
    double Q = std::sqrt(N / K) * 10.0;
    double N0 = std::max(K, N / (q * Q));
    TestFunction psi{Bump(1.5, 0.5), N, t.t3, 0.8 / (q * Q)};
    double taubar = -t.t3 + TWO_PI * psi.xfreq * 1.5 * N;
    double best = 0.0, ybest = 0.0;
    for (double y = 2.0; y <= 40.0; y *= 1.12) {
        double g = std::abs(gl3_G_star(y, psi, t, -1, N0));
        if (g > best) {
            best = g;
            ybest = y;
        }
    }
    CHECK(best > 1.0);
    double fr = gl3_star_frequency(ybest, psi, t, taubar);
    CHECK(fr >= 1.7);
    CHECK(fr <= 3.0);
}

static TransformParams small_height_params() {
    // N0 = 10, well separated from |t3| = 150: the eta-window is clean
    return TransformParams{SpectralParams::balanced(300.0, -150.0),
                           300.0, 1000.0, 10.0, 1, 10, 1.0, false, 10.0};
}

TEST_CASE("eta-integral: guards and diagonal bound") {
    TransformParams p = small_height_params();
    CHECK(p.N0() == doctest::Approx(10.0));
    CHECK_THROWS_AS(j_transform(p, -1.0, 100.0), std::domain_error);
    CHECK_THROWS_AS(j_transform(p, 1.0, 0.0), std::domain_error);
    // window pinched by t3: |t3| = 150 inside [0.1, 10] * N0 = [40, 4000]
    TransformParams bad{SpectralParams::balanced(300.0, -150.0),
                        300.0, 4000.0, 40.0, 1, 1, 1.0, false, 1.0};
    CHECK_THROWS_AS(j_transform(bad, 30.0, 1650.0), std::domain_error);

    Cx J = j_transform(p, 30.0, 1650.0);
    CHECK(std::abs(J) > 1e-4);
    // second-derivative bound for the y-average of |I|^2
    Cx diag = j_decorrelation(p, 30.0, 30.0, 0.0, 1.0, 1650.0);
    CHECK(std::abs(diag.imag()) <= 1e-12);
    CHECK(diag.real() > 1e-3);
    CHECK(diag.real() <= 10.0 * (p.N0() / p.T) * p.eps_pow);
}

TEST_CASE("eta-integral decorrelation in the dual variable and the twist") {
    TransformParams p = small_height_params();
    double Y = 1650.0;
    double diag = std::abs(j_decorrelation(p, 30.0, 30.0, 0.0, 1.0, Y));
    // shifting m by the predicted range suppresses the correlation by an
    // order of magnitude (deeper decay saturates: the window-edge components
    // carry a large second derivative and barely move with m)
    double onset = 10.0 * 30.0 / p.N0(); // predicted shift range for m ~ 30
    double d1 = std::abs(j_decorrelation(p, 30.0, 30.0 + onset, 0.0, 1.0, Y));
    double d2 = std::abs(j_decorrelation(p, 30.0, 30.0 + 10.0 * onset, 0.0, 1.0, Y));
    CHECK(d1 <= 0.15 * diag);
    CHECK(d2 <= 0.10 * diag);

    // the linear twist decorrelates superpolynomially; its 1e-3 onset sits
    // within a factor 100 of the predicted shift range
    double den = 1e4; // q2 q2' at modulus scale C = Q, n1 = q1 = r = 1
    double N2a = p.Q() * p.Q() * p.N0() / Y * p.eps_pow;
    double onset_n2 = 0.0;
    for (double n2 = 16.0; n2 <= 1024.0; n2 *= 2.0) {
        double g = std::abs(j_decorrelation(p, 30.0, 30.0, n2, den, Y));
        // the size bound sqrt(den / (n2 Y)) * N0 / T holds along the sweep
        CHECK(g <= std::sqrt(den / (n2 * Y)) * p.N0() / p.T * p.eps_pow);
        if (onset_n2 == 0.0 && g < 1e-3 * diag) onset_n2 = n2;
    }
    CHECK(onset_n2 > 0.0);
    CHECK(onset_n2 >= N2a / 100.0);
    CHECK(onset_n2 <= N2a * 100.0);
}

TEST_CASE("derived length formulas at a hand-checked instance") {
    TransformParams p{SpectralParams::balanced(300.0, -150.0),
                      300.0, 4000.0, 40.0, 1, 1, 1.0, false, 1.0};
    CHECK(p.Q() == doctest::Approx(10.0));
    CHECK(p.N0() == doctest::Approx(400.0));
    CHECK(p.Ntilde() == doctest::Approx(120000.0));
    CHECK(p.Mtilde() == doctest::Approx(40.0));
    // the prime-average variant trades one K for T/L
    TransformParams q = p;
    q.th2 = true;
    q.L = 1.0;
    CHECK(q.Ntilde() / p.Ntilde() == doctest::Approx(p.T / p.K));
    q.L = 5.0;
    CHECK(q.Neff() == doctest::Approx(20000.0));
    CHECK(q.Mtilde() == doctest::Approx(std::max(300.0 * 300.0 / 4000.0, 200.0)));
}

TEST_CASE("truncation report: measured onsets against the bookkeeping") {
    TransformParams p = small_height_params();
    TruncationReport rep = truncation_report(p);
    REQUIRE(rep.rows.size() == 6);
    CHECK(rep.rows[0].name == "N0");
    CHECK(rep.rows[0].formula == doctest::Approx(10.0));
    CHECK(rep.rows[1].name == "Mtilde");
    CHECK(rep.rows[1].measured > 0.0);
    CHECK(rep.rows[1].ratio <= 1.0);
    CHECK(!rep.rows[1].flagged);
    CHECK(rep.rows[2].name == "n2_cutoff");
    CHECK(rep.rows[2].measured > 0.0);
    CHECK(rep.rows[2].ratio >= 0.01);
    CHECK(rep.rows[2].ratio <= 100.0);
    CHECK(!rep.rows[2].flagged);
    CHECK(rep.rows[3].name == "Ntilde");
    CHECK(rep.rows[3].formula == doctest::Approx(3e8));
    CHECK(rep.rows[4].name == "N2");
    CHECK(rep.rows[5].name == "Ntilde_th2_ratio");
    CHECK(rep.rows[5].formula == doctest::Approx(p.T / p.K));

    std::ostringstream out;
    write_truncation_csv(out, rep);
    CHECK(out.str().substr(0, 36) == "name,formula,measured,ratio,flagged\n");
}
