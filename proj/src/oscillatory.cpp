#include "vfy/oscillatory.hpp"
#include <algorithm>
#include <cmath>
#include <vector>

namespace vfy {

namespace {

// 15-point Kronrod extension of 7-point Gauss on [-1,1]
const double XGK[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
};
const double WGK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
const double WG[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct PanelResult {
    Cx value;
    double err;
};

template <class F>
PanelResult gk15(const F& f, double a, double b, long long& evals, long long budget, Cx partial) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    evals += 15;
    if (evals > budget) throw QuadratureBudgetError(partial);
    Cx fc = f(c);
    Cx kron = WGK[7] * fc, gauss = WG[3] * fc;
    for (int i = 0; i < 7; ++i) {
        Cx lo = f(c - h * XGK[i]), hi = f(c + h * XGK[i]);
        kron += WGK[i] * (lo + hi);
        if (i % 2 == 1) gauss += WG[i / 2] * (lo + hi);
    }
    kron *= h;
    gauss *= h;
    return {kron, std::abs(kron - gauss)};
}

// adaptive panels; when dphase is provided, panels are halved until the local
// phase variation width * max|dphase| drops below pi/2 before the error
// estimate is consulted
Cx adaptive(const CxFn& f, const RealFn* dphase, double a, double b, double tol,
            long long& evals, long long budget) {
    struct Panel { double a, b; };
    std::vector<Panel> stack{{a, b}};
    Cx total = 0.0;
    double span = b - a;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        double w = p.b - p.a;
        bool force_split = false;
        if (dphase && w > 1e-13 * span) {
            double dmax = 0.0;
            for (int i = 0; i <= 8; ++i)
                dmax = std::max(dmax, std::abs((*dphase)(p.a + w * i / 8.0)));
            evals += 9;
            if (evals > budget) throw QuadratureBudgetError(total);
            force_split = dmax * w > 0.5 * PI;
        }
        if (!force_split) {
            PanelResult r = gk15(f, p.a, p.b, evals, budget, total);
            if (r.err <= tol * std::max(w / span, 1e-12) || w <= 1e-14 * span) {
                total += r.value;
                continue;
            }
        }
        double mid = 0.5 * (p.a + p.b);
        stack.push_back({mid, p.b});
        stack.push_back({p.a, mid});
    }
    return total;
}

double sample_min_abs(const RealFn& f, double a, double b, int n) {
    double m = std::abs(f(a));
    for (int i = 1; i <= n; ++i) m = std::min(m, std::abs(f(a + (b - a) * i / n)));
    return m;
}

} // namespace

double Bump::base(double u) {
    if (u * u >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

double Bump::base_d1(double u) {
    if (u * u >= 1.0) return 0.0;
    double s = 1.0 - u * u;
    return base(u) * (-2.0 * u / (s * s));
}

double Bump::base_d2(double u) {
    if (u * u >= 1.0) return 0.0;
    double s = 1.0 - u * u;
    double a = -2.0 * u / (s * s); // (log base)'
    double da = -2.0 / (s * s) - 8.0 * u * u / (s * s * s);
    return base(u) * (a * a + da);
}

double Bump::base_mass() {
    static const double m = [] {
        long long evals = 0;
        return adaptive([](double u) { return Cx(base(u), 0.0); }, nullptr, -1.0, 1.0,
                        1e-14, evals, 1000000)
            .real();
    }();
    return m;
}

AmplitudeSpec Bump::amplitude() const {
    Bump b = *this;
    return {[b](double x) { return b(x); },
            [b](double x) { return b.d1(x); },
            [b](double x) { return b.d2(x); },
            // U = halfwidth/6 so that the j <= 4 derivative envelope
            // |w^(j)| <= 10 X / U^j holds (the bump's edge derivatives spike)
            center - halfwidth, center + halfwidth, 1.0, halfwidth / 6.0};
}

Cx integrate_adaptive(const CxFn& f, double a, double b, double tol, long long budget) {
    long long evals = 0;
    return adaptive(f, nullptr, a, b, tol, evals, budget);
}

Cx integrate_with_phase_hint(const CxFn& f, const RealFn& dphase, double a, double b,
                             double tol, long long budget) {
    long long evals = 0;
    return adaptive(f, &dphase, a, b, tol, evals, budget);
}

Cx integrate_oscillatory(const AmplitudeSpec& w, const PhaseSpec& h, double tol) {
    if (tol < 1e-12) throw std::domain_error("integrate_oscillatory: tol must be >= 1e-12");
    long long evals = 0;
    CxFn f = [&w, &h](double t) { return w.w(t) * expi(h.h(t)); };
    return adaptive(f, &h.h1, w.a, w.b, tol, evals, 10000000);
}

double nonstationary_certificate(const AmplitudeSpec& w, const PhaseSpec& h, int A) {
    double R = sample_min_abs(h.h1, w.a, w.b, 1000);
    if (!(R > 0))
        throw std::domain_error("nonstationary_certificate: h' vanishes in the support");
    double t1 = std::pow(h.Q * R / std::sqrt(h.Y), -A);
    double t2 = std::pow(R * w.U, -A);
    return (w.b - w.a) * w.X * (t1 + t2);
}

Cx stationary_phase_expand(const AmplitudeSpec& w, const PhaseSpec& h, int n_terms) {
    if (n_terms < 1 || n_terms > 3)
        throw std::domain_error("stationary_phase_expand: n_terms must be 1..3");
    // locate the unique sign change of h' on [a,b]
    const int grid = 4096;
    double lo = 0, hi = 0;
    int found = 0;
    double prev = h.h1(w.a);
    for (int i = 1; i <= grid; ++i) {
        double t = w.a + (w.b - w.a) * i / grid;
        double cur = h.h1(t);
        if (prev == 0.0 || prev * cur < 0) {
            ++found;
            lo = w.a + (w.b - w.a) * (i - 1) / grid;
            hi = t;
        }
        prev = cur;
    }
    if (found != 1)
        throw std::domain_error("stationary_phase_expand: need exactly one stationary point");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        (h.h1(lo) * h.h1(mid) <= 0 ? hi : lo) = mid;
    }
    double t0 = 0.5 * (lo + hi);
    double hpp = h.h2(t0);
    if (!(hpp > 0))
        throw std::domain_error("stationary_phase_expand: need h''(t0) > 0");

    auto G = [&](double t) -> Cx {
        double H = h.h(t) - h.h(t0) - 0.5 * hpp * (t - t0) * (t - t0);
        return w.w(t) * expi(H);
    };
    double step = w.U * 1e-2;
    auto d2 = [&](double s) {
        return (G(t0 + s) - 2.0 * G(t0) + G(t0 - s)) / (s * s);
    };
    auto d4 = [&](double s) {
        return (G(t0 + 2 * s) - 4.0 * G(t0 + s) + 6.0 * G(t0) - 4.0 * G(t0 - s) +
                G(t0 - 2 * s)) / (s * s * s * s);
    };
    const Cx I(0, 1);
    Cx pre = std::sqrt(TWO_PI) * expi(0.25 * PI);
    Cx q = I / (2.0 * hpp);
    Cx sum = pre * G(t0);
    if (n_terms >= 2) {
        Cx G2 = (4.0 * d2(step / 2) - d2(step)) / 3.0;
        sum += pre * q * G2;
    }
    if (n_terms >= 3) {
        Cx G4 = (16.0 * d4(step / 2) - d4(step)) / 15.0;
        sum += pre * (q * q) * G4 / 2.0;
    }
    return expi(h.h(t0)) / std::sqrt(hpp) * sum;
}

double second_derivative_bound_1d(const AmplitudeSpec& w, const PhaseSpec& h) {
    const int n = 2000;
    double lam2 = h.h2(w.a);
    for (int i = 1; i <= n; ++i)
        lam2 = std::min(lam2, h.h2(w.a + (w.b - w.a) * i / n));
    if (!(lam2 > 0))
        throw std::domain_error("second_derivative_bound_1d: h'' must stay positive");
    long long evals = 0;
    double var = adaptive([&](double t) { return Cx(std::abs(w.w1(t)), 0.0); }, nullptr,
                          w.a, w.b, 1e-10, evals, 2000000)
                     .real();
    return 8.0 * var / std::sqrt(lam2);
}

double second_derivative_bound_2d(const Amplitude2D& g, const Phase2D& f,
                                  double L1, double L2, double r) {
    // sampled Hessian shape checks
    const int n = 20;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            double x = g.ax + (g.bx - g.ax) * i / n, y = g.ay + (g.by - g.ay) * j / n;
            double axx = std::abs(f.fxx(x, y)), ayy = std::abs(f.fyy(x, y));
            double axy = std::abs(f.fxy(x, y));
            if (axx < L1 * L1 / 100 || axx > L1 * L1 * 100 ||
                ayy < L2 * L2 / 100 || ayy > L2 * L2 * 100)
                throw std::domain_error("second_derivative_bound_2d: diagonal Hessian scale off");
            if (axy > 10 * L1 * L2)
                throw std::domain_error("second_derivative_bound_2d: mixed derivative too large");
            double det = std::abs(f.fxx(x, y) * f.fyy(x, y) - f.fxy(x, y) * f.fxy(x, y));
            if (det < L1 * L1 * L2 * L2 / 100)
                throw std::domain_error("second_derivative_bound_2d: Hessian degeneracy");
        }
    // Var(g) = integral of |g_xy| (Simpson product grid)
    const int m = 200;
    double hx = (g.bx - g.ax) / m, hy = (g.by - g.ay) / m;
    double var = 0.0;
    for (int i = 0; i <= m; ++i) {
        double wx = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        for (int j = 0; j <= m; ++j) {
            double wy = (j == 0 || j == m) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            var += wx * wy * std::abs(g.gxy(g.ax + i * hx, g.ay + j * hy));
        }
    }
    var *= hx * hy / 9.0;
    double area = (g.bx - g.ax) * (g.by - g.ay);
    return ((1.0 + std::log(area) + std::log(L1) + std::log(L2)) / (L1 * L2) + r / L2) * var;
}

Cx integrate_oscillatory_2d(const Amplitude2D& g, const Phase2D& f, double tol) {
    // separability probes for the phase and (multiplicatively) the amplitude
    double x0 = 0.5 * (g.ax + g.bx), y0 = 0.5 * (g.ay + g.by);
    double fscale = 1.0, gmax = 0.0, gx0 = x0, gy0 = y0;
    bool sep_f = true, sep_g = true;
    for (int i = 0; i <= 12; ++i)
        for (int j = 0; j <= 12; ++j) {
            double x = g.ax + (g.bx - g.ax) * i / 12.0, y = g.ay + (g.by - g.ay) * j / 12.0;
            fscale = std::max(fscale, std::abs(f.f(x, y)));
            if (std::abs(g.g(x, y)) > gmax) {
                gmax = std::abs(g.g(x, y));
                gx0 = x;
                gy0 = y;
            }
        }
    for (int i = 0; i <= 12 && sep_f; ++i)
        for (int j = 0; j <= 12; ++j) {
            double x = g.ax + (g.bx - g.ax) * i / 12.0, y = g.ay + (g.by - g.ay) * j / 12.0;
            if (std::abs(f.f(x, y) - f.f(x, y0) - f.f(x0, y) + f.f(x0, y0)) > 1e-9 * fscale) {
                sep_f = false;
                break;
            }
        }
    if (gmax > 0)
        for (int i = 0; i <= 12 && sep_g; ++i)
            for (int j = 0; j <= 12; ++j) {
                double x = g.ax + (g.bx - g.ax) * i / 12.0, y = g.ay + (g.by - g.ay) * j / 12.0;
                if (std::abs(g.g(x, y) * g.g(gx0, gy0) - g.g(x, gy0) * g.g(gx0, y)) >
                    1e-9 * gmax * gmax) {
                    sep_g = false;
                    break;
                }
            }

    long long evals = 0;
    const long long budget = 10000000;
    if (sep_f && sep_g && gmax > 0) {
        // I = Ix * Iy / (g(x*,y*) e^{i f(x*,y*)}) with slice integrals along
        // the maximizing row and column
        RealFn dpx = [&](double x) { return f.fx(x, gy0); };
        RealFn dpy = [&](double y) { return f.fy(gx0, y); };
        Cx Ix = adaptive([&](double x) { return g.g(x, gy0) * expi(f.f(x, gy0)); }, &dpx,
                         g.ax, g.bx, tol, evals, budget);
        Cx Iy = adaptive([&](double y) { return g.g(gx0, y) * expi(f.f(gx0, y)); }, &dpy,
                         g.ay, g.by, tol, evals, budget);
        return Ix * Iy / (g.g(gx0, gy0) * expi(f.f(gx0, gy0)));
    }
    // nested adaptive fallback
    RealFn dpx_env = [&](double x) {
        double m = 0.0;
        for (int j = 0; j <= 8; ++j)
            m = std::max(m, std::abs(f.fx(x, g.ay + (g.by - g.ay) * j / 8.0)));
        return m;
    };
    CxFn outer = [&](double x) -> Cx {
        RealFn dpy = [&](double y) { return f.fy(x, y); };
        return adaptive([&](double y) { return g.g(x, y) * expi(f.f(x, y)); }, &dpy,
                        g.ay, g.by, tol, evals, budget);
    };
    return adaptive(outer, &dpx_env, g.ax, g.bx, tol, evals, budget);
}

} // namespace vfy
