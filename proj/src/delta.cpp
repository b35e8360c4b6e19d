#include "vfy/delta.hpp"
#include "vfy/arith.hpp"
#include "fft_radix2.h"
#include <cmath>
#include <stdexcept>

namespace vfy {

using detail::fft;
using detail::next_pow2;

namespace {

// smooth step: 0 at t <= 0, 1 at t >= 1
double sstep(double t) {
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

} // namespace

double DeltaExpansion::window(double x) const {
    return sstep((x_max - std::abs(x)) / (x_max - x_flat()));
}

double DeltaExpansion::g(long long q, double x) const {
    const std::vector<double>& t = gtab[q];
    double h = dx[q];
    double s = std::abs(x) / h;
    long long k = (long long)std::floor(s);
    if (k + 2 >= (long long)t.size()) return 0.0;
    double u = s - k;
    // Catmull-Rom through t[k-1..k+2]; even reflection at x = 0
    double p0 = k >= 1 ? t[k - 1] : t[1];
    double p1 = t[k], p2 = t[k + 1], p3 = t[k + 2];
    return p1 + 0.5 * u * (p2 - p0 + u * (2 * p0 - 5 * p1 + 4 * p2 - p3 +
                                          u * (3 * (p1 - p2) + p3 - p0)));
}

Bump default_delta_seed(long long L) {
    double Q = 2.0 * std::sqrt((double)L);
    return Bump(0.75 * Q, 0.25 * Q);
}

DeltaExpansion build_g(long long L, const Bump& omega, double x_max) {
    if (L < 100 || L > 1000000)
        throw std::domain_error("build_g: need 100 <= L <= 1e6");
    double Q = 2.0 * std::sqrt((double)L);
    if (omega.center - omega.halfwidth < 0.5 * Q - 1e-9 ||
        omega.center + omega.halfwidth > Q + 1e-9)
        throw std::domain_error("build_g: seed bump must live in [Q/2, Q]");

    // normalize the seed over the integers: sum_d omega(d) = 1
    double norm = 0.0;
    for (long long d = (long long)(0.5 * Q); d <= (long long)Q + 1; ++d)
        norm += omega(d);
    if (norm < 1e-12) throw std::domain_error("build_g: seed bump misses the integers");

    long long qmax = (long long)Q;
    DeltaExpansion ex;
    ex.L = L;
    ex.Q = Q;
    ex.x_max = x_max;
    ex.cq.assign(qmax + 1, 0.0);
    ex.gtab.resize(qmax + 1);
    ex.dx.assign(qmax + 1, 1.0);

    for (long long q = 1; q <= qmax; ++q)
        for (long long m = 1; m * q <= (long long)Q + 1; ++m)
            ex.cq[q] += omega(m * q) / norm / (double)(m * q);

    // exact normalization: sum_q phi(q) c_q = sum_d omega(d)/norm = 1
    double resid = -1.0;
    for (long long q = 1; q <= qmax; ++q) resid += euler_phi(q) * ex.cq[q];
    if (std::abs(resid) > 1e-6)
        throw std::runtime_error("build_g: seed normalization residual too large");

    double span = 8.0 * (double)L; // u in [-4L, 4L)
    for (long long q = 1; q <= qmax; ++q) {
        double qQ = q * Q;
        size_t N = next_pow2((size_t)std::max(512.0, 2048.0 * L / qQ));
        double du = span / (double)N;
        size_t P = 32 * N;
        std::vector<Cx> buf(P, Cx(0, 0));
        for (size_t i = 0; i < N; ++i) {
            double u = -4.0 * L + du * (double)i;
            double au = std::abs(u);
            double phi = sstep((4.0 * L - au) / (2.0 * L));
            if (phi == 0.0) continue;
            // S_q(u) = sum_m omega(|u|/(mq)) / (mq), support m in (u/qQ, 2u/qQ)
            double S = 0.0;
            long long mlo = (long long)std::floor(au / qQ), mhi = (long long)std::ceil(2.0 * au / qQ);
            for (long long m = std::max<long long>(1, mlo); m <= mhi; ++m)
                S += omega(au / (double)(m * q)) / norm / (double)(m * q);
            buf[i] = Cx(phi * (ex.cq[q] - S), 0.0);
        }
        fft(buf);
        double dxq = qQ / ((double)P * du);
        size_t kmax = (size_t)std::ceil((ex.x_max + 1.0) / dxq) + 2;
        ex.dx[q] = dxq;
        ex.gtab[q].resize(kmax + 1);
        for (size_t k = 0; k <= kmax; ++k) {
            // undo the u-offset: g(x_k) = du * Re(e(k N/(2P)) * F_k)
            Cx ph = e_of((double)k * (double)N / (2.0 * (double)P));
            ex.gtab[q][k] = du * (ph * buf[k % P]).real();
        }
    }
    return ex;
}

namespace {

double delta_sum(const DeltaExpansion& ex, long long n, long long q_cap, double x_cap) {
    double total = 0.0;
    long long qmax = std::min<long long>((long long)ex.Q, q_cap);
    double xhi = std::min(ex.x_max, x_cap);
    for (long long q = 1; q <= qmax; ++q) {
        double freq = TWO_PI * (double)n / (q * ex.Q);
        RealFn dp = [freq](double) { return std::abs(freq); };
        Cx I = integrate_with_phase_hint(
            [&, q](double x) {
                return Cx(ex.window(x) * ex.g(q, x) * std::cos(freq * x), 0.0);
            },
            dp, 0.0, xhi, 1e-8, 4000000);
        total += 2.0 * I.real() * (double)ramanujan_sum(q, n) / ((double)q * ex.Q);
    }
    return total;
}

} // namespace

double delta_eval(const DeltaExpansion& ex, long long n) {
    if (std::llabs(n) > 2 * ex.L)
        throw std::domain_error("delta_eval: |n| must be <= 2L");
    return delta_sum(ex, n, (long long)ex.Q, ex.x_max);
}

std::vector<double> delta_eval_batch(const DeltaExpansion& ex, long long n_max) {
    if (n_max < 0 || n_max > 2 * ex.L)
        throw std::domain_error("delta_eval_batch: need 0 <= n_max <= 2L");
    std::vector<double> out(2 * n_max + 1, 0.0);
    long long qmax = (long long)ex.Q;
    for (long long q = 1; q <= qmax; ++q) {
        // frequencies 2 pi n / (qQ) are the DFT bins of a period-P grid once
        // P is an integer multiple s of qQ covering the even extension of the
        // integrand; h <= 0.01 keeps the aliased spectral tail below 1e-7
        double P0 = (double)q * ex.Q;
        long long s = (long long)std::ceil((2.0 * ex.x_max + 4.0) / P0);
        double P = P0 * (double)s;
        size_t M = next_pow2((size_t)std::ceil(P / 0.01));
        while ((long long)M < 2 * n_max * s + 2) M <<= 1;
        double h = P / (double)M;
        std::vector<Cx> a(M, Cx(0.0));
        for (size_t j = 0; j < M; ++j) {
            double x = j * h;
            if (x > P - x) x = P - x; // even periodic fold
            if (x <= ex.x_max) a[j] = Cx(ex.window(x) * ex.g(q, x), 0.0);
        }
        fft(a);
        for (long long n = 0; n <= n_max; ++n) {
            double I = 0.5 * h * a[(size_t)(n * s)].real();
            double c = 2.0 * I * (double)ramanujan_sum(q, n) / P0;
            out[n_max + n] += c;
            if (n > 0) out[n_max - n] += c; // Ramanujan sums are even in n
        }
    }
    return out;
}

double delta_eval_capped(const DeltaExpansion& ex, long long n, long long q_cap, double x_cap) {
    if (std::llabs(n) > 2 * ex.L)
        throw std::domain_error("delta_eval: |n| must be <= 2L");
    return delta_sum(ex, n, q_cap, x_cap);
}

GPropertiesReport g_properties_check(const DeltaExpansion& ex) {
    GPropertiesReport r{0, 0, 0, 0};
    long long qmax = (long long)ex.Q;
    double logQ = std::log(ex.Q);
    for (long long q = 1; q <= qmax; ++q) {
        const std::vector<double>& t = ex.gtab[q];
        double dxq = ex.dx[q];
        // finite differences at exact grid nodes (the table is spectrally
        // accurate there; interpolating between nodes would drown g'' in noise)
        long long fd = std::max<long long>(1, (long long)std::llround(0.01 / dxq));
        long long stride = std::max<long long>(fd, (long long)(0.05 / dxq));
        double h = fd * dxq;
        for (long long k = 0; k + fd < (long long)t.size() &&
                              k * dxq <= ex.x_max; k += stride) {
            double x = k * dxq;
            double gv = t[k];
            double henv = (ex.Q / q) * sqr((double)q / ex.Q + x);
            r.worst_h_ratio = std::max(r.worst_h_ratio, std::abs(gv - 1.0) / henv);
            if (k >= fd) {
                double g1 = (t[k + fd] - t[k - fd]) / (2 * h);
                double g2 = (t[k + fd] - 2 * gv + t[k - fd]) / (h * h);
                double env = logQ * std::min(ex.Q / q, 1.0 / x);
                r.worst_d1_ratio = std::max(r.worst_d1_ratio, std::abs(x * g1) / env);
                r.worst_d2_ratio = std::max(r.worst_d2_ratio, std::abs(x * x * g2) / env);
            }
            if (x >= 2.0)
                r.worst_tail_ratio = std::max(r.worst_tail_ratio, std::abs(gv) * x * x);
        }
    }
    return r;
}

CondLowering conductor_lowering_check(const HoloForm& f, const GL3Coeffs& c,
                                      double N, double K, long long r, double t3) {
    Bump wn(1.5, 0.5), un(1.45, 0.35);
    Cx lhs = 0.0;
    std::vector<long long> ns;
    for (long long n = (long long)N; n <= (long long)(2 * N) && n <= f.n_max(); ++n)
        if (wn(n / N) != 0.0 && un(n / N) != 0.0) {
            lhs += c.coeff(r, n) * f.lambda(n) * wn(n / N) * un(n / N);
            ns.push_back(n);
        }
    // v-average of the same diagonal sum with the (m/n)^{i(t3+v)} factor kept
    Cx rhs = integrate_adaptive(
        [&](double s) -> Cx {
            Cx acc = 0.0;
            for (long long n : ns) {
                Cx phase = std::pow(Cx((double)n / (double)n, 0.0), Cx(0.0, t3 + s * K));
                acc += c.coeff(r, n) * f.lambda(n) * wn(n / N) * un(n / N) * phase;
            }
            return wn.normalized(s) * acc;
        },
        1.0, 2.0, 1e-10 * (1.0 + std::abs(lhs)));
    return {lhs, rhs};
}

double v_damping(double K, double ratio) {
    Bump wn(1.5, 0.5);
    double om = K * std::log(ratio);
    RealFn dp = [om](double) { return std::abs(om); };
    Cx I = integrate_with_phase_hint(
        [&](double s) { return wn.normalized(s) * expi(om * s); }, dp, 1.0, 2.0, 1e-10);
    return std::abs(I);
}

void write_delta_csv(std::ostream& out, const DeltaExpansion& ex, long long q) {
    out << "q,x,re,im\n";
    for (size_t k = 0; k < ex.gtab[q].size(); ++k)
        out << q << ',' << k * ex.dx[q] << ',' << ex.gtab[q][k] << ',' << 0.0 << '\n';
}

} // namespace vfy
