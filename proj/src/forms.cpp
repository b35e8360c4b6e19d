#include "vfy/forms.hpp"
#include <cmath>
#include <numeric>

namespace vfy {

std::vector<__int128> tau_coefficients(long long n_max) {
    if (n_max < 1 || n_max > 1000000)
        throw std::domain_error("tau_coefficients: need 1 <= n_max <= 1e6");
    // Delta = q * P(q)^24 with P = prod (1-q^n).  Jacobi:
    //   P^3 = sum_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2},
    // so build P^3 sparsely and multiply it in seven more times.
    long long len = n_max; // coefficients of q^0 .. q^{len-1} of P^24
    struct Term { long long e; long long c; };
    std::vector<Term> sparse;
    for (long long k = 0; k * (k + 1) / 2 < len; ++k)
        sparse.push_back({k * (k + 1) / 2, (k % 2 ? -1 : 1) * (2 * k + 1)});

    std::vector<__int128> acc(len, 0);
    for (const Term& t : sparse) acc[t.e] = t.c;
    std::vector<__int128> next(len);
    for (int pass = 1; pass < 8; ++pass) {
        std::fill(next.begin(), next.end(), (__int128)0);
        for (const Term& t : sparse)
            for (long long i = 0; i + t.e < len; ++i)
                if (acc[i] != 0) next[i + t.e] += (__int128)t.c * acc[i];
        acc.swap(next);
    }
    // tau(n) = [q^{n-1}] P^24
    std::vector<__int128> tau(n_max);
    for (long long n = 1; n <= n_max; ++n) tau[n - 1] = acc[n - 1];
    return tau;
}

HoloForm delta_eigenvalues(long long n_max) {
    auto tau = tau_coefficients(n_max);
    HoloForm f;
    f.weight = 12;
    f.lambda_.resize(n_max);
    for (long long n = 1; n <= n_max; ++n)
        f.lambda_[n - 1] = (double)tau[n - 1] / std::pow((double)n, 5.5);
    return f;
}

GL3Coeffs GL3Coeffs::sym2(HoloForm f) {
    return GL3Coeffs(true, std::move(f), SpectralParams(0, 0, 0));
}

GL3Coeffs GL3Coeffs::eisenstein(SpectralParams t) {
    return GL3Coeffs(false, HoloForm{}, t);
}

void GL3Coeffs::satake_e(long long p, Cx& e1, Cx& e2) const {
    if (sym2_) {
        // Satake triple (alpha^2, 1, alpha^-2) with alpha + 1/alpha = lambda(p):
        // e1 = e2 = lambda(p)^2 - 1
        double lp = f_.lambda(p);
        e1 = e2 = lp * lp - 1.0;
    } else {
        // triple (p^{-i t1}, p^{-i t2}, p^{-i t3}), t1+t2+t3 = 0
        double lg = std::log((double)p);
        e1 = expi(-t_.t1 * lg) + expi(-t_.t2 * lg) + expi(-t_.t3 * lg);
        e2 = std::conj(e1);
    }
}

Cx GL3Coeffs::prime_power(long long p, int a, int b) const {
    Cx e1, e2;
    satake_e(p, e1, e2);
    // complete homogeneous h_k in the Satake triple: h_k = e1 h_{k-1} - e2 h_{k-2} + h_{k-3}
    int top = a + b + 1;
    std::vector<Cx> h(top + 1);
    h[0] = 1.0;
    for (int k = 1; k <= top; ++k) {
        Cx v = e1 * h[k - 1];
        if (k >= 2) v -= e2 * h[k - 2];
        if (k >= 3) v += h[k - 3];
        h[k] = v;
    }
    // A(p^a, p^b) = s_{(a+b, a, 0)} = h_{a+b} h_a - h_{a+b+1} h_{a-1}
    Cx val = h[a + b] * h[a];
    if (a >= 1) val -= h[a + b + 1] * h[a - 1];
    return val;
}

Cx GL3Coeffs::coeff(long long m, long long n) const {
    if (m < 1 || n < 1)
        throw std::domain_error("GL3Coeffs::coeff: arguments must be positive");
    Cx val = 1.0;
    // factor over primes of m*n without forming the product
    auto strip = [](long long& x, long long p) {
        int e = 0;
        while (x % p == 0) { x /= p; ++e; }
        return e;
    };
    for (long long p = 2; p * p <= m || p * p <= n; ++p) {
        if (m % p && n % p) continue;
        int a = strip(m, p), b = strip(n, p);
        val *= prime_power(p, a, b);
    }
    // at most one leftover prime on each side
    if (m > 1 && m == n) {
        val *= prime_power(m, 1, 1);
    } else {
        if (m > 1) val *= prime_power(m, 1, 0);
        if (n > 1) val *= prime_power(n, 0, 1);
    }
    return val;
}

RamanujanAverage ramanujan_average_check(const GL3Coeffs& c, double x) {
    if (x < 1 || x > 2e5)
        throw std::domain_error("ramanujan_average_check: x outside budget");
    double lhs = 0.0;
    for (long long n1 = 1; (double)n1 * n1 <= x; ++n1)
        for (long long n2 = 1; (double)n1 * n1 * n2 <= x; ++n2) {
            Cx a = c.coeff(n1, n2);
            lhs += std::norm(a);
        }
    return {lhs, lhs / std::pow(x, 1.05)};
}

Cx mass_transfer_expand(const GL3Coeffs& c, long long r, long long n, long long ell) {
    if (ell < 2)
        throw std::domain_error("mass_transfer_expand: ell must be a prime >= 2");
    Cx val = c.coeff(r, n * ell);
    if (n % ell == 0) val += c.coeff(r * ell, n / ell);
    if (r % ell == 0) val += c.coeff(r / ell, n);
    return val;
}

PrimeMass coeff_prime_mass(const GL3Coeffs& c, long long L) {
    auto is_prime = [](long long n) {
        if (n < 2) return false;
        for (long long d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    };
    PrimeMass pm{0.0, 0};
    for (long long ell = L; ell <= 2 * L; ++ell)
        if (is_prime(ell)) {
            pm.mass += std::norm(c.coeff(1, ell));
            ++pm.primes;
        }
    return pm;
}

void write_coeff_csv(std::ostream& out, const GL3Coeffs& c, long long m_max, long long n_max) {
    out << "m,n,re,im\n";
    for (long long m = 1; m <= m_max; ++m)
        for (long long n = 1; n <= n_max; ++n) {
            Cx a = c.coeff(m, n);
            out << m << ',' << n << ',' << a.real() << ',' << a.imag() << '\n';
        }
}

} // namespace vfy
