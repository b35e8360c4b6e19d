#pragma once
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>
#include "vfy/complexutil.hpp"
#include "vfy/specfn.hpp"

namespace vfy {

// Holomorphic Hecke eigenform data: weight and Deligne-normalized eigenvalues.
struct HoloForm {
    int weight;
    std::vector<double> lambda_; // lambda_[n-1] = lambda_f(n)

    double lambda(long long n) const {
        if (n < 1 || n > (long long)lambda_.size())
            throw std::out_of_range("HoloForm::lambda: n outside stored range");
        return lambda_[n - 1];
    }
    long long n_max() const { return (long long)lambda_.size(); }
};

// Exact tau(n), 1 <= n <= n_max, from the 24th power of the eta product.
std::vector<__int128> tau_coefficients(long long n_max);

// The weight-12 discriminant form: lambda_f(n) = tau(n) / n^{11/2}.
HoloForm delta_eigenvalues(long long n_max);

// Degree-3 coefficient source: either the symmetric-square lift of a
// holomorphic form (real coefficients) or an Eisenstein-type model with free
// spectral parameters (complex, conjugate-dual).
class GL3Coeffs {
public:
    static GL3Coeffs sym2(HoloForm f);
    static GL3Coeffs eisenstein(SpectralParams t);

    Cx coeff(long long m, long long n) const;
    bool is_sym2() const { return sym2_; }

private:
    GL3Coeffs(bool s2, HoloForm f, SpectralParams t)
        : sym2_(s2), f_(std::move(f)), t_(t) {}
    // elementary symmetric functions e1, e2 of the three Satake parameters
    // at p (e3 = 1 always)
    void satake_e(long long p, Cx& e1, Cx& e2) const;
    Cx prime_power(long long p, int a, int b) const;

    bool sym2_;
    HoloForm f_;
    SpectralParams t_;
};

inline double sym2_coeff(const HoloForm& f, long long m, long long n) {
    return GL3Coeffs::sym2(f).coeff(m, n).real();
}
inline Cx eisenstein_coeff(const SpectralParams& t, long long m, long long n) {
    return GL3Coeffs::eisenstein(t).coeff(m, n);
}

// lhs = sum_{n1^2 n2 <= x} |A(n1,n2)|^2 and its ratio against x^{1.05}.
struct RamanujanAverage {
    double lhs;
    double ratio;
};
RamanujanAverage ramanujan_average_check(const GL3Coeffs& c, double x);

// A(r, n ell) + A(r ell, n/ell) + A(r/ell, n), terms dropped when the
// divisibility fails; equals A(1, ell) A(r, n) for prime ell.
Cx mass_transfer_expand(const GL3Coeffs& c, long long r, long long n, long long ell);

// sum over primes ell in [L, 2L] of |A(1, ell)|^2, plus the prime count.
struct PrimeMass {
    double mass;
    long long primes;
};
PrimeMass coeff_prime_mass(const GL3Coeffs& c, long long L);

// CSV rows "m,n,re,im" for 1 <= m <= m_max, 1 <= n <= n_max.
void write_coeff_csv(std::ostream& out, const GL3Coeffs& c, long long m_max, long long n_max);

} // namespace vfy
