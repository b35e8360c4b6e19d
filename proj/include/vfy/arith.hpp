#pragma once
#include <cstdint>
#include <stdexcept>
#include <vector>
#include "vfy/complexutil.hpp"

namespace vfy {

using i64 = long long;

i64 mobius(i64 n);
i64 euler_phi(i64 n);
i64 divisor_count(i64 n);
std::vector<i64> divisors(i64 n);
// inverse of a mod q (q >= 1); throws std::domain_error unless gcd(a,q) = 1
i64 mod_inverse(i64 a, i64 q);

// S(a, b; q) = sum over units x mod q of e((a x + b xbar)/q), exact enumeration.
Cx kloosterman(i64 a, i64 b, i64 q);

// Ramanujan sum c_q(n) = sum_{d | (q,n)} d mu(q/d).
i64 ramanujan_sum(i64 q, i64 n);

// Parameters of the twisted character sum attached to a modulus q, twist
// level r, divisor n1 | q r, frequency n2, shift m and a sign.
// The modulus splits uniquely as q = q1 q2 with q1 | (n1 r)^inf and
// gcd(q2, n1 r) = 1.
struct CharSumParams {
    i64 n1, n2, q, r, m;
    int sign; // +1 or -1
    i64 q1, q2;

    CharSumParams(i64 n1_, i64 n2_, i64 q_, i64 r_, i64 m_, int sign_);
};

// sum_{a mod q}^* S(r abar, sign*n2; q r / n1) e(abar m / q), by enumeration.
Cx charsum_a_form(const CharSumParams& p);

// sum_{d|q} d mu(q/d) sum_{beta mod qr/n1 unit, n1 beta = -m mod d}
//     e(sign * betabar * n2 / (qr/n1)).
// Equals charsum_a_form exactly.  The optional ell inserts the mass-transfer
// variant congruence  ell * n1 * beta = -m mod d.
Cx charsum_closed_form(const CharSumParams& p, i64 ell = 1);

// Fixed-(q, r, n1) evaluation context: caches residue tables so grids over
// (n2, m, sign) are cheap.  Used by the exhaustive identity check.
class CharSumTables {
public:
    CharSumTables(i64 q, i64 r, i64 n1);
    Cx a_form(i64 n2, i64 m, int sign) const;
    Cx closed_form(i64 n2, i64 m, int sign, i64 ell = 1) const;
    i64 modulus() const { return M_; }

private:
    i64 q_, r_, n1_, M_; // M = q r / n1
    std::vector<i64> units_q_, inv_q_;   // units mod q and inverse table
    std::vector<i64> units_M_, inv_M_;   // units mod M
    std::vector<Cx> roots_q_, roots_M_;  // e(j/q), e(j/M)
    mutable i64 cached_n2_ = -1;
    mutable int cached_sign_ = 0;
    mutable std::vector<Cx> kloo_; // S(r abar, sign n2; M) per unit a
};

// Post-Poisson double character sum:
//   sum_{d|q1q2} sum_{d'|q1q2'} d d' mu(q1q2/d) mu(q1q2'/d')
//   sum*_{beta mod q1q2r/n1:  ell  n1 beta  = -m  mod d}
//   sum*_{beta' mod q1q2'r/n1: ell' n1 beta' = -m' mod d'}
//   [ betabar q2' - beta'bar q2 + n2 = 0  mod q1q2q2'r/n1 ]  (count 1)
// Exact enumeration; throws std::length_error beyond 1e8 residue pairs.
double charsum_poisson(i64 q1, i64 q2, i64 q2p, i64 r, i64 n1,
                       i64 m, i64 mp, i64 ell, i64 ellp, i64 n2);

// The CRT divisor-sum majorant for charsum_poisson (with slack factor 10):
//   (q1^2 r (m,n1) / n1) * sum_{d2 | (q2, n1 q2' - m n2)}
//                          sum_{d2' | (q2', n1 q2 + m' n2)} d2 d2'.
double charsum_poisson_majorant(i64 q1, i64 q2, i64 q2p, i64 r, i64 n1,
                                i64 m, i64 mp, i64 n2);

} // namespace vfy
