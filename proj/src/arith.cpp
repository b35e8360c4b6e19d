#include "vfy/arith.hpp"
#include <numeric>
#include <string>

namespace vfy {

namespace {

i64 gcd64(i64 a, i64 b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

// smallest non-negative residue
i64 mod_pos(i64 a, i64 q) {
    i64 r = a % q;
    return r < 0 ? r + q : r;
}

} // namespace

i64 mobius(i64 n) {
    if (n <= 0) throw std::domain_error("mobius: n must be positive");
    i64 mu = 1;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

i64 euler_phi(i64 n) {
    if (n <= 0) throw std::domain_error("euler_phi: n must be positive");
    i64 phi = n;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        phi -= phi / p;
        while (n % p == 0) n /= p;
    }
    if (n > 1) phi -= phi / n;
    return phi;
}

i64 divisor_count(i64 n) {
    if (n <= 0) throw std::domain_error("divisor_count: n must be positive");
    i64 d = 1;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        d *= e + 1;
    }
    if (n > 1) d *= 2;
    return d;
}

std::vector<i64> divisors(i64 n) {
    if (n <= 0) throw std::domain_error("divisors: n must be positive");
    std::vector<i64> lo, hi;
    for (i64 d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        lo.push_back(d);
        if (d * d != n) hi.push_back(n / d);
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

i64 mod_inverse(i64 a, i64 q) {
    if (q <= 0) throw std::domain_error("mod_inverse: modulus must be positive");
    if (q == 1) return 0;
    a = mod_pos(a, q);
    i64 old_r = a, r = q, old_s = 1, s = 0;
    while (r) {
        i64 quo = old_r / r;
        i64 tmp = old_r - quo * r; old_r = r; r = tmp;
        tmp = old_s - quo * s; old_s = s; s = tmp;
    }
    if (old_r != 1)
        throw std::domain_error("mod_inverse: " + std::to_string(a) + " is not a unit mod " +
                                std::to_string(q));
    return mod_pos(old_s, q);
}

Cx kloosterman(i64 a, i64 b, i64 q) {
    if (q <= 0) throw std::domain_error("kloosterman: modulus must be positive");
    a = mod_pos(a, q);
    b = mod_pos(b, q);
    Cx sum = 0.0;
    for (i64 x = 1; x <= q; ++x) {
        if (gcd64(x, q) != 1) continue;
        i64 xbar = mod_inverse(x, q);
        sum += e_of((double)mod_pos(a * x + b * xbar, q) / (double)q);
    }
    if (q == 1) sum = 1.0;
    return sum;
}

i64 ramanujan_sum(i64 q, i64 n) {
    if (q <= 0) throw std::domain_error("ramanujan_sum: modulus must be positive");
    i64 g = gcd64(q, n);
    i64 sum = 0;
    for (i64 d : divisors(g)) sum += d * mobius(q / d);
    return sum;
}

CharSumParams::CharSumParams(i64 n1_, i64 n2_, i64 q_, i64 r_, i64 m_, int sign_)
    : n1(n1_), n2(n2_), q(q_), r(r_), m(m_), sign(sign_) {
    if (q <= 0 || r <= 0 || n1 <= 0)
        throw std::domain_error("CharSumParams: q, r, n1 must be positive");
    if ((q * r) % n1 != 0)
        throw std::domain_error("CharSumParams: n1 must divide q*r");
    if (sign != 1 && sign != -1)
        throw std::domain_error("CharSumParams: sign must be +1 or -1");
    // q1 collects every prime of q dividing n1*r; q2 is the coprime rest.
    q1 = 1;
    q2 = q;
    i64 core = gcd64(q2, n1 * r);
    while (core > 1) {
        q1 *= core;
        q2 /= core;
        core = gcd64(q2, n1 * r);
    }
}

CharSumTables::CharSumTables(i64 q, i64 r, i64 n1) : q_(q), r_(r), n1_(n1) {
    if (q <= 0 || r <= 0 || n1 <= 0 || (q * r) % n1 != 0)
        throw std::domain_error("CharSumTables: need q, r, n1 > 0 with n1 | q*r");
    M_ = q * r / n1;
    inv_q_.assign(q, -1);
    if (q == 1) {
        units_q_.push_back(0);
        inv_q_[0] = 0;
    } else {
        for (i64 a = 1; a < q; ++a)
            if (gcd64(a, q) == 1) {
                units_q_.push_back(a);
                inv_q_[a] = mod_inverse(a, q);
            }
    }
    inv_M_.assign(M_, -1);
    if (M_ == 1) {
        units_M_.push_back(0);
        inv_M_[0] = 0;
    } else {
        for (i64 b = 1; b < M_; ++b)
            if (gcd64(b, M_) == 1) {
                units_M_.push_back(b);
                inv_M_[b] = mod_inverse(b, M_);
            }
    }
    roots_q_.resize(q);
    for (i64 j = 0; j < q; ++j) roots_q_[j] = e_of((double)j / (double)q);
    roots_M_.resize(M_);
    for (i64 j = 0; j < M_; ++j) roots_M_[j] = e_of((double)j / (double)M_);
}

Cx CharSumTables::a_form(i64 n2, i64 m, int sign) const {
    i64 n2r = mod_pos(sign >= 0 ? n2 : -n2, M_);
    if (cached_n2_ != n2r || cached_sign_ != 1) {
        // Kloosterman values S(r * abar, sign*n2; M) for each unit a mod q.
        cached_n2_ = n2r;
        cached_sign_ = 1;
        kloo_.assign(units_q_.size(), 0.0);
        for (size_t i = 0; i < units_q_.size(); ++i) {
            i64 abar = inv_q_[units_q_[i]];
            i64 c1 = mod_pos(r_ * abar, M_);
            Cx s = 0.0;
            for (i64 x : units_M_)
                s += roots_M_[mod_pos(c1 * x + n2r * inv_M_[x], M_)];
            kloo_[i] = s;
        }
    }
    Cx sum = 0.0;
    i64 mr = mod_pos(m, q_);
    for (size_t i = 0; i < units_q_.size(); ++i) {
        i64 abar = inv_q_[units_q_[i]];
        sum += kloo_[i] * roots_q_[mod_pos(abar * mr, q_)];
    }
    return sum;
}

Cx CharSumTables::closed_form(i64 n2, i64 m, int sign, i64 ell) const {
    i64 n2r = mod_pos(sign >= 0 ? n2 : -n2, M_);
    Cx total = 0.0;
    for (i64 d : divisors(q_)) {
        i64 mu = mobius(q_ / d);
        if (mu == 0) continue;
        // beta runs over units mod M with ell * n1 * beta = -m (mod d)
        Cx inner = 0.0;
        for (i64 beta : units_M_) {
            if (mod_pos(ell * n1_ * beta + m, d) != 0) continue;
            inner += roots_M_[mod_pos(n2r * inv_M_[beta], M_)];
        }
        total += (double)(d * mu) * inner;
    }
    return total;
}

Cx charsum_a_form(const CharSumParams& p) {
    CharSumTables t(p.q, p.r, p.n1);
    return t.a_form(p.n2, p.m, p.sign);
}

Cx charsum_closed_form(const CharSumParams& p, i64 ell) {
    CharSumTables t(p.q, p.r, p.n1);
    return t.closed_form(p.n2, p.m, p.sign, ell);
}

double charsum_poisson(i64 q1, i64 q2, i64 q2p, i64 r, i64 n1,
                       i64 m, i64 mp, i64 ell, i64 ellp, i64 n2) {
    if (q1 <= 0 || q2 <= 0 || q2p <= 0 || r <= 0 || n1 <= 0)
        throw std::domain_error("charsum_poisson: moduli must be positive");
    i64 q = q1 * q2, qp = q1 * q2p;
    if ((q * r) % n1 != 0 || (qp * r) % n1 != 0)
        throw std::domain_error("charsum_poisson: n1 must divide both q*r and q'*r");
    i64 Mb = q1 * q2 * r / n1;   // beta modulus
    i64 Mbp = q1 * q2p * r / n1; // beta' modulus
    i64 Mc = q1 * q2 * q2p * r / n1; // congruence modulus

    // collect admissible unit residues with their inverses once
    std::vector<i64> ub, ubinv, ubp, ubpinv;
    for (i64 b = 1; b <= Mb; ++b)
        if (gcd64(b, Mb) == 1) {
            ub.push_back(b % Mb);
            ubinv.push_back(mod_inverse(b, Mb));
        }
    for (i64 b = 1; b <= Mbp; ++b)
        if (gcd64(b, Mbp) == 1) {
            ubp.push_back(b % Mbp);
            ubpinv.push_back(mod_inverse(b, Mbp));
        }
    if ((double)ub.size() * (double)ubp.size() * (double)divisor_count(q) *
            (double)divisor_count(qp) > 1e8)
        throw std::length_error("charsum_poisson: residue-pair budget exceeded");

    double total = 0.0;
    for (i64 d : divisors(q)) {
        i64 mu = mobius(q / d);
        if (mu == 0) continue;
        for (i64 dp : divisors(qp)) {
            i64 mup = mobius(qp / dp);
            if (mup == 0) continue;
            i64 count = 0;
            for (size_t i = 0; i < ub.size(); ++i) {
                if (mod_pos(ell * n1 * ub[i] + m, d) != 0) continue;
                // betabar q2' + n2 = beta'bar q2 (mod Mc); the congruence is
                // well defined: unit lifts of beta mod Mb differ by multiples
                // of Mb, and q2' * Mb = 0 mod Mc only up to the q2p factor --
                // we check against every unit lift of betabar mod Mc that
                // reduces correctly.  Equivalent shortcut: fix the canonical
                // inverse of the lift of beta to a unit mod Mc.
                for (size_t j = 0; j < ubp.size(); ++j) {
                    if (mod_pos(ellp * n1 * ubp[j] + mp, dp) != 0) continue;
                    // lift beta (mod Mb) and beta' (mod Mbp) to units mod Mc,
                    // then compare inverses.  A unit mod Mb lifts to a unit
                    // mod Mc whose inverse reduces to ubinv mod Mb, and the
                    // congruence value is independent of the lift choice.
                    bool hit = false;
                    for (i64 lift = ub[i]; lift < Mc; lift += Mb) {
                        if (gcd64(lift, Mc) != 1) continue;
                        i64 bb = mod_inverse(lift, Mc);
                        for (i64 liftp = ubp[j]; liftp < Mc; liftp += Mbp) {
                            if (gcd64(liftp, Mc) != 1) continue;
                            i64 bbp = mod_inverse(liftp, Mc);
                            if (mod_pos(bb * q2p - bbp * q2 + n2, Mc) == 0) hit = true;
                            break;
                        }
                        break;
                    }
                    if (hit) ++count;
                }
            }
            total += (double)(d * mu) * (double)(dp * mup) * (double)count;
        }
    }
    return total;
}

double charsum_poisson_majorant(i64 q1, i64 q2, i64 q2p, i64 r, i64 n1,
                                i64 m, i64 mp, i64 n2) {
    double pre = (double)(q1 * q1) * (double)r * (double)gcd64(m, n1) / (double)n1;
    i64 g = gcd64(q2, n1 * q2p - m * n2);
    i64 gp = gcd64(q2p, n1 * q2 + mp * n2);
    double dsum = 0.0;
    for (i64 d2 : divisors(g))
        for (i64 d2p : divisors(gp)) dsum += (double)(d2 * d2p);
    return pre * dsum * 10.0; // slack factor standing in for the epsilon power
}

} // namespace vfy
