#pragma once
#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vfy {

// Exact rational p/q with q > 0, always reduced.  Sizes here stay tiny
// (exponent bookkeeping), so int64 with overflow-checked ops is plenty.
struct Rational {
    long long p = 0, q = 1;

    Rational() = default;
    Rational(long long n) : p(n), q(1) {}
    Rational(long long n, long long d);

    Rational operator-() const { return Rational(-p, q); }
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    bool operator==(const Rational& o) const { return p == o.p && q == o.q; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    double value() const { return (double)p / (double)q; }
    std::string str() const;
};

// Affine exact expression a + b*xi + c*eta: the reduced T-exponent of a
// monomial after substituting every symbol by a T-power (xi and eta are the
// free exponents of the two tunable lengths).
struct AffineQ {
    Rational a, b, c;

    AffineQ() = default;
    AffineQ(Rational a0, Rational bxi = 0, Rational ceta = 0)
        : a(a0), b(bxi), c(ceta) {}

    AffineQ operator+(const AffineQ& o) const { return {a + o.a, b + o.b, c + o.c}; }
    AffineQ operator-(const AffineQ& o) const { return {a - o.a, b - o.b, c - o.c}; }
    AffineQ operator*(const Rational& s) const { return {a * s, b * s, c * s}; }
    bool operator==(const AffineQ& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator!=(const AffineQ& o) const { return !(*this == o); }

    Rational eval(const Rational& xi, const Rational& eta) const {
        return a + b * xi + c * eta;
    }
    std::string str() const;
};

// Symbols of the exponent ledger.
enum Sym { SymT = 0, SymK, SymL, SymN, SymQ, SymR, SymC, SymM1, SymCount };

// A monomial T^e0 K^e1 ... M1^e7 with exact rational exponents.
struct ExpExpr {
    std::array<Rational, SymCount> e{};

    ExpExpr operator*(const ExpExpr& o) const;
    ExpExpr operator/(const ExpExpr& o) const;
    ExpExpr pow(const Rational& r) const;
    bool operator==(const ExpExpr& o) const { return e == o.e; }
    bool operator!=(const ExpExpr& o) const { return !(*this == o); }
};

ExpExpr sym(Sym s, Rational exponent = 1);

// Substitution table: T-exponent (affine in xi, eta) for each symbol.
// A symbol without an entry may only appear with exponent zero.
struct SubstMap {
    std::array<AffineQ, SymCount> val{};
    std::array<bool, SymCount> has{};

    void set(Sym s, AffineQ v) {
        val[s] = v;
        has[s] = true;
    }
};

// Reduces a monomial to its T-exponent.  Throws std::domain_error if a
// symbol with nonzero exponent has no substitution.
AffineQ reduce_to_T(const ExpExpr& e, const SubstMap& subs);

// Standard substitutions of the first bookkeeping (N = T^3, K = T^xi,
// Q = sqrt(N/K), r = 1, C = Q, M1 = T^2 Q^2 / N).
SubstMap sketch_subs();
// Prime-average variant (N = T^3, K = T^xi, L = T^eta, Q = sqrt(NL/K)).
SubstMap sketch_subs_avg();

struct LedgerStep {
    std::string name;
    ExpExpr saving;
    std::string note;
};

struct Constraint {
    std::string name;
    AffineQ margin;         // required: margin > 0 (as a T-exponent)
    bool tight_at_boundary; // equality allowed only up to the epsilon slack
};

struct Ledger {
    std::vector<LedgerStep> steps;
    ExpExpr trivial_target;  // cancellation needed in total
    ExpExpr required_saving; // what is left after the listed steps
    std::vector<Constraint> constraints;
    std::vector<AffineQ> bound_terms; // final exponent = max over these
    // optimizer output (balance point of the bound terms)
    Rational opt_xi, opt_eta, opt_exponent;

    ExpExpr total_saving() const;
};

// First bookkeeping: four transform savings, the two frequency-range
// constraints reducing to 0 < xi < 1/2 (with the tunable length T^{1-xi}),
// and the assembled bound max{3/2 - xi/4, 3/2 - (1-2 xi)/4}.
Ledger theorem1_ledger();

// The same final bound halved (square root of the central value).
std::vector<AffineQ> corollary_bound();

// The assembled per-range lemma bounds of the rigorous sections, divided by
// sqrt(N) at N = T^3, r = 1: three terms, the third of which is dominated by
// the first on the admissible window (checked; throws std::logic_error if
// the cross-check against the sketch ledger fails).
std::vector<AffineQ> theorem1_lemma_terms();

// Prime-average bookkeeping: savings in T^xi, T^eta, constraints
// xi + eta > 1 and 2 xi - 3 eta > 1, objective
// max{7/4 - (xi+eta)/4, 7/4 + 3 eta/4 - xi/2} minimized over xi <= 1.
Ledger theorem2_ledger();

// Exact min-max of affine functions over a box, by enumerating the vertex
// candidates of the arrangement (pairwise balance lines and box edges).
struct MinMaxResult {
    Rational x, y, value;
};
MinMaxResult minimize_max(const std::vector<AffineQ>& terms, Rational xlo,
                          Rational xhi, Rational ylo, Rational yhi);

// Smallest theta at which the dyadic-cutoff error exponent (3 - theta)/2 is
// dominated by the (nondecreasing) main-term exponent e(theta), clamped up
// to the validity cap 3/2: below the balance point the error dominates, and
// beyond it a larger cutoff only shrinks the error, so the cap is used
// whenever balance occurs before it.  Exact (bisection + smallest-
// denominator recovery); throws std::domain_error if no balance below 3.
Rational afe_cutoff_optimize(const std::function<Rational(Rational)>& e);

// Simplest (smallest-denominator) rational in the closed interval [lo, hi].
Rational simplest_in(Rational lo, Rational hi);

} // namespace vfy
