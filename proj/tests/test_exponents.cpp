#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vfy/exponents.hpp"

using namespace vfy;

TEST_CASE("rational arithmetic is exact and normalized") {
    CHECK(Rational(6, 4) == Rational(3, 2));
    CHECK(Rational(3, -2) == Rational(-3, 2));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(7, 4) - Rational(5, 16) == Rational(23, 16));
    CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
    CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(1, 3));
    CHECK(Rational(23, 16).str() == "23/16");
    CHECK(Rational(3).str() == "3");
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("simplest rational in an interval") {
    CHECK(simplest_in(Rational(22, 15), Rational(23, 15)) == Rational(3, 2));
    CHECK(simplest_in(Rational(3, 2), Rational(3, 2)) == Rational(3, 2));
    CHECK(simplest_in(Rational(-1, 3), Rational(1, 7)) == Rational(0));
    CHECK(simplest_in(Rational(199, 100), Rational(207, 100)) == Rational(2));
    CHECK(simplest_in(Rational(201, 100), Rational(207, 100)) == Rational(31, 15));
    CHECK(simplest_in(Rational(14, 10), Rational(141, 100)) == Rational(7, 5));
}

TEST_CASE("monomial reduction to a T-exponent") {
    SubstMap s = sketch_subs();
    // Q = sqrt(N/K) at N = T^3, K = T^xi
    CHECK(reduce_to_T(sym(SymQ), s) == AffineQ(Rational(3, 2), Rational(-1, 2)));
    // dual length r Q^3 K^2 T / N -> (9 - 3 xi)/2 + 2 xi + 1 - 3 = (5 + xi)/2
    // (cross-check at xi = 1: Q = K = T gives Q^3 K^2 T / T^3 = T^3, and the
    // prime-average formula below agrees at eta = 0, xi = 1)
    ExpExpr nt = sym(SymR) * sym(SymQ, 3) * sym(SymK, 2) * sym(SymT) / sym(SymN);
    CHECK(reduce_to_T(nt, s) == AffineQ(Rational(5, 2), Rational(1, 2)));
    CHECK(reduce_to_T(nt, s).eval(1, 0) == Rational(3));
    // prime-average variant: r Q^3 K T^2 / (N L) -> (7 + eta - xi)/2
    ExpExpr nt2 = sym(SymR) * sym(SymQ, 3) * sym(SymK) * sym(SymT, 2) /
                  (sym(SymN) * sym(SymL));
    CHECK(reduce_to_T(nt2, sketch_subs_avg()) ==
          AffineQ(Rational(7, 2), Rational(-1, 2), Rational(1, 2)));
    // modulus and dual-degree-2 sups carry their own symbols
    CHECK(reduce_to_T(sym(SymC) * sym(SymM1), s) ==
          AffineQ(Rational(7, 2), Rational(-3, 2)));
    // a symbol without a substitution must be rejected
    SubstMap bare;
    bare.set(SymN, AffineQ(3));
    CHECK_THROWS_AS(reduce_to_T(sym(SymQ), bare), std::domain_error);
    CHECK(reduce_to_T(sym(SymT, Rational(1, 2)), bare) == AffineQ(Rational(1, 2)));
}

TEST_CASE("first ledger reproduces the bound and the admissible window") {
    Ledger led = theorem1_ledger();
    REQUIRE(led.steps.size() == 4);
    // total saving T^{3/2} sqrt(K) (the ledger eliminates Q = sqrt(T^3/K)
    // symbolically, so only T and K survive)
    ExpExpr tot = led.total_saving();
    CHECK(tot.e[SymT] == Rational(3, 2));
    CHECK(tot.e[SymK] == Rational(1, 2));
    CHECK(tot.e[SymQ] == Rational(0));
    SubstMap s = sketch_subs();
    AffineQ t = reduce_to_T(tot, s);
    CHECK(t == AffineQ(Rational(3, 2), Rational(1, 2)));
    CHECK(reduce_to_T(led.required_saving, s) ==
          AffineQ(Rational(3, 2), Rational(-1, 2)));

    // frequency-range constraints reduce to 0 < xi < 1/2
    REQUIRE(led.constraints.size() == 2);
    CHECK(led.constraints[0].margin == AffineQ(0, Rational(1, 2)));
    CHECK(led.constraints[1].margin == AffineQ(Rational(1, 2), -1));

    // final exponent max{3/2 - xi/4, 3/2 - (1 - 2 xi)/4}
    REQUIRE(led.bound_terms.size() == 2);
    CHECK(led.bound_terms[0] == AffineQ(Rational(3, 2), Rational(-1, 4)));
    CHECK(led.bound_terms[1] == AffineQ(Rational(5, 4), Rational(1, 2)));
    // subconvex strictly inside the window, convexity-sized at the endpoints
    auto val = [&](Rational xi) {
        Rational a = led.bound_terms[0].eval(xi, 0);
        Rational b = led.bound_terms[1].eval(xi, 0);
        return a > b ? a : b;
    };
    CHECK(val(Rational(0)) == Rational(3, 2));
    CHECK(val(Rational(1, 2)) == Rational(3, 2));
    CHECK(val(Rational(1, 4)) < Rational(3, 2));
    CHECK(val(Rational(1, 100)) < Rational(3, 2));
    // balance point of the two terms
    CHECK(led.opt_xi == Rational(1, 3));
    CHECK(led.opt_exponent == Rational(17, 12));

    std::vector<AffineQ> cor = corollary_bound();
    CHECK(cor[0] == AffineQ(Rational(3, 4), Rational(-1, 8)));
    CHECK(cor[1] == AffineQ(Rational(5, 8), Rational(1, 4)));
}

TEST_CASE("assembled per-range lemma bounds agree with the overview ledger") {
    std::vector<AffineQ> terms = theorem1_lemma_terms();
    REQUIRE(terms.size() == 3);
    CHECK(terms[2] == AffineQ(Rational(3, 2), Rational(-7, 8)));
    // the extra term never exceeds the first on xi >= 0
    for (int k = 0; k <= 8; ++k) {
        Rational xi(k, 16);
        CHECK(terms[2].eval(xi, 0) <= terms[0].eval(xi, 0));
    }
}

TEST_CASE("prime-average ledger optimizes to 23/16") {
    Ledger led = theorem2_ledger();
    REQUIRE(led.steps.size() == 4);
    SubstMap s = sketch_subs_avg();
    CHECK(reduce_to_T(led.required_saving, s) == AffineQ(2, -1, 1)); // L T^2/K

    REQUIRE(led.constraints.size() == 3);
    CHECK(led.constraints[0].margin ==
          AffineQ(Rational(-1, 2), Rational(1, 2), Rational(1, 2))); // KL > T
    CHECK(led.constraints[1].margin ==
          AffineQ(Rational(-1, 2), 1, Rational(-3, 2))); // K^2 > T L^3
    CHECK(led.constraints[2].tight_at_boundary);

    CHECK(led.opt_xi == Rational(1));
    CHECK(led.opt_eta == Rational(1, 4)); // the L = K^{1/4} balance
    CHECK(led.opt_eta * Rational(4) == led.opt_xi);
    CHECK(led.opt_exponent == Rational(23, 16));
    CHECK(led.opt_exponent == Rational(3, 2) - Rational(1, 16));

    // uniqueness: any perturbation off the optimum strictly increases the max
    auto val = [&](Rational xi, Rational eta) {
        Rational a = led.bound_terms[0].eval(xi, eta);
        Rational b = led.bound_terms[1].eval(xi, eta);
        return a > b ? a : b;
    };
    CHECK(val(Rational(1), Rational(1, 4)) == Rational(23, 16));
    CHECK(val(Rational(1), Rational(5, 16)) > Rational(23, 16));
    CHECK(val(Rational(1), Rational(3, 16)) > Rational(23, 16));
    CHECK(val(Rational(15, 16), Rational(15, 64)) > Rational(23, 16));

    // both frequency constraints hold with slack at the optimum
    CHECK(led.constraints[0].margin.eval(led.opt_xi, led.opt_eta) > Rational(0));
    CHECK(led.constraints[1].margin.eval(led.opt_xi, led.opt_eta) > Rational(0));
    CHECK(led.constraints[2].margin.eval(led.opt_xi, led.opt_eta) == Rational(0));
}

TEST_CASE("exact min-max of affine functions over a box") {
    // single term: minimum at the right corner for a decreasing function
    MinMaxResult m = minimize_max({AffineQ(1, -1, 0)}, 0, 1, 0, 0);
    CHECK(m.value == Rational(0));
    CHECK(m.x == Rational(1));
    // three-term balance inside the box
    MinMaxResult m3 = minimize_max(
        {AffineQ(0, 1, 0), AffineQ(0, 0, 1), AffineQ(2, -1, -1)}, 0, 2, 0, 2);
    CHECK(m3.x == Rational(2, 3));
    CHECK(m3.y == Rational(2, 3));
    CHECK(m3.value == Rational(2, 3));
}

TEST_CASE("dyadic cutoff balancing") {
    // overview main exponent at the balanced window choice: constant 17/12;
    // the error exponent at the returned cutoff is 3/4, strictly smaller
    Rational th = afe_cutoff_optimize([](Rational) { return Rational(17, 12); });
    CHECK(th == Rational(3, 2));
    CHECK((Rational(3) - th) / Rational(2) == Rational(3, 4));
    CHECK(Rational(3, 4) < Rational(17, 12));
    CHECK(Rational(3, 4) < Rational(3, 2) - Rational(1, 4) * Rational(1, 3));

    // degenerate constant main term 3/2: smallest workable cutoff
    CHECK(afe_cutoff_optimize([](Rational) { return Rational(3, 2); }) ==
          Rational(3, 2));
    // prime-average optimum 23/16
    CHECK(afe_cutoff_optimize([](Rational) { return Rational(23, 16); }) ==
          Rational(3, 2));
    // a weak main term pushes the balance past the cap: theta = 3 - 2 e
    CHECK(afe_cutoff_optimize([](Rational) { return Rational(1, 2); }) ==
          Rational(2));
    // genuinely theta-dependent main term e = theta/4: balance at theta = 2
    CHECK(afe_cutoff_optimize([](Rational t) { return t / Rational(4); }) ==
          Rational(2));
    // error never dominated
    CHECK_THROWS_AS(afe_cutoff_optimize([](Rational) { return Rational(-1); }),
                    std::domain_error);
}
