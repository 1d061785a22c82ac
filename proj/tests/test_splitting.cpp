#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dwork/splitting.hpp"

using namespace dwork;

TEST_CASE("first coefficients in closed form") {
    // A_0 = 1, A_1 = -pi for every p; A_3 at p=3 is (3/2) pi; A_5 at p=5 is
    // (25/24) pi.  Each checks the pi^(p-1) = -p wraparound in the series.
    for (long p : {3L, 5L, 7L}) {
        auto S = splitting_coeffs(p, 6, 12);
        CHECK(S.check_a0_is_one());
        auto [s1, c1] = S.collapsed(1);
        CHECK(s1 == 1 % (p - 1));
        CHECK(c1.to_centered_integer() == -1);
    }
    {
        auto S = splitting_coeffs(3, 6, 8);
        auto [slot, c] = S.collapsed(3);
        CHECK(slot == 1);
        // 3/2: valuation 1, unit congruent to 1/2
        CHECK(c.val() == 1);
        auto twice = c.mul_small(2);
        CHECK(twice.to_centered_integer() == 3);
    }
    {
        auto S = splitting_coeffs(5, 6, 8);
        auto [slot, c] = S.collapsed(5);
        CHECK(slot == 1);
        CHECK(c.val() == 2);
        auto x24 = c.mul_small(24);
        CHECK(x24.to_centered_integer() == 25);
    }
}

TEST_CASE("homogeneity and valuation lower bound hold far out") {
    for (long p : {3L, 5L, 7L}) {
        auto S = splitting_coeffs(p, 6, 200);
        CHECK(S.size() >= 201);
        CHECK(!S.check_homogeneity(200).has_value());
        CHECK(!S.check_ord_bound(200).has_value());
    }
}

TEST_CASE("adaptive coefficient generation reaches the target valuation") {
    auto S = splitting_coeffs(5, 4, -1);
    CHECK(S.check_a0_is_one());
    CHECK(!S.check_ord_bound(S.size() - 1).has_value());
    // Tail coefficients must actually clear valuation 4.
    long M = S.size() - 1;
    auto [slot, c] = S.collapsed(M);
    (void)slot;
    CHECK((c.is_exact_zero() || c.val() >= 4));
}

TEST_CASE("factorial pairing sums collapse to closed form") {
    // b = 1, 2, 3 give -1, p, -2p^2.
    for (long p : {3L, 5L, 7L}) {
        // The truncated sum is only meaningful to the certified depth, so cut
        // the window before recovering a centered representative.
        auto r1 = verify_formula3(p, 6, 1);
        CHECK(r1.residual.is_zero_to_window());
        CHECK(r1.rhs.truncate_window(6).to_centered_integer() == -1);
        CHECK(r1.lhs.truncate_window(6).to_centered_integer() == -1);

        auto r2 = verify_formula3(p, 6, 2);
        CHECK(r2.residual.is_zero_to_window());
        CHECK(r2.lhs.truncate_window(6).to_centered_integer() == p);

        auto r3 = verify_formula3(p, 6, 3);
        CHECK(r3.residual.is_zero_to_window());
        CHECK(r3.lhs.truncate_window(6).to_centered_integer() == -2 * p * p);
    }
}

TEST_CASE("residual certificates reach the requested depth") {
    for (long b = 1; b <= 4; ++b) {
        auto r = verify_formula3(5, 8, b);
        CHECK(r.residual.is_zero_to_window());
        REQUIRE(!r.residual.is_exact_zero());
        CHECK(r.residual.val() >= 8);
    }
}

TEST_CASE("fixed truncation too short is refused, long enough passes") {
    CHECK_THROWS_AS(verify_formula3(5, 8, 1, 6), tail_not_dominated);
    auto r = verify_formula3(5, 6, 1, 300);
    CHECK(r.residual.is_zero_to_window());
}
