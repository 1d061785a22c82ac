#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dwork/pushforward.hpp"

#include <gmpxx.h>

using namespace dwork;

namespace {

PiScalar unit_one(long p, long N) {
    return PiScalar::from_padic(PadicScalar::from_integer(1, p, N));
}

// Max valuation shortfall of (got - want); 9999 when they cancel entirely.
long diff_val(const PushforwardElem& got, const PushforwardElem& want) {
    return (got - want).min_val(9999);
}

// Every coordinate of (got - want) vanishes to its full window.
bool cancels(const PushforwardElem& got, const PushforwardElem& want) {
    PushforwardElem d = got - want;
    auto ok = [&](const PiScalar& s) {
        for (long k = 0; k + 1 < d.p; ++k)
            if (!s.coeff(k).is_zero_to_window()) return false;
        return true;
    };
    for (const auto& x : d.t_part)
        if (!ok(x)) return false;
    for (const auto& x : d.i_part)
        if (!ok(x)) return false;
    return true;
}

}  // namespace

TEST_CASE("powers of t*x*y reduce onto the residue basis") {
    long p = 5, N = 12;

    // No x y factor at all: t^s is already a basis element.
    PushforwardElem r = reduce_y_power(0, 3, p, N, 10, 8);
    PushforwardElem want = PushforwardElem::zero(p, 10, 8);
    want.t_coord(3) = unit_one(p, N);
    CHECK(cancels(r, want));

    // (t x y)^(p-1) t: every x y pair cancels, leaving (-1/pi)^(p-1) (p-1)! t.
    r = reduce_y_power(p - 1, 1, p, N, 10, 8);
    want = PushforwardElem::zero(p, 10, 8);
    want.t_coord(1) = PiScalar::monomial(PadicScalar::from_integer(24, p, N), -(p - 1));
    CHECK(cancels(r, want));
    // pi^(-(p-1)) = -1/p, so the surviving coefficient has valuation -1.
    CHECK(r.t_coord(1).coeff(0).val() == -1);

    // Pure (x y)^m with no t: lands on the m-th divided-power element with
    // coefficient m! (-pi)^(-m).
    r = reduce_y_power(2, -2, p, N, 10, 8);
    want = PushforwardElem::zero(p, 10, 8);
    want.i_coord(2) = PiScalar::monomial(PadicScalar::from_integer(2, p, N), -2);
    CHECK(cancels(r, want));

    // (t x y)^m with equal powers collapses all the way to the constant slot.
    r = reduce_y_power(3, 0, p, N, 10, 8);
    want = PushforwardElem::zero(p, 10, 8);
    want.i_coord(0) = PiScalar::monomial(PadicScalar::from_integer(-6, p, N), -3);
    CHECK(cancels(r, want));

    CHECK_THROWS_AS(reduce_y_power(2, -5, p, N, 10, 8), std::invalid_argument);
    CHECK_THROWS_AS(reduce_y_power(0, 50, p, N, 10, 8), truncation_overflow);
    CHECK_THROWS_AS(reduce_y_power(12, -12, p, N, 10, 8), truncation_overflow);
}

TEST_CASE("pushforward of the basic elements matches closed forms") {
    long p = 5, N = 4, NW = N + 12;

    auto expect_scaled = [&](long z_src, long z_img) {
        PushforwardElem src = PushforwardElem::phi(p, 12, 10, NW, z_src);
        PushforwardElem img = fr_pushforward(src, p, N);
        PushforwardElem want = PushforwardElem::phi(p, 12, 10, NW, z_img) *
                               PiScalar::from_padic(PadicScalar::from_integer(p, p, NW));
        CHECK(diff_val(img, want) >= N);
        return img;
    };

    PushforwardElem img = expect_scaled(0, 0);  // t -> p t
    CHECK(img.t_coord(1).coeff(0).val() == 1);

    img = expect_scaled(-1, -p);  // first divided power -> p * (p-1)-th
    CHECK(img.i_coord(p - 1).coeff(0).val() == 1);

    expect_scaled(1, p);  // t^2 -> p t^(p+1)
}

TEST_CASE("pushforward windows and tail guards") {
    long p = 5, NW = 16;
    CHECK_THROWS_AS(PushforwardElem::phi(p, 3, 2, NW, 5), truncation_overflow);
    CHECK_THROWS_AS(PushforwardElem::phi(p, 3, 2, NW, -4), truncation_overflow);

    // Image of t^2 needs t^(p+1); a 2-slot window cannot hold it.
    PushforwardElem tight = PushforwardElem::phi(p, 2, 10, NW, 1);
    CHECK_THROWS_AS(fr_pushforward(tight, p, 4), truncation_overflow);

    // A forced two-term series truncation leaves a visible tail.
    PushforwardElem src = PushforwardElem::phi(p, 12, 10, NW, 0);
    CHECK_THROWS_AS(fr_pushforward(src, p, 6, 1), tail_not_dominated);
}

TEST_CASE("series transport intertwines the power maps") {
    for (long p : {3L, 5L}) {
        IntertwineReport rep = verify_phi_intertwine(p, 4, -1, 5, 3);
        CHECK(rep.pass);
        CHECK(rep.checks.size() == 10);
        for (const auto& c : rep.checks) {
            INFO(c.label);
            CHECK(c.pass);
            CHECK(c.residual_val >= 4);
        }
    }
}

TEST_CASE("a corrupted series coefficient breaks the intertwining") {
    IntertwineReport rep = verify_phi_intertwine(3, 4, -1, 2, 1, 2);
    CHECK_FALSE(rep.pass);
    bool some_fail = false;
    for (const auto& c : rep.checks) some_fail = some_fail || !c.pass;
    CHECK(some_fail);
}

TEST_CASE("weight operator is diagonal with the expected spectrum") {
    CHECK(weight_spectrum(WeightKind::x_power, 1) == mpq_class(-1));
    CHECK(weight_spectrum(WeightKind::t_power, 1) == mpq_class(1, 2));
    CHECK(weight_spectrum(WeightKind::x_power, 0) == mpq_class(-1, 2));

    for (long i = 0; i <= 50; ++i) {
        mpq_class want_x(-(i + 1), 2);
        want_x.canonicalize();
        CHECK(weight_spectrum(WeightKind::x_power, i) == want_x);
    }
    for (long i = 1; i <= 50; ++i) {
        mpq_class want_t(2 * i - 1, 2);
        want_t.canonicalize();
        CHECK(weight_spectrum(WeightKind::t_power, i) == want_t);
    }
    CHECK_THROWS_AS(weight_spectrum(WeightKind::t_power, 0), std::invalid_argument);
}
