#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dwork/frobenius.hpp"
#include "dwork/oracle.hpp"

using namespace dwork;

namespace {

HomoPoly fix(const std::string& s) { return homogenize_laurent(parse_poly(s)); }

PadicScalar ps(long n, long p) {
    return n == 0 ? PadicScalar::zero(p) : PadicScalar::from_integer(n, p, 24);
}

PadicScalar trace_of(const PrecMatrix& A) {
    PadicScalar t = PadicScalar::zero(A.p);
    for (long i = 0; i < A.dim; ++i) t += A.at(i, i);
    return t;
}

}  // namespace

TEST_CASE("characteristic polynomial of small integer matrices") {
    PrecMatrix A;
    A.p = 5;
    A.dim = 2;
    A.certificate = 24;
    A.a = {ps(2, 5), ps(1, 5), ps(3, 5), ps(4, 5)};
    auto c = charpoly(A);
    REQUIRE(c.size() == 3);
    CHECK(c[0].truncate_window(10).to_centered_integer() == 5);   // det
    CHECK(c[1].truncate_window(10).to_centered_integer() == -6);  // -trace
    CHECK(c[2].truncate_window(10).to_centered_integer() == 1);

    PrecMatrix B;  // upper triangular, eigenvalues 1, 2, 3
    B.p = 7;
    B.dim = 3;
    B.certificate = 24;
    B.a = {ps(1, 7), ps(1, 7), ps(0, 7), ps(0, 7), ps(2, 7), ps(1, 7), ps(0, 7), ps(0, 7), ps(3, 7)};
    auto cb = charpoly(B);
    REQUIRE(cb.size() == 4);
    CHECK(cb[0].truncate_window(10).to_centered_integer() == -6);
    CHECK(cb[1].truncate_window(10).to_centered_integer() == 11);
    CHECK(cb[2].truncate_window(10).to_centered_integer() == -6);
    CHECK(cb[3].truncate_window(10).to_centered_integer() == 1);
}

TEST_CASE("newton polygon slopes") {
    long p = 5;
    // c_0 = 5, c_1 = 2, c_2 = 1: ordinary pair {0, 1}.
    auto s1 = newton_slopes({ps(5, p), ps(2, p), ps(1, p)});
    REQUIRE(s1.size() == 2);
    CHECK(s1[0] == 0);
    CHECK(s1[1] == 1);

    // c_0 = 5, c_1 = 0 exactly, c_2 = 1: twice 1/2.
    auto s2 = newton_slopes({ps(5, p), PadicScalar::zero(p), ps(1, p)});
    REQUIRE(s2.size() == 2);
    CHECK(s2[0] == mpq_class(1, 2));
    CHECK(s2[1] == mpq_class(1, 2));

    // Middle coefficient known only modulo p^1 (floor 1): cannot cut the
    // hull through (1, 1/2), same slopes.
    auto s3 = newton_slopes({ps(5, p), PadicScalar::ball(p, 1), ps(1, p)});
    CHECK(s3 == s2);

    // Middle coefficient known only modulo p^0: might be a unit, polygon
    // undecidable.
    CHECK_THROWS_AS(newton_slopes({ps(5, p), PadicScalar::ball(p, 0), ps(1, p)}),
                    precision_exhausted);

    // Unresolved constant term: no left anchor.
    CHECK_THROWS_AS(newton_slopes({PadicScalar::ball(p, 3), ps(2, p), ps(1, p)}),
                    precision_exhausted);
}

TEST_CASE("diagonal cubic at p=5 is supersingular") {
    auto f = fix("x^3 + y^3 + z^3");
    auto R = frobenius_matrix(f, ParamSpec::absent(), 5, 6);
    REQUIRE(R.raw.dim == 2);
    REQUIRE(R.basis.size() == 2);
    CHECK(R.basis[0].pole == 1);
    CHECK(R.raw.certificate >= 8);
    CHECK(R.normalized.certificate >= 6);

    // The matrix is divisible by p^2 and no more.
    CHECK(min_entry_valuation(R.raw, 99) == 2);
    for (long i = 0; i < 2; ++i)
        for (long j = 0; j < 2; ++j)
            CHECK(R.raw.at(i, j).same_value(R.normalized.at(i, j).mul_p_power(2)));

    // Numerator of the zeta function: T^2 + 5 (trace 0, det 5).
    auto c = charpoly(R.normalized);
    CHECK(c[1].is_zero_to_window());
    CHECK((c[0] - ps(5, 5)).is_zero_to_window());

    auto sl = newton_slopes(c);
    REQUIRE(sl.size() == 2);
    CHECK(sl[0] == mpq_class(1, 2));
    CHECK(sl[1] == mpq_class(1, 2));
}

TEST_CASE("family fiber at a rational parameter matches its point counts") {
    auto f = fix("u + v + l*u^-1*v^-1 + 1");
    REQUIRE(f.poly.nv == 3);
    REQUIRE(f.degree == 3);

    auto R = frobenius_matrix(f, ParamSpec::exact(Rat(1)), 5, 6);
    REQUIRE(R.raw.dim == 2);

    auto fib = evaluate_param(f, Rat(1));
    long n1 = count_points(fib, 5, 1);
    long n2 = count_points(fib, 5, 2);
    auto z = zeta_genus1(n1, n2, 5);

    CHECK(trace_of(R.normalized).truncate_window(6).to_centered_integer() == z.a);
    auto c = charpoly(R.normalized);
    CHECK((c[0] - ps(5, 5)).is_zero_to_window());
}

TEST_CASE("family fiber at a root-of-unity parameter matches its reduction") {
    auto f = fix("u + v + l*u^-1*v^-1 + 1");
    // The lift of 3 fixed by x -> x^p; its reduction is the fiber at 3.
    auto R = frobenius_matrix(f, ParamSpec::teich(3), 7, 6, -1, 2);
    REQUIRE(R.raw.dim == 2);

    auto fib = evaluate_param(f, Rat(3));
    long n1 = count_points(fib, 7, 1);
    long n2 = count_points(fib, 7, 2);
    auto z = zeta_genus1(n1, n2, 7);

    CHECK(trace_of(R.normalized).truncate_window(6).to_centered_integer() == z.a);
    auto c = charpoly(R.normalized);
    CHECK((c[0] - ps(7, 7)).is_zero_to_window());
}

TEST_CASE("singular fibers are refused") {
    auto f = fix("u + v + l*u^-1*v^-1 + 1");
    // 1 = -1/27 mod 7: the fiber degenerates.
    CHECK_THROWS_AS(frobenius_matrix(f, ParamSpec::exact(Rat(1)), 7, 4), bad_reduction);
    // lambda = 0 kills the w^3 term.
    CHECK_THROWS_AS(frobenius_matrix(f, ParamSpec::exact(Rat(5)), 5, 4), bad_reduction);
}

TEST_CASE("non-fixed coefficients are refused") {
    auto f = fix("x^3 + y^3 + 2*z^3");
    CHECK_THROWS_AS(frobenius_matrix(f, ParamSpec::absent(), 5, 4), coefficient_not_teichmueller);
}

TEST_CASE("diagonal quartic trace against its point count") {
    auto f = fix("x^4 + y^4 + z^4");
    auto R = frobenius_matrix(f, ParamSpec::absent(), 5, 3, -1, 4);
    REQUIRE(R.raw.dim == 6);
    long n1 = count_points(evaluate_param(f, Rat(0)), 5, 1);
    CHECK(trace_of(R.normalized).truncate_window(3).to_centered_integer() == 5 + 1 - n1);
    CHECK(min_entry_valuation(R.raw, 99) == 2);
}

TEST_CASE("truncation bump does not move the certified digits") {
    auto f = fix("x^3 + y^3 + z^3");
    auto rep = verify_truncation_stability(f, ParamSpec::absent(), 5, 4);
    CHECK(rep.stable);
    CHECK(rep.agree_window >= 6);

    // p = 3 divides the degree: every fiber of this pencil is singular there.
    CHECK_THROWS_AS(frobenius_matrix(f, ParamSpec::absent(), 3, 4), bad_reduction);
}

TEST_CASE("column computations are thread-count invariant") {
    auto f = fix("u + v + l*u^-1*v^-1 + 1");
    auto R1 = frobenius_matrix(f, ParamSpec::exact(Rat(1)), 5, 4, -1, 1);
    auto R3 = frobenius_matrix(f, ParamSpec::exact(Rat(1)), 5, 4, -1, 3);
    REQUIRE(R1.raw.dim == R3.raw.dim);
    for (size_t i = 0; i < R1.raw.a.size(); ++i) {
        CHECK(R1.raw.a[i].same_value(R3.raw.a[i]));
        CHECK(R1.raw.a[i].str() == R3.raw.a[i].str());
    }
}

TEST_CASE("theta matrix of a parameter-free surface is zero") {
    auto f = fix("x^3 + y^3 + z^3");
    QField fld;
    MPoly<Rat> fq = evaluate_param(f, Rat(0));
    GDEngine<QField> eng(fld, fq);
    MPoly<Rat> dfdl = evaluate_param(param_partial(f), Rat(0));
    auto Th = gm_theta_matrix(eng, dfdl, Rat(1));
    for (auto& x : Th) CHECK(x == 0);
}

TEST_CASE("order-two operator of the family, checked against lattice walks") {
    auto f = fix("u + v + l*u^-1*v^-1 + 1");
    auto L = picard_fuchs(f);
    REQUIRE(L.order == 2);
    REQUIRE(L.c.size() == 3);
    CHECK(L.c[2].c == std::vector<Rat>{Rat(1), Rat(27)});
    CHECK(L.c[1].c == std::vector<Rat>{Rat(0), Rat(27)});
    CHECK(L.c[0].c == std::vector<Rat>{Rat(0), Rat(6)});

    auto series = period_series(20);
    auto res = pf_apply_to_series(L, series);
    REQUIRE(res.size() == 21);
    for (auto& r : res) CHECK(r == 0);

    // Corrupting one series coefficient must break annihilation.
    series[7] += 1;
    auto bad = pf_apply_to_series(L, series);
    bool nonzero = false;
    for (auto& r : bad) nonzero = nonzero || r != 0;
    CHECK(nonzero);
}

TEST_CASE("parameter-free input yields the bare theta operator") {
    auto f = fix("x^3 + y^3 + z^3");
    auto L = picard_fuchs(f);
    REQUIRE(L.order == 1);
    CHECK(L.c[1].c == std::vector<Rat>{Rat(1)});
    CHECK(L.c[0].is_zero());
}

TEST_CASE("frobenius is horizontal for the theta connection at fixed parameters") {
    auto f = fix("u + v + l*u^-1*v^-1 + 1");
    auto rep = check_gm_frobenius_compat(f, ParamSpec::exact(Rat(1)), 5, 4);
    CHECK(rep.certificate >= 4);
    // The full residual thF + Theta F - p F Theta vanishes within the window.
    CHECK(rep.pass);
    CHECK(rep.residual_val >= rep.certificate);
    // The control perturbation must be visible.
    CHECK(rep.control_detects);
    CHECK(rep.control_val <= 1);

    // A parameter the p-power map moves is rejected one way or another.
    CHECK_THROWS(check_gm_frobenius_compat(f, ParamSpec::exact(Rat(2)), 5, 3));
}

TEST_CASE("horizontality is trivial for a parameter-free input") {
    auto f = fix("x^3 + y^3 + z^3");
    auto rep = check_gm_frobenius_compat(f, ParamSpec::absent(), 5, 4);
    CHECK(rep.pass);
    // Theta = 0 and thF = 0: nothing for the control to act through.
    CHECK_FALSE(rep.control_detects);
}
