#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dwork/threefold.hpp"

using namespace dwork;

namespace {

HomoPoly fix(const std::string& s) { return homogenize_laurent(parse_poly(s)); }

// Companion-style 2x2 matrix with char poly T^2 - a T + p.
PrecMatrix synthetic_curve(long a, long p) {
    PrecMatrix m;
    m.p = p;
    m.dim = 2;
    m.certificate = 20;
    m.normalized = true;
    m.a = {PadicScalar::zero(p), PadicScalar::from_integer(-p, p, 24),
           PadicScalar::from_integer(1, p, 24), PadicScalar::from_integer(a, p, 24)};
    return m;
}

bool has_slopes(const std::vector<mpq_class>& got, const std::vector<mpq_class>& want) {
    if (got.size() != want.size()) return false;
    for (size_t i = 0; i < got.size(); ++i)
        if (got[i] != want[i]) return false;
    return true;
}

}  // namespace

TEST_CASE("scaling a synthetic trace-2 fiber shifts the char poly") {
    long p = 5;
    PrecMatrix c = synthetic_curve(2, p);
    ThreefoldFrobenius tf = assemble(c, p);

    CHECK(tf.graded_dim() == 3);
    CHECK_FALSE(tf.extension_known);
    CHECK(tf.line.val() == 3);

    // Block char poly must be T^2 - p a T + p^3.
    std::vector<PadicScalar> bc = charpoly(tf.block);
    REQUIRE(bc.size() == 3);
    CHECK(bc[0].agrees_to(PadicScalar::from_integer(125, p, 24), 20));
    CHECK(bc[1].agrees_to(PadicScalar::from_integer(-10, p, 24), 20));

    // Unit trace mod p: slopes {1, 2} plus the line's 3.
    std::vector<mpq_class> s = newton_slopes(tf);
    CHECK(has_slopes(s, {1, 2, 3}));

    CHECK(verify_scaling(tf, c, p).pass);
}

TEST_CASE("degenerate rank-one input") {
    long p = 5;
    PrecMatrix c;
    c.p = p;
    c.dim = 1;
    c.certificate = 20;
    c.a = {PadicScalar::from_integer(1, p, 24)};
    ThreefoldFrobenius tf = assemble(c, p);

    CHECK(tf.block.at(0, 0).same_value(PadicScalar::from_integer(1, p, 24).mul_p_power(1)));
    CHECK(tf.graded_dim() == 2);
    CHECK(has_slopes(newton_slopes(tf), {1, 3}));
    CHECK(verify_scaling(tf, c, p).pass);
}

TEST_CASE("ordinary fiber of the cubic pencil") {
    HomoPoly f = fix("u + v + l*u^-1*v^-1 + 1");
    FrobeniusResult R = frobenius_matrix(f, ParamSpec::teich(3), 7, 6);
    ThreefoldFrobenius tf = assemble(R.normalized, 7);

    CHECK(has_slopes(newton_slopes(tf), {1, 2, 3}));
    ScalingReport rep = verify_scaling(tf, R.normalized, 7);
    CHECK(rep.pass);
    CHECK(rep.graded_dim == 3);

    // Sum of slopes = valuation of the graded determinant = 3 + v(det) + dim.
    mpq_class tot = 0;
    for (auto& s : newton_slopes(tf)) tot += s;
    CHECK(tot == mpq_class(6));
}

TEST_CASE("supersingular diagonal cubic") {
    HomoPoly f = fix("x^3 + y^3 + z^3");
    FrobeniusResult R = frobenius_matrix(f, ParamSpec::absent(), 5, 6);
    ThreefoldFrobenius tf = assemble(R.normalized, 5);

    CHECK(has_slopes(newton_slopes(tf), {mpq_class(3, 2), mpq_class(3, 2), 3}));
    CHECK(verify_scaling(tf, R.normalized, 5).pass);
}

TEST_CASE("tampered assemblies are rejected with a location") {
    long p = 5;
    PrecMatrix c = synthetic_curve(2, p);
    ThreefoldFrobenius tf = assemble(c, p);

    ThreefoldFrobenius bad = tf;
    bad.block.at(0, 1) += PadicScalar::from_integer(1, p, 18).mul_p_power(6);
    ScalingReport rep = verify_scaling(bad, c, p);
    CHECK_FALSE(rep.pass);
    CHECK(rep.detail.find("(0,1)") != std::string::npos);

    ThreefoldFrobenius wrong_line = tf;
    wrong_line.line = PadicScalar::from_integer(1, p, 8).mul_p_power(2);
    CHECK_FALSE(verify_scaling(wrong_line, c, p).pass);

    PrecMatrix c1;
    c1.p = p;
    c1.dim = 1;
    c1.certificate = 20;
    c1.a = {PadicScalar::from_integer(1, p, 24)};
    ScalingReport dim_rep = verify_scaling(tf, c1, p);
    CHECK_FALSE(dim_rep.pass);
    CHECK(dim_rep.detail.find("dimension") != std::string::npos);
}
