#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dwork/polyalg.hpp"

using namespace dwork;

TEST_CASE("monomial enumeration is grlex descending and complete") {
    auto ms = monomials_of_degree(3, 2);
    REQUIRE(ms.size() == 6);
    CHECK(ms.front().e[0] == 2);
    CHECK(ms.back().e[2] == 2);
    for (size_t i = 0; i + 1 < ms.size(); ++i) CHECK(grlex_less(ms[i + 1], ms[i]));
    CHECK(monomials_of_degree(4, 4).size() == 35);
}

TEST_CASE("plain homogeneous input parses and stays unchanged") {
    auto L = parse_poly("x^3 + y^3 + z^3");
    CHECK(L.vars == std::vector<std::string>({"x", "y", "z"}));
    CHECK(!L.has_negative_exponent());
    CHECK(!L.uses_param());
    auto H = homogenize_laurent(L);
    CHECK(H.vars.size() == 3);
    CHECK(H.degree == 3);
    CHECK(H.poly.t.size() == 3);
    CHECK(H.poly.homogeneous());
}

TEST_CASE("negative exponents clear and a fresh variable homogenizes") {
    auto L = parse_poly("u + v + l*u^-1*v^-1 + 1");
    CHECK(L.has_negative_exponent());
    CHECK(L.uses_param());
    auto H = homogenize_laurent(L);
    REQUIRE(H.vars.size() == 3);
    CHECK(H.vars[0] == "u");
    CHECK(H.vars[1] == "v");
    CHECK(H.vars[2] == "w");
    CHECK(H.degree == 3);
    REQUIRE(H.poly.t.size() == 4);
    // Terms: u^2 v, u v^2, l w^3, u v w.
    Mono uuv;
    uuv.e = {2, 1, 0, 0, 0, 0};
    Mono www;
    www.e = {0, 0, 3, 0, 0, 0};
    REQUIRE(H.poly.t.count(uuv) == 1);
    REQUIRE(H.poly.t.count(www) == 1);
    CHECK(H.poly.t.at(uuv).degree() == 0);
    CHECK(H.poly.t.at(www).degree() == 1);  // coefficient is the parameter
    CHECK(H.poly.t.at(www).c[1] == 1);
}

TEST_CASE("rational coefficients and explicit products parse") {
    auto L = parse_poly("2/3*x^2*y - y^3 + 5*x*y^2");
    auto H = homogenize_laurent(L);
    CHECK(H.degree == 3);
    Mono xxy;
    xxy.e = {2, 1, 0, 0, 0, 0};
    CHECK(H.poly.t.at(xxy).c[0] == Rat(2, 3));
}

TEST_CASE("parameter evaluation over Q and p-adics") {
    auto H = homogenize_laurent(parse_poly("u + v + l*u^-1*v^-1 + 1"));
    auto fq = evaluate_param(H, Rat(2));
    CHECK(fq.t.size() == 4);
    Mono www;
    www.e = {0, 0, 3, 0, 0, 0};
    CHECK(fq.t.at(www) == 2);

    auto fp = evaluate_param(H, PadicScalar::from_integer(2, 5, 4));
    CHECK(fp.t.at(www).unit() == 2);

    auto fs = symbolic_param(H);
    CHECK(fs.t.at(www).num.degree() == 1);
}

TEST_CASE("partial derivatives of the family") {
    auto H = homogenize_laurent(parse_poly("u + v + l*u^-1*v^-1 + 1"));
    auto dH = partials(H);
    REQUIRE(dH.size() == 3);
    // d/du: 2uv + v^2 + vw
    Mono uv;
    uv.e = {1, 1, 0, 0, 0, 0};
    CHECK(dH[0].t.at(uv).c[0] == 2);
    // d/dw: 3 l w^2 + uv
    Mono ww;
    ww.e = {0, 0, 2, 0, 0, 0};
    CHECK(dH[2].t.at(ww).c[1] == 3);
}

TEST_CASE("parse errors are reported") {
    CHECK_THROWS_AS(parse_poly(""), parse_error);
    CHECK_THROWS_AS(parse_poly("x +"), parse_error);
    CHECK_THROWS_AS(parse_poly("x ^ y"), parse_error);
    CHECK_THROWS_AS(parse_poly("3/0"), parse_error);
    CHECK_THROWS_AS(parse_poly("a + b + c + d + e + f + g"), parse_error);
}

TEST_CASE("round trip rendering mentions every variable") {
    auto H = homogenize_laurent(parse_poly("u + v + l*u^-1*v^-1 + 1"));
    auto s = H.str();
    CHECK(s.find('u') != std::string::npos);
    CHECK(s.find('w') != std::string::npos);
    CHECK(s.find('l') != std::string::npos);
}
