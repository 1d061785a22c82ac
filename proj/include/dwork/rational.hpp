#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "dwork/padic.hpp"

namespace dwork {

using Rat = mpq_class;

/*
 * Univariate polynomial over Q in the family parameter, dense coefficients,
 * ascending degree.  Used for family coefficients and Picard-Fuchs output.
 */
struct ParamPoly {
    std::vector<Rat> c;

    ParamPoly() = default;
    explicit ParamPoly(const Rat& a) {
        if (a != 0) c.push_back(a);
    }
    static ParamPoly var() {
        ParamPoly x;
        x.c = {Rat(0), Rat(1)};
        return x;
    }

    bool is_zero() const { return c.empty(); }
    long degree() const { return static_cast<long>(c.size()) - 1; }
    const Rat& lead() const { return c.back(); }
    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    ParamPoly operator+(const ParamPoly& o) const;
    ParamPoly operator-(const ParamPoly& o) const;
    ParamPoly operator*(const ParamPoly& o) const;
    ParamPoly operator-() const;
    ParamPoly scaled(const Rat& a) const;
    ParamPoly derivative() const;

    Rat eval(const Rat& x) const;
    PadicScalar eval(const PadicScalar& x) const;
    // Same, with constants minted at N relative digits (x.prec() otherwise).
    PadicScalar eval(const PadicScalar& x, long N) const;

    std::string str(const std::string& sym) const;
};

// Quotient and remainder of a by b (b nonzero), standard long division.
std::pair<ParamPoly, ParamPoly> poly_divmod(const ParamPoly& a, const ParamPoly& b);
// Monic gcd.
ParamPoly poly_gcd(ParamPoly a, ParamPoly b);

/*
 * Rational function in the family parameter: num/den with den monic and
 * gcd(num, den) = 1.  A plain field for the symbolic Gauss-Manin run.
 */
struct RatFunc {
    ParamPoly num, den;

    RatFunc() : den(ParamPoly(Rat(1))) {}
    explicit RatFunc(const Rat& a) : num(ParamPoly(a)), den(ParamPoly(Rat(1))) {}
    RatFunc(ParamPoly n, ParamPoly d);

    static RatFunc var() { return RatFunc(ParamPoly::var(), ParamPoly(Rat(1))); }

    bool is_zero() const { return num.is_zero(); }

    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator/(const RatFunc& o) const;
    RatFunc operator-() const;

    // lambda * d/dlambda
    RatFunc theta() const;

    std::string str(const std::string& sym) const;
};

}  // namespace dwork
