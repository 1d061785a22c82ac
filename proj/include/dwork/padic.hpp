#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dwork {

/*
 * Fixed-absolute-precision p-adic scalar.
 *
 * A value is one of:
 *   - exact zero,
 *   - p^val * unit known modulo p^(val+prec), with 0 < unit < p^prec and
 *     p not dividing unit whenever prec > 0,
 *   - an O(p^val) ball (prec == 0): nothing is known beyond ord >= val.
 *
 * Operations propagate the known window conservatively (interval style) and
 * never invent digits.  The window of a sum is the intersection of the
 * operands' windows; products add valuations and keep the smaller relative
 * precision.  Inverting a value with no known unit digits throws
 * precision_exhausted.
 */

class precision_exhausted : public std::runtime_error {
public:
    explicit precision_exhausted(const std::string& msg) : std::runtime_error(msg) {}
};

mpz_class pow_p(long p, long k);

class PadicScalar {
public:
    PadicScalar() : p_(0), zero_(true), val_(0), prec_(0), unit_(0) {}

    static PadicScalar zero(long p) {
        PadicScalar z;
        z.p_ = p;
        return z;
    }
    // Integer n seen with N relative digits.
    static PadicScalar from_integer(const mpz_class& n, long p, long N);
    // Rational a/b (b prime to p after cancelling p powers is not required;
    // valuation handles both).
    static PadicScalar from_rational(const mpq_class& q, long p, long N);
    // p^val * unit with unit already reduced mod p^prec (unit may be divisible
    // by p; it is normalized).
    static PadicScalar make(long p, long val, const mpz_class& unit, long prec);
    // O(p^w) ball.
    static PadicScalar ball(long p, long w);
    // m! as a p-adic scalar with N relative digits (Legendre valuation).
    static PadicScalar factorial(unsigned long m, long p, long N);
    // Teichmueller lift of k mod p: the (p-1)-th root of unity congruent to k.
    static PadicScalar teichmuller(long k, long p, long N);

    bool is_exact_zero() const { return zero_; }
    // True when the value is indistinguishable from zero in its window.
    bool is_zero_to_window() const { return zero_ || prec_ == 0; }
    bool has_unit() const { return !zero_ && prec_ > 0; }

    long prime() const { return p_; }
    // Valuation; exact when has_unit(), a lower bound otherwise.
    long val() const {
        if (zero_) throw std::logic_error("valuation of exact zero");
        return val_;
    }
    long prec() const { return zero_ ? 0 : prec_; }
    // Absolute window: the value is known modulo p^window().
    // Exact zeros have an infinite window; callers must check first.
    long window() const {
        if (zero_) throw std::logic_error("window of exact zero");
        return val_ + prec_;
    }
    const mpz_class& unit() const { return unit_; }

    PadicScalar operator-() const;
    PadicScalar operator+(const PadicScalar& o) const;
    PadicScalar operator-(const PadicScalar& o) const { return *this + (-o); }
    PadicScalar operator*(const PadicScalar& o) const;
    PadicScalar inv() const;
    PadicScalar operator/(const PadicScalar& o) const { return *this * o.inv(); }
    PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
    PadicScalar& operator-=(const PadicScalar& o) { return *this = *this - o; }
    PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }

    PadicScalar mul_small(long c) const;       // multiply by an integer
    PadicScalar mul_p_power(long k) const;     // multiply by p^k (k may be negative)
    PadicScalar pow_ui(unsigned long e) const;

    // Drop digits so the absolute window is at most w (no-op if already coarser).
    PadicScalar truncate_window(long w) const;

    // Exact equality of the representations (same window, same residue).
    bool same_value(const PadicScalar& o) const;
    // |a - b| <= p^-w, i.e. the difference is zero to window w.
    bool agrees_to(const PadicScalar& o, long w) const;

    // Round to the integer of smallest absolute value congruent to this
    // scalar mod p^window; throws if val() < 0 or nothing is known.
    mpz_class to_centered_integer() const;

    std::string str() const;  // "p^v * u (mod p^w)" rendering

private:
    void normalize();

    long p_;
    bool zero_;
    long val_;
    long prec_;
    mpz_class unit_;
};

// ord_p(m!) by Legendre's formula.
long factorial_valuation(unsigned long m, long p);

/*
 * First-order jet a + b*eps with eps^2 = 0: a value together with its
 * derivative along one parameter direction.  Arithmetic pushes both
 * components through the product and quotient rules, so running a
 * computation on jets yields the parameter derivative of its output.
 */
struct JetScalar {
    PadicScalar re;  // value
    PadicScalar du;  // derivative

    static JetScalar zero(long p) { return {PadicScalar::zero(p), PadicScalar::zero(p)}; }
    static JetScalar constant(const PadicScalar& a) { return {a, PadicScalar::zero(a.prime())}; }

    bool is_exact_zero() const { return re.is_exact_zero() && du.is_exact_zero(); }

    JetScalar operator-() const { return {-re, -du}; }
    JetScalar operator+(const JetScalar& o) const { return {re + o.re, du + o.du}; }
    JetScalar operator-(const JetScalar& o) const { return {re - o.re, du - o.du}; }
    JetScalar operator*(const JetScalar& o) const { return {re * o.re, re * o.du + du * o.re}; }
    // Requires a unit value part; (a + b eps)^-1 = a^-1 - a^-2 b eps.
    JetScalar inv() const {
        PadicScalar r = re.inv();
        return {r, -(r * r * du)};
    }
    JetScalar operator/(const JetScalar& o) const { return *this * o.inv(); }
    JetScalar& operator+=(const JetScalar& o) { return *this = *this + o; }
    JetScalar& operator-=(const JetScalar& o) { return *this = *this - o; }
    JetScalar& operator*=(const JetScalar& o) { return *this = *this * o; }

    std::string str() const { return re.str() + " + eps*(" + du.str() + ")"; }
};

}  // namespace dwork
