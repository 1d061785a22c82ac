#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dwork/rational.hpp"

namespace dwork {

constexpr int kMaxVars = 6;

/*
 * Exponent vector for up to kMaxVars variables.  Default ordering is plain
 * lex on the array (variable 0 most significant); graded orders go through
 * grlex_less.
 */
struct Mono {
    std::array<uint16_t, kMaxVars> e{};

    friend bool operator<(const Mono& a, const Mono& b) { return a.e < b.e; }
    friend bool operator==(const Mono& a, const Mono& b) { return a.e == b.e; }

    long deg() const {
        long s = 0;
        for (auto x : e) s += x;
        return s;
    }
    Mono operator*(const Mono& o) const {
        Mono r;
        for (int i = 0; i < kMaxVars; ++i)
            r.e[static_cast<size_t>(i)] =
                static_cast<uint16_t>(e[static_cast<size_t>(i)] + o.e[static_cast<size_t>(i)]);
        return r;
    }
    bool divisible_by(const Mono& o) const {
        for (int i = 0; i < kMaxVars; ++i)
            if (e[static_cast<size_t>(i)] < o.e[static_cast<size_t>(i)]) return false;
        return true;
    }
    Mono operator/(const Mono& o) const {
        Mono r;
        for (int i = 0; i < kMaxVars; ++i)
            r.e[static_cast<size_t>(i)] =
                static_cast<uint16_t>(e[static_cast<size_t>(i)] - o.e[static_cast<size_t>(i)]);
        return r;
    }
    static Mono unit(int i) {
        Mono m;
        m.e[static_cast<size_t>(i)] = 1;
        return m;
    }
    Mono pow(int k) const {
        Mono r;
        for (int i = 0; i < kMaxVars; ++i)
            r.e[static_cast<size_t>(i)] = static_cast<uint16_t>(e[static_cast<size_t>(i)] * k);
        return r;
    }
};

inline bool grlex_less(const Mono& a, const Mono& b) {
    long da = a.deg(), db = b.deg();
    if (da != db) return da < db;
    return a.e < b.e;
}

// Monomials of total degree d in nv variables, grlex-descending.
std::vector<Mono> monomials_of_degree(int nv, long d);

/*
 * Sparse multivariate polynomial with coefficients in T; exact zeros are
 * never stored.  Scalar-type specific behavior (zero tests, division) comes
 * from a field object passed alongside, so the same code runs over Q, over
 * rational functions in the parameter, and over p-adic scalars.
 */
template <class T>
struct MPoly {
    int nv = 0;
    std::map<Mono, T> t;

    bool empty() const { return t.empty(); }
    long degree() const {
        long d = -1;
        for (auto& [m, c] : t) d = std::max(d, m.deg());
        return d;
    }
    bool homogeneous() const {
        long d = -1;
        for (auto& [m, c] : t) {
            if (d < 0)
                d = m.deg();
            else if (m.deg() != d)
                return false;
        }
        return true;
    }
};

// Field abstractions.

struct QField {
    using T = Rat;
    T zero() const { return Rat(0); }
    T one() const { return Rat(1); }
    T from_long(long n) const { return Rat(n); }
    bool is_zero(const T& x) const { return x == 0; }
    bool pivot_ok(const T& x) const { return x != 0; }
    T add(const T& a, const T& b) const { return a + b; }
    T sub(const T& a, const T& b) const { return a - b; }
    T mul(const T& a, const T& b) const { return a * b; }
    T div(const T& a, const T& b) const { return a / b; }
    T neg(const T& a) const { return -a; }
};

struct QLField {
    using T = RatFunc;
    T zero() const { return RatFunc(); }
    T one() const { return RatFunc(Rat(1)); }
    T from_long(long n) const { return RatFunc(Rat(n)); }
    bool is_zero(const T& x) const { return x.is_zero(); }
    bool pivot_ok(const T& x) const { return !x.is_zero(); }
    T add(const T& a, const T& b) const { return a + b; }
    T sub(const T& a, const T& b) const { return a - b; }
    T mul(const T& a, const T& b) const { return a * b; }
    T div(const T& a, const T& b) const { return a / b; }
    T neg(const T& a) const { return -a; }
};

// Prime field arithmetic on plain machine words, for fast rank certificates.
struct FpField {
    long p = 0;
    using T = long;
    T zero() const { return 0; }
    T one() const { return 1; }
    T from_long(long n) const {
        long r = n % p;
        return r < 0 ? r + p : r;
    }
    bool is_zero(const T& x) const { return x == 0; }
    bool pivot_ok(const T& x) const { return x != 0; }
    T add(const T& a, const T& b) const { return (a + b) % p; }
    T sub(const T& a, const T& b) const { return ((a - b) % p + p) % p; }
    T mul(const T& a, const T& b) const {
        return static_cast<long>((static_cast<__int128>(a) * b) % p);
    }
    T div(const T& a, const T& b) const;
    T neg(const T& a) const { return (p - a) % p; }
};

struct PField {
    long p = 0;
    long N = 0;  // relative working precision for freshly minted scalars
    using T = PadicScalar;
    T zero() const { return PadicScalar::zero(p); }
    T one() const { return PadicScalar::from_integer(1, p, N); }
    T from_long(long n) const { return PadicScalar::from_integer(n, p, N); }
    bool is_zero(const T& x) const { return x.is_exact_zero(); }
    // Pivots must be genuine units so elimination stays integral.
    bool pivot_ok(const T& x) const { return x.has_unit() && x.val() == 0; }
    T add(const T& a, const T& b) const { return a + b; }
    T sub(const T& a, const T& b) const { return a - b; }
    T mul(const T& a, const T& b) const { return a * b; }
    T div(const T& a, const T& b) const { return a / b; }
    T neg(const T& a) const { return -a; }
};

// First-order jets over the p-adics: value plus parameter derivative.
// Division (hence pivoting) needs a unit value part; the derivative rides
// along for free and never influences pivot admissibility.
struct JetField {
    long p = 0;
    long N = 0;
    using T = JetScalar;
    T zero() const { return JetScalar::zero(p); }
    T one() const { return JetScalar::constant(PadicScalar::from_integer(1, p, N)); }
    T from_long(long n) const { return JetScalar::constant(PadicScalar::from_integer(n, p, N)); }
    bool is_zero(const T& x) const { return x.is_exact_zero(); }
    bool pivot_ok(const T& x) const { return x.re.has_unit() && x.re.val() == 0; }
    T add(const T& a, const T& b) const { return a + b; }
    T sub(const T& a, const T& b) const { return a - b; }
    T mul(const T& a, const T& b) const { return a * b; }
    T div(const T& a, const T& b) const { return a / b; }
    T neg(const T& a) const { return -a; }
};

template <class F>
void add_term(const F& fld, MPoly<typename F::T>& g, const Mono& m, const typename F::T& c) {
    if (fld.is_zero(c)) return;
    auto it = g.t.find(m);
    if (it == g.t.end()) {
        g.t.emplace(m, c);
        return;
    }
    it->second = fld.add(it->second, c);
    if (fld.is_zero(it->second)) g.t.erase(it);
}

template <class F>
void poly_axpy(const F& fld, MPoly<typename F::T>& g, const typename F::T& a,
               const MPoly<typename F::T>& h) {
    if (fld.is_zero(a)) return;
    for (auto& [m, c] : h.t) add_term(fld, g, m, fld.mul(a, c));
}

template <class F>
MPoly<typename F::T> poly_mul_mono(const F& fld, const MPoly<typename F::T>& g, const Mono& m,
                                   const typename F::T& a) {
    MPoly<typename F::T> r;
    r.nv = g.nv;
    for (auto& [mm, c] : g.t) {
        auto prod = fld.mul(a, c);
        if (!fld.is_zero(prod)) r.t.emplace(mm * m, prod);
    }
    return r;
}

template <class F>
MPoly<typename F::T> poly_mul(const F& fld, const MPoly<typename F::T>& a,
                              const MPoly<typename F::T>& b) {
    MPoly<typename F::T> r;
    r.nv = a.nv ? a.nv : b.nv;
    for (auto& [ma, ca] : a.t)
        for (auto& [mb, cb] : b.t) add_term(fld, r, ma * mb, fld.mul(ca, cb));
    return r;
}

template <class F>
MPoly<typename F::T> poly_partial(const F& fld, const MPoly<typename F::T>& g, int var) {
    MPoly<typename F::T> r;
    r.nv = g.nv;
    for (auto& [m, c] : g.t) {
        int ev = m.e[static_cast<size_t>(var)];
        if (ev == 0) continue;
        Mono mm = m / Mono::unit(var);
        auto d = fld.mul(c, fld.from_long(ev));
        if (!fld.is_zero(d)) r.t.emplace(mm, d);
    }
    return r;
}

/*
 * Parsed, possibly Laurent, polynomial in named variables with coefficients
 * polynomial in one reserved parameter symbol.  This is the user-facing type;
 * engines consume the specialized MPoly forms below.
 */
struct LaurentPoly {
    std::vector<std::string> vars;          // in first-appearance order
    std::string param;                      // reserved parameter symbol
    std::map<std::vector<int>, ParamPoly> t;

    bool has_negative_exponent() const;
    bool uses_param() const;
    std::string str() const;
};

struct HomoPoly {
    std::vector<std::string> vars;
    std::string param;
    MPoly<ParamPoly> poly;  // homogeneous, nonnegative exponents
    long degree = 0;

    bool uses_param() const;
    std::string str() const;
};

class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& m) : std::runtime_error(m) {}
};

// Text grammar: terms joined by +/-, each term a '*'-product of integer
// (optionally int/int) constants and variable powers x^k (k any integer;
// negative exponents make it Laurent).  The parameter symbol defaults to "l".
LaurentPoly parse_poly(const std::string& text, const std::string& param_symbol = "l");

// Clear negative exponents by the minimal monomial, then homogenize with a
// fresh variable if the result is inhomogeneous.  Already-homogeneous
// polynomial input comes back unchanged.
HomoPoly homogenize_laurent(const LaurentPoly& P);

// Specializations of the coefficient parameter.
MPoly<Rat> evaluate_param(const HomoPoly& f, const Rat& x);
MPoly<PadicScalar> evaluate_param(const HomoPoly& f, const PadicScalar& x);
MPoly<PadicScalar> evaluate_param(const HomoPoly& f, const PadicScalar& x, long N);
MPoly<RatFunc> symbolic_param(const HomoPoly& f);

std::vector<MPoly<ParamPoly>> partials(const HomoPoly& f);

// Derivative with respect to the parameter, variables untouched.
HomoPoly param_partial(const HomoPoly& f);

// Reductions to the prime field; throw if a denominator vanishes mod p.
MPoly<long> to_fp(const MPoly<Rat>& f, long p);
MPoly<long> to_fp(const MPoly<PadicScalar>& f);

std::string mono_str(const Mono& m, const std::vector<std::string>& vars);

}  // namespace dwork
