#include "dwork/rational.hpp"

namespace dwork {

ParamPoly ParamPoly::operator+(const ParamPoly& o) const {
    ParamPoly r;
    r.c.resize(std::max(c.size(), o.c.size()), Rat(0));
    for (size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
    for (size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
    r.trim();
    return r;
}

ParamPoly ParamPoly::operator-(const ParamPoly& o) const { return *this + (-o); }

ParamPoly ParamPoly::operator-() const {
    ParamPoly r = *this;
    for (auto& a : r.c) a = -a;
    return r;
}

ParamPoly ParamPoly::operator*(const ParamPoly& o) const {
    ParamPoly r;
    if (is_zero() || o.is_zero()) return r;
    r.c.assign(c.size() + o.c.size() - 1, Rat(0));
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
    }
    r.trim();
    return r;
}

ParamPoly ParamPoly::scaled(const Rat& a) const {
    if (a == 0) return ParamPoly();
    ParamPoly r = *this;
    for (auto& x : r.c) x *= a;
    return r;
}

ParamPoly ParamPoly::derivative() const {
    ParamPoly r;
    if (c.size() <= 1) return r;
    r.c.resize(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) r.c[i - 1] = c[i] * static_cast<long>(i);
    r.trim();
    return r;
}

Rat ParamPoly::eval(const Rat& x) const {
    Rat r(0);
    for (size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
}

PadicScalar ParamPoly::eval(const PadicScalar& x) const {
    return eval(x, x.is_exact_zero() ? 8 : x.prec());
}

PadicScalar ParamPoly::eval(const PadicScalar& x, long N) const {
    PadicScalar r = PadicScalar::zero(x.prime());
    for (size_t i = c.size(); i-- > 0;)
        r = r * x + PadicScalar::from_rational(c[i], x.prime(), N);
    return r;
}

std::string ParamPoly::str(const std::string& sym) const {
    if (c.empty()) return "0";
    std::string s;
    for (size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0) continue;
        Rat a = c[i];
        if (!s.empty()) {
            s += (a > 0) ? " + " : " - ";
            if (a < 0) a = -a;
        } else if (a < 0) {
            s += "-";
            a = -a;
        }
        if (i == 0 || a != 1) {
            s += a.get_str();
            if (i > 0) s += "*";
        }
        if (i > 0) {
            s += sym;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

std::pair<ParamPoly, ParamPoly> poly_divmod(const ParamPoly& a, const ParamPoly& b) {
    if (b.is_zero()) throw std::domain_error("poly_divmod: division by zero");
    ParamPoly q, r = a;
    long db = b.degree();
    while (!r.is_zero() && r.degree() >= db) {
        long k = r.degree() - db;
        Rat f = r.lead() / b.lead();
        if (q.c.size() < static_cast<size_t>(k) + 1) q.c.resize(static_cast<size_t>(k) + 1, Rat(0));
        q.c[static_cast<size_t>(k)] += f;
        for (long i = 0; i <= db; ++i)
            r.c[static_cast<size_t>(i + k)] -= f * b.c[static_cast<size_t>(i)];
        r.trim();
    }
    q.trim();
    return {q, r};
}

ParamPoly poly_gcd(ParamPoly a, ParamPoly b) {
    a.trim();
    b.trim();
    while (!b.is_zero()) {
        ParamPoly r = poly_divmod(a, b).second;
        a = b;
        b = r;
    }
    if (!a.is_zero()) a = a.scaled(Rat(1) / a.lead());
    return a;
}

RatFunc::RatFunc(ParamPoly n, ParamPoly d) : num(std::move(n)), den(std::move(d)) {
    num.trim();
    den.trim();
    if (den.is_zero()) throw std::domain_error("RatFunc: zero denominator");
    if (num.is_zero()) {
        den = ParamPoly(Rat(1));
        return;
    }
    ParamPoly g = poly_gcd(num, den);
    if (g.degree() > 0) {
        num = poly_divmod(num, g).first;
        den = poly_divmod(den, g).first;
    }
    Rat lead = den.lead();
    if (lead != 1) {
        den = den.scaled(Rat(1) / lead);
        num = num.scaled(Rat(1) / lead);
    }
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
    return RatFunc(num * o.den + o.num * den, den * o.den);
}

RatFunc RatFunc::operator-(const RatFunc& o) const {
    return RatFunc(num * o.den - o.num * den, den * o.den);
}

RatFunc RatFunc::operator*(const RatFunc& o) const {
    return RatFunc(num * o.num, den * o.den);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
    if (o.is_zero()) throw std::domain_error("RatFunc: division by zero");
    return RatFunc(num * o.den, den * o.num);
}

RatFunc RatFunc::operator-() const {
    RatFunc r = *this;
    r.num = -r.num;
    return r;
}

RatFunc RatFunc::theta() const {
    ParamPoly l = ParamPoly::var();
    return RatFunc(l * (num.derivative() * den - num * den.derivative()), den * den);
}

std::string RatFunc::str(const std::string& sym) const {
    if (den.degree() == 0 && den.c.size() == 1 && den.c[0] == 1) return num.str(sym);
    return "(" + num.str(sym) + ") / (" + den.str(sym) + ")";
}

}  // namespace dwork
