#include "dwork/polyalg.hpp"

#include <algorithm>
#include <cctype>

namespace dwork {

std::vector<Mono> monomials_of_degree(int nv, long d) {
    std::vector<Mono> out;
    Mono m;
    // Recursive enumeration, then sort grlex-descending (same degree: lex desc).
    auto rec = [&](auto&& self, int var, long rem) -> void {
        if (var == nv - 1) {
            m.e[static_cast<size_t>(var)] = static_cast<uint16_t>(rem);
            out.push_back(m);
            return;
        }
        for (long k = rem; k >= 0; --k) {
            m.e[static_cast<size_t>(var)] = static_cast<uint16_t>(k);
            self(self, var + 1, rem - k);
        }
        m.e[static_cast<size_t>(var)] = 0;
    };
    if (nv > 0 && d >= 0) rec(rec, 0, d);
    return out;  // already lex-descending, single degree => grlex-descending
}

bool LaurentPoly::has_negative_exponent() const {
    for (auto& [e, c] : t)
        for (int x : e)
            if (x < 0) return true;
    return false;
}

bool LaurentPoly::uses_param() const {
    for (auto& [e, c] : t)
        if (c.degree() > 0) return true;
    return false;
}

bool HomoPoly::uses_param() const {
    for (auto& [e, c] : poly.t)
        if (c.degree() > 0) return true;
    return false;
}

namespace {

struct Lexer {
    const std::string& s;
    size_t i = 0;

    explicit Lexer(const std::string& str) : s(str) {}

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip();
        return i >= s.size();
    }
    char peek() {
        skip();
        return i < s.size() ? s[i] : '\0';
    }
    char get() {
        skip();
        if (i >= s.size()) throw parse_error("unexpected end of input");
        return s[i++];
    }
    long integer() {
        skip();
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = (s[i++] == '-');
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            throw parse_error("expected integer at position " + std::to_string(i));
        long v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            v = v * 10 + (s[i] - '0');
            if (v > 1000000) throw parse_error("integer literal too large");
            ++i;
        }
        return neg ? -v : v;
    }
};

}  // namespace

LaurentPoly parse_poly(const std::string& text, const std::string& param_symbol) {
    if (param_symbol.size() != 1) throw parse_error("parameter symbol must be one letter");
    LaurentPoly P;
    P.param = param_symbol;
    Lexer lx(text);
    std::map<std::string, int> var_index;

    auto var_slot = [&](const std::string& name) {
        auto it = var_index.find(name);
        if (it != var_index.end()) return it->second;
        if (static_cast<int>(P.vars.size()) >= kMaxVars)
            throw parse_error("too many variables (max " + std::to_string(kMaxVars) + ")");
        int idx = static_cast<int>(P.vars.size());
        P.vars.push_back(name);
        var_index[name] = idx;
        return idx;
    };

    bool first_term = true;
    while (!lx.eof()) {
        int sign = 1;
        char c = lx.peek();
        if (c == '+' || c == '-') {
            lx.get();
            if (c == '-') sign = -1;
        } else if (!first_term) {
            throw parse_error("expected + or - between terms");
        }
        first_term = false;

        Rat coeff(sign);
        long param_pow = 0;
        std::map<int, long> expo;
        bool expect_factor = true;
        while (expect_factor) {
            char f = lx.peek();
            if (std::isdigit(static_cast<unsigned char>(f))) {
                long num = lx.integer();
                if (lx.peek() == '/') {
                    lx.get();
                    long den = lx.integer();
                    if (den == 0) throw parse_error("zero denominator");
                    coeff *= Rat(num, den);
                    coeff.canonicalize();
                } else {
                    coeff *= num;
                }
            } else if (std::isalpha(static_cast<unsigned char>(f))) {
                std::string name(1, lx.get());
                long e = 1;
                if (lx.peek() == '^') {
                    lx.get();
                    e = lx.integer();
                }
                if (name == param_symbol) {
                    if (e < 0) throw parse_error("negative parameter power unsupported");
                    param_pow += e;
                } else {
                    if (e < -4096 || e > 4096) throw parse_error("exponent out of range");
                    expo[var_slot(name)] += e;
                }
            } else {
                throw parse_error(std::string("unexpected character '") + f + "'");
            }
            if (lx.peek() == '*') {
                lx.get();
            } else {
                expect_factor = false;
            }
        }

        ParamPoly pc;
        pc.c.assign(static_cast<size_t>(param_pow) + 1, Rat(0));
        pc.c[static_cast<size_t>(param_pow)] = coeff;
        pc.trim();
        std::vector<int> key(P.vars.size(), 0);
        for (auto& [v, e] : expo) key[static_cast<size_t>(v)] = static_cast<int>(e);
        auto it = P.t.find(key);
        if (it == P.t.end()) {
            if (!pc.is_zero()) P.t.emplace(std::move(key), std::move(pc));
        } else {
            it->second = it->second + pc;
            if (it->second.is_zero()) P.t.erase(it);
        }
    }
    // Keys shorter than the final variable count get padded.
    std::map<std::vector<int>, ParamPoly> padded;
    for (auto& [e, c] : P.t) {
        std::vector<int> k = e;
        k.resize(P.vars.size(), 0);
        padded[k] = c;
    }
    P.t = std::move(padded);
    if (P.t.empty()) throw parse_error("empty polynomial");
    return P;
}

HomoPoly homogenize_laurent(const LaurentPoly& P) {
    int nv = static_cast<int>(P.vars.size());
    if (nv == 0) throw parse_error("polynomial has no variables");
    std::vector<int> mins(static_cast<size_t>(nv), 0);
    for (auto& [e, c] : P.t)
        for (int i = 0; i < nv; ++i)
            mins[static_cast<size_t>(i)] = std::min(mins[static_cast<size_t>(i)],
                                                    e[static_cast<size_t>(i)]);

    // Clear poles, then measure degrees.
    std::map<std::vector<int>, ParamPoly> cleared;
    long dmax = 0, dmin = -1;
    for (auto& [e, c] : P.t) {
        std::vector<int> k(static_cast<size_t>(nv));
        long d = 0;
        for (int i = 0; i < nv; ++i) {
            k[static_cast<size_t>(i)] = e[static_cast<size_t>(i)] - mins[static_cast<size_t>(i)];
            if (k[static_cast<size_t>(i)] < 0)
                throw parse_error("clearing produced a negative exponent");
            d += k[static_cast<size_t>(i)];
        }
        dmax = std::max(dmax, d);
        dmin = (dmin < 0) ? d : std::min(dmin, d);
        cleared[k] = c;
    }

    HomoPoly H;
    H.vars = P.vars;
    H.param = P.param;
    bool need_homogenizer = (dmin != dmax);
    int hv = -1;
    if (need_homogenizer) {
        if (nv + 1 > kMaxVars) throw parse_error("no free slot for homogenizing variable");
        // First unused letter, w preferred to match the usual convention.
        std::string name;
        for (char cand : std::string("wstzyxabc")) {
            std::string n(1, cand);
            if (n != P.param && std::find(H.vars.begin(), H.vars.end(), n) == H.vars.end()) {
                name = n;
                break;
            }
        }
        if (name.empty()) throw parse_error("could not name homogenizing variable");
        hv = nv;
        H.vars.push_back(name);
    }

    H.poly.nv = static_cast<int>(H.vars.size());
    for (auto& [e, c] : cleared) {
        Mono m;
        long d = 0;
        for (int i = 0; i < nv; ++i) {
            m.e[static_cast<size_t>(i)] = static_cast<uint16_t>(e[static_cast<size_t>(i)]);
            d += e[static_cast<size_t>(i)];
        }
        if (need_homogenizer) m.e[static_cast<size_t>(hv)] = static_cast<uint16_t>(dmax - d);
        H.poly.t[m] = c;
    }
    H.degree = dmax;
    return H;
}

MPoly<Rat> evaluate_param(const HomoPoly& f, const Rat& x) {
    MPoly<Rat> r;
    r.nv = f.poly.nv;
    for (auto& [m, c] : f.poly.t) {
        Rat v = c.eval(x);
        if (v != 0) r.t.emplace(m, v);
    }
    return r;
}

MPoly<PadicScalar> evaluate_param(const HomoPoly& f, const PadicScalar& x) {
    return evaluate_param(f, x, x.is_exact_zero() ? 8 : x.prec());
}

MPoly<PadicScalar> evaluate_param(const HomoPoly& f, const PadicScalar& x, long N) {
    MPoly<PadicScalar> r;
    r.nv = f.poly.nv;
    for (auto& [m, c] : f.poly.t) {
        PadicScalar v = c.eval(x, N);
        if (!v.is_exact_zero()) r.t.emplace(m, v);
    }
    return r;
}

MPoly<RatFunc> symbolic_param(const HomoPoly& f) {
    MPoly<RatFunc> r;
    r.nv = f.poly.nv;
    for (auto& [m, c] : f.poly.t) r.t.emplace(m, RatFunc(c, ParamPoly(Rat(1))));
    return r;
}

std::vector<MPoly<ParamPoly>> partials(const HomoPoly& f) {
    std::vector<MPoly<ParamPoly>> out;
    int nv = static_cast<int>(f.vars.size());
    for (int v = 0; v < nv; ++v) {
        MPoly<ParamPoly> d;
        d.nv = f.poly.nv;
        for (auto& [m, c] : f.poly.t) {
            int ev = m.e[static_cast<size_t>(v)];
            if (ev == 0) continue;
            d.t.emplace(m / Mono::unit(v), c.scaled(Rat(ev)));
        }
        out.push_back(std::move(d));
    }
    return out;
}

long FpField::div(const long& a, const long& b) const {
    if (b == 0) throw std::domain_error("division by zero mod p");
    // Fermat inverse; p is prime and small.
    long inv = 1, base = b, e = p - 2;
    while (e > 0) {
        if (e & 1) inv = mul(inv, base);
        base = mul(base, base);
        e >>= 1;
    }
    return mul(a, inv);
}

HomoPoly param_partial(const HomoPoly& f) {
    HomoPoly g;
    g.vars = f.vars;
    g.param = f.param;
    g.degree = f.degree;
    g.poly.nv = f.poly.nv;
    for (auto& [m, c] : f.poly.t) {
        ParamPoly d = c.derivative();
        if (!d.is_zero()) g.poly.t.emplace(m, std::move(d));
    }
    return g;
}

MPoly<long> to_fp(const MPoly<Rat>& f, long p) {
    FpField fp{p};
    MPoly<long> r;
    r.nv = f.nv;
    for (auto& [m, c] : f.t) {
        if (c.get_den() % p == 0) throw std::domain_error("denominator vanishes mod p");
        long num = fp.from_long(static_cast<long>(mpz_fdiv_ui(c.get_num().get_mpz_t(), static_cast<unsigned long>(p))));
        long den = fp.from_long(static_cast<long>(mpz_fdiv_ui(c.get_den().get_mpz_t(), static_cast<unsigned long>(p))));
        long v = fp.div(num, den);
        if (v != 0) r.t.emplace(m, v);
    }
    return r;
}

MPoly<long> to_fp(const MPoly<PadicScalar>& f) {
    MPoly<long> r;
    long p = 0;
    for (auto& [m, c] : f.t) {
        if (c.is_exact_zero()) continue;
        p = c.prime();
        r.nv = f.nv;
        if (c.val() < 0) throw std::domain_error("negative valuation has no residue mod p");
        if (c.val() > 0) continue;
        long v = static_cast<long>(mpz_fdiv_ui(c.unit().get_mpz_t(), static_cast<unsigned long>(p)));
        if (v != 0) r.t.emplace(m, v);
    }
    r.nv = f.nv;
    (void)p;
    return r;
}

std::string mono_str(const Mono& m, const std::vector<std::string>& vars) {
    std::string s;
    for (size_t i = 0; i < vars.size(); ++i) {
        int e = m.e[i];
        if (e == 0) continue;
        if (!s.empty()) s += "*";
        s += vars[i];
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s.empty() ? "1" : s;
}

std::string LaurentPoly::str() const {
    std::string s;
    for (auto& [e, c] : t) {
        if (!s.empty()) s += " + ";
        std::string mono;
        for (size_t i = 0; i < vars.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += vars[i];
            if (e[i] != 1) mono += "^" + std::to_string(e[i]);
        }
        std::string cs = c.str(param);
        if (mono.empty())
            s += cs;
        else if (cs == "1")
            s += mono;
        else
            s += "(" + cs + ")*" + mono;
    }
    return s.empty() ? "0" : s;
}

std::string HomoPoly::str() const {
    std::string s;
    for (auto& [m, c] : poly.t) {
        if (!s.empty()) s += " + ";
        std::string mono = mono_str(m, vars);
        std::string cs = c.str(param);
        if (mono == "1")
            s += cs;
        else if (cs == "1")
            s += mono;
        else
            s += "(" + cs + ")*" + mono;
    }
    return s.empty() ? "0" : s;
}

}  // namespace dwork
