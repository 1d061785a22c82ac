#include "dwork/oracle.hpp"

#include <cassert>
#include <map>
#include <utility>

namespace dwork {

namespace {

// F_{p^e} element as a + b*s with s^2 = r (b = 0 when e = 1).
struct Fq {
    long p, r;
    int e;

    using El = std::pair<long, long>;

    long q() const { return e == 1 ? p : p * p; }

    El from_index(long i) const {
        if (e == 1) return {i, 0};
        return {i % p, i / p};
    }
    bool is_zero(const El& x) const { return x.first == 0 && x.second == 0; }
    El mul(const El& x, const El& y) const {
        long a = x.first, b = x.second, c = y.first, d = y.second;
        long re = (a * c % p + b * d % p * r) % p;
        long im = (a * d + b * c) % p;
        return {re, im};
    }
    El add(const El& x, const El& y) const {
        return {(x.first + y.first) % p, (x.second + y.second) % p};
    }
    El pow(El x, long k) const {
        El acc{1, 0};
        while (k > 0) {
            if (k & 1) acc = mul(acc, x);
            x = mul(x, x);
            k >>= 1;
        }
        return acc;
    }
    El scale(long c, const El& x) const {
        c %= p;
        if (c < 0) c += p;
        return {c * x.first % p, c * x.second % p};
    }
};

long least_nonresidue(long p) {
    for (long r = 2; r < p; ++r) {
        bool sq = false;
        for (long x = 1; x <= p / 2 && !sq; ++x)
            if (x * x % p == r) sq = true;
        if (!sq) return r;
    }
    throw std::logic_error("no quadratic non-residue found");
}

// Evaluate F (coefficients already reduced mod p) at a point.
Fq::El eval_poly(const Fq& K, const MPoly<long>& F, const std::vector<Fq::El>& pt) {
    Fq::El acc{0, 0};
    for (auto& [m, c] : F.t) {
        Fq::El term{1, 0};
        for (int i = 0; i < F.nv; ++i) {
            int ei = m.e[static_cast<size_t>(i)];
            if (ei > 0) term = K.mul(term, K.pow(pt[static_cast<size_t>(i)], ei));
        }
        acc = K.add(acc, K.scale(c, term));
    }
    return acc;
}

// Projective points with first nonzero coordinate at position `lead` fixed
// to 1, remaining coordinates free.
long count_chart(const Fq& K, const MPoly<long>& F, int lead) {
    int nv = F.nv;
    int free_vars = nv - lead - 1;
    long q = K.q();
    long total = 1;
    for (int i = 0; i < free_vars; ++i) total *= q;

    std::vector<Fq::El> pt(static_cast<size_t>(nv), Fq::El{0, 0});
    pt[static_cast<size_t>(lead)] = {1, 0};

    long hits = 0;
    for (long idx = 0; idx < total; ++idx) {
        long rest = idx;
        for (int i = 0; i < free_vars; ++i) {
            pt[static_cast<size_t>(lead + 1 + i)] = K.from_index(rest % q);
            rest /= q;
        }
        if (K.is_zero(eval_poly(K, F, pt))) ++hits;
    }
    return hits;
}

}  // namespace

long count_points(const MPoly<long>& F, long p, int e) {
    if (p < 3 || p > 31) throw oracle_budget_exceeded("prime out of oracle range");
    if (e < 1 || e > 2) throw oracle_budget_exceeded("extension degree out of oracle range");
    if (F.nv < 2 || F.nv > 4) throw oracle_budget_exceeded("variable count out of oracle range");

    Fq K{p, e == 2 ? least_nonresidue(p) : 0, e};
    long q = K.q();
    double pts = 0;
    for (int i = 0; i < F.nv; ++i) pts = pts * q + 1;
    if (pts > 2.0e6) throw oracle_budget_exceeded("too many projective points");

    long total = 0;
    for (int lead = 0; lead < F.nv; ++lead) total += count_chart(K, F, lead);
    return total;
}

long count_points(const MPoly<Rat>& F, long p, int e) { return count_points(to_fp(F, p), p, e); }

ZetaData zeta_genus1(long n1, long n2, long p) {
    ZetaData z;
    z.p = p;
    z.n1 = n1;
    z.n2 = n2;
    z.a = p + 1 - n1;
    if (z.a * z.a > 4 * p) throw std::runtime_error("not-genus-1-or-count-bug: Hasse bound violated");
    if (n2 != p * p + 1 - (z.a * z.a - 2 * p))
        throw std::runtime_error("not-genus-1-or-count-bug: N_2 inconsistent with N_1");
    return z;
}

std::vector<mpz_class> period_series(long C) {
    std::vector<mpz_class> out;
    out.reserve(static_cast<size_t>(C) + 1);
    for (long c = 0; c <= C; ++c) {
        // (u,v)-constant term of Q^(3c) with Q = u + v + l/(uv); only the
        // l^c stratum survives the balance condition, with sign (-1)^(3c).
        std::map<std::pair<long, long>, mpz_class> cur;
        cur[{0, 0}] = 1;
        for (long step = 0; step < 3 * c; ++step) {
            std::map<std::pair<long, long>, mpz_class> nxt;
            for (auto& [ex, co] : cur) {
                nxt[{ex.first + 1, ex.second}] += co;
                nxt[{ex.first, ex.second + 1}] += co;
                nxt[{ex.first - 1, ex.second - 1}] += co;
            }
            cur = std::move(nxt);
        }
        mpz_class ct = 0;
        auto it = cur.find({0, 0});
        if (it != cur.end()) ct = it->second;
        out.push_back((c % 2 == 0) ? ct : mpz_class(-ct));
    }
    return out;
}

}  // namespace dwork
