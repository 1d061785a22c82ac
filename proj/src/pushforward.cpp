#include "dwork/pushforward.hpp"

#include <map>

namespace dwork {

PushforwardElem PushforwardElem::zero(long p, long A_max, long I_max) {
    PushforwardElem e;
    e.p = p;
    e.A_max = A_max;
    e.I_max = I_max;
    e.t_part.assign(static_cast<size_t>(A_max), PiScalar::zero(p));
    e.i_part.assign(static_cast<size_t>(I_max) + 1, PiScalar::zero(p));
    return e;
}

PushforwardElem PushforwardElem::phi(long p, long A_max, long I_max, long N, long z_exp) {
    PushforwardElem e = zero(p, A_max, I_max);
    PiScalar one = PiScalar::from_padic(PadicScalar::from_integer(1, p, N));
    if (z_exp >= 0) {
        if (z_exp + 1 > A_max) throw truncation_overflow("t window too small for phi");
        e.t_coord(z_exp + 1) = one;
    } else {
        long i = -z_exp - 1;
        if (i > I_max) throw truncation_overflow("divided-power window too small for phi");
        e.i_coord(i) = one;
    }
    return e;
}

PushforwardElem PushforwardElem::operator-(const PushforwardElem& o) const {
    PushforwardElem r = *this;
    for (size_t k = 0; k < r.t_part.size(); ++k) r.t_part[k] = r.t_part[k] - o.t_part[k];
    for (size_t k = 0; k < r.i_part.size(); ++k) r.i_part[k] = r.i_part[k] - o.i_part[k];
    return r;
}

PushforwardElem PushforwardElem::operator*(const PiScalar& c) const {
    PushforwardElem r = *this;
    for (auto& x : r.t_part) x = x * c;
    for (auto& x : r.i_part) x = x * c;
    return r;
}

PushforwardElem& PushforwardElem::operator+=(const PushforwardElem& o) {
    for (size_t k = 0; k < t_part.size(); ++k) t_part[k] += o.t_part[k];
    for (size_t k = 0; k < i_part.size(); ++k) i_part[k] += o.i_part[k];
    return *this;
}

long PushforwardElem::min_val(long empty_val) const {
    long best = empty_val;
    bool seen = false;
    auto scan = [&](const PiScalar& s) {
        for (long k = 0; k + 1 < p; ++k) {
            const PadicScalar& c = s.coeff(k);
            if (c.is_exact_zero()) continue;
            if (!seen || c.val() < best) best = c.val();
            seen = true;
        }
    };
    for (auto& x : t_part) scan(x);
    for (auto& x : i_part) scan(x);
    return best;
}

std::string PushforwardElem::str() const {
    std::string s;
    for (long a = 1; a <= A_max; ++a) {
        if (t_coord(a).is_exact_zero()) continue;
        if (!s.empty()) s += " + ";
        s += "(" + t_coord(a).str() + ")*t^" + std::to_string(a);
    }
    for (long i = 0; i <= I_max; ++i) {
        if (i_coord(i).is_exact_zero()) continue;
        if (!s.empty()) s += " + ";
        s += "(" + i_coord(i).str() + ")*e" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

PushforwardElem reduce_y_power(long m, long s, long p, long N, long A_max, long I_max) {
    if (m < 0 || m + s < 0) throw std::invalid_argument("reduce_y_power: negative powers");
    long c = m + s;
    long steps = std::min(m, c);
    PiScalar acc = PiScalar::from_padic(PadicScalar::from_integer(1, p, N));
    for (long j = 0; j < steps; ++j)
        acc = acc * PiScalar::monomial(PadicScalar::from_integer(-(m - j), p, N), -1);
    long K = m - steps;      // leftover (x y) power
    long a = c - steps;      // leftover t power
    PushforwardElem out = PushforwardElem::zero(p, A_max, I_max);
    if (K > 0) {
        // (x y)^K = K! (-pi)^(-K) times the K-th divided-power element.
        if (K > I_max) throw truncation_overflow("divided-power index exceeds window");
        PadicScalar kf = PadicScalar::factorial(static_cast<unsigned long>(K), p, N);
        if (K % 2) kf = kf.mul_small(-1);
        out.i_coord(K) = acc * PiScalar::monomial(kf, -K);
    } else if (a == 0) {
        out.i_coord(0) = acc;
    } else {
        if (a > A_max) throw truncation_overflow("t exponent exceeds window");
        out.t_coord(a) = acc;
    }
    return out;
}

namespace {

PushforwardElem fr_core(const SplittingSeries& S, const PushforwardElem& e, long p, long N,
                        long M, long N_rel) {
    PushforwardElem out = PushforwardElem::zero(p, e.A_max, e.I_max);
    PiScalar p2 = PiScalar::from_padic(PadicScalar::from_integer(1, p, N_rel).mul_p_power(2));
    long tail_floor = 9999;

    for (long a = 1; a <= e.A_max; ++a) {
        if (e.t_coord(a).is_exact_zero()) continue;
        // t^a maps to p^2 sum_n A_n (x y)^(n+p-1) t^(n+ap).
        PiScalar front = e.t_coord(a) * p2;
        for (long n = 0; n <= M; ++n) {
            PushforwardElem term =
                reduce_y_power(n + p - 1, (a - 1) * p + 1, p, N_rel, e.A_max, e.I_max) *
                (S.coeff(n) * front);
            if (n == M) tail_floor = std::min(tail_floor, term.min_val(9999));
            out += term;
        }
    }
    for (long i = 0; i <= e.I_max; ++i) {
        if (e.i_coord(i).is_exact_zero()) continue;
        // The divided-power element maps to
        // p^2 (-pi)^i / i! sum_n A_n (x y)^(pi+p-1+n) t^n.
        PadicScalar inv_f = PadicScalar::factorial(static_cast<unsigned long>(i), p, N_rel).inv();
        if (i % 2) inv_f = inv_f.mul_small(-1);
        PiScalar front = e.i_coord(i) * p2 * PiScalar::monomial(inv_f, i);
        for (long n = 0; n <= M; ++n) {
            PushforwardElem term =
                reduce_y_power(p * i + p - 1 + n, -(p * i + p - 1), p, N_rel, e.A_max, e.I_max) *
                (S.coeff(n) * front);
            if (n == M) tail_floor = std::min(tail_floor, term.min_val(9999));
            out += term;
        }
    }
    if (tail_floor < N)
        throw tail_not_dominated("final series term valuation " + std::to_string(tail_floor) +
                                 " below target " + std::to_string(N));
    return out;
}

// Reduction coefficients only shed digits at the base-p digit-sum rate, so a
// flat guard far above log_p of any index reached here is plenty.
long rel_precision(long N) { return N + 12; }

}  // namespace

PushforwardElem fr_pushforward(const PushforwardElem& e, long p, long N, long M) {
    long N_rel = rel_precision(N);
    SplittingSeries S = splitting_coeffs(p, N_rel, M);
    long M_used = S.size() - 1;
    return fr_core(S, e, p, N, M_used, N_rel);
}

IntertwineReport verify_phi_intertwine(long p, long N, long M, long A_src, long I_src,
                                       long perturb_n) {
    IntertwineReport rep;
    rep.p = p;
    rep.N = N;
    rep.pass = true;

    long A_win = A_src * p + 2;
    long I_win = (I_src + 1) * p;
    long N_rel = rel_precision(N);
    SplittingSeries S = splitting_coeffs(p, N_rel, M);
    long M_used = S.size() - 1;
    if (perturb_n >= 0 && perturb_n <= M_used) {
        long slot = perturb_n % (p - 1);
        S.a[static_cast<size_t>(perturb_n)] +=
            PiScalar::monomial(PadicScalar::from_integer(p, p, N_rel), slot);
    }

    auto run = [&](long z_exp, const std::string& label) {
        PushforwardElem src = PushforwardElem::phi(p, A_win, I_win, N_rel, z_exp);
        PushforwardElem lhs = fr_core(S, src, p, N, M_used, N_rel);
        PushforwardElem rhs = PushforwardElem::phi(p, A_win, I_win, N_rel, z_exp * p) *
                              PiScalar::from_padic(PadicScalar::from_integer(p, p, N_rel));
        long rv = (lhs - rhs).min_val(9999);
        IntertwineCheck chk{label, rv, rv >= N};
        rep.pass = rep.pass && chk.pass;
        rep.checks.push_back(std::move(chk));
    };

    for (long a = 0; a <= A_src; ++a) run(a, "z^" + std::to_string(a));
    for (long i = 0; i <= I_src; ++i) run(-i - 1, "z^-" + std::to_string(i + 1));
    return rep;
}

mpq_class weight_spectrum(WeightKind kind, long i) {
    if (kind == WeightKind::x_power && i < 0) throw std::invalid_argument("need i >= 0");
    if (kind == WeightKind::t_power && i < 1) throw std::invalid_argument("need i >= 1");

    using Key = std::pair<long, long>;  // (x power, t power)
    std::map<Key, mpq_class> g;
    Key basis = (kind == WeightKind::x_power) ? Key{i, 0} : Key{0, i};
    g[basis] = 1;

    // Apply t d/dt + x^2 t.
    std::map<Key, mpq_class> w;
    for (auto& [k, coef] : g) {
        if (k.second != 0) w[k] += coef * k.second;
        w[{k.first + 2, k.second + 1}] += coef;
    }
    // Reduce: x^c t^e = -((c-1)/2) x^(c-2) t^(e-1) for c >= 2, e >= 1;
    // x t^e = 0 for e >= 1.
    bool moved = true;
    while (moved) {
        moved = false;
        for (auto it = w.begin(); it != w.end();) {
            auto [c, e] = it->first;
            mpq_class coef = it->second;
            if (coef == 0) {
                it = w.erase(it);
                continue;
            }
            if (e >= 1 && c >= 2) {
                it = w.erase(it);
                w[{c - 2, e - 1}] += coef * mpq_class(-(c - 1), 2);
                moved = true;
                it = w.begin();
            } else if (e >= 1 && c == 1) {
                it = w.erase(it);
                moved = true;
            } else {
                ++it;
            }
        }
    }
    mpq_class lam = 0;
    for (auto& [k, coef] : w) {
        if (coef == 0) continue;
        if (k != basis) throw std::logic_error("operator is not diagonal on this element");
        lam = coef;
    }
    lam.canonicalize();
    return lam;
}

}  // namespace dwork
