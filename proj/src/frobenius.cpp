#include "dwork/frobenius.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>

namespace dwork {

void PrecMatrix::recompute_certificate() {
    long best = -1;
    for (auto& x : a) {
        if (x.is_exact_zero()) continue;
        long w = x.window();
        if (best < 0 || w < best) best = w;
    }
    if (best >= 0) certificate = best;
}

PrecMatrix mat_mul(const PrecMatrix& A, const PrecMatrix& B) {
    assert(A.dim == B.dim && A.p == B.p);
    PrecMatrix C;
    C.p = A.p;
    C.dim = A.dim;
    C.M = std::min(A.M, B.M);
    C.a.assign(static_cast<size_t>(A.dim * A.dim), PadicScalar::zero(A.p));
    for (long i = 0; i < A.dim; ++i)
        for (long j = 0; j < A.dim; ++j) {
            PadicScalar s = PadicScalar::zero(A.p);
            for (long k = 0; k < A.dim; ++k) s += A.at(i, k) * B.at(k, j);
            C.at(i, j) = s;
        }
    C.certificate = std::min(A.certificate, B.certificate);
    C.recompute_certificate();
    return C;
}

PrecMatrix mat_add(const PrecMatrix& A, const PrecMatrix& B) {
    assert(A.dim == B.dim && A.p == B.p);
    PrecMatrix C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = A.a[i] + B.a[i];
    C.certificate = std::min(A.certificate, B.certificate);
    C.M = std::min(A.M, B.M);
    C.recompute_certificate();
    return C;
}

PrecMatrix mat_sub(const PrecMatrix& A, const PrecMatrix& B) {
    assert(A.dim == B.dim && A.p == B.p);
    PrecMatrix C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = A.a[i] - B.a[i];
    C.certificate = std::min(A.certificate, B.certificate);
    C.M = std::min(A.M, B.M);
    C.recompute_certificate();
    return C;
}

PrecMatrix mat_scale_p_power(const PrecMatrix& A, long k) {
    PrecMatrix C = A;
    for (auto& x : C.a)
        if (!x.is_exact_zero()) x = x.mul_p_power(k);
    C.certificate += k;
    return C;
}

long min_entry_valuation(const PrecMatrix& A, long fallback) {
    long best = -1;
    bool seen = false;
    for (auto& x : A.a) {
        if (x.is_exact_zero()) continue;
        long v = x.val();
        if (!seen || v < best) best = v;
        seen = true;
    }
    return seen ? best : fallback;
}

std::vector<PadicScalar> charpoly(const PrecMatrix& A) {
    long n = A.dim, p = A.p;
    PadicScalar one = PadicScalar::from_integer(1, p, 512);
    // Berkowitz, division-free; poly kept leading-coefficient first.
    std::vector<PadicScalar> pol{one};
    for (long i = 0; i < n; ++i) {
        // First column of the Toeplitz factor: 1, -a_ii, -(R C), -(R M C), ...
        std::vector<PadicScalar> q(static_cast<size_t>(i) + 2, PadicScalar::zero(p));
        q[0] = one;
        q[1] = -A.at(i, i);
        std::vector<PadicScalar> w(static_cast<size_t>(i));
        for (long r = 0; r < i; ++r) w[static_cast<size_t>(r)] = A.at(r, i);
        for (long j = 0; j < i; ++j) {
            PadicScalar dot = PadicScalar::zero(p);
            for (long r = 0; r < i; ++r) dot += A.at(i, r) * w[static_cast<size_t>(r)];
            q[static_cast<size_t>(j) + 2] = -dot;
            if (j + 1 < i) {
                std::vector<PadicScalar> nw(static_cast<size_t>(i), PadicScalar::zero(p));
                for (long r = 0; r < i; ++r)
                    for (long s = 0; s < i; ++s) nw[static_cast<size_t>(r)] += A.at(r, s) * w[static_cast<size_t>(s)];
                w = std::move(nw);
            }
        }
        std::vector<PadicScalar> np(pol.size() + 1, PadicScalar::zero(p));
        for (size_t s = 0; s < np.size(); ++s)
            for (size_t k = 0; k < pol.size(); ++k) {
                if (s < k || s - k >= q.size()) continue;
                np[s] += q[s - k] * pol[k];
            }
        pol = std::move(np);
    }
    std::reverse(pol.begin(), pol.end());  // ascending c_0..c_n
    return pol;
}

std::vector<mpq_class> newton_slopes(const std::vector<PadicScalar>& cp) {
    long n = static_cast<long>(cp.size()) - 1;
    struct Pt {
        long x, y;
    };
    std::vector<Pt> exact;
    std::vector<Pt> floors;
    for (long i = 0; i <= n; ++i) {
        const PadicScalar& c = cp[static_cast<size_t>(i)];
        if (c.is_exact_zero()) continue;
        if (c.has_unit())
            exact.push_back({i, c.val()});
        else
            floors.push_back({i, c.val()});
    }
    if (exact.empty() || exact.front().x != 0 || exact.back().x != n)
        throw precision_exhausted("newton polygon endpoints unresolved");

    auto cross = [](const Pt& a, const Pt& b, const Pt& c) {
        return static_cast<__int128>(b.x - a.x) * (c.y - a.y) -
               static_cast<__int128>(b.y - a.y) * (c.x - a.x);
    };
    std::vector<Pt> hull;
    for (auto& pt : exact) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), pt) <= 0)
            hull.pop_back();
        hull.push_back(pt);
    }
    // Every unresolved coefficient must provably lie on or above the hull.
    for (auto& fp : floors) {
        for (size_t s = 0; s + 1 < hull.size(); ++s) {
            const Pt &a = hull[s], &b = hull[s + 1];
            if (fp.x < a.x || fp.x > b.x) continue;
            // fp.y >= line(a,b) at fp.x  <=>  (fp.y-a.y)(b.x-a.x) >= (b.y-a.y)(fp.x-a.x)
            if (static_cast<__int128>(fp.y - a.y) * (b.x - a.x) <
                static_cast<__int128>(b.y - a.y) * (fp.x - a.x))
                throw precision_exhausted("newton polygon vertex unresolved within window");
        }
    }
    std::vector<mpq_class> out;
    for (size_t s = 0; s + 1 < hull.size(); ++s) {
        const Pt &a = hull[s], &b = hull[s + 1];
        mpq_class slope(a.y - b.y, b.x - a.x);
        slope.canonicalize();
        for (long m = 0; m < b.x - a.x; ++m) out.push_back(slope);
    }
    std::sort(out.begin(), out.end());
    return out;
}

PadicScalar ParamSpec::realize(long p, long N) const {
    switch (kind) {
        case none:
            return PadicScalar::zero(p);
        case rational:
            return PadicScalar::from_rational(q, p, N);
        case teichmuller:
            return PadicScalar::teichmuller(k, p, N);
    }
    throw std::logic_error("unreachable");
}

std::string ParamSpec::str() const {
    switch (kind) {
        case none:
            return "none";
        case rational:
            return q.get_str();
        case teichmuller:
            return "teich:" + std::to_string(k);
    }
    throw std::logic_error("unreachable");
}

namespace {

// Plain scalar constants (splitting coefficients, factorials, p powers) are
// shared between the value and the jet runs; lift embeds them.
PadicScalar lift(const PField&, const PadicScalar& c) { return c; }
JetScalar lift(const JetField&, const PadicScalar& c) { return JetScalar::constant(c); }

// A coefficient may enter the kernel product only when x -> x^p fixes it
// within its window.
void require_power_fixed(const PField& fld, const PadicScalar& c) {
    PadicScalar d = c.pow_ui(static_cast<unsigned long>(fld.p)) - c;
    if (!d.is_exact_zero() && !d.is_zero_to_window())
        throw coefficient_not_teichmueller(
            "coefficient is not fixed by x -> x^p within its window");
}

// Jet version: the value part carries the fixedness constraint.  A nonzero
// slope additionally needs a unit value: only then does the p-th power of
// the jet reproduce the base power map's velocity (c^(p-1) = 1 = l^(p-1)),
// so a coefficient vanishing at the point with nonzero slope is refused
// rather than silently given the wrong twist.
void require_power_fixed(const JetField& fld, const JetScalar& c) {
    PadicScalar d = c.re.pow_ui(static_cast<unsigned long>(fld.p)) - c.re;
    if (!d.is_exact_zero() && !d.is_zero_to_window())
        throw coefficient_not_teichmueller(
            "coefficient is not fixed by x -> x^p within its window");
    if (!(c.du.is_exact_zero() || c.du.is_zero_to_window()) &&
        !(c.re.has_unit() && c.re.val() == 0))
        throw std::invalid_argument(
            "parameter-dependent coefficient must be a unit at the evaluation point");
}

/*
 * The kernel product over the terms c_j x^(I_j) of f: prod_j A(c_j t x^(I_j))
 * collected by t-degree.  The t^m coefficient is pi^(m mod (p-1)) times a
 * plain polynomial; only the plain part is stored, and slot wrap-around
 * absorbs a factor pi^(p-1) = -p.
 */
template <class F>
struct GSeries {
    long p = 0, M = 0;
    std::vector<MPoly<typename F::T>> g;
};

template <class F>
GSeries<F> build_gseries(const F& fld, const MPoly<typename F::T>& f, const SplittingSeries& S,
                         long M) {
    using Coef = typename F::T;
    long p = fld.p;
    long pm1 = p - 1;
    std::vector<PadicScalar> hatA;
    hatA.reserve(static_cast<size_t>(M) + 1);
    for (long nn = 0; nn <= M; ++nn) hatA.push_back(S.collapsed(nn).second);

    GSeries<F> G;
    G.p = p;
    G.M = M;
    G.g.assign(static_cast<size_t>(M) + 1, MPoly<Coef>{});
    for (auto& gp : G.g) gp.nv = f.nv;
    G.g[0].t.emplace(Mono{}, fld.one());

    PadicScalar minus_p = PadicScalar::from_integer(-p, p, 512);

    for (auto& [J, c] : f.t) {
        require_power_fixed(fld, c);

        std::vector<Coef> cpow(static_cast<size_t>(M) + 1, fld.zero());
        cpow[0] = fld.one();
        for (long nn = 1; nn <= M; ++nn)
            cpow[static_cast<size_t>(nn)] = fld.mul(cpow[static_cast<size_t>(nn - 1)], c);

        std::vector<MPoly<Coef>> ng(static_cast<size_t>(M) + 1);
        for (auto& gp : ng) gp.nv = f.nv;
        for (long m1 = 0; m1 <= M; ++m1) {
            const auto& src = G.g[static_cast<size_t>(m1)];
            if (src.t.empty()) continue;
            for (long nn = 0; nn + m1 <= M; ++nn) {
                Coef fac = fld.mul(lift(fld, hatA[static_cast<size_t>(nn)]),
                                   cpow[static_cast<size_t>(nn)]);
                if (fld.is_zero(fac)) continue;
                if ((m1 % pm1) + (nn % pm1) >= pm1)
                    fac = fld.mul(fac, lift(fld, minus_p));  // slot wrap
                Mono shift = J.pow(static_cast<int>(nn));
                auto& dst = ng[static_cast<size_t>(m1 + nn)];
                for (auto& [mm, cc] : src.t) add_term(fld, dst, mm * shift, fld.mul(cc, fac));
            }
        }
        G.g = std::move(ng);
    }
    return G;
}

template <class F>
std::vector<typename F::T> frobenius_column(const F& fld, const MPoly<typename F::T>& f,
                                            const GSeries<F>& G, const BasisElem& e, long N_rel) {
    using Coef = typename F::T;
    long p = fld.p;
    int nv = f.nv;
    long k = e.pole - 1;
    long pm1 = p - 1;

    Mono prefix = e.mono.pow(static_cast<int>(p));
    for (int i = 0; i < nv; ++i)
        prefix.e[static_cast<size_t>(i)] = static_cast<uint16_t>(prefix.e[static_cast<size_t>(i)] + p - 1);

    PadicScalar kfact_inv = PadicScalar::factorial(static_cast<unsigned long>(k), p, N_rel).inv();

    std::map<long, MPoly<Coef>> nums;
    for (long m = 0; m <= G.M; ++m) {
        const auto& gm = G.g[static_cast<size_t>(m)];
        if (gm.t.empty()) continue;
        long T = p * k + p - 1 + m;
        long e_pow = m / pm1 + 1 + k;  // (-p)^(-e_pow) from collapsing pi powers
        PadicScalar c = PadicScalar::factorial(static_cast<unsigned long>(T), p, N_rel) * kfact_inv;
        long sign = (((T - k) % 2) ? -1 : 1) * ((e_pow % 2) ? -1 : 1);
        // Measure factor p^(nv+1): one p per coordinate plus one for the
        // t-line (dt -> p t^(p-1) dt).
        c = c.mul_p_power(nv + 1 - e_pow).mul_small(sign);
        Coef cl = lift(fld, c);

        auto& dst = nums[T + 1];
        dst.nv = nv;
        for (auto& [mm, cc] : gm.t) add_term(fld, dst, mm * prefix, fld.mul(cc, cl));
    }

    GDEngine<F> eng(fld, f);
    return eng.reduce(std::move(nums));
}

// Full matrix over an arbitrary coefficient field, row-major on the probe
// basis; columns are independent and fan out across threads.
template <class F>
struct GridOutcome {
    long dim = 0;
    std::vector<typename F::T> a;
    std::vector<BasisElem> basis;
};

template <class F>
GridOutcome<F> frobenius_grid(const F& fld, const MPoly<typename F::T>& fp, long M, int threads) {
    using Coef = typename F::T;
    long N_rel = fld.N;

    GDEngine<F> probe(fld, fp);
    std::vector<BasisElem> basis = probe.basis();
    long dim = static_cast<long>(basis.size());

    SplittingSeries S = splitting_coeffs(fld.p, N_rel, M);
    GSeries<F> G = build_gseries(fld, fp, S, M);

    std::vector<std::vector<Coef>> cols(static_cast<size_t>(dim));
    int nt = static_cast<int>(std::max<long>(1, std::min<long>(threads, dim)));
    if (nt == 1) {
        for (long b = 0; b < dim; ++b)
            cols[static_cast<size_t>(b)] =
                frobenius_column(fld, fp, G, basis[static_cast<size_t>(b)], N_rel);
    } else {
        std::vector<std::exception_ptr> errs(static_cast<size_t>(nt));
        std::vector<std::thread> pool;
        for (int w = 0; w < nt; ++w)
            pool.emplace_back([&, w]() {
                try {
                    for (long b = w; b < dim; b += nt)
                        cols[static_cast<size_t>(b)] =
                            frobenius_column(fld, fp, G, basis[static_cast<size_t>(b)], N_rel);
                } catch (...) {
                    errs[static_cast<size_t>(w)] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& ep : errs)
            if (ep) std::rethrow_exception(ep);
    }

    GridOutcome<F> out;
    out.dim = dim;
    out.basis = std::move(basis);
    out.a.assign(static_cast<size_t>(dim * dim), fld.zero());
    for (long b = 0; b < dim; ++b)
        for (long a = 0; a < dim; ++a)
            out.a[static_cast<size_t>(a * dim + b)] = cols[static_cast<size_t>(b)][static_cast<size_t>(a)];
    return out;
}

struct RunOutcome {
    PrecMatrix raw;
    std::vector<BasisElem> basis;
};

RunOutcome frobenius_run(const MPoly<PadicScalar>& fp, long p, long N_rel, long M, int threads) {
    PField fld{p, N_rel};
    GridOutcome<PField> g = frobenius_grid(fld, fp, M, threads);

    RunOutcome out;
    out.basis = std::move(g.basis);
    out.raw.p = p;
    out.raw.dim = g.dim;
    out.raw.M = M;
    out.raw.a = std::move(g.a);
    out.raw.certificate = N_rel;
    out.raw.recompute_certificate();
    return out;
}

}  // namespace

FrobeniusResult frobenius_matrix(const HomoPoly& f, const ParamSpec& lam, long p, long N, long M,
                                 int threads) {
    if (M < 0) M = static_cast<long>(std::ceil(static_cast<double>(p) * p / (p - 1) * (N + 4)));
    int nv = f.poly.nv;
    long T_max = p * (nv - 2) + p - 1 + M;
    long target_raw = (nv == 3) ? N + 2 : N;
    long N_rel = N + factorial_valuation(static_cast<unsigned long>(T_max), p) + 6;

    for (int attempt = 0;; ++attempt) {
        PadicScalar lv = lam.realize(p, N_rel);
        MPoly<PadicScalar> fp = evaluate_param(f, lv, N_rel);
        check_smooth_mod_p(to_fp(fp), p);

        RunOutcome run = frobenius_run(fp, p, N_rel, M, threads);
        if (run.raw.certificate >= target_raw) {
            FrobeniusResult res;
            res.raw = std::move(run.raw);
            res.basis = std::move(run.basis);
            res.M_used = M;
            res.N_rel = N_rel;
            // Publish exactly the requested depth: digits beyond it are
            // carried but not covered by the truncation margin.
            for (auto& x : res.raw.a)
                if (!x.is_exact_zero()) x = x.truncate_window(target_raw);
            res.raw.certificate = target_raw;
            if (nv == 3) {
                res.normalized = mat_scale_p_power(res.raw, -2);
                res.normalized.normalized = true;
                res.normalized.recompute_certificate();
            } else {
                res.normalized = res.raw;
            }
            return res;
        }
        if (attempt >= 3)
            throw truncation_insufficient("matrix certificate stuck below target precision");
        N_rel += (target_raw - run.raw.certificate) + 4;
    }
}

StabilityReport verify_truncation_stability(const HomoPoly& f, const ParamSpec& lam, long p,
                                            long N, long M, int threads) {
    StabilityReport rep;
    rep.base = frobenius_matrix(f, lam, p, N, M, threads);
    rep.bumped = frobenius_matrix(f, lam, p, N, rep.base.M_used + 5, threads);
    rep.agree_window = std::min(rep.base.raw.certificate, rep.bumped.raw.certificate);
    rep.stable = true;
    for (size_t i = 0; i < rep.base.raw.a.size(); ++i) {
        const PadicScalar &x = rep.base.raw.a[i], &y = rep.bumped.raw.a[i];
        if (x.is_exact_zero() && y.is_exact_zero()) continue;
        if (x.is_exact_zero() || y.is_exact_zero()) {
            const PadicScalar& z = x.is_exact_zero() ? y : x;
            if (z.val() < rep.agree_window) rep.stable = false;
            continue;
        }
        if (!x.agrees_to(y, rep.agree_window)) rep.stable = false;
    }
    return rep;
}

template <class F>
std::vector<typename F::T> gm_theta_matrix(GDEngine<F>& eng, const MPoly<typename F::T>& df_dlambda,
                                           const typename F::T& lambda) {
    using T = typename F::T;
    const F& fld = eng.field();
    const auto& B = eng.basis();
    long dim = static_cast<long>(B.size());
    std::vector<T> out(static_cast<size_t>(dim * dim), fld.zero());
    for (long b = 0; b < dim; ++b) {
        const BasisElem& e = B[static_cast<size_t>(b)];
        T c = fld.mul(lambda, fld.from_long(-e.pole));
        std::map<long, MPoly<T>> nums;
        if (!fld.is_zero(c) && !df_dlambda.t.empty())
            nums[e.pole + 1] = poly_mul_mono(fld, df_dlambda, e.mono, c);
        auto coords = eng.reduce(std::move(nums));
        for (long a = 0; a < dim; ++a)
            out[static_cast<size_t>(a * dim + b)] = coords[static_cast<size_t>(a)];
    }
    return out;
}

template std::vector<Rat> gm_theta_matrix<QField>(GDEngine<QField>&, const MPoly<Rat>&,
                                                  const Rat&);
template std::vector<RatFunc> gm_theta_matrix<QLField>(GDEngine<QLField>&, const MPoly<RatFunc>&,
                                                       const RatFunc&);
template std::vector<PadicScalar> gm_theta_matrix<PField>(GDEngine<PField>&,
                                                          const MPoly<PadicScalar>&,
                                                          const PadicScalar&);

namespace {

// Exact dense solve A c = rhs over the rational function field; A is dim x m
// column-major-free (row major), returns nullopt when inconsistent.
std::optional<std::vector<RatFunc>> solve_exact(std::vector<std::vector<RatFunc>> A,
                                                std::vector<RatFunc> rhs, long dim, long m) {
    QLField fld;
    std::vector<long> pivot_col_of_row(static_cast<size_t>(dim), -1);
    long row = 0;
    for (long col = 0; col < m && row < dim; ++col) {
        long pr = -1;
        for (long r = row; r < dim; ++r)
            if (!fld.is_zero(A[static_cast<size_t>(r)][static_cast<size_t>(col)])) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        std::swap(A[static_cast<size_t>(pr)], A[static_cast<size_t>(row)]);
        std::swap(rhs[static_cast<size_t>(pr)], rhs[static_cast<size_t>(row)]);
        RatFunc inv = fld.one() / A[static_cast<size_t>(row)][static_cast<size_t>(col)];
        for (long c2 = col; c2 < m; ++c2)
            A[static_cast<size_t>(row)][static_cast<size_t>(c2)] =
                A[static_cast<size_t>(row)][static_cast<size_t>(c2)] * inv;
        rhs[static_cast<size_t>(row)] = rhs[static_cast<size_t>(row)] * inv;
        for (long r = 0; r < dim; ++r) {
            if (r == row) continue;
            RatFunc f = A[static_cast<size_t>(r)][static_cast<size_t>(col)];
            if (fld.is_zero(f)) continue;
            for (long c2 = col; c2 < m; ++c2)
                A[static_cast<size_t>(r)][static_cast<size_t>(c2)] =
                    A[static_cast<size_t>(r)][static_cast<size_t>(c2)] - f * A[static_cast<size_t>(row)][static_cast<size_t>(c2)];
            rhs[static_cast<size_t>(r)] = rhs[static_cast<size_t>(r)] - f * rhs[static_cast<size_t>(row)];
        }
        pivot_col_of_row[static_cast<size_t>(row)] = col;
        ++row;
    }
    for (long r = row; r < dim; ++r)
        if (!fld.is_zero(rhs[static_cast<size_t>(r)])) return std::nullopt;
    std::vector<RatFunc> c(static_cast<size_t>(m), fld.zero());
    for (long r = 0; r < row; ++r) c[static_cast<size_t>(pivot_col_of_row[static_cast<size_t>(r)])] = rhs[static_cast<size_t>(r)];
    return c;
}

}  // namespace

PFOperator picard_fuchs(const HomoPoly& family, long max_order) {
    QLField fld;
    MPoly<RatFunc> f = symbolic_param(family);
    GDEngine<QLField> eng(fld, f);
    MPoly<RatFunc> dfdl = symbolic_param(param_partial(family));
    RatFunc lam = RatFunc::var();
    auto Th = gm_theta_matrix(eng, dfdl, lam);
    long dim = eng.basis_size();

    std::vector<std::vector<RatFunc>> v;
    v.emplace_back(static_cast<size_t>(dim), fld.zero());
    v[0][0] = fld.one();

    for (long r = 1; r <= max_order; ++r) {
        const auto& prev = v.back();
        std::vector<RatFunc> nx(static_cast<size_t>(dim));
        for (long a = 0; a < dim; ++a) {
            RatFunc s = prev[static_cast<size_t>(a)].theta();
            for (long b = 0; b < dim; ++b)
                s = s + Th[static_cast<size_t>(a * dim + b)] * prev[static_cast<size_t>(b)];
            nx[static_cast<size_t>(a)] = s;
        }
        v.push_back(std::move(nx));

        std::vector<std::vector<RatFunc>> A(static_cast<size_t>(dim),
                                            std::vector<RatFunc>(static_cast<size_t>(r)));
        std::vector<RatFunc> rhs(static_cast<size_t>(dim));
        for (long a = 0; a < dim; ++a) {
            for (long i = 0; i < r; ++i)
                A[static_cast<size_t>(a)][static_cast<size_t>(i)] = v[static_cast<size_t>(i)][static_cast<size_t>(a)];
            rhs[static_cast<size_t>(a)] = -v[static_cast<size_t>(r)][static_cast<size_t>(a)];
        }
        auto sol = solve_exact(std::move(A), std::move(rhs), dim, r);
        if (!sol) continue;

        // Clear rational-function denominators by their (monic) lcm.
        std::vector<RatFunc> cs = *sol;
        cs.push_back(fld.one());
        ParamPoly L(Rat(1));
        for (auto& cf : cs) {
            if (cf.is_zero()) continue;
            ParamPoly g = poly_gcd(L, cf.den);
            L = poly_divmod(L * cf.den, g).first;
        }
        std::vector<ParamPoly> poly_c;
        poly_c.reserve(cs.size());
        for (auto& cf : cs) {
            auto [qt, rm] = poly_divmod(L, cf.den);
            if (!rm.is_zero()) throw std::logic_error("denominator lcm failed");
            poly_c.push_back(cf.num * qt);
        }
        // Integer-normalize: clear denominators, divide by content, fix sign.
        mpz_class den_lcm = 1, num_gcd = 0;
        for (auto& pc : poly_c)
            for (auto& q : pc.c) {
                if (q == 0) continue;
                mpz_class d = q.get_den();
                mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), d.get_mpz_t());
            }
        for (auto& pc : poly_c)
            for (auto& q : pc.c) {
                q *= den_lcm;
                if (q == 0) continue;
                mpz_class nmr = q.get_num();
                mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), nmr.get_mpz_t());
            }
        if (num_gcd != 0)
            for (auto& pc : poly_c)
                for (auto& q : pc.c) q /= num_gcd;
        if (!poly_c.back().is_zero() && poly_c.back().lead() < 0)
            for (auto& pc : poly_c)
                for (auto& q : pc.c) q = -q;
        for (auto& pc : poly_c) pc.trim();

        PFOperator L_out;
        L_out.order = r;
        L_out.c = std::move(poly_c);
        return L_out;
    }
    throw std::runtime_error("no differential relation found up to the requested order");
}

std::string PFOperator::str() const {
    std::string s;
    for (long i = order; i >= 0; --i) {
        const ParamPoly& pc = c[static_cast<size_t>(i)];
        if (pc.is_zero()) continue;
        if (!s.empty()) s += " + ";
        s += "(" + pc.str("l") + ")";
        if (i == 1)
            s += "*th";
        else if (i > 1)
            s += "*th^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

std::vector<mpq_class> pf_apply_to_series(const PFOperator& L, const std::vector<mpz_class>& a) {
    long C = static_cast<long>(a.size()) - 1;
    std::vector<mpq_class> res(static_cast<size_t>(C) + 1, mpq_class(0));
    for (long i = 0; i <= L.order; ++i) {
        const ParamPoly& pc = L.c[static_cast<size_t>(i)];
        for (long u = 0; u <= pc.degree(); ++u) {
            if (u >= static_cast<long>(pc.c.size()) || pc.c[static_cast<size_t>(u)] == 0) continue;
            for (long s = u; s <= C; ++s) {
                long idx = s - u;
                mpz_class pw = 1;
                for (long rep = 0; rep < i; ++rep) pw *= idx;
                res[static_cast<size_t>(s)] += pc.c[static_cast<size_t>(u)] * pw * a[static_cast<size_t>(idx)];
            }
        }
    }
    return res;
}

CompatReport check_gm_frobenius_compat(const HomoPoly& family, const ParamSpec& lam, long p,
                                       long N, long M, int threads) {
    CompatReport rep;
    rep.p = p;
    rep.N = N;
    rep.frob = frobenius_matrix(family, lam, p, N, M, threads);
    long N_rel = rep.frob.N_rel;
    int nv = family.poly.nv;

    HomoPoly dfamily = param_partial(family);
    bool uses_param = !dfamily.poly.t.empty();

    PadicScalar lv = lam.realize(p, N_rel);
    if (uses_param) {
        if (lv.is_exact_zero() || lv.is_zero_to_window())
            throw std::invalid_argument("parameter must be a nonzero fixed point of x -> x^p");
        PadicScalar fix = lv.pow_ui(static_cast<unsigned long>(p - 1)) -
                          PadicScalar::from_integer(1, p, N_rel);
        if (!fix.is_exact_zero() && !fix.is_zero_to_window())
            throw std::invalid_argument("parameter is not a fixed point of x -> x^p");
    }

    PField fld{p, N_rel};
    MPoly<PadicScalar> fp = evaluate_param(family, lv, N_rel);
    GDEngine<PField> eng(fld, fp);
    const auto& B = eng.basis();
    if (B.size() != rep.frob.basis.size()) throw std::logic_error("basis mismatch");
    for (size_t i = 0; i < B.size(); ++i)
        if (!(B[i].pole == rep.frob.basis[i].pole && B[i].mono == rep.frob.basis[i].mono))
            throw std::logic_error("basis mismatch");

    MPoly<PadicScalar> dfdl = evaluate_param(dfamily, lv, N_rel);
    PrecMatrix Th;
    Th.p = p;
    Th.dim = static_cast<long>(B.size());
    Th.a = gm_theta_matrix(eng, dfdl, lv);
    Th.certificate = N_rel;
    Th.recompute_certificate();

    const PrecMatrix& F = rep.frob.normalized;

    // thF = lambda * dF/dlambda in the published normalization, from a rerun
    // of the whole construction on first-order jets lambda + eps.
    PrecMatrix dF;
    dF.p = p;
    dF.dim = F.dim;
    dF.M = rep.frob.M_used;
    dF.a.assign(F.a.size(), PadicScalar::zero(p));
    dF.certificate = F.certificate;
    if (uses_param) {
        JetField jfld{p, N_rel};
        MPoly<JetScalar> fj;
        fj.nv = nv;
        for (auto& [mono, pp] : family.poly.t) {
            JetScalar c{pp.eval(lv, N_rel), pp.derivative().eval(lv, N_rel)};
            if (!c.is_exact_zero()) fj.t.emplace(mono, c);
        }
        GridOutcome<JetField> jg = frobenius_grid(jfld, fj, rep.frob.M_used, threads);
        if (jg.dim != F.dim) throw std::logic_error("basis mismatch");
        long down = (nv == 3) ? -2 : 0;  // raw-to-normalized scaling
        for (size_t i = 0; i < jg.a.size(); ++i) {
            const JetScalar& z = jg.a[i];
            const PadicScalar& pub = rep.frob.raw.a[i];
            if (!(z.re.is_exact_zero() && pub.is_exact_zero()) &&
                !z.re.agrees_to(pub, rep.frob.raw.certificate))
                throw std::logic_error("jet value part diverged from the published matrix");
            if (z.du.is_exact_zero()) continue;
            dF.a[i] = (lv * z.du).mul_p_power(down).truncate_window(F.certificate);
        }
        dF.recompute_certificate();
    }

    // Acting on a pulled-back section, theta o F - p F o theta leaves
    // thF + Theta F - p F Theta; at a fixed point both Theta arguments agree.
    auto residual = [&](const PrecMatrix& Fm) {
        return mat_add(dF, mat_sub(mat_mul(Th, Fm), mat_scale_p_power(mat_mul(Fm, Th), 1)));
    };
    PrecMatrix R = residual(F);
    rep.certificate = R.certificate;
    rep.residual_val = min_entry_valuation(R, R.certificate);
    rep.pass = rep.residual_val >= rep.certificate;

    PrecMatrix Fc = F;
    Fc.at(0, 0) += PadicScalar::from_integer(p, p, N_rel);
    PrecMatrix Rc = residual(Fc);
    rep.control_val = min_entry_valuation(Rc, Rc.certificate);
    rep.control_detects = rep.control_val < N;
    return rep;
}

}  // namespace dwork
