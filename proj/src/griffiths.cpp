#include "dwork/griffiths.hpp"

#include <algorithm>
#include <cassert>

namespace dwork {

long smooth_quotient_dim(int nv, long d, long D) {
    if (D < 0 || D > static_cast<long>(nv) * (d - 2)) return 0;
    // Coefficients of (1 + t + ... + t^(d-2))^nv by iterated convolution.
    std::vector<long> h = {1};
    for (int i = 0; i < nv; ++i) {
        std::vector<long> nh(h.size() + static_cast<size_t>(d) - 2, 0);
        for (size_t a = 0; a < h.size(); ++a)
            for (long b = 0; b <= d - 2; ++b) nh[a + static_cast<size_t>(b)] += h[a];
        h = std::move(nh);
    }
    return D < static_cast<long>(h.size()) ? h[static_cast<size_t>(D)] : 0;
}

namespace {

template <class T>
const Mono* grlex_max_mono(const MPoly<T>& g) {
    const Mono* best = nullptr;
    for (auto& [m, c] : g.t)
        if (!best || grlex_less(*best, m)) best = &m;
    return best;
}

long count_monomials(int nv, long D) {
    // C(D + nv - 1, nv - 1)
    long r = 1;
    for (long i = 1; i < nv; ++i) r = r * (D + i) / i;
    return r;
}

}  // namespace

template <class F>
GDEngine<F>::GDEngine(F fld, MPoly<T> f) : fld_(std::move(fld)), f_(std::move(f)) {
    if (f_.t.empty()) throw std::invalid_argument("engine needs a nonzero polynomial");
    if (!f_.homogeneous()) throw std::invalid_argument("engine needs a homogeneous polynomial");
    d_ = f_.degree();
    if (d_ < 2) throw std::invalid_argument("degree must be at least 2");
    if (f_.nv < 2 || f_.nv > kMaxVars) throw std::invalid_argument("variable count out of range");
    socle_ = static_cast<long>(f_.nv) * (d_ - 2);
    for (int j = 0; j < f_.nv; ++j) df_.push_back(poly_partial(fld_, f_, j));
}

/*
 * Insert a generator into the reduced echelon.  Stored rows keep only their
 * tail (pivot coefficient is exactly 1 and is implicit), and tails never
 * contain pivot monomials, so one subtraction pass per insert suffices and
 * exact cancellation at pivot positions is structural rather than numeric.
 */
template <class F>
void GDEngine<F>::insert_row(Echelon& E, MPoly<T> g, std::vector<MPoly<T>> cof, bool with_cof) {
    // Subtract every pivot hit.  Tails contain no pivot monomials, so the
    // set of pivot hits in g is fixed up front.
    std::vector<std::pair<Mono, T>> hits;
    for (auto& [m, c] : g.t)
        if (E.by_pivot.count(m)) hits.emplace_back(m, c);
    for (auto& [m, c] : hits) {
        const Row& r = E.rows[E.by_pivot.at(m)];
        g.t.erase(m);
        poly_axpy(fld_, g, fld_.neg(c), r.poly);
        if (with_cof)
            for (int j = 0; j < f_.nv; ++j)
                poly_axpy(fld_, cof[static_cast<size_t>(j)], fld_.neg(c),
                          r.cof[static_cast<size_t>(j)]);
    }
    if (g.t.empty()) return;

    // Pivot: grlex-largest admissible coefficient.
    const Mono* pv = nullptr;
    for (auto& [m, c] : g.t)
        if (fld_.pivot_ok(c) && (!pv || grlex_less(*pv, m))) pv = &m;
    if (!pv) {
        // Nothing invertible left (p-adic precision residue).  The rank
        // checks against the smooth dimensions catch any real shortfall.
        ++E.dropped;
        return;
    }
    Mono pivot = *pv;
    T lead = g.t.at(pivot);
    g.t.erase(pivot);
    Row row;
    row.pivot = pivot;
    row.poly.nv = f_.nv;
    for (auto& [m, c] : g.t) {
        T q = fld_.div(c, lead);
        if (!fld_.is_zero(q)) row.poly.t.emplace(m, q);
    }
    if (with_cof) {
        row.cof.assign(static_cast<size_t>(f_.nv), MPoly<T>{});
        for (int j = 0; j < f_.nv; ++j) {
            row.cof[static_cast<size_t>(j)].nv = f_.nv;
            for (auto& [m, c] : cof[static_cast<size_t>(j)].t) {
                T q = fld_.div(c, lead);
                if (!fld_.is_zero(q)) row.cof[static_cast<size_t>(j)].t.emplace(m, q);
            }
        }
    }

    // Keep the echelon fully reduced: strip the new pivot from older tails.
    for (auto& r : E.rows) {
        auto it = r.poly.t.find(pivot);
        if (it == r.poly.t.end()) continue;
        T c = it->second;
        r.poly.t.erase(it);
        poly_axpy(fld_, r.poly, fld_.neg(c), row.poly);
        if (with_cof)
            for (int j = 0; j < f_.nv; ++j)
                poly_axpy(fld_, r.cof[static_cast<size_t>(j)], fld_.neg(c),
                          row.cof[static_cast<size_t>(j)]);
    }

    E.by_pivot.emplace(pivot, E.rows.size());
    E.rows.push_back(std::move(row));
}

template <class F>
void GDEngine<F>::build_echelon(Echelon& E, long D, bool with_cof) {
    E = Echelon{};
    E.with_cof = with_cof;
    long mult_deg = D - (d_ - 1);
    if (mult_deg >= 0) {
        auto mults = monomials_of_degree(f_.nv, mult_deg);
        for (int j = 0; j < f_.nv; ++j) {
            for (const Mono& b : mults) {
                MPoly<T> g = poly_mul_mono(fld_, df_[static_cast<size_t>(j)], b, fld_.one());
                std::vector<MPoly<T>> cof;
                if (with_cof) {
                    cof.assign(static_cast<size_t>(f_.nv), MPoly<T>{});
                    for (int i = 0; i < f_.nv; ++i) cof[static_cast<size_t>(i)].nv = f_.nv;
                    cof[static_cast<size_t>(j)].t.emplace(b, fld_.one());
                }
                insert_row(E, std::move(g), std::move(cof), with_cof);
            }
        }
    }

    long expect = smooth_quotient_dim(f_.nv, d_, D);
    long total = count_monomials(f_.nv, D);
    long got = total - static_cast<long>(E.rows.size());
    if (got != expect)
        throw bad_reduction("Jacobian ideal rank deficit in degree " + std::to_string(D) +
                            ": quotient dimension " + std::to_string(got) + ", smooth value " +
                            std::to_string(expect) +
                            (E.dropped ? " (precision-dropped rows present)" : ""));

    auto all = monomials_of_degree(f_.nv, D);
    for (auto it = all.rbegin(); it != all.rend(); ++it)
        if (!E.by_pivot.count(*it)) E.basis.push_back(*it);
}

template <class F>
typename GDEngine<F>::Echelon& GDEngine<F>::echelon(long D, bool need_cof) {
    auto it = cache_.find(D);
    if (it != cache_.end() && (it->second.with_cof || !need_cof)) return it->second;
    Echelon& E = cache_[D];
    build_echelon(E, D, need_cof);
    return E;
}

template <class F>
void GDEngine<F>::ensure_power_identities() {
    if (powid_ready_) return;
    long D = socle_ + 1;
    Echelon& E = echelon(D, true);
    powid_.assign(static_cast<size_t>(f_.nv), {});
    for (int j = 0; j < f_.nv; ++j) {
        MPoly<T> g;
        g.nv = f_.nv;
        g.t.emplace(Mono::unit(j).pow(static_cast<int>(D)), fld_.one());
        std::vector<MPoly<T>> h;
        MPoly<T> rem;
        // Direct decomposition against the echelon (degree D kills every
        // monomial, so rem must vanish identically).
        h.assign(static_cast<size_t>(f_.nv), MPoly<T>{});
        for (auto& hh : h) hh.nv = f_.nv;
        rem = std::move(g);
        std::vector<std::pair<Mono, T>> hits;
        for (auto& [m, c] : rem.t)
            if (E.by_pivot.count(m)) hits.emplace_back(m, c);
        for (auto& [m, c] : hits) {
            const Row& r = E.rows[E.by_pivot.at(m)];
            rem.t.erase(m);
            poly_axpy(fld_, rem, fld_.neg(c), r.poly);
            for (int i = 0; i < f_.nv; ++i)
                poly_axpy(fld_, h[static_cast<size_t>(i)], c, r.cof[static_cast<size_t>(i)]);
        }
        if (!rem.t.empty())
            throw bad_reduction("power identity for variable " + std::to_string(j) +
                                " did not close");
        powid_[static_cast<size_t>(j)] = std::move(h);
    }
    powid_ready_ = true;
}

template <class F>
void GDEngine<F>::peel_decompose(const MPoly<T>& A, std::vector<MPoly<T>>& h) {
    ensure_power_identities();
    long s1 = socle_ + 1;
    for (auto& [m, c] : A.t) {
        int j = 0;
        for (int i = 1; i < f_.nv; ++i)
            if (m.e[static_cast<size_t>(i)] > m.e[static_cast<size_t>(j)]) j = i;
        assert(m.e[static_cast<size_t>(j)] >= s1);
        Mono rest = m / Mono::unit(j).pow(static_cast<int>(s1));
        for (int i = 0; i < f_.nv; ++i)
            for (auto& [pm, pc] : powid_[static_cast<size_t>(j)][static_cast<size_t>(i)].t)
                add_term(fld_, h[static_cast<size_t>(i)], rest * pm, fld_.mul(c, pc));
    }
}

template <class F>
void GDEngine<F>::decompose(long D, const MPoly<T>& A, std::vector<MPoly<T>>& h, MPoly<T>& rem,
                            bool need_cofactors) {
    h.assign(static_cast<size_t>(f_.nv), MPoly<T>{});
    for (auto& hh : h) hh.nv = f_.nv;
    rem = MPoly<T>{};
    rem.nv = f_.nv;
    if (A.t.empty()) return;
    if (A.degree() != D || !A.homogeneous())
        throw std::logic_error("decompose: numerator degree mismatch");

    if (D >= peel_threshold()) {
        peel_decompose(A, h);
        return;  // rem identically zero: the quotient vanishes above the socle
    }

    Echelon& E = echelon(D, need_cofactors);
    rem = A;
    std::vector<std::pair<Mono, T>> hits;
    for (auto& [m, c] : rem.t)
        if (E.by_pivot.count(m)) hits.emplace_back(m, c);
    for (auto& [m, c] : hits) {
        const Row& r = E.rows[E.by_pivot.at(m)];
        rem.t.erase(m);
        poly_axpy(fld_, rem, fld_.neg(c), r.poly);
        if (need_cofactors)
            for (int i = 0; i < f_.nv; ++i)
                poly_axpy(fld_, h[static_cast<size_t>(i)], c, r.cof[static_cast<size_t>(i)]);
    }
}

template <class F>
const std::vector<BasisElem>& GDEngine<F>::basis() {
    if (basis_ready_) return basis_;
    // Full smoothness gate: in the basis degrees a mildly singular member can
    // still show the smooth dimensions; the quotient vanishing just above the
    // socle is equivalent to the singular locus being empty, so probe it.
    echelon(socle_ + 1, false);
    for (long k = 1; k <= max_pole(); ++k) {
        long D = k * d_ - f_.nv;
        Echelon& E = echelon(D, false);
        basis_offset_[k] = static_cast<long>(basis_.size());
        for (const Mono& m : E.basis) basis_.push_back(BasisElem{k, m});
    }
    basis_ready_ = true;
    return basis_;
}

template <class F>
long GDEngine<F>::basis_index(long pole, const Mono& m) {
    basis();
    long D = pole * d_ - f_.nv;
    const Echelon& E = cache_.at(D);
    for (size_t i = 0; i < E.basis.size(); ++i)
        if (E.basis[i] == m) return basis_offset_.at(pole) + static_cast<long>(i);
    throw std::logic_error("monomial is not a basis element");
}

template <class F>
std::vector<std::pair<long, long>> GDEngine<F>::quotient_dims() {
    echelon(socle_ + 1, false);  // singular members surface here, not below
    std::vector<std::pair<long, long>> out;
    for (long k = 1; k <= max_pole(); ++k) {
        long D = k * d_ - f_.nv;
        Echelon& E = echelon(D, false);
        out.emplace_back(k, static_cast<long>(E.basis.size()));
    }
    return out;
}

template <class F>
std::vector<typename F::T> GDEngine<F>::reduce(std::map<long, MPoly<T>> numerators) {
    basis();
    std::vector<T> coords(basis_.size(), fld_.zero());
    if (numerators.empty()) return coords;
    long kmax = numerators.rbegin()->first;
    for (long P = kmax; P >= 1; --P) {
        auto it = numerators.find(P);
        if (it == numerators.end() || it->second.t.empty()) continue;
        MPoly<T> A = std::move(it->second);
        long D = P * d_ - f_.nv;
        std::vector<MPoly<T>> h;
        MPoly<T> rem;
        decompose(D, A, h, rem);
        if (!rem.t.empty()) {
            if (P > max_pole())
                throw std::logic_error("nonzero remainder above the basis pole range");
            for (auto& [m, c] : rem.t) {
                if (fld_.is_zero(c)) continue;
                coords[static_cast<size_t>(basis_index(P, m))] = fld_.add(
                    coords[static_cast<size_t>(basis_index(P, m))], c);
            }
        }
        if (P > 1) {
            bool any = false;
            MPoly<T> corr;
            corr.nv = f_.nv;
            for (int i = 0; i < f_.nv; ++i) {
                if (h[static_cast<size_t>(i)].t.empty()) continue;
                any = true;
                MPoly<T> dh = poly_partial(fld_, h[static_cast<size_t>(i)], i);
                poly_axpy(fld_, corr, fld_.one(), dh);
            }
            if (any && !corr.t.empty()) {
                T scale = fld_.div(fld_.one(), fld_.from_long(P - 1));
                auto& tgt = numerators[P - 1];
                tgt.nv = f_.nv;
                poly_axpy(fld_, tgt, scale, corr);
            }
        } else {
            for (auto& hh : h)
                if (!hh.t.empty())
                    throw std::logic_error("pole-1 numerator meets the Jacobian ideal");
        }
    }
    return coords;
}

void check_smooth_mod_p(const MPoly<long>& f, long p) {
    GDEngine<FpField> eng(FpField{p}, f);
    eng.quotient_dims();
}

template class GDEngine<QField>;
template class GDEngine<QLField>;
template class GDEngine<PField>;
template class GDEngine<FpField>;
template class GDEngine<JetField>;

}  // namespace dwork
