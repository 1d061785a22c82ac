#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dwork/polyalg.hpp"

namespace dwork {

/*
 * Raised when the Jacobian-ideal rank in some degree falls short of the
 * smooth-hypersurface value: the input is singular (over Q) or has bad
 * reduction (over Z_p).  Callers must not continue past this.
 */
class bad_reduction : public std::runtime_error {
public:
    explicit bad_reduction(const std::string& m) : std::runtime_error(m) {}
};

struct BasisElem {
    long pole;  // denominator exponent k, form = mono * Omega / f^k
    Mono mono;  // numerator monomial, degree k*d - nv
};

// Coefficient of t^D in ((1 - t^(d-1))/(1 - t))^nv: the dimension of the
// degree-D piece of the Jacobian ring of any smooth degree-d hypersurface.
long smooth_quotient_dim(int nv, long d, long D);

/*
 * Reduction engine for x^I Omega / f^k classes of a smooth hypersurface
 * f = 0 in P^(nv-1).  Maintains, per numerator degree, a reduced row echelon
 * of the Jacobian ideal with cofactor tracking, so any numerator splits as
 *
 *     A = sum_j h_j * df/dx_j + rem,     rem supported on non-pivot monomials,
 *
 * and A Omega/f^(k+1) is cohomologous to rem Omega/f^(k+1)
 * + (1/k) (sum_j dh_j/dx_j) Omega/f^k.  Degrees above nv*(d-2) skip the
 * echelon entirely: there every monomial contains some x_j^(socle+1), and a
 * precomputed identity x_j^(socle+1) = sum_i a_ji df/dx_i peels it off.
 *
 * Works over any of the field abstractions (Q, rational functions in the
 * family parameter, p-adic scalars, F_p); pivot admissibility comes from the
 * field, so the p-adic instance only ever divides by units.
 */
template <class F>
class GDEngine {
public:
    using T = typename F::T;

    GDEngine(F fld, MPoly<T> f);

    int nv() const { return f_.nv; }
    long deg() const { return d_; }
    long socle() const { return socle_; }
    const MPoly<T>& f() const { return f_; }
    const MPoly<T>& partial(int j) const { return df_[static_cast<size_t>(j)]; }
    const F& field() const { return fld_; }

    // Poles of the cohomology basis: 1 .. nv-1.
    long max_pole() const { return f_.nv - 1; }

    const std::vector<BasisElem>& basis();
    long basis_size() { return static_cast<long>(basis().size()); }
    long basis_index(long pole, const Mono& m);

    // Per-pole quotient dimensions, each checked against the smooth value.
    std::vector<std::pair<long, long>> quotient_dims();

    // A = sum_j h_j df_j + rem with rem reduced.  Requires A homogeneous of
    // degree D; h is resized to nv.
    void decompose(long D, const MPoly<T>& A, std::vector<MPoly<T>>& h, MPoly<T>& rem,
                   bool need_cofactors = true);

    // Reduce sum_k A_k Omega/f^k (map key = pole k) to basis coordinates.
    std::vector<T> reduce(std::map<long, MPoly<T>> numerators);

private:
    struct Row {
        Mono pivot;
        MPoly<T> poly;                // pivot coefficient 1, no other pivots
        std::vector<MPoly<T>> cof;    // poly = sum_j cof[j] * df[j]
    };
    struct Echelon {
        bool with_cof = false;
        std::vector<Row> rows;
        std::map<Mono, size_t> by_pivot;
        std::vector<Mono> basis;      // non-pivot monomials, grlex ascending
        long dropped = 0;             // rows lost to precision (p-adic only)
    };

    Echelon& echelon(long D, bool need_cof);
    void build_echelon(Echelon& E, long D, bool with_cof);
    void insert_row(Echelon& E, MPoly<T> g, std::vector<MPoly<T>> cof, bool with_cof);
    void peel_decompose(const MPoly<T>& A, std::vector<MPoly<T>>& h);
    void ensure_power_identities();

    // Degree above which every monomial peels: nv*socle + 1.
    long peel_threshold() const { return static_cast<long>(f_.nv) * socle_ + 1; }

    F fld_;
    MPoly<T> f_;
    long d_;
    long socle_;
    std::vector<MPoly<T>> df_;
    std::map<long, Echelon> cache_;
    std::vector<std::vector<MPoly<T>>> powid_;  // [j][i]: x_j^(socle+1) cofactors
    bool powid_ready_ = false;
    std::vector<BasisElem> basis_;
    std::map<long, long> basis_offset_;
    bool basis_ready_ = false;
};

// The engine is instantiated for these fields only.
extern template class GDEngine<QField>;
extern template class GDEngine<QLField>;
extern template class GDEngine<PField>;
extern template class GDEngine<FpField>;
extern template class GDEngine<JetField>;

// Quick full-rank certificate for f over F_p; throws bad_reduction on any
// dimension mismatch (singular fiber / bad reduction at p).
void check_smooth_mod_p(const MPoly<long>& f, long p);

}  // namespace dwork
