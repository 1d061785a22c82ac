#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "dwork/griffiths.hpp"
#include "dwork/polyalg.hpp"
#include "dwork/splitting.hpp"

namespace dwork {

class coefficient_not_teichmueller : public std::runtime_error {
public:
    explicit coefficient_not_teichmueller(const std::string& m) : std::runtime_error(m) {}
};

class truncation_insufficient : public std::runtime_error {
public:
    explicit truncation_insufficient(const std::string& m) : std::runtime_error(m) {}
};

/*
 * Square matrix of p-adic scalars with a precision certificate: every entry
 * is known modulo p^certificate (exact-zero entries are unconstrained).
 */
struct PrecMatrix {
    long p = 0;
    long dim = 0;
    std::vector<PadicScalar> a;  // row-major
    long certificate = 0;
    long M = 0;             // splitting-series truncation used to produce it
    bool normalized = false;

    PadicScalar& at(long i, long j) { return a[static_cast<size_t>(i * dim + j)]; }
    const PadicScalar& at(long i, long j) const { return a[static_cast<size_t>(i * dim + j)]; }

    void recompute_certificate();
};

PrecMatrix mat_mul(const PrecMatrix& A, const PrecMatrix& B);
PrecMatrix mat_add(const PrecMatrix& A, const PrecMatrix& B);
PrecMatrix mat_sub(const PrecMatrix& A, const PrecMatrix& B);
PrecMatrix mat_scale_p_power(const PrecMatrix& A, long k);

// Minimum valuation over entries; exact zeros and zero-to-window balls
// contribute their window floor.  Empty/all-zero matrices return `fallback`.
long min_entry_valuation(const PrecMatrix& A, long fallback);

// Characteristic polynomial by the division-free Berkowitz method,
// coefficients ascending: c_0 + c_1 T + ... + c_n T^n with c_n = 1.
std::vector<PadicScalar> charpoly(const PrecMatrix& A);

// Valuations of the roots (with multiplicity, ascending) from the lower
// Newton polygon of an ascending coefficient list.  Coefficients whose
// valuation is not resolvable within their window and which could cut the
// hull raise precision_exhausted.
std::vector<mpq_class> newton_slopes(const std::vector<PadicScalar>& cp);

/*
 * Family parameter choice: absent, an exact rational, or the Teichmueller
 * lift of k mod p (the (p-1)-th root of unity congruent to k).
 */
struct ParamSpec {
    enum Kind { none, rational, teichmuller } kind = none;
    Rat q = Rat(0);
    long k = 0;

    static ParamSpec absent() { return {}; }
    static ParamSpec exact(const Rat& v) {
        ParamSpec s;
        s.kind = rational;
        s.q = v;
        return s;
    }
    static ParamSpec teich(long kk) {
        ParamSpec s;
        s.kind = teichmuller;
        s.k = kk;
        return s;
    }

    PadicScalar realize(long p, long N) const;
    std::string str() const;
};

struct FrobeniusResult {
    PrecMatrix raw;         // matrix of the twisted-complex Frobenius
    PrecMatrix normalized;  // raw / p^2 (plane curves only)
    std::vector<BasisElem> basis;
    long M_used = 0;
    long N_rel = 0;  // relative working precision of the run
};

/*
 * Frobenius matrix on the primitive cohomology of the smooth plane curve
 * (or hypersurface) f = 0, in the pole-order monomial basis of the reduction
 * engine.  Images are expanded through the splitting series: each monomial
 * c_j x^(I_j) of f contributes a factor A(c_j t x^(I_j)), which is only the
 * p-th power kernel when c_j^p = c_j; other coefficients are rejected.
 * Truncation M < 0 picks ceil(p^2/(p-1) * (N+4)); the relative working
 * precision is raised and the run repeated if the certificate lands below N.
 * The p^2-normalized matrix (whose char poly is the numerator of the zeta
 * function) is attached for plane curves.
 */
FrobeniusResult frobenius_matrix(const HomoPoly& f, const ParamSpec& lam, long p, long N,
                                 long M = -1, int threads = 1);

struct StabilityReport {
    bool stable = false;
    long agree_window = 0;  // entries agree modulo p^agree_window
    FrobeniusResult base, bumped;
};

// Recompute with truncation M+5 and require entrywise agreement within the
// joint certificate.
StabilityReport verify_truncation_stability(const HomoPoly& f, const ParamSpec& lam, long p,
                                            long N, long M = -1, int threads = 1);

/*
 * Matrix of the theta connection lambda * d/dlambda on the engine basis:
 * the class x^m Omega/f^kappa maps to -kappa * lambda * (df/dlambda) * x^m
 * at pole kappa + 1, then reduces.  Works over the symbolic rational-function
 * field and over p-adic scalars alike; row-major dim x dim.
 */
template <class F>
std::vector<typename F::T> gm_theta_matrix(GDEngine<F>& eng,
                                           const MPoly<typename F::T>& df_dlambda,
                                           const typename F::T& lambda);

/*
 * Minimal monic-free differential operator sum_i c_i(lambda) theta^i (with
 * integer-polynomial coefficients, primitive, positive leading sign)
 * annihilating the first basis class of the family, found by increasing the
 * order until the derived classes become linearly dependent over the
 * rational-function field.
 */
struct PFOperator {
    long order = 0;
    std::vector<ParamPoly> c;  // c[i] multiplies theta^i, size order+1

    std::string str() const;
};

PFOperator picard_fuchs(const HomoPoly& family, long max_order = 4);

// Apply the operator to a truncated power series a_0..a_C (theta = lambda
// d/dlambda acts as multiplication by the index); returns the residual
// coefficients, exact.
std::vector<mpq_class> pf_apply_to_series(const PFOperator& L, const std::vector<mpz_class>& a);

/*
 * Horizontality of the Frobenius structure over the parameter line, tested
 * pointwise at a fixed point of x -> x^p on the parameter (lambda^(p-1) = 1,
 * so the map is an endomorphism of the fiber).  Acting on a pulled-back
 * section, theta o F - p F o theta leaves the residual matrix
 *     R = thF + Theta*F - p*F*Theta,      thF = lambda * dF/dlambda,
 * where the chain rule contributes the factor p and the derivative thF is
 * obtained by rerunning the whole matrix construction on first-order jets
 * lambda + eps.  `pass` means R vanishes within its certificate.  The
 * control perturbs one entry of F by p and reports the residual valuation
 * that perturbation produces; a working check must see it (control_val < N).
 * A parameter-free input has Theta = 0 and thF = 0; the residual is then
 * trivially zero and the control has nothing to detect.
 */
struct CompatReport {
    long p = 0;
    long N = 0;
    long residual_val = 0;
    long certificate = 0;
    bool pass = false;
    long control_val = 0;
    bool control_detects = false;
    FrobeniusResult frob;
};

CompatReport check_gm_frobenius_compat(const HomoPoly& family, const ParamSpec& lam, long p,
                                       long N, long M = -1, int threads = 1);

}  // namespace dwork
