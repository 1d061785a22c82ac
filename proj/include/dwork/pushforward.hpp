#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "dwork/splitting.hpp"

namespace dwork {

class truncation_overflow : public std::runtime_error {
public:
    explicit truncation_overflow(const std::string& m) : std::runtime_error(m) {}
};

/*
 * Element of the truncated cokernel spanned by {t^a : 1 <= a <= A_max} and
 * {(-pi x y)^i / i! : 0 <= i <= I_max}, with coefficients in Q_p(pi).  The
 * reduction rules rewrite any (t x y)^m t^s into this span; powers that land
 * outside the windows raise truncation_overflow.
 */
struct PushforwardElem {
    long p = 0, A_max = 0, I_max = 0;
    std::vector<PiScalar> t_part;  // index a-1 holds the t^a coordinate
    std::vector<PiScalar> i_part;  // index i holds the (-pi x y)^i/i! coordinate

    static PushforwardElem zero(long p, long A_max, long I_max);
    // phi(z^b): b >= 0 maps to t^(b+1), b < 0 maps to (-pi x y)^(-b-1)/(-b-1)!.
    static PushforwardElem phi(long p, long A_max, long I_max, long N, long z_exp);

    PiScalar& t_coord(long a) { return t_part.at(static_cast<size_t>(a - 1)); }
    const PiScalar& t_coord(long a) const { return t_part.at(static_cast<size_t>(a - 1)); }
    PiScalar& i_coord(long i) { return i_part.at(static_cast<size_t>(i)); }
    const PiScalar& i_coord(long i) const { return i_part.at(static_cast<size_t>(i)); }

    PushforwardElem operator-(const PushforwardElem& o) const;
    PushforwardElem operator*(const PiScalar& c) const;
    PushforwardElem& operator+=(const PushforwardElem& o);

    // Minimum valuation over all slot coefficients; `empty_val` when every
    // slot is an exact zero.
    long min_val(long empty_val) const;

    std::string str() const;
};

/*
 * Rewrite (t x y)^m t^s (s may be negative as long as m + s >= 0) into the
 * cokernel basis.  Each step trades one t x y for a factor -j/pi; a leftover
 * (x y)^K becomes K! (-pi)^(-K) times the K-th divided-power basis element.
 * All pi powers are carried explicitly.
 */
PushforwardElem reduce_y_power(long m, long s, long p, long N, long A_max, long I_max);

/*
 * Frobenius on the truncated cokernel: x, y, t are raised to p-th powers,
 * the measure contributes p^2, and the twist contributes the splitting-series
 * factor in t x y.  Linear over the input coordinates.  M < 0 picks the
 * series truncation adaptively; a fixed M whose final term still carries
 * valuation below N raises tail_not_dominated.
 */
PushforwardElem fr_pushforward(const PushforwardElem& e, long p, long N, long M = -1);

struct IntertwineCheck {
    std::string label;
    long residual_val = 0;  // min valuation of lhs - rhs (9999 when exactly 0)
    bool pass = false;
};

struct IntertwineReport {
    long p = 0, N = 0;
    bool pass = false;
    std::vector<IntertwineCheck> checks;
};

/*
 * Check that the Frobenius above is multiplication by p composed with the
 * index-dilation z -> z^p on both coordinate families: images of t^(a+1)
 * for a <= A_src and of the divided-power elements for i <= I_src are
 * compared coordinatewise to precision N.  perturb_n >= 0 adds p * pi^slot
 * to that splitting coefficient first (negative control: the report must
 * then fail).
 */
IntertwineReport verify_phi_intertwine(long p, long N, long M, long A_src, long I_src,
                                       long perturb_n = -1);

/*
 * Exact eigenvalue of the twisted t d/dt operator on the quotient of Q[x,t]
 * by the image of d/dx + 2xt, where the operator acts as t d/dt + x^2 t.
 * Basis families: x^i (i >= 0) and t^i (i >= 1); eigenvalues -(i+1)/2 and
 * i - 1/2, computed by symbolic reduction rather than the closed form.
 */
enum class WeightKind { x_power, t_power };
mpq_class weight_spectrum(WeightKind kind, long i);

}  // namespace dwork
