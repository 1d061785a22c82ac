#pragma once

#include <optional>
#include <vector>

#include "dwork/pi_ring.hpp"

namespace dwork {

/*
 * Coefficients A_0..A_M of the splitting series exp(pi*(z^p - z)).
 *
 * A_n = sum over p*i + j = n of pi^(i+j) * (-1)^j / (i! * j!).
 *
 * Invariants: A_0 = 1; A_n is pi-homogeneous of degree n mod (p-1);
 * ord_p(A_n) >= n*(p-1)/p^2.
 */
struct SplittingSeries {
    long p = 0;
    long N = 0;  // requested certification target (absolute digits above the ord bound)
    std::vector<PiScalar> a;

    long size() const { return static_cast<long>(a.size()); }
    const PiScalar& coeff(long n) const { return a.at(static_cast<size_t>(n)); }

    // A_n = scalar * pi^slot with slot = n mod (p-1); throws if not homogeneous.
    std::pair<long, PadicScalar> collapsed(long n) const;

    bool check_a0_is_one() const;
    // Both return the first offending index, or nullopt if all n <= upto pass.
    std::optional<long> check_homogeneity(long upto) const;
    std::optional<long> check_ord_bound(long upto) const;
};

// Coefficients up to index M with enough working precision to certify the
// valuation bound plus N digits.  M < 0 selects M adaptively: grow until the
// trailing ceil(p*N/(p-1)) coefficients all have valuation >= N.
SplittingSeries splitting_coeffs(long p, long N, long M);

/*
 * Residual of the factorial pairing identity
 *
 *   sum_n A_n * (-1)^n * pi^(-n) * (p*b + n - 1)!  =  (-1)^b * p^(b-1) * (b-1)!
 *
 * as a plain p-adic scalar (every summand has pi-degree 0).  M < 0 picks the
 * truncation adaptively; a fixed M whose tail terms do not clear the target
 * valuation raises tail_not_dominated.
 */
class tail_not_dominated : public std::runtime_error {
public:
    explicit tail_not_dominated(const std::string& m) : std::runtime_error(m) {}
};

struct Formula3Result {
    PadicScalar lhs;       // truncated sum
    PadicScalar rhs;       // (-1)^b p^(b-1) (b-1)!
    PadicScalar residual;  // lhs - rhs
    long terms_used = 0;
};

Formula3Result verify_formula3(long p, long N, long b, long M = -1);

}  // namespace dwork
