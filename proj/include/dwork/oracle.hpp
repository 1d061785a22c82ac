#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <vector>

#include "dwork/polyalg.hpp"

namespace dwork {

class oracle_budget_exceeded : public std::runtime_error {
public:
    explicit oracle_budget_exceeded(const std::string& m) : std::runtime_error(m) {}
};

/*
 * Exhaustive projective point count of F = 0 over F_{p^e}, e in {1, 2}.
 * F_{p^2} is modeled as F_p[s]/(s^2 - r) with r the least quadratic
 * non-residue, so counts are reproducible.  Budget: p <= 31, e <= 2, and at
 * most ~10^6 points; beyond that throws oracle_budget_exceeded.
 */
long count_points(const MPoly<long>& F, long p, int e);
long count_points(const MPoly<Rat>& F, long p, int e);

/*
 * Weil data for a smooth genus-1 plane curve recovered from raw counts:
 * a = p + 1 - N_1, cross-checked against N_2 = p^2 + 1 - (a^2 - 2p) and the
 * Hasse bound a^2 <= 4p.  Char poly of Frobenius is T^2 - a T + p.
 */
struct ZetaData {
    long p = 0;
    long n1 = 0;
    long n2 = 0;
    long a = 0;
};

ZetaData zeta_genus1(long n1, long n2, long p);

/*
 * Coefficients c_0..c_C of the holomorphic period of the u + v + l/(uv) + 1
 * pencil, extracted by brute-force constant-term expansion: the coefficient
 * of l^c is the (u,v)-constant term of -(-(u + v + l u^-1 v^-1))^(3c), i.e.
 * (-1)^c (3c)!/(c!)^3.  The expansion is computed by repeated Laurent
 * multiplication, not from the closed form, so it can sit on the other side
 * of a test from the formula.
 */
std::vector<mpz_class> period_series(long C);

}  // namespace dwork
