#pragma once

#include <vector>

#include "dwork/padic.hpp"

namespace dwork {

/*
 * Element of Q_p(pi) with pi^(p-1) = -p, stored as coefficients of
 * pi^0..pi^(p-2).  Multiplication reduces pi powers exactly; a negative pi
 * power is rewritten through pi^-1 = -pi^(p-2)/p, so valuations stay in Z.
 * The slot index carries the pi-degree grading mod (p-1).
 */
class PiScalar {
public:
    PiScalar() : p_(0) {}
    explicit PiScalar(long p) : p_(p), c_(static_cast<size_t>(p - 1), PadicScalar::zero(p)) {}

    static PiScalar zero(long p) { return PiScalar(p); }
    static PiScalar from_padic(const PadicScalar& a);
    // a * pi^k, any integer k.
    static PiScalar monomial(const PadicScalar& a, long k);

    long prime() const { return p_; }
    const PadicScalar& coeff(long i) const { return c_.at(static_cast<size_t>(i)); }
    PadicScalar& coeff(long i) { return c_.at(static_cast<size_t>(i)); }

    bool is_exact_zero() const;
    // pi-degree mod (p-1) when exactly one slot is nonzero; -1 if zero or mixed.
    long homogeneous_slot() const;

    PiScalar operator+(const PiScalar& o) const;
    PiScalar operator-(const PiScalar& o) const;
    PiScalar operator*(const PiScalar& o) const;
    PiScalar operator*(const PadicScalar& a) const;
    PiScalar& operator+=(const PiScalar& o) { return *this = *this + o; }

    PiScalar mul_pi_power(long k) const;  // multiply by pi^k, k any integer

    std::string str() const;

private:
    long p_;
    std::vector<PadicScalar> c_;
};

}  // namespace dwork
