#include "dwork/pi_ring.hpp"

namespace dwork {

PiScalar PiScalar::from_padic(const PadicScalar& a) {
    PiScalar r(a.prime());
    r.c_[0] = a;
    return r;
}

PiScalar PiScalar::monomial(const PadicScalar& a, long k) {
    return from_padic(a).mul_pi_power(k);
}

bool PiScalar::is_exact_zero() const {
    for (const auto& a : c_)
        if (!a.is_exact_zero()) return false;
    return true;
}

long PiScalar::homogeneous_slot() const {
    long slot = -1;
    for (long i = 0; i < static_cast<long>(c_.size()); ++i) {
        if (c_[static_cast<size_t>(i)].is_exact_zero()) continue;
        if (slot >= 0) return -1;
        slot = i;
    }
    return slot;
}

PiScalar PiScalar::operator+(const PiScalar& o) const {
    if (p_ == 0) return o;
    if (o.p_ == 0) return *this;
    PiScalar r(p_);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
}

PiScalar PiScalar::operator-(const PiScalar& o) const {
    PiScalar r(p_);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
}

PiScalar PiScalar::operator*(const PadicScalar& a) const {
    PiScalar r(p_);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (!c_[i].is_exact_zero()) r.c_[i] = c_[i] * a;
    }
    return r;
}

PiScalar PiScalar::operator*(const PiScalar& o) const {
    PiScalar r(p_);
    long m = p_ - 1;
    for (long i = 0; i < m; ++i) {
        if (c_[static_cast<size_t>(i)].is_exact_zero()) continue;
        for (long j = 0; j < m; ++j) {
            if (o.c_[static_cast<size_t>(j)].is_exact_zero()) continue;
            PadicScalar prod = c_[static_cast<size_t>(i)] * o.c_[static_cast<size_t>(j)];
            long k = i + j;
            if (k >= m) {
                // pi^(p-1) = -p
                k -= m;
                prod = (-prod).mul_p_power(1);
            }
            r.c_[static_cast<size_t>(k)] += prod;
        }
    }
    return r;
}

PiScalar PiScalar::mul_pi_power(long k) const {
    long m = p_ - 1;
    // pi^k = pi^r * (-p)^q with k = q*m + r, 0 <= r < m.
    long q = (k >= 0) ? k / m : -((-k + m - 1) / m);
    long r = k - q * m;
    PiScalar out(p_);
    for (long i = 0; i < m; ++i) {
        const PadicScalar& a = c_[static_cast<size_t>(i)];
        if (a.is_exact_zero()) continue;
        long slot = i + r;
        long extra = 0;
        if (slot >= m) {
            slot -= m;
            extra = 1;
        }
        long qq = q + extra;
        PadicScalar b = a.mul_p_power(qq);
        if (qq % 2 != 0) b = -b;
        out.c_[static_cast<size_t>(slot)] += b;
    }
    return out;
}

std::string PiScalar::str() const {
    std::string s;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_exact_zero()) continue;
        if (!first) s += " + ";
        s += "(" + c_[i].str() + ")";
        if (i == 1) s += "*pi";
        if (i > 1) s += "*pi^" + std::to_string(i);
        first = false;
    }
    return first ? "0" : s;
}

}  // namespace dwork
