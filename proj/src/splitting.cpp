#include "dwork/splitting.hpp"

namespace dwork {

namespace {

// ceil(n*(p-1)/p^2)
long ord_bound(long n, long p) {
    long num = n * (p - 1);
    long den = p * p;
    return (num + den - 1) / den;
}

// Unit parts and valuations of 0!..m! modulo p^N.
struct FactTable {
    std::vector<mpz_class> unit;
    std::vector<long> val;

    FactTable(unsigned long m, long p, long N) {
        mpz_class mod = pow_p(p, N);
        unit.resize(m + 1);
        val.resize(m + 1);
        unit[0] = 1;
        val[0] = 0;
        for (unsigned long i = 1; i <= m; ++i) {
            unsigned long j = i;
            long v = 0;
            while (j % static_cast<unsigned long>(p) == 0) {
                j /= static_cast<unsigned long>(p);
                ++v;
            }
            unit[i] = (unit[i - 1] * j) % mod;
            val[i] = val[i - 1] + v;
        }
    }
};

PiScalar splitting_coeff_at(long n, long p, long N_rel, const FactTable& ft,
                            const std::vector<mpz_class>& inv_unit) {
    PiScalar an(p);
    for (long i = 0; i * p <= n; ++i) {
        long j = n - i * p;
        long k = i + j;  // pi power before reduction
        long q = k / (p - 1);
        long slot = k % (p - 1);
        // pi^k = (-p)^q * pi^slot
        long v = q - ft.val[static_cast<size_t>(i)] - ft.val[static_cast<size_t>(j)];
        mpz_class u = inv_unit[static_cast<size_t>(i)] * inv_unit[static_cast<size_t>(j)];
        if ((j + q) % 2 != 0) u = -u;
        an.coeff(slot) += PadicScalar::make(p, v, u, N_rel);
    }
    return an;
}

SplittingSeries compute(long p, long N, long M) {
    SplittingSeries s;
    s.p = p;
    s.N = N;
    long N_rel = N + ord_bound(M, p) + 8;
    FactTable ft(static_cast<unsigned long>(M), p, N_rel);
    mpz_class mod = pow_p(p, N_rel);
    std::vector<mpz_class> inv_unit(static_cast<size_t>(M) + 1);
    for (long i = 0; i <= M; ++i) {
        if (mpz_invert(inv_unit[static_cast<size_t>(i)].get_mpz_t(),
                       ft.unit[static_cast<size_t>(i)].get_mpz_t(), mod.get_mpz_t()) == 0)
            throw std::logic_error("splitting_coeffs: factorial unit not invertible");
    }
    s.a.reserve(static_cast<size_t>(M) + 1);
    for (long n = 0; n <= M; ++n) s.a.push_back(splitting_coeff_at(n, p, N_rel, ft, inv_unit));
    return s;
}

}  // namespace

std::pair<long, PadicScalar> SplittingSeries::collapsed(long n) const {
    const PiScalar& an = coeff(n);
    long want = n % (p - 1);
    for (long i = 0; i < p - 1; ++i) {
        if (i != want && !an.coeff(i).is_exact_zero())
            throw std::logic_error("splitting coefficient not pi-homogeneous");
    }
    return {want, an.coeff(want)};
}

bool SplittingSeries::check_a0_is_one() const {
    const PiScalar& a0 = coeff(0);
    for (long i = 1; i < p - 1; ++i)
        if (!a0.coeff(i).is_exact_zero()) return false;
    const PadicScalar& c = a0.coeff(0);
    return c.has_unit() && c.val() == 0 && c.unit() == 1;
}

std::optional<long> SplittingSeries::check_homogeneity(long upto) const {
    for (long n = 0; n <= upto && n < size(); ++n) {
        long want = n % (p - 1);
        for (long i = 0; i < p - 1; ++i) {
            if (i == want) continue;
            if (!coeff(n).coeff(i).is_exact_zero()) return n;
        }
    }
    return std::nullopt;
}

std::optional<long> SplittingSeries::check_ord_bound(long upto) const {
    // The bound is on the full fractional order: with A_n = c * pi^slot and
    // ord(pi) = 1/(p-1), require  ord(c) + slot/(p-1) >= n(p-1)/p^2.
    // Cleared of denominators over p^2 (p-1):
    //   ord(c) * p^2 (p-1) + slot * p^2 >= n (p-1)^2.
    for (long n = 1; n <= upto && n < size(); ++n) {
        long slot = n % (p - 1);
        const PadicScalar& c = coeff(n).coeff(slot);
        if (c.is_exact_zero()) continue;
        // For balls val() is still a certified floor, so the same test applies.
        if (c.val() * p * p * (p - 1) + slot * p * p < n * (p - 1) * (p - 1)) return n;
    }
    return std::nullopt;
}

SplittingSeries splitting_coeffs(long p, long N, long M) {
    if (p < 3) throw std::invalid_argument("splitting_coeffs: prime must be odd");
    if (M >= 0) return compute(p, N, M);
    // Adaptive: grow until the trailing run clears valuation N.
    long run = (p * N) / (p - 1) + 1;
    long m = std::max<long>(2 * run, 16);
    for (int iter = 0; iter < 12; ++iter) {
        SplittingSeries s = compute(p, N, m);
        bool ok = true;
        for (long n = m - run + 1; n <= m; ++n) {
            const PadicScalar& c = s.coeff(n).coeff(n % (p - 1));
            if (!c.is_exact_zero() && c.val() < N) {
                ok = false;
                break;
            }
        }
        if (ok) return s;
        m *= 2;
    }
    throw std::logic_error("splitting_coeffs: adaptive truncation did not stabilize");
}

Formula3Result verify_formula3(long p, long N, long b, long M) {
    if (b < 1) throw std::invalid_argument("verify_formula3: b >= 1 required");
    long N_work = N + 2 * b + 12;
    bool adaptive = (M < 0);
    // Stop once this many consecutive terms clear the target window.
    long run = (p * N_work) / (p - 1) + 2;
    long cap = adaptive ? 64 : M + 1;

    Formula3Result res;
    PadicScalar sum = PadicScalar::zero(p);

    while (true) {
        SplittingSeries series = splitting_coeffs(p, N_work, cap - 1);
        FactTable ft(static_cast<unsigned long>(p * b + cap - 1), p, N_work + 4);
        sum = PadicScalar::zero(p);
        res.terms_used = 0;
        long good_run = 0;
        PadicScalar last_term = PadicScalar::zero(p);
        for (long n = 0; n < cap; ++n) {
            auto [slot, a] = series.collapsed(n);
            PadicScalar t = a;
            // pi^(slot - n) with slot = n mod (p-1): a power of (-p).
            long q = (slot - n) / (p - 1);
            t = t.mul_p_power(q);
            if (q % 2 != 0) t = -t;
            if (n % 2 != 0) t = -t;
            size_t idx = static_cast<size_t>(p * b + n - 1);
            t = t * PadicScalar::make(p, ft.val[idx], ft.unit[idx], N_work + 4);
            sum += t;
            ++res.terms_used;
            last_term = t;
            bool small = t.is_exact_zero() || t.val() >= N_work;
            good_run = small ? good_run + 1 : 0;
            if (adaptive && good_run >= run) break;
        }
        if (adaptive && good_run < run) {
            cap *= 2;
            if (cap > 4096) throw std::logic_error("verify_formula3: truncation runaway");
            continue;
        }
        if (!adaptive &&
            !(last_term.is_exact_zero() || last_term.val() >= N))
            throw tail_not_dominated("verify_formula3: fixed M leaves a dominant tail");
        break;
    }

    mpq_class rhs_q(1);
    for (long i = 2; i <= b - 1; ++i) rhs_q *= i;
    for (long i = 0; i < b - 1; ++i) rhs_q *= p;
    if (b % 2 != 0) rhs_q = -rhs_q;
    res.rhs = PadicScalar::from_rational(rhs_q, p, N_work);
    res.lhs = sum;
    res.residual = sum - res.rhs;
    return res;
}

}  // namespace dwork
