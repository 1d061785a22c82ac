#include "dwork/padic.hpp"

#include <map>
#include <mutex>

namespace dwork {

namespace {

// Small cache of p^k; the same few powers are used millions of times during
// a reduction run.
struct PowCache {
    std::map<std::pair<long, long>, mpz_class> tab;
    std::mutex mu;
};

PowCache& pow_cache() {
    static PowCache c;
    return c;
}

}  // namespace

mpz_class pow_p(long p, long k) {
    if (k < 0) throw std::logic_error("pow_p: negative exponent");
    if (k < 1024) {
        auto& c = pow_cache();
        std::lock_guard<std::mutex> lk(c.mu);
        auto it = c.tab.find({p, k});
        if (it != c.tab.end()) return it->second;
        mpz_class r;
        mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(k));
        c.tab.emplace(std::make_pair(p, k), r);
        return r;
    }
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(k));
    return r;
}

long factorial_valuation(unsigned long m, long p) {
    long v = 0;
    unsigned long q = m;
    while (q >= static_cast<unsigned long>(p)) {
        q /= static_cast<unsigned long>(p);
        v += static_cast<long>(q);
    }
    return v;
}

void PadicScalar::normalize() {
    if (zero_) return;
    if (prec_ < 0) prec_ = 0;
    if (prec_ == 0) {
        unit_ = 0;
        return;
    }
    mpz_class m = pow_p(p_, prec_);
    mpz_fdiv_r(unit_.get_mpz_t(), unit_.get_mpz_t(), m.get_mpz_t());
    // Strip p factors: keep the absolute window val+prec fixed.
    while (prec_ > 0 && unit_ != 0 && mpz_divisible_ui_p(unit_.get_mpz_t(),
                                                         static_cast<unsigned long>(p_))) {
        mpz_divexact_ui(unit_.get_mpz_t(), unit_.get_mpz_t(),
                        static_cast<unsigned long>(p_));
        ++val_;
        --prec_;
    }
    if (unit_ == 0) {
        // Indistinguishable from zero in the window: an O(p^(val+prec)) ball.
        val_ += prec_;
        prec_ = 0;
    }
}

PadicScalar PadicScalar::make(long p, long val, const mpz_class& unit, long prec) {
    PadicScalar x;
    x.p_ = p;
    x.zero_ = false;
    x.val_ = val;
    x.prec_ = prec;
    x.unit_ = unit;
    x.normalize();
    return x;
}

PadicScalar PadicScalar::ball(long p, long w) {
    PadicScalar x;
    x.p_ = p;
    x.zero_ = false;
    x.val_ = w;
    x.prec_ = 0;
    x.unit_ = 0;
    return x;
}

PadicScalar PadicScalar::from_integer(const mpz_class& n, long p, long N) {
    if (n == 0) return zero(p);
    mpz_class u = n;
    long v = 0;
    while (mpz_divisible_ui_p(u.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(u.get_mpz_t(), u.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return make(p, v, u, N);
}

PadicScalar PadicScalar::from_rational(const mpq_class& q, long p, long N) {
    if (q == 0) return zero(p);
    mpz_class num = q.get_num(), den = q.get_den();
    long v = 0;
    while (mpz_divisible_ui_p(num.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(p));
        --v;
    }
    mpz_class m = pow_p(p, N);
    mpz_class deninv;
    if (mpz_invert(deninv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::logic_error("from_rational: denominator not invertible");
    mpz_class u = (num * deninv) % m;
    return make(p, v, u, N);
}

PadicScalar PadicScalar::factorial(unsigned long m, long p, long N) {
    long v = factorial_valuation(m, p);
    mpz_class mod = pow_p(p, N);
    mpz_class u = 1;
    for (unsigned long i = 2; i <= m; ++i) {
        unsigned long j = i;
        while (j % static_cast<unsigned long>(p) == 0) j /= static_cast<unsigned long>(p);
        u = (u * j) % mod;
    }
    return make(p, v, u, N);
}

PadicScalar PadicScalar::teichmuller(long k, long p, long N) {
    long k0 = ((k % p) + p) % p;
    if (k0 == 0) return zero(p);
    // Hensel: x -> x^p converges to the Teichmueller representative.
    mpz_class mod = pow_p(p, N);
    mpz_class x = k0;
    for (long i = 0; i < N + 2; ++i) {
        mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(p),
                    mod.get_mpz_t());
    }
    return make(p, 0, x, N);
}

PadicScalar PadicScalar::operator-() const {
    if (zero_ || prec_ == 0) return *this;
    PadicScalar r = *this;
    r.unit_ = pow_p(p_, prec_) - unit_;
    r.normalize();
    return r;
}

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
    if (zero_) return o;
    if (o.zero_) return *this;
    if (p_ != o.p_) throw std::logic_error("padic add: prime mismatch");
    long w = std::min(val_ + prec_, o.val_ + o.prec_);
    long v = std::min(val_, o.val_);
    if (w <= v) {
        // No overlap of known digits above the smaller valuation.
        return ball(p_, std::min(w, v));
    }
    mpz_class s = 0;
    if (prec_ > 0) s += unit_ * pow_p(p_, val_ - v);
    if (o.prec_ > 0) s += o.unit_ * pow_p(p_, o.val_ - v);
    return make(p_, v, s, w - v);
}

PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
    if (zero_ || o.zero_) return zero(p_ ? p_ : o.p_);
    if (p_ != o.p_) throw std::logic_error("padic mul: prime mismatch");
    long v = val_ + o.val_;
    long n = std::min(prec_, o.prec_);
    if (n == 0) return ball(p_, v);
    mpz_class u = (unit_ * o.unit_) % pow_p(p_, n);
    return make(p_, v, u, n);
}

PadicScalar PadicScalar::inv() const {
    if (zero_) throw std::domain_error("padic inv: exact zero");
    if (prec_ == 0)
        throw precision_exhausted("padic inv: no known digits (O(p^" +
                                  std::to_string(val_) + "))");
    mpz_class m = pow_p(p_, prec_);
    mpz_class u;
    if (mpz_invert(u.get_mpz_t(), unit_.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::logic_error("padic inv: unit not invertible");
    return make(p_, -val_, u, prec_);
}

PadicScalar PadicScalar::mul_small(long c) const {
    if (zero_) return *this;
    if (c == 0) return zero(p_);
    return *this * from_integer(mpz_class(c), p_, prec_ > 0 ? prec_ : 1);
}

PadicScalar PadicScalar::mul_p_power(long k) const {
    if (zero_) return *this;
    PadicScalar r = *this;
    r.val_ += k;
    return r;
}

PadicScalar PadicScalar::pow_ui(unsigned long e) const {
    if (zero_) {
        if (e == 0) throw std::logic_error("padic pow: 0^0");
        return *this;
    }
    PadicScalar acc = from_integer(1, p_, prec_ > 0 ? prec_ : 1);
    PadicScalar base = *this;
    while (e > 0) {
        if (e & 1UL) acc = acc * base;
        base = base * base;
        e >>= 1UL;
    }
    return acc;
}

PadicScalar PadicScalar::truncate_window(long w) const {
    if (zero_) return ball(p_, w);
    if (val_ + prec_ <= w) return *this;
    if (w <= val_) return ball(p_, std::min(w, val_));
    return make(p_, val_, unit_, w - val_);
}

bool PadicScalar::same_value(const PadicScalar& o) const {
    if (zero_ != o.zero_) return false;
    if (zero_) return true;
    return p_ == o.p_ && val_ == o.val_ && prec_ == o.prec_ && unit_ == o.unit_;
}

bool PadicScalar::agrees_to(const PadicScalar& o, long w) const {
    PadicScalar d = *this - o;
    if (d.is_exact_zero()) return true;
    return d.is_zero_to_window() ? d.val_ >= w : d.val_ >= w;
}

mpz_class PadicScalar::to_centered_integer() const {
    if (zero_) return 0;
    if (prec_ == 0) return 0;
    if (val_ < 0) throw std::domain_error("to_centered_integer: negative valuation");
    mpz_class m = pow_p(p_, val_ + prec_);
    mpz_class r = unit_ * pow_p(p_, val_);
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
    if (r * 2 > m) r -= m;
    return r;
}

std::string PadicScalar::str() const {
    if (zero_) return "0";
    if (prec_ == 0) return "O(" + std::to_string(p_) + "^" + std::to_string(val_) + ")";
    std::string s;
    if (val_ != 0) {
        s += std::to_string(p_) + "^" + std::to_string(val_) + " * ";
    }
    s += unit_.get_str();
    s += " (mod " + std::to_string(p_) + "^" + std::to_string(val_ + prec_) + ")";
    return s;
}

}  // namespace dwork
