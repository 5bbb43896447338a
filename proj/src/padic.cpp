#include "qchab/padic.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <sstream>

namespace qchab {

namespace {
constexpr long kHugePrec = std::numeric_limits<long>::max() / 4;
}

BigInt pow_int(const BigInt& base, long e) {
    if (e < 0) throw DomainError("pow_int: negative exponent");
    BigInt r = 1, b = base;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

BigInt mod_pow(BigInt base, BigInt e, const BigInt& m) {
    base %= m;
    if (base < 0) base += m;
    BigInt r = 1;
    while (e > 0) {
        if ((e & 1) != 0) r = r * base % m;
        base = base * base % m;
        e >>= 1;
    }
    return r;
}

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    BigInt old_r = a % m, r = m;
    if (old_r < 0) old_r += m;
    BigInt old_s = 1, s = 0;
    while (r != 0) {
        BigInt q = old_r / r;
        BigInt t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) throw DomainError("mod_inverse: not invertible");
    if (old_s < 0) old_s += m;
    return old_s;
}

long val_p(BigInt n, long p) {
    if (n == 0) throw DomainError("val_p of zero");
    long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

void PadicNumber::canonicalize() {
    if (kind_ != Kind::Unit) {
        u_ = 0;
        r_ = 0;
        return;
    }
    if (r_ <= 0) {
        kind_ = Kind::InexactZero;
        v_ = v_ + r_;
        u_ = 0;
        r_ = 0;
        return;
    }
    BigInt m = pow_int(p_, r_);
    u_ %= m;
    if (u_ < 0) u_ += m;
    if (u_ == 0) {
        kind_ = Kind::InexactZero;
        v_ = v_ + r_;
        r_ = 0;
        return;
    }
    if (u_ % p_ == 0) {
        long w = val_p(u_, p_);
        if (w >= r_) {
            kind_ = Kind::InexactZero;
            v_ = v_ + r_;
            u_ = 0;
            r_ = 0;
            return;
        }
        u_ /= pow_int(p_, w);
        v_ += w;
        r_ -= w;
        u_ %= pow_int(p_, r_);
    }
}

PadicNumber PadicNumber::make(long p, long v, const BigInt& u, long r) {
    if (p < 2) throw DomainError("bad prime");
    PadicNumber x;
    x.p_ = p;
    x.kind_ = Kind::Unit;
    x.v_ = v;
    x.r_ = r;
    x.u_ = u;
    x.canonicalize();
    return x;
}

PadicNumber PadicNumber::from_integer(const BigInt& n, long p, long r) {
    if (n == 0) return zero(p);
    return make(p, 0, n, r + val_p(n, p));
}

PadicNumber PadicNumber::from_rational(const BigRat& q, long p, long r) {
    if (q == 0) return zero(p);
    BigInt num = numerator(q), den = denominator(q);
    long vn = (num == 0) ? 0 : val_p(num, p);
    long vd = val_p(den, p);
    num /= pow_int(p, vn);
    den /= pow_int(p, vd);
    BigInt m = pow_int(p, r);
    BigInt u = num % m * mod_inverse(den, m) % m;
    return make(p, vn - vd, u, r);
}

long PadicNumber::valuation() const {
    if (kind_ == Kind::Unit) return v_;
    if (kind_ == Kind::InexactZero) return v_;  // lower bound: v >= abs prec
    throw DomainError("valuation of exact zero");
}

long PadicNumber::abs_prec() const {
    switch (kind_) {
        case Kind::ExactZero: return kHugePrec;
        case Kind::InexactZero: return v_;
        default: return v_ + r_;
    }
}

PadicNumber PadicNumber::operator-() const {
    if (kind_ != Kind::Unit) return *this;
    return make(p_, v_, pow_int(p_, r_) - u_, r_);
}

PadicNumber add_impl(const PadicNumber& a, const PadicNumber& b, bool sub) {
    if (a.p_ != b.p_ && a.p_ != 0 && b.p_ != 0) throw DomainError("prime mismatch");
    long p = a.p_ ? a.p_ : b.p_;
    if (a.kind_ == PadicNumber::Kind::ExactZero) return sub ? -b : b;
    if (b.kind_ == PadicNumber::Kind::ExactZero) return a;
    long na = a.abs_prec(), nb = b.abs_prec();
    long n = std::min(na, nb);
    if (a.kind_ != PadicNumber::Kind::Unit && b.kind_ != PadicNumber::Kind::Unit)
        return PadicNumber::zero_to_prec(p, n);
    if (a.kind_ != PadicNumber::Kind::Unit) {
        // O(p^n) +- unit
        if (b.v_ >= n) return PadicNumber::zero_to_prec(p, n);
        PadicNumber r = PadicNumber::make(p, b.v_, sub ? -b.u_ : b.u_, n - b.v_);
        return r;
    }
    if (b.kind_ != PadicNumber::Kind::Unit) {
        if (a.v_ >= n) return PadicNumber::zero_to_prec(p, n);
        return PadicNumber::make(p, a.v_, a.u_, n - a.v_);
    }
    long v = std::min(a.v_, b.v_);
    if (v >= n) return PadicNumber::zero_to_prec(p, n);
    BigInt m = pow_int(p, n - v);
    BigInt s = a.u_ % m * (pow_int(p, a.v_ - v) % m) % m;
    BigInt t = b.u_ % m * (pow_int(p, b.v_ - v) % m) % m;
    if (sub)
        s -= t;
    else
        s += t;
    return PadicNumber::make(p, v, s, n - v);
}

PadicNumber PadicNumber::operator+(const PadicNumber& o) const { return add_impl(*this, o, false); }
PadicNumber PadicNumber::operator-(const PadicNumber& o) const { return add_impl(*this, o, true); }

PadicNumber PadicNumber::operator*(const PadicNumber& o) const {
    if (p_ != o.p_ && p_ != 0 && o.p_ != 0) throw DomainError("prime mismatch");
    long p = p_ ? p_ : o.p_;
    if (kind_ == Kind::ExactZero || o.kind_ == Kind::ExactZero) return zero(p);
    if (kind_ == Kind::InexactZero || o.kind_ == Kind::InexactZero) {
        // O(p^N) * (p^v u) = O(p^{N+v}); O(p^N)*O(p^M) = O(p^{N+M})
        long va = (kind_ == Kind::InexactZero) ? v_ : v_;
        long vb = (o.kind_ == Kind::InexactZero) ? o.v_ : o.v_;
        return zero_to_prec(p, va + vb);
    }
    long r = std::min(r_, o.r_);
    BigInt m = pow_int(p, r);
    return make(p, v_ + o.v_, u_ % m * (o.u_ % m) % m, r);
}

PadicNumber PadicNumber::inverse() const {
    if (kind_ != Kind::Unit)
        throw PrecisionExhausted("division by a value indistinguishable from zero");
    BigInt m = pow_int(p_, r_);
    return make(p_, -v_, mod_inverse(u_, m), r_);
}

PadicNumber PadicNumber::operator/(const PadicNumber& o) const { return *this * o.inverse(); }

PadicNumber PadicNumber::pow(long n) const {
    long p = p_;
    if (n == 0) {
        if (kind_ == Kind::Unit) return one(p, r_);
        return one(p, kDefaultRelPrec);
    }
    if (kind_ == Kind::ExactZero) {
        if (n < 0) throw PrecisionExhausted("0^negative");
        return *this;
    }
    if (kind_ == Kind::InexactZero) {
        if (n < 0) throw PrecisionExhausted("division by inexact zero");
        return zero_to_prec(p, v_ * n);
    }
    PadicNumber base = n < 0 ? inverse() : *this;
    unsigned long e = n < 0 ? -(unsigned long)n : (unsigned long)n;
    BigInt m = pow_int(p, base.r_);
    BigInt u = 1, b = base.u_;
    long v = 0;
    unsigned long ee = e;
    while (ee) {
        if (ee & 1) u = u * b % m;
        b = b * b % m;
        ee >>= 1;
    }
    v = base.v_ * (long)e;
    return make(p, v, u, base.r_);
}

BigInt PadicNumber::lift() const {
    if (kind_ != Kind::Unit) return 0;
    if (v_ < 0) throw DomainError("lift of negative-valuation value");
    return u_ * pow_int(p_, v_);
}

PadicNumber PadicNumber::shift(long k) const {
    if (kind_ == Kind::ExactZero) return *this;
    if (kind_ == Kind::InexactZero) return zero_to_prec(p_, v_ + k);
    return make(p_, v_ + k, u_, r_);
}

PadicNumber PadicNumber::with_abs_prec(long n) const {
    if (kind_ == Kind::ExactZero) return zero_to_prec(p_, n);
    if (kind_ == Kind::InexactZero) return zero_to_prec(p_, std::min(v_, n));
    if (v_ + r_ <= n) return *this;
    return make(p_, v_, u_, n - v_);
}

std::string PadicNumber::str() const {
    if (kind_ == Kind::ExactZero) return "0";
    auto oterm = [this](std::ostringstream& o, long e) {
        if (e == 1)
            o << "O(" << p_ << ")";
        else
            o << "O(" << p_ << "^" << e << ")";
    };
    std::ostringstream os;
    if (kind_ == Kind::InexactZero) {
        oterm(os, v_);
        return os.str();
    }
    BigInt u = u_;
    bool first = true;
    for (long i = 0; i < r_; ++i) {
        long d = (long)(u % p_);
        u /= p_;
        if (d != 0) {
            if (!first) os << "+";
            first = false;
            long e = v_ + i;
            if (e == 0)
                os << d;
            else if (e == 1)
                os << d << "*" << p_;
            else
                os << d << "*" << p_ << "^" << e;
        }
    }
    if (!first) os << "+";
    oterm(os, v_ + r_);
    return os.str();
}

PadicNumber teichmuller(long residue, long p, long r) {
    long res = residue % p;
    if (res < 0) res += p;
    if (res == 0) throw DomainError("teichmuller of zero residue");
    BigInt m = pow_int(p, r);
    BigInt x = res;
    // x <- x^p converges to the (p-1)-st root of unity lifting res
    for (long i = 0; i < r + 1; ++i) {
        BigInt nx = mod_pow(x, p, m);
        if (nx == x) break;
        x = nx;
    }
    return PadicNumber::make(p, 0, x, r);
}

PadicNumber teichmuller(const PadicNumber& x) {
    if (x.is_zero() || x.valuation() != 0) throw DomainError("teichmuller needs a unit");
    long res = (long)(x.unit() % x.prime());
    return teichmuller(res, x.prime(), x.rel_prec());
}

PadicNumber padic_log(const PadicNumber& x0) {
    if (x0.is_zero()) throw PrecisionExhausted("log of zero to precision");
    long p = x0.prime();
    long r = x0.rel_prec();
    // Iwasawa branch: log_p(p) = 0, so only the unit part matters
    PadicNumber x = PadicNumber::make(p, 0, x0.unit(), r);
    PadicNumber w = teichmuller(x);
    // unit part over its Teichmuller representative is principal
    PadicNumber q = PadicNumber::make(p, 0, x.unit(), r) / w;
    PadicNumber m = q - PadicNumber::one(p, r);
    if (m.is_zero()) return PadicNumber::zero_to_prec(p, r);
    long target = r;
    long M = truncation_order(target, p);
    // log(1+m) = sum (-1)^{k+1} m^k / k
    PadicNumber acc = PadicNumber::zero(p);
    PadicNumber mk = m;
    for (long k = 1; k <= M; ++k) {
        PadicNumber term = mk / PadicNumber::from_integer(k, p, r);
        if (k % 2 == 0) term = -term;
        acc += term;
        if (k < M) mk *= m;
    }
    return acc;
}

long truncation_order(long target_abs_prec, long p) {
    if (target_abs_prec <= 0) return 1;
    long M = 1;
    while (true) {
        long lg = 0;
        long q = M;
        while (q >= p) {
            q /= p;
            ++lg;
        }
        if (M - lg >= target_abs_prec) return M;
        ++M;
    }
}

}  // namespace qchab
