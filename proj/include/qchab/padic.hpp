#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qchab {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

struct PrecisionExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularToPrecision : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

BigInt pow_int(const BigInt& base, long e);
BigInt mod_pow(BigInt base, BigInt e, const BigInt& m);
BigInt mod_inverse(const BigInt& a, const BigInt& m);
long val_p(BigInt n, long p);  // requires n != 0

/** Capped-relative-precision element of Q_p.
 *
 * A nonzero value is p^v * u with u a unit known mod p^r, so the value is
 * known mod p^{v+r}.  Exact zero is a distinguished state.  Full cancellation
 * in add/sub produces an "inexact zero" that remembers only the absolute
 * precision O(p^N); it has no unit and relative precision 0.
 */
class PadicNumber {
public:
    enum class Kind { ExactZero, InexactZero, Unit };

    PadicNumber() : p_(0), kind_(Kind::ExactZero), v_(0), r_(0) {}

    static PadicNumber zero(long p) {
        PadicNumber x;
        x.p_ = p;
        return x;
    }
    static PadicNumber zero_to_prec(long p, long abs_prec) {
        PadicNumber x;
        x.p_ = p;
        x.kind_ = Kind::InexactZero;
        x.v_ = abs_prec;
        return x;
    }
    // p^v * u, u reduced mod p^r. u may be any integer; p-content is folded into v.
    static PadicNumber make(long p, long v, const BigInt& u, long r);
    static PadicNumber from_integer(const BigInt& n, long p, long r);
    static PadicNumber from_rational(const BigRat& q, long p, long r);
    static PadicNumber one(long p, long r) { return from_integer(1, p, r); }

    long prime() const { return p_; }
    Kind kind() const { return kind_; }
    bool is_exact_zero() const { return kind_ == Kind::ExactZero; }
    bool is_zero() const { return kind_ != Kind::Unit; }  // indistinguishable from 0
    // valuation; only meaningful for Unit values (throws otherwise)
    long valuation() const;
    // absolute precision: value is known mod p^{abs_prec}; huge for exact zero
    long abs_prec() const;
    long rel_prec() const { return kind_ == Kind::Unit ? r_ : 0; }
    const BigInt& unit() const { return u_; }

    PadicNumber operator-() const;
    PadicNumber operator+(const PadicNumber& o) const;
    PadicNumber operator-(const PadicNumber& o) const;
    PadicNumber operator*(const PadicNumber& o) const;
    PadicNumber operator/(const PadicNumber& o) const;
    PadicNumber& operator+=(const PadicNumber& o) { return *this = *this + o; }
    PadicNumber& operator-=(const PadicNumber& o) { return *this = *this - o; }
    PadicNumber& operator*=(const PadicNumber& o) { return *this = *this * o; }
    PadicNumber& operator/=(const PadicNumber& o) { return *this = *this / o; }

    PadicNumber inverse() const;
    PadicNumber pow(long n) const;

    // value as integer in [0, p^{abs_prec}) when v >= 0; throws on negative valuation
    BigInt lift() const;
    // multiply by p^k (exact shift)
    PadicNumber shift(long k) const;
    // reduce stated absolute precision to at most n
    PadicNumber with_abs_prec(long n) const;

    bool same_to_precision(const PadicNumber& o) const { return (*this - o).is_zero(); }

    /// canonical digit expansion, e.g. "3+2*5+2*5^2+O(5^3)"
    std::string str() const;

private:
    long p_;
    Kind kind_;
    long v_;  // valuation (Unit) or absolute precision (InexactZero)
    long r_;  // relative precision (Unit only)
    BigInt u_;

    void canonicalize();
    friend PadicNumber add_impl(const PadicNumber& a, const PadicNumber& b, bool sub);
};

PadicNumber teichmuller(long residue, long p, long r);
PadicNumber teichmuller(const PadicNumber& x);

/// Iwasawa logarithm (log_p(p) = 0); input must be nonzero to precision.
PadicNumber padic_log(const PadicNumber& x);

/// least M with M - floor(log_p(M)) >= N; truncation bound for series
/// whose m-th term has valuation >= m - v_p(m)
long truncation_order(long target_abs_prec, long p);

inline constexpr long kDefaultRelPrec = 12;

}  // namespace qchab
