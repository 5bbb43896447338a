#pragma once

#include <string>
#include <vector>

#include "qchab/padic.hpp"

namespace qchab {

/** Truncated one-variable series over PadicNumber, Laurent tails allowed.
 *
 * Represents sum_{i} c[i] * t^{lo+i}, valid modulo t^{T+1}.  The intended
 * evaluation domain is v(t) >= dom_min (default 1), so truncation at T
 * controls the p-adic tail by the usual m - v_p(m) bound.
 */
class LocalSeries {
public:
    LocalSeries() : p_(0), lo_(0), T_(-1), dom_min_(1) {}
    LocalSeries(std::string param, long p, long T)
        : param_(std::move(param)), p_(p), lo_(0), T_(T), dom_min_(1) {}

    static LocalSeries zero(long p, long T, std::string param = "t") {
        return LocalSeries(std::move(param), p, T);
    }
    static LocalSeries constant(const PadicNumber& c, long T, std::string param = "t");
    // c * t^k
    static LocalSeries monomial(const PadicNumber& c, long k, long T, std::string param = "t");

    const std::string& param() const { return param_; }
    long prime() const { return p_; }
    long low_degree() const { return lo_; }
    long truncation() const { return T_; }
    long domain_min_valuation() const { return dom_min_; }
    void set_domain_min(long d) { dom_min_ = d; }
    void set_param(std::string s) { param_ = std::move(s); }

    bool is_zero() const;

    PadicNumber coeff(long deg) const;
    void set_coeff(long deg, const PadicNumber& c);

    LocalSeries operator+(const LocalSeries& o) const;
    LocalSeries operator-(const LocalSeries& o) const;
    LocalSeries operator*(const LocalSeries& o) const;
    LocalSeries operator-() const;
    LocalSeries scaled(const PadicNumber& c) const;
    LocalSeries& operator+=(const LocalSeries& o) { return *this = *this + o; }
    LocalSeries& operator-=(const LocalSeries& o) { return *this = *this - o; }

    // multiplicative inverse; leading coefficient must be a unit to precision
    LocalSeries inverse() const;
    LocalSeries derivative() const;
    // termwise c_m t^m -> c_m/(m+1) t^{m+1}; throws on a t^{-1} term visible
    // at current precision (nonzero residue would need a log term)
    LocalSeries antiderivative() const;
    // composition; inner series must have low degree >= 1
    LocalSeries compose(const LocalSeries& inner) const;
    // substitute t -> c*t
    LocalSeries rescale(const PadicNumber& c) const;
    LocalSeries truncated(long T) const;
    // restate validity to exactly T (used by Newton loops whose iterate is
    // known correct to a higher order than the operands carried)
    LocalSeries with_truncation(long T) const;
    // drop terms of degree < 0
    LocalSeries regular_part() const;
    LocalSeries polar_part() const;
    LocalSeries shifted(long k) const;  // multiply by t^k

    PadicNumber eval(const PadicNumber& t0) const;
    // pow for small nonnegative exponents
    LocalSeries pow(long n) const;

    // series log of a unit series with constant term 1
    LocalSeries log1() const;
    // series square root with given leading: solves s^2 = this,
    // s(0) given by y0 (constant term must be a square consistent with y0)
    LocalSeries sqrt_with_initial(const PadicNumber& y0) const;

    std::string str(long max_terms = 12) const;

private:
    std::string param_;
    long p_;
    long lo_;
    long T_;        // valid modulo t^{T+1}
    long dom_min_;  // admissible v(t)
    std::vector<PadicNumber> c_;

    void trim();
    friend LocalSeries mul_impl(const LocalSeries& a, const LocalSeries& b);
};

}  // namespace qchab
