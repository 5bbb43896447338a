#include "qchab/series.hpp"

#include <algorithm>
#include <sstream>

namespace qchab {

LocalSeries LocalSeries::constant(const PadicNumber& c, long T, std::string param) {
    LocalSeries s(std::move(param), c.prime(), T);
    s.c_.push_back(c);
    s.trim();
    return s;
}

LocalSeries LocalSeries::monomial(const PadicNumber& c, long k, long T, std::string param) {
    LocalSeries s(std::move(param), c.prime(), T);
    s.lo_ = k;
    s.c_.push_back(c);
    s.trim();
    return s;
}

bool LocalSeries::is_zero() const {
    for (const auto& x : c_)
        if (!x.is_zero()) return false;
    return true;
}

PadicNumber LocalSeries::coeff(long deg) const {
    long i = deg - lo_;
    if (i < 0 || i >= (long)c_.size()) return PadicNumber::zero(p_);
    return c_[i];
}

void LocalSeries::set_coeff(long deg, const PadicNumber& x) {
    if (deg > T_) return;
    if (c_.empty()) {
        lo_ = deg;
        c_.push_back(x);
        return;
    }
    if (deg < lo_) {
        c_.insert(c_.begin(), lo_ - deg, PadicNumber::zero(p_));
        lo_ = deg;
        c_[0] = x;
        return;
    }
    long i = deg - lo_;
    if (i >= (long)c_.size()) c_.resize(i + 1, PadicNumber::zero(p_));
    c_[i] = x;
}

void LocalSeries::trim() {
    while (!c_.empty() && (long)c_.size() - 1 + lo_ > T_) c_.pop_back();
    size_t k = 0;
    while (k < c_.size() && c_[k].is_exact_zero()) ++k;
    if (k > 0) {
        c_.erase(c_.begin(), c_.begin() + k);
        lo_ += (long)k;
    }
    if (c_.empty()) lo_ = 0;
}

LocalSeries LocalSeries::operator+(const LocalSeries& o) const {
    LocalSeries r(param_, p_ ? p_ : o.p_, std::min(T_, o.T_));
    r.dom_min_ = std::max(dom_min_, o.dom_min_);
    long lo = std::min(c_.empty() ? o.lo_ : lo_, o.c_.empty() ? lo_ : o.lo_);
    r.lo_ = lo;
    long hi = r.T_;
    for (long d = lo; d <= hi; ++d) r.c_.push_back(coeff(d) + o.coeff(d));
    r.trim();
    return r;
}

LocalSeries LocalSeries::operator-(const LocalSeries& o) const { return *this + (-o); }

LocalSeries LocalSeries::operator-() const {
    LocalSeries r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

LocalSeries LocalSeries::scaled(const PadicNumber& s) const {
    LocalSeries r = *this;
    for (auto& x : r.c_) x = x * s;
    r.trim();
    return r;
}

LocalSeries mul_impl(const LocalSeries& a, const LocalSeries& b) {
    long p = a.p_ ? a.p_ : b.p_;
    // a valid mod t^{Ta+1}; product valid mod t^{min(Ta+lob, Tb+loa)+1}
    long T = std::min(a.T_ + b.lo_, b.T_ + a.lo_);
    T = std::min(T, std::min(a.T_, b.T_) + 1000000L);  // plain cap
    LocalSeries r(a.param_, p, T);
    r.dom_min_ = std::max(a.dom_min_, b.dom_min_);
    if (a.c_.empty() || b.c_.empty()) return r;
    r.lo_ = a.lo_ + b.lo_;
    long n = T - r.lo_ + 1;
    if (n <= 0) return r;
    r.c_.assign(n, PadicNumber::zero(p));
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_exact_zero()) continue;
        long imax = std::min((long)b.c_.size(), n - (long)i);
        for (long j = 0; j < imax; ++j) {
            if (b.c_[j].is_exact_zero()) continue;
            r.c_[i + j] += a.c_[i] * b.c_[j];
        }
    }
    r.trim();
    return r;
}

LocalSeries LocalSeries::operator*(const LocalSeries& o) const { return mul_impl(*this, o); }

LocalSeries LocalSeries::inverse() const {
    if (c_.empty() || c_[0].is_zero())
        throw SingularToPrecision("series inverse: leading coefficient not a unit");
    long n = T_ - lo_ + 1;
    LocalSeries r(param_, p_, T_ - 2 * lo_);
    r.lo_ = -lo_;
    r.c_.assign(n, PadicNumber::zero(p_));
    PadicNumber inv0 = c_[0].inverse();
    r.c_[0] = inv0;
    for (long k = 1; k < n; ++k) {
        PadicNumber s = PadicNumber::zero(p_);
        long jmax = std::min<long>(k, (long)c_.size() - 1);
        for (long j = 1; j <= jmax; ++j) s += c_[j] * r.c_[k - j];
        r.c_[k] = -(inv0 * s);
    }
    r.trim();
    return r;
}

LocalSeries LocalSeries::derivative() const {
    LocalSeries r(param_, p_, T_ - 1);
    r.dom_min_ = dom_min_;
    if (c_.empty()) return r;
    r.lo_ = lo_ - 1;
    for (size_t i = 0; i < c_.size(); ++i) {
        long m = lo_ + (long)i;
        r.c_.push_back(c_[i] * PadicNumber::from_integer(m, p_, c_[i].is_zero() ? kDefaultRelPrec : c_[i].rel_prec() + 4));
    }
    r.trim();
    return r;
}

LocalSeries LocalSeries::antiderivative() const {
    LocalSeries r(param_, p_, T_ + 1);
    r.dom_min_ = dom_min_;
    if (c_.empty()) return r;
    r.lo_ = lo_ + 1;
    for (size_t i = 0; i < c_.size(); ++i) {
        long m = lo_ + (long)i;
        if (m == -1) {
            if (!c_[i].is_zero())
                throw DomainError("antiderivative: nonzero residue (t^-1 term) — log unsupported");
            r.c_.push_back(PadicNumber::zero(p_));
            continue;
        }
        r.c_.push_back(c_[i] / PadicNumber::from_integer(m + 1, p_, std::max<long>(c_[i].rel_prec(), kDefaultRelPrec) + 4));
    }
    r.trim();
    return r;
}

LocalSeries LocalSeries::compose(const LocalSeries& inner) const {
    if (!inner.c_.empty() && inner.lo_ < 1)
        throw DomainError("compose: inner series must have zero constant term");
    if (lo_ < 0) throw DomainError("compose: use compose_laurent for polar outer series");
    long T = std::min(T_ * std::max(inner.lo_, 1L), inner.T_);
    LocalSeries acc = LocalSeries::zero(p_, T, inner.param_);
    // Horner from the top coefficient down
    for (long d = T_; d >= lo_; --d) {
        acc = acc * inner;
        PadicNumber cd = coeff(d);
        if (!cd.is_exact_zero()) acc += LocalSeries::constant(cd, T, inner.param_);
    }
    if (lo_ > 0) acc = acc * inner.pow(lo_);
    return acc;
}

LocalSeries LocalSeries::rescale(const PadicNumber& s) const {
    LocalSeries r = *this;
    for (size_t i = 0; i < r.c_.size(); ++i) {
        long m = lo_ + (long)i;
        r.c_[i] = r.c_[i] * s.pow(m);
    }
    r.trim();
    return r;
}

LocalSeries LocalSeries::truncated(long T) const {
    LocalSeries r = *this;
    r.T_ = std::min(T_, T);
    r.trim();
    return r;
}

LocalSeries LocalSeries::with_truncation(long T) const {
    LocalSeries r = *this;
    r.T_ = T;
    r.trim();
    return r;
}

LocalSeries LocalSeries::regular_part() const {
    LocalSeries r(param_, p_, T_);
    r.dom_min_ = dom_min_;
    for (long d = std::max(0L, lo_); d <= T_; ++d) r.set_coeff(d, coeff(d));
    r.trim();
    return r;
}

LocalSeries LocalSeries::polar_part() const {
    LocalSeries r(param_, p_, T_);
    r.dom_min_ = dom_min_;
    for (long d = lo_; d < 0; ++d) r.set_coeff(d, coeff(d));
    r.trim();
    return r;
}

LocalSeries LocalSeries::shifted(long k) const {
    LocalSeries r = *this;
    r.lo_ += k;
    r.T_ += k;
    return r;
}

PadicNumber LocalSeries::eval(const PadicNumber& t0) const {
    if (c_.empty()) return PadicNumber::zero_to_prec(p_, T_ + 1);
    if (!t0.is_zero() && t0.valuation() < dom_min_)
        throw DomainError("eval outside admissible domain");
    if (t0.is_zero()) {
        if (lo_ < 0 && !polar_part().is_zero())
            throw DomainError("eval of polar series at 0");
        return coeff(0);
    }
    PadicNumber acc = PadicNumber::zero(p_);
    for (long i = (long)c_.size() - 1; i >= 0; --i) acc = acc * t0 + c_[i];
    return acc * t0.pow(lo_);
}

LocalSeries LocalSeries::pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    LocalSeries r = LocalSeries::constant(PadicNumber::one(p_, 64), T_, param_);
    LocalSeries b = *this;
    long e = n;
    bool started = false;
    LocalSeries acc;
    while (e) {
        if (e & 1) {
            acc = started ? acc * b : b;
            started = true;
        }
        e >>= 1;
        if (e) b = b * b;
    }
    return started ? acc : r;
}

LocalSeries LocalSeries::log1() const {
    if (lo_ != 0 || c_.empty() || !(coeff(0) - PadicNumber::one(p_, 1)).is_zero())
        throw DomainError("log1 needs constant term 1");
    LocalSeries m = *this - LocalSeries::constant(PadicNumber::one(p_, coeff(0).rel_prec()), T_, param_);
    LocalSeries acc = LocalSeries::zero(p_, T_, param_);
    LocalSeries mk = m;
    long kmax = m.is_zero() ? 0 : T_ / std::max(1L, m.lo_);
    for (long k = 1; k <= kmax; ++k) {
        PadicNumber kk = PadicNumber::from_integer(k, p_, 2 * kDefaultRelPrec + 8);
        acc += mk.scaled(kk.inverse().pow(1) * PadicNumber::from_integer(k % 2 ? 1 : -1, p_, 2 * kDefaultRelPrec + 8));
        if (k < kmax) mk = mk * m;
    }
    return acc;
}

LocalSeries LocalSeries::sqrt_with_initial(const PadicNumber& y0) const {
    if ((y0 * y0 - coeff(0)).is_zero() == false)
        throw DomainError("sqrt_with_initial: y0^2 != constant term");
    // Newton: y <- (y + f/y)/2
    PadicNumber half = PadicNumber::from_integer(2, p_, y0.rel_prec() + 4).inverse();
    LocalSeries y = LocalSeries::constant(y0, 0, param_);
    long cur = 0;
    while (cur < T_) {
        cur = std::min(2 * cur + 1, T_);
        LocalSeries yt = y.with_truncation(cur);
        y = (yt + (this->truncated(cur) * yt.inverse())).scaled(half).with_truncation(cur);
    }
    return y.with_truncation(T_);
}

std::string LocalSeries::str(long max_terms) const {
    std::ostringstream os;
    long shown = 0;
    for (long d = lo_; d <= T_ && shown < max_terms; ++d) {
        PadicNumber x = coeff(d);
        if (x.is_exact_zero()) continue;
        if (shown) os << " + ";
        os << "(" << x.str() << ")*" << param_ << "^" << d;
        ++shown;
    }
    if (!shown) os << "0";
    os << " + O(" << param_ << "^" << (T_ + 1) << ")";
    return os.str();
}

}  // namespace qchab
