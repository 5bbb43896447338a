#include "qchab/derham.hpp"

#include <algorithm>
#include <cmath>

namespace qchab {

XPoly XPoly::from_coeffs(long p, std::vector<PadicNumber> cs) {
    XPoly r(p);
    r.c = std::move(cs);
    r.trim();
    return r;
}

long XPoly::degree() const {
    for (long i = (long)c.size() - 1; i >= 0; --i)
        if (!c[i].is_exact_zero()) return i;
    return -1;
}

bool XPoly::is_zero() const {
    for (const auto& x : c)
        if (!x.is_zero()) return false;
    return true;
}

PadicNumber XPoly::coeff(long i) const {
    if (i < 0 || i >= (long)c.size()) return PadicNumber::zero(p);
    return c[i];
}

void XPoly::set(long i, const PadicNumber& x) {
    if (i >= (long)c.size()) c.resize(i + 1, PadicNumber::zero(p));
    c[i] = x;
}

void XPoly::trim() {
    while (!c.empty() && c.back().is_exact_zero()) c.pop_back();
}

XPoly XPoly::operator+(const XPoly& o) const {
    XPoly r(p ? p : o.p);
    r.c.resize(std::max(c.size(), o.c.size()), PadicNumber::zero(r.p));
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = coeff((long)i) + o.coeff((long)i);
    r.trim();
    return r;
}

XPoly XPoly::operator-(const XPoly& o) const {
    XPoly r(p ? p : o.p);
    r.c.resize(std::max(c.size(), o.c.size()), PadicNumber::zero(r.p));
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = coeff((long)i) - o.coeff((long)i);
    r.trim();
    return r;
}

XPoly XPoly::operator*(const XPoly& o) const {
    XPoly r(p ? p : o.p);
    if (c.empty() || o.c.empty()) return r;
    r.c.assign(c.size() + o.c.size() - 1, PadicNumber::zero(r.p));
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i].is_exact_zero()) continue;
        for (size_t j = 0; j < o.c.size(); ++j) {
            if (o.c[j].is_exact_zero()) continue;
            r.c[i + j] += c[i] * o.c[j];
        }
    }
    r.trim();
    return r;
}

XPoly XPoly::scaled(const PadicNumber& s) const {
    XPoly r = *this;
    for (auto& x : r.c) x = x * s;
    r.trim();
    return r;
}

XPoly XPoly::derivative() const {
    XPoly r(p);
    for (size_t i = 1; i < c.size(); ++i)
        r.c.push_back(c[i] *
                      PadicNumber::from_integer((long)i, p, std::max<long>(c[i].rel_prec(), kDefaultRelPrec) + 2));
    r.trim();
    return r;
}

XPoly XPoly::antiderivative() const {
    XPoly r(p);
    r.c.push_back(PadicNumber::zero(p));
    for (size_t i = 0; i < c.size(); ++i)
        r.c.push_back(c[i] /
                      PadicNumber::from_integer((long)i + 1, p, std::max<long>(c[i].rel_prec(), kDefaultRelPrec) + 4));
    r.trim();
    return r;
}

PadicNumber XPoly::eval(const PadicNumber& x) const {
    PadicNumber acc = PadicNumber::zero(p);
    for (long i = (long)c.size() - 1; i >= 0; --i) acc = acc * x + c[i];
    return acc;
}

LocalSeries XPoly::eval_series(const LocalSeries& xs, long T) const {
    LocalSeries acc = LocalSeries::zero(p, T, xs.param());
    for (long i = (long)c.size() - 1; i >= 0; --i) {
        acc = (acc * xs).truncated(T);
        if (!c[i].is_exact_zero()) acc += LocalSeries::constant(c[i], T, xs.param());
    }
    return acc;
}

void OddForm::add(long j, const XPoly& P) {
    if (P.c.empty()) return;
    auto it = level.find(j);
    if (it == level.end())
        level[j] = P;
    else
        it->second = it->second + P;
    if (!p) p = P.p;
}

void EvenForm::add(long s, const XPoly& Q) {
    if (Q.c.empty()) return;
    auto it = level.find(s);
    if (it == level.end())
        level[s] = Q;
    else
        it->second = it->second + Q;
    if (!p) p = Q.p;
}

void OddFn::add(long j, const XPoly& C) {
    if (C.c.empty()) return;
    auto it = level.find(j);
    if (it == level.end())
        level[j] = C;
    else
        it->second = it->second + C;
    if (!p) p = C.p;
}

void EvenFn::add(long s, const XPoly& D) {
    if (D.c.empty()) return;
    auto it = level.find(s);
    if (it == level.end())
        level[s] = D;
    else
        it->second = it->second + D;
    if (!p) p = D.p;
}

PadicNumber OddFn::eval(const PadicNumber& x, const PadicNumber& y) const {
    PadicNumber acc = PadicNumber::zero(p);
    for (const auto& [j, C] : level) acc += C.eval(x) * y.pow(1 - 2 * j);
    return acc;
}

LocalSeries OddFn::eval_series(const LocalSeries& xs, const LocalSeries& ys, long T) const {
    LocalSeries acc = LocalSeries::zero(p, T, xs.param());
    LocalSeries yinv = ys.inverse();
    for (const auto& [j, C] : level) {
        LocalSeries w = C.eval_series(xs, T + 3 * std::abs(1 - 2 * j) + 8);
        long e = 1 - 2 * j;
        LocalSeries ypow = e >= 0 ? ys.pow(e) : yinv.pow(-e);
        acc += (w * ypow).truncated(T);
    }
    return acc;
}

PadicNumber EvenFn::eval(const PadicNumber& x, const PadicNumber& fx) const {
    PadicNumber acc = PadicNumber::zero(p);
    for (const auto& [s, D] : level) acc += D.eval(x) * fx.pow(-s);
    return acc;
}

LocalSeries EvenFn::eval_series(const LocalSeries& xs, const LocalSeries& ys, long T) const {
    LocalSeries acc = LocalSeries::zero(p, T, xs.param());
    LocalSeries f = ys * ys;  // f(x(t)) = y(t)^2 on the curve
    LocalSeries finv = f.inverse();
    for (const auto& [s, D] : level) {
        LocalSeries w = D.eval_series(xs, T + 6 * std::abs(s) + 8);
        LocalSeries fpow = s >= 0 ? finv.pow(s) : f.pow(-s);
        acc += (w * fpow).truncated(T);
    }
    return acc;
}

OddForm OddFn::differential(const CurveRing& R) const {
    // d(C y^{1-2j}) = [C' y^{1-2j} + (1-2j)/2 C f' y^{-1-2j}] dx
    OddForm out;
    out.p = p;
    long r = R.rel_prec();
    for (const auto& [j, C] : level) {
        XPoly Cp = C.derivative();
        if (!Cp.c.empty()) {
            if (j >= 1)
                out.add(j - 1, Cp);
            else
                out.add(0, Cp * R.f());  // y^{+1} = f / y
        }
        PadicNumber half = PadicNumber::from_rational(BigRat(1 - 2 * j, 2), R.prime(), r);
        out.add(j, (C * R.fprime()).scaled(half));
    }
    return out;
}

EvenForm mul(const OddFn& h, const OddForm& w) {
    // y^{1-2j} y^{-(2k+1)} = f^{-(j+k)}
    EvenForm out;
    out.p = h.p ? h.p : w.p;
    for (const auto& [j, C] : h.level)
        for (const auto& [k, P] : w.level) out.add(j + k, C * P);
    return out;
}

OddForm mul_even_fn_odd_form(const EvenFn& h, const OddForm& w) {
    OddForm out;
    out.p = h.p ? h.p : w.p;
    for (const auto& [s, D] : h.level)
        for (const auto& [k, P] : w.level) out.add(s + k, D * P);
    return out;
}

OddForm mul(const OddFn& h, const EvenForm& w, const XPoly& f) {
    // y^{1-2j} f^{-s} dx = y^{-(2(j+s)-1)} dx; j+s = 0 folds through y = f/y
    OddForm out;
    out.p = h.p ? h.p : w.p;
    for (const auto& [j, C] : h.level)
        for (const auto& [s, Q] : w.level) {
            long m = j + s - 1;
            if (m >= 0)
                out.add(m, C * Q);
            else
                out.add(0, C * Q * f);
        }
    return out;
}

EvenFn mul(const OddFn& a, const OddFn& b, const XPoly& f) {
    // y^{1-2j} y^{1-2k} = f^{1-(j+k)}
    EvenFn out;
    out.p = a.p ? a.p : b.p;
    for (const auto& [j, C] : a.level)
        for (const auto& [k, D] : b.level) {
            long s = j + k - 1;
            if (s >= 0)
                out.add(s, C * D);
            else
                out.add(0, C * D * f);
        }
    return out;
}

OddForm scale(const OddForm& w, const PadicNumber& c) {
    OddForm out;
    out.p = w.p;
    for (const auto& [j, P] : w.level) out.add(j, P.scaled(c));
    return out;
}

CurveRing::CurveRing(const WeierstrassCurve& E, long rel_prec)
    : E_(E), p_(E.prime()), r_(rel_prec) {
    f_ = XPoly(p_);
    f_.set(0, E.a6p(r_));
    f_.set(1, E.a4p(r_));
    f_.set(3, PadicNumber::from_integer(1, p_, r_));
    fp_ = XPoly(p_);
    fp_.set(0, E.a4p(r_));
    fp_.set(2, PadicNumber::from_integer(3, p_, r_));
    // exact Bezout pair: u0 f + v0 f' = 1, deg u0 <= 1, deg v0 <= 2
    BigRat a(E.a4()), b(E.a6());
    BigRat u1, u0c, v2, v1, v0c;
    if (a != 0) {
        BigRat D = -(4 * a * a * a + 27 * b * b);
        u1 = 18 * a / D;
        u0c = -3 * b * u1 / (2 * a);
        v2 = -u1 / 3;
        v1 = -u0c / 3;
        v0c = -2 * a * u1 / 9;
    } else {
        u1 = 0;
        u0c = BigRat(1) / b;
        v2 = 0;
        v1 = BigRat(-1) / (3 * b);
        v0c = 0;
    }
    u0_ = XPoly(p_);
    u0_.set(0, PadicNumber::from_rational(u0c, p_, r_));
    u0_.set(1, PadicNumber::from_rational(u1, p_, r_));
    v0_ = XPoly(p_);
    v0_.set(0, PadicNumber::from_rational(v0c, p_, r_));
    v0_.set(1, PadicNumber::from_rational(v1, p_, r_));
    v0_.set(2, PadicNumber::from_rational(v2, p_, r_));
    XPoly check = u0_ * f_ + v0_ * fp_;
    PadicNumber c0 = check.coeff(0) - PadicNumber::from_integer(1, p_, r_);
    bool ok = c0.is_zero();
    for (long i = 1; i <= check.degree(); ++i) ok = ok && check.coeff(i).is_zero();
    if (!ok) throw DomainError("CurveRing: Bezout identity failed");
}

void CurveRing::divmod_f(const XPoly& A, XPoly& q, XPoly& rem) const {
    q = XPoly(p_);
    rem = A;
    long d;
    while ((d = rem.degree()) >= 3) {
        PadicNumber lead = rem.coeff(d);
        q.set(d - 3, q.coeff(d - 3) + lead);
        rem.set(d, PadicNumber::zero(p_));
        rem.set(d - 2, rem.coeff(d - 2) - lead * f_.coeff(1));
        rem.set(d - 3, rem.coeff(d - 3) - lead * f_.coeff(0));
        rem.trim();
    }
    q.trim();
}

OddReduction mw_reduce(const CurveRing& R, OddForm form) {
    long p = R.prime();
    long r = R.rel_prec();
    OddReduction out;
    out.primitive.p = p;
    out.c_alpha = PadicNumber::zero(p);
    out.c_beta = PadicNumber::zero(p);
    while (!form.level.empty()) {
        auto it = std::prev(form.level.end());
        long j = it->first;
        if (j < 1) break;
        XPoly P = it->second;
        form.level.erase(it);
        if (P.is_zero()) continue;
        XPoly q, V;
        R.divmod_f(R.bezout_v() * P, q, V);
        XPoly U = R.bezout_u() * P + q * R.fprime();
        PadicNumber den = PadicNumber::from_integer(2 * j - 1, p, r);
        PadicNumber two = PadicNumber::from_integer(2, p, r);
        // P y^{-2j-1} dx = [U + 2V'/(2j-1)] y^{1-2j} dx + d( -2/(2j-1) V y^{1-2j} )
        form.add(j - 1, U + V.derivative().scaled(two / den));
        out.primitive.add(j, V.scaled(-(two / den)));
    }
    XPoly P0 = form.level.count(0) ? form.level[0] : XPoly(p);
    long d;
    while ((d = P0.degree()) >= 2) {
        PadicNumber a = P0.coeff(d);
        PadicNumber den = PadicNumber::from_rational(BigRat(2 * d - 1, 2), p, r);
        P0.set(d, PadicNumber::zero(p));
        PadicNumber c1 = PadicNumber::from_rational(BigRat(2 * d - 3, 2), p, r) * R.curve().a4p(r);
        PadicNumber c2 = PadicNumber::from_integer(d - 2, p, r) * R.curve().a6p(r);
        P0.set(d - 2, P0.coeff(d - 2) - a * c1 / den);
        if (d >= 3) P0.set(d - 3, P0.coeff(d - 3) - a * c2 / den);
        XPoly mono(p);
        mono.set(d - 2, a / den);
        out.primitive.add(0, mono);
        P0.trim();
    }
    out.c_alpha = P0.coeff(0);
    out.c_beta = P0.coeff(1);
    return out;
}

EvenReduction even_reduce(const CurveRing& R, EvenForm form) {
    long p = R.prime();
    long r = R.rel_prec();
    EvenReduction out;
    out.primitive.p = p;
    out.dlog_coeff = PadicNumber::zero(p);
    out.rho = XPoly(p);
    while (!form.level.empty()) {
        auto it = std::prev(form.level.end());
        long s = it->first;
        XPoly Q = it->second;
        form.level.erase(it);
        if (Q.is_zero()) continue;
        if (s >= 2) {
            XPoly q, V;
            R.divmod_f(R.bezout_v() * Q, q, V);
            XPoly U = R.bezout_u() * Q + q * R.fprime();
            PadicNumber den = PadicNumber::from_integer(s - 1, p, r);
            form.add(s - 1, U + V.derivative().scaled(den.inverse()));
            out.primitive.add(s - 1, V.scaled(-(den.inverse())));
        } else if (s == 1) {
            XPoly q, rem;
            R.divmod_f(Q, q, rem);
            form.add(0, q);
            PadicNumber c = rem.coeff(2) / PadicNumber::from_integer(3, p, r);
            out.dlog_coeff += c;
            XPoly rho = rem - R.fprime().scaled(c);
            rho.trim();
            out.rho = out.rho + rho;
        } else {
            out.primitive.add(0, Q.antiderivative());
        }
    }
    return out;
}

FrobeniusLift frobenius_lift(const WeierstrassCurve& E, long working_prec, long r) {
    long p = E.prime();
    FrobeniusLift lift;
    lift.K = working_prec;
    BigInt a4 = E.a4(), a6 = E.a6();
    std::vector<BigInt> fxp(3 * p + 1, 0);
    fxp[3 * p] = 1;
    fxp[p] += a4;
    fxp[0] += a6;
    auto polymul = [](const std::vector<BigInt>& A, const std::vector<BigInt>& B) {
        std::vector<BigInt> C(A.size() + B.size() - 1, 0);
        for (size_t i = 0; i < A.size(); ++i) {
            if (A[i] == 0) continue;
            for (size_t j = 0; j < B.size(); ++j) C[i + j] += A[i] * B[j];
        }
        return C;
    };
    std::vector<BigInt> base{a6, a4, 0, 1};
    std::vector<BigInt> acc{1};
    long e = p;
    while (e) {
        if (e & 1) acc = polymul(acc, base);
        e >>= 1;
        if (e) base = polymul(base, base);
    }
    std::vector<BigInt> Dint(std::max(fxp.size(), acc.size()), 0);
    for (size_t i = 0; i < fxp.size(); ++i) Dint[i] += fxp[i];
    for (size_t i = 0; i < acc.size(); ++i) Dint[i] -= acc[i];
    lift.D = XPoly(p);
    for (size_t i = 0; i < Dint.size(); ++i)
        if (Dint[i] != 0) lift.D.set((long)i, PadicNumber::from_integer(Dint[i], p, r));
    // (-1/2 choose k) = (-1/4)^k C(2k,k), p-integral for odd p
    BigRat cur = 1;
    for (long k = 0; k <= lift.K; ++k) {
        lift.binom.push_back(PadicNumber::from_rational(cur, p, r));
        cur = cur * BigRat(-(2 * k + 1), 2 * (k + 1));
    }
    return lift;
}

// Worst-case cumulative valuation of the denominators met along the reduction
// chains: 2j-1 down the pole levels, 2d-1 down the degree strip.  Intermediate
// values can dip this far below their final size; the working relative
// precision must absorb the swing.
static long division_valuation_budget(long p, long jmax, long dmax) {
    long s = 0;
    for (long j = 1; j <= jmax; ++j) {
        long m = 2 * j - 1;
        while (m % p == 0) {
            ++s;
            m /= p;
        }
    }
    for (long d = 2; d <= dmax; ++d) {
        long m = 2 * d - 1;
        while (m % p == 0) {
            ++s;
            m /= p;
        }
    }
    return s;
}

FrobeniusData frobenius_matrix(const WeierstrassCurve& E, long target_prec) {
    long p = E.prime();
    long guard = 10;
    long Nw = target_prec + guard;
    long K = Nw;
    long jmax = (p - 1) / 2 + p * K;
    long dmax = 3 * p * (K + 2);
    long r = Nw + division_valuation_budget(p, jmax, dmax) + 10;
    CurveRing R(E, r);
    FrobeniusLift lift = frobenius_lift(E, Nw, r);

    OddForm phi_alpha;
    phi_alpha.p = p;
    XPoly Dk(p);
    Dk.set(0, PadicNumber::from_integer(1, p, r));
    XPoly pxp(p);
    pxp.set(p - 1, PadicNumber::from_integer(p, p, r));
    for (long k = 0; k <= lift.K; ++k) {
        XPoly term = (Dk * pxp).scaled(lift.binom[k]);
        phi_alpha.add((p - 1) / 2 + p * k, term);
        if (k < lift.K) Dk = Dk * lift.D;
    }
    OddForm phi_beta;
    phi_beta.p = p;
    XPoly xp(p);
    xp.set(p, PadicNumber::from_integer(1, p, r));
    for (const auto& [j, P] : phi_alpha.level) phi_beta.add(j, P * xp);

    OddReduction ra = mw_reduce(R, phi_alpha);
    OddReduction rb = mw_reduce(R, phi_beta);

    FrobeniusData out;
    out.p = p;
    out.K = lift.K;
    out.working_prec = Nw;
    out.F = PadicMatrix(2, 2, p);
    out.F.at(0, 0) = ra.c_alpha;
    out.F.at(1, 0) = ra.c_beta;
    out.F.at(0, 1) = rb.c_alpha;
    out.F.at(1, 1) = rb.c_beta;
    out.h_alpha = ra.primitive;
    out.h_beta = rb.primitive;
    out.phi_alpha = phi_alpha;
    out.phi_beta = phi_beta;

    long ap = point_count_ap(E);
    PadicNumber tr = out.F.trace() - PadicNumber::from_integer(ap, p, r);
    PadicNumber dt = out.F.det2() - PadicNumber::from_integer(p, p, r);
    out.trace_agree_prec = tr.is_zero() ? tr.abs_prec() : tr.valuation();
    long dv = dt.is_zero() ? dt.abs_prec() : dt.valuation();
    out.achieved_prec = std::min({out.F.at(0, 0).abs_prec(), out.F.at(1, 0).abs_prec(),
                                  out.F.at(0, 1).abs_prec(), out.F.at(1, 1).abs_prec(),
                                  out.trace_agree_prec, dv});
    long delta = 2 + (long)(std::log((double)std::max(target_prec, 2L)) / std::log((double)p));
    if (out.achieved_prec < target_prec - delta)
        throw PrecisionExhausted("frobenius_matrix: achieved precision below target");
    return out;
}

}  // namespace qchab
