#include "qchab/curve.hpp"

#include <algorithm>

#include "qchab/hensel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qchab {

static bool is_prime_long(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

WeierstrassCurve::WeierstrassCurve(BigInt a4, BigInt a6, long p, long prec)
    : a4_(std::move(a4)), a6_(std::move(a6)), p_(p), N_(prec) {
    disc_ = -16 * (4 * a4_ * a4_ * a4_ + 27 * a6_ * a6_);
    if (disc_ == 0) throw DomainError("singular curve: discriminant is zero");
    if (p_ < 5 || !is_prime_long(p_)) throw DomainError("prime must be >= 5");
    if (disc_ % p_ == 0) throw DomainError("bad reduction at p");
    if (N_ < 1) throw DomainError("precision must be >= 1");
}

PadicNumber WeierstrassCurve::f_eval(const PadicNumber& x) const {
    long r = std::max<long>(x.rel_prec(), N_) + 2;
    return ((x * x + a4p(r)) * x) + a6p(r);
}

PadicNumber WeierstrassCurve::fprime_eval(const PadicNumber& x) const {
    long r = std::max<long>(x.rel_prec(), N_) + 2;
    return x * x * PadicNumber::from_integer(3, p_, r) + a4p(r);
}

BigRat WeierstrassCurve::f_eval_exact(const BigRat& x) const {
    return x * x * x + BigRat(a4_) * x + BigRat(a6_);
}

BigRat ModelTransform::to_short_x(const BigRat& x) const { return 36 * x + 3 * BigRat(b2); }
BigRat ModelTransform::to_short_y(const BigRat& x, const BigRat& y) const {
    return 108 * (2 * y + BigRat(a1) * x + BigRat(a3));
}
BigRat ModelTransform::from_short_x(const BigRat& X) const { return (X - 3 * BigRat(b2)) / 36; }
BigRat ModelTransform::from_short_y(const BigRat& X, const BigRat& Y) const {
    BigRat x = from_short_x(X);
    return (Y / 108 - BigRat(a1) * x - BigRat(a3)) / 2;
}

ModelTransform normalize_model(const BigInt& a1, const BigInt& a2, const BigInt& a3,
                               const BigInt& a4, const BigInt& a6, BigInt& A4_out, BigInt& A6_out) {
    ModelTransform t{a1, a2, a3, a4, a6, 0};
    BigInt b2 = a1 * a1 + 4 * a2;
    BigInt b4 = 2 * a4 + a1 * a3;
    BigInt b6 = a3 * a3 + 4 * a6;
    BigInt c4 = b2 * b2 - 24 * b4;
    BigInt c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
    t.b2 = b2;
    A4_out = -27 * c4;
    A6_out = -54 * c6;
    return t;
}

bool on_curve_exact(const WeierstrassCurve& E, const ExactPoint& P) {
    if (P.infinity) return true;
    return P.y * P.y == E.f_eval_exact(P.x);
}

ExactPoint exact_neg(const ExactPoint& P) {
    if (P.infinity) return P;
    return ExactPoint::make(P.x, -P.y);
}

ExactPoint exact_add(const WeierstrassCurve& E, const ExactPoint& P, const ExactPoint& Q) {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    BigRat lambda;
    if (P.x == Q.x) {
        if (P.y == -Q.y) return ExactPoint::infty();
        lambda = (3 * P.x * P.x + BigRat(E.a4())) / (2 * P.y);
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    BigRat x3 = lambda * lambda - P.x - Q.x;
    BigRat y3 = lambda * (P.x - x3) - P.y;
    return ExactPoint::make(x3, y3);
}

ExactPoint exact_mul(const WeierstrassCurve& E, BigInt m, const ExactPoint& P) {
    ExactPoint base = P;
    if (m < 0) {
        base = exact_neg(base);
        m = -m;
    }
    ExactPoint acc = ExactPoint::infty();
    while (m > 0) {
        if ((m & 1) != 0) acc = exact_add(E, acc, base);
        base = exact_add(E, base, base);
        m >>= 1;
    }
    return acc;
}

CurvePoint CurvePoint::from_exact(const WeierstrassCurve& E, const ExactPoint& P, long r) {
    if (P.infinity) return infty();
    return make(PadicNumber::from_rational(P.x, E.prime(), r),
                PadicNumber::from_rational(P.y, E.prime(), r));
}

bool on_curve(const WeierstrassCurve& E, const CurvePoint& P) {
    if (P.infinity) return true;
    return (P.y * P.y - E.f_eval(P.x)).is_zero();
}

CurvePoint padic_neg(const CurvePoint& P) {
    if (P.infinity) return P;
    return CurvePoint::make(P.x, -P.y);
}

CurvePoint padic_add(const WeierstrassCurve& E, const CurvePoint& P, const CurvePoint& Q) {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    PadicNumber lambda;
    if ((P.x - Q.x).is_zero()) {
        if ((P.y + Q.y).is_zero()) return CurvePoint::infty();
        lambda = E.fprime_eval(P.x) / (P.y + P.y);
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    PadicNumber x3 = lambda * lambda - P.x - Q.x;
    PadicNumber y3 = lambda * (P.x - x3) - P.y;
    return CurvePoint::make(x3, y3);
}

CurvePoint padic_mul(const WeierstrassCurve& E, long m, const CurvePoint& P) {
    CurvePoint base = P;
    if (m < 0) {
        base = padic_neg(base);
        m = -m;
    }
    CurvePoint acc = CurvePoint::infty();
    while (m > 0) {
        if (m & 1) acc = padic_add(E, acc, base);
        base = padic_add(E, base, base);
        m >>= 1;
    }
    return acc;
}

std::string ResidueDisk::parameter() const {
    switch (kind) {
        case DiskKind::Generic: return "t = x - x_c";
        case DiskKind::TwoTorsion: return "t = y";
        default: return "t = -x/y";
    }
}

ResidueDisk reduce(const WeierstrassCurve& E, const CurvePoint& P) {
    if (P.infinity) return ResidueDisk{DiskKind::Infinity, 0, 0};
    long p = E.prime();
    if (P.x.is_zero() && P.y.is_zero())
        throw DomainError("reduce: coordinates vanish to precision");
    long vx = P.x.is_zero() ? P.x.abs_prec() : P.x.valuation();
    long vy = P.y.is_zero() ? P.y.abs_prec() : P.y.valuation();
    if (vx < 0 || vy < 0) {
        if (vx < 0 && vy < 0 && 3 * vx == 2 * vy) return ResidueDisk{DiskKind::Infinity, 0, 0};
        throw DomainError("reduce: negative valuation outside the infinity pattern");
    }
    long xb = (P.x.is_zero() || vx > 0) ? 0 : (long)(P.x.unit() % p);
    long yb = (P.y.is_zero() || vy > 0) ? 0 : (long)(P.y.unit() % p);
    return ResidueDisk{yb == 0 ? DiskKind::TwoTorsion : DiskKind::Generic, xb, yb};
}

std::vector<ResidueDisk> all_disks(const WeierstrassCurve& E) {
    long p = E.prime();
    std::vector<ResidueDisk> out;
    out.push_back(ResidueDisk{DiskKind::Infinity, 0, 0});
    long a4 = (long)(((E.a4() % p) + p) % p);
    long a6 = (long)(((E.a6() % p) + p) % p);
    std::vector<bool> issq(p, false);
    for (long y = 0; y < p; ++y) issq[(y * y) % p] = true;
    for (long x = 0; x < p; ++x) {
        long fx = ((x * x % p) * x % p + a4 * x % p + a6) % p;
        if (fx == 0) {
            out.push_back(ResidueDisk{DiskKind::TwoTorsion, x, 0});
        } else if (issq[fx]) {
            for (long y = 1; y < p; ++y)
                if (y * y % p == fx) out.push_back(ResidueDisk{DiskKind::Generic, x, y});
        }
    }
    return out;
}

CurvePoint disk_anchor(const WeierstrassCurve& E, const ResidueDisk& d, long r) {
    long p = E.prime();
    if (d.kind == DiskKind::Infinity) return CurvePoint::infty();
    if (d.kind == DiskKind::TwoTorsion) {
        std::vector<PadicNumber> f{E.a6p(r), E.a4p(r), PadicNumber::zero(p),
                                   PadicNumber::from_integer(1, p, r)};
        PadicNumber xw = hensel_root(f, PadicNumber::from_integer(d.xbar, p, r));
        return CurvePoint::make(xw, PadicNumber::zero(p));
    }
    PadicNumber xa = d.xbar == 0 ? PadicNumber::zero(p) : teichmuller(d.xbar, p, r);
    PadicNumber fx = E.f_eval(xa);
    std::vector<PadicNumber> g{-fx, PadicNumber::zero(p), PadicNumber::from_integer(1, p, r)};
    PadicNumber ya = hensel_root(g, PadicNumber::from_integer(d.ybar, p, r));
    return CurvePoint::make(xa, ya);
}

DiskExpansion local_expansion(const WeierstrassCurve& E, const ResidueDisk& d, long T, long r) {
    long p = E.prime();
    DiskExpansion ex;
    ex.disk = d;
    PadicNumber one = PadicNumber::from_integer(1, p, r);
    if (d.kind == DiskKind::Generic) {
        ex.origin = disk_anchor(E, d, r);
        LocalSeries x = LocalSeries::constant(ex.origin.x, T);
        x.set_coeff(1, one);
        LocalSeries fx = LocalSeries::constant(E.f_eval(ex.origin.x), T);
        fx.set_coeff(1, E.fprime_eval(ex.origin.x));
        fx.set_coeff(2, ex.origin.x * PadicNumber::from_integer(3, p, r));
        fx.set_coeff(3, one);
        LocalSeries y = fx.sqrt_with_initial(ex.origin.y);
        ex.x = x;
        ex.y = y;
        LocalSeries yinv = y.inverse();
        ex.alpha = yinv;  // dx = dt
        ex.beta = x * yinv;
        return ex;
    }
    if (d.kind == DiskKind::TwoTorsion) {
        ex.origin = disk_anchor(E, d, r);
        // solve f(x(t)) = t^2 with x(0) the 2-torsion root, by series Newton
        LocalSeries t2 = LocalSeries::monomial(one, 2, T);
        LocalSeries x = LocalSeries::constant(ex.origin.x, 0);
        PadicNumber three = PadicNumber::from_integer(3, p, r);
        long cur = 0;
        while (cur < T) {
            cur = std::min(2 * cur + 1, T);
            LocalSeries xt = x.with_truncation(cur);
            LocalSeries fx = ((xt * xt + LocalSeries::constant(E.a4p(r), cur)) * xt) +
                             LocalSeries::constant(E.a6p(r), cur);
            LocalSeries dfx = (xt * xt).scaled(three) + LocalSeries::constant(E.a4p(r), cur);
            x = (xt - (fx - t2.truncated(cur)) * dfx.inverse()).with_truncation(cur);
        }
        x = x.with_truncation(T);
        LocalSeries y = LocalSeries::monomial(one, 1, T);
        ex.x = x;
        ex.y = y;
        // dx/dt = 2t / f'(x(t)); alpha = (dx/dt)/y = 2/f'(x(t))
        LocalSeries dfx = (x * x).scaled(three) + LocalSeries::constant(E.a4p(r), T);
        LocalSeries alpha = dfx.inverse().scaled(PadicNumber::from_integer(2, p, r));
        ex.alpha = alpha;
        ex.beta = x * alpha;
        return ex;
    }
    // infinity: w = t^3 + a4 t w^2 + a6 w^3, then x = t/w, y = -1/w
    ex.origin = CurvePoint::infty();
    long Tw = T + 4;
    PadicNumber a4 = E.a4p(r), a6 = E.a6p(r);
    LocalSeries w = LocalSeries::monomial(one, 3, 3);
    LocalSeries t1 = LocalSeries::monomial(one, 1, Tw);
    long cur = 3;
    while (cur < Tw) {
        cur = std::min(2 * cur, Tw);
        LocalSeries wt = w.with_truncation(cur);
        LocalSeries w2 = wt * wt;
        LocalSeries g = t1.truncated(cur).pow(3) + (t1 * w2).scaled(a4) + (w2 * wt).scaled(a6) - wt;
        LocalSeries dg = (t1 * wt).scaled(a4 + a4) +
                         w2.scaled(a6 * PadicNumber::from_integer(3, p, r)) -
                         LocalSeries::constant(one, cur);
        w = (wt - g * dg.inverse()).with_truncation(cur);
    }
    w = w.with_truncation(Tw);
    LocalSeries winv = w.inverse();
    ex.x = (t1 * winv).truncated(T);   // pole order 2
    ex.y = (-winv).truncated(T);       // pole order 3
    LocalSeries dx = ex.x.derivative();
    ex.alpha = dx * ex.y.inverse();
    ex.beta = ex.x * ex.alpha;
    return ex;
}

PadicNumber formal_group_log(const WeierstrassCurve& E, const CurvePoint& P) {
    long p = E.prime();
    if (P.infinity) return PadicNumber::zero(p);
    ResidueDisk d = reduce(E, P);
    if (d.kind != DiskKind::Infinity)
        throw DomainError("formal_group_log: point not in the kernel of reduction");
    PadicNumber t = -(P.x / P.y);
    long r = std::max<long>(t.rel_prec(), E.precision());
    long T = truncation_order(E.precision() + 4, p) + 6;
    LocalSeries L = formal_group_log_series(E, T, r + 4);
    return L.eval(t);
}

LocalSeries formal_group_log_series(const WeierstrassCurve& E, long T, long r) {
    DiskExpansion inf = local_expansion(E, ResidueDisk{DiskKind::Infinity, 0, 0}, T, r);
    return inf.alpha.regular_part().antiderivative();
}

long point_count_ap_serial(const BigInt& a4, const BigInt& a6, long p) {
    long A = (long)(((a4 % p) + p) % p);
    long B = (long)(((a6 % p) + p) % p);
    std::vector<int> chi(p, -1);
    chi[0] = 0;
    for (long y = 1; y < p; ++y) chi[(y * y) % p] = 1;
    long count = 1;  // point at infinity
    for (long x = 0; x < p; ++x) {
        long fx = (((x * x % p) * x % p) + A * x % p + B) % p;
        count += 1 + chi[fx];
    }
    return p + 1 - count;
}

long point_count_ap_parallel(const BigInt& a4, const BigInt& a6, long p) {
    long A = (long)(((a4 % p) + p) % p);
    long B = (long)(((a6 % p) + p) % p);
    std::vector<int> chi(p, -1);
    chi[0] = 0;
    for (long y = 1; y < p; ++y) chi[(y * y) % p] = 1;
    long count = 1;
#ifdef _OPENMP
#pragma omp parallel for reduction(+ : count) schedule(static)
#endif
    for (long x = 0; x < p; ++x) {
        long fx = (((x * x % p) * x % p) + A * x % p + B) % p;
        count += 1 + chi[fx];
    }
    return p + 1 - count;
}

long point_count_ap(const WeierstrassCurve& E) {
    long ap = E.prime() < 100000 ? point_count_ap_serial(E.a4(), E.a6(), E.prime())
                                 : point_count_ap_parallel(E.a4(), E.a6(), E.prime());
    if ((BigInt)ap * ap > 4 * E.prime()) throw DomainError("point count violates the Hasse bound");
    return ap;
}

}  // namespace qchab
