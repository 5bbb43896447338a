#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qchab/padic.hpp"
#include "qchab/series.hpp"

namespace qchab {

/// y^2 = x^3 + a4 x + a6 over Z, with a working prime of good reduction.
class WeierstrassCurve {
public:
    WeierstrassCurve(BigInt a4, BigInt a6, long p, long prec);

    const BigInt& a4() const { return a4_; }
    const BigInt& a6() const { return a6_; }
    const BigInt& discriminant() const { return disc_; }
    long prime() const { return p_; }
    long precision() const { return N_; }

    PadicNumber a4p(long r) const { return PadicNumber::from_integer(a4_, p_, r); }
    PadicNumber a6p(long r) const { return PadicNumber::from_integer(a6_, p_, r); }

    // f(x) = x^3 + a4 x + a6
    PadicNumber f_eval(const PadicNumber& x) const;
    PadicNumber fprime_eval(const PadicNumber& x) const;
    BigRat f_eval_exact(const BigRat& x) const;

private:
    BigInt a4_, a6_, disc_;
    long p_, N_;
};

/// coordinate change from a general Weierstrass model to the short one
struct ModelTransform {
    // short-model coords: X = 36 x + 3 b2, Y = 108 (2 y + a1 x + a3)
    BigInt a1, a2, a3, a4, a6;  // the original coefficients
    BigInt b2;
    BigRat to_short_x(const BigRat& x) const;
    BigRat to_short_y(const BigRat& x, const BigRat& y) const;
    BigRat from_short_x(const BigRat& X) const;
    BigRat from_short_y(const BigRat& X, const BigRat& Y) const;
};

/// completes the square and cube; returns the short model coefficients
ModelTransform normalize_model(const BigInt& a1, const BigInt& a2, const BigInt& a3,
                               const BigInt& a4, const BigInt& a6, BigInt& A4_out, BigInt& A6_out);

struct ExactPoint {
    bool infinity = true;
    BigRat x, y;
    static ExactPoint infty() { return ExactPoint{}; }
    static ExactPoint make(BigRat px, BigRat py) { return ExactPoint{false, std::move(px), std::move(py)}; }
};

bool on_curve_exact(const WeierstrassCurve& E, const ExactPoint& P);
ExactPoint exact_neg(const ExactPoint& P);
ExactPoint exact_add(const WeierstrassCurve& E, const ExactPoint& P, const ExactPoint& Q);
ExactPoint exact_mul(const WeierstrassCurve& E, BigInt m, const ExactPoint& P);

struct CurvePoint {
    bool infinity = true;
    PadicNumber x, y;
    static CurvePoint infty() { return CurvePoint{}; }
    static CurvePoint make(PadicNumber px, PadicNumber py) {
        return CurvePoint{false, std::move(px), std::move(py)};
    }
    static CurvePoint from_exact(const WeierstrassCurve& E, const ExactPoint& P, long r);
};

bool on_curve(const WeierstrassCurve& E, const CurvePoint& P);
CurvePoint padic_neg(const CurvePoint& P);
CurvePoint padic_add(const WeierstrassCurve& E, const CurvePoint& P, const CurvePoint& Q);
CurvePoint padic_mul(const WeierstrassCurve& E, long m, const CurvePoint& P);

enum class DiskKind { Generic, TwoTorsion, Infinity };

struct ResidueDisk {
    DiskKind kind = DiskKind::Infinity;
    long xbar = 0, ybar = 0;  // reduced coordinates (unused for Infinity)
    std::string parameter() const;
    bool operator==(const ResidueDisk& o) const {
        return kind == o.kind && (kind == DiskKind::Infinity || (xbar == o.xbar && ybar == o.ybar));
    }
};

/// classify the disk of a point with integral coordinates (or e / kernel points)
ResidueDisk reduce(const WeierstrassCurve& E, const CurvePoint& P);
/// all residue disks, infinity included; partitions E(F_p)
std::vector<ResidueDisk> all_disks(const WeierstrassCurve& E);

/** Local coordinates on a disk to order T.
 *
 * Generic: t = x - x_c anchored at the Teichmuller point, x(t) = x_c + t.
 * Two-torsion: t = y, x(t) the Hensel branch through the 2-torsion root.
 * Infinity: t = -x/y, x and y are Laurent (pole orders 2 and 3).
 * alpha/beta are the pullbacks of dx/y and x dx/y divided by dt.
 */
struct DiskExpansion {
    ResidueDisk disk;
    CurvePoint origin;  // anchor (generic/two-torsion); unused at infinity
    LocalSeries x, y;
    LocalSeries alpha, beta;  // coefficient series: form = coeff * dt
};

DiskExpansion local_expansion(const WeierstrassCurve& E, const ResidueDisk& d, long T, long rel_prec);

/// anchor of a non-infinity disk: Teichmuller x (resp. the 2-torsion root), matching y
CurvePoint disk_anchor(const WeierstrassCurve& E, const ResidueDisk& d, long rel_prec);

/** Formal logarithm L with L'(t) dt = expansion of dx/y at infinity, L(0) = 0
 *  (leading term 2t).  P must reduce to e. */
PadicNumber formal_group_log(const WeierstrassCurve& E, const CurvePoint& P);
LocalSeries formal_group_log_series(const WeierstrassCurve& E, long T, long rel_prec);

/// a_p = p + 1 - #E(F_p) by enumeration
long point_count_ap(const WeierstrassCurve& E);
long point_count_ap_serial(const BigInt& a4, const BigInt& a6, long p);
long point_count_ap_parallel(const BigInt& a4, const BigInt& a6, long p);

}  // namespace qchab
