#pragma once

#include <map>
#include <vector>

#include "qchab/curve.hpp"
#include "qchab/matrix.hpp"
#include "qchab/padic.hpp"
#include "qchab/series.hpp"

namespace qchab {

/// dense polynomial in x over PadicNumber
struct XPoly {
    long p = 0;
    std::vector<PadicNumber> c;

    XPoly() = default;
    explicit XPoly(long prime) : p(prime) {}
    static XPoly from_coeffs(long p, std::vector<PadicNumber> cs);

    long degree() const;  // -1 for zero
    bool is_zero() const;
    PadicNumber coeff(long i) const;
    void set(long i, const PadicNumber& x);

    XPoly operator+(const XPoly& o) const;
    XPoly operator-(const XPoly& o) const;
    XPoly operator*(const XPoly& o) const;
    XPoly scaled(const PadicNumber& s) const;
    XPoly derivative() const;
    XPoly antiderivative() const;  // divides by m+1 termwise
    PadicNumber eval(const PadicNumber& x) const;
    LocalSeries eval_series(const LocalSeries& xs, long T) const;
    void trim();
};

/** The Monsky-Washnitzer presentation used throughout: the coordinate ring
 * of y^2 = f(x) with y inverted.  Functions and forms split into eigenparts
 * under the hyperelliptic involution.
 *
 * OddForm:  sum_j P_j(x) y^{-(2j+1)} dx          (j >= 0)
 * EvenForm: sum_s Q_s(x) f(x)^{-s} dx            (s >= 0; s=0 polynomial part)
 * OddFn:    sum_j C_j(x) y^{1-2j}                (j >= 0; j=0 means C_0 y)
 * EvenFn:   sum_s D_s(x) f(x)^{-s}               (s >= 0)
 */
struct OddForm {
    long p = 0;
    std::map<long, XPoly> level;  // j -> P_j
    void add(long j, const XPoly& P);
};

struct EvenForm {
    long p = 0;
    std::map<long, XPoly> level;  // s -> Q_s
    void add(long s, const XPoly& Q);
};

struct OddFn {
    long p = 0;
    std::map<long, XPoly> level;  // j -> C_j
    void add(long j, const XPoly& C);
    PadicNumber eval(const PadicNumber& x, const PadicNumber& y) const;
    LocalSeries eval_series(const LocalSeries& xs, const LocalSeries& ys, long T) const;
    OddForm differential(const class CurveRing& R) const;
};

struct EvenFn {
    long p = 0;
    std::map<long, XPoly> level;  // s -> D_s
    void add(long s, const XPoly& D);
    PadicNumber eval(const PadicNumber& x, const PadicNumber& fx) const;
    LocalSeries eval_series(const LocalSeries& xs, const LocalSeries& ys, long T) const;
};

/// multiplication tables between the eigenparts
EvenForm mul(const OddFn& h, const OddForm& w);
OddForm mul_even_fn_odd_form(const EvenFn& h, const OddForm& w);
OddForm mul(const OddFn& h, const EvenForm& w);
EvenFn mul(const OddFn& a, const OddFn& b);
OddForm scale(const OddForm& w, const PadicNumber& c);

/// fixed curve data for reduction: f, f', and an exact Bezout pair u0 f + v0 f' = 1
class CurveRing {
public:
    CurveRing(const WeierstrassCurve& E, long rel_prec);

    long prime() const { return p_; }
    long rel_prec() const { return r_; }
    const XPoly& f() const { return f_; }
    const XPoly& fprime() const { return fp_; }
    const XPoly& bezout_u() const { return u0_; }
    const XPoly& bezout_v() const { return v0_; }
    const WeierstrassCurve& curve() const { return E_; }

    // division with remainder by f (monic cubic): A = q f + rem
    void divmod_f(const XPoly& A, XPoly& q, XPoly& rem) const;

private:
    WeierstrassCurve E_;
    long p_, r_;
    XPoly f_, fp_, u0_, v0_;
};

struct OddReduction {
    PadicNumber c_alpha, c_beta;
    OddFn primitive;
};

/// form = c_alpha (dx/y) + c_beta (x dx/y) + d(primitive)
OddReduction mw_reduce(const CurveRing& R, OddForm form);

struct EvenReduction {
    EvenFn primitive;
    PadicNumber dlog_coeff;  // coefficient of f'/f dx left over
    XPoly rho;               // degree <= 1 leftover over f
};

/// form = d(primitive) + dlog_coeff * f'/f dx + rho(x)/f dx
EvenReduction even_reduce(const CurveRing& R, EvenForm form);

struct FrobeniusData {
    PadicMatrix F;       // columns: phi^* alpha, phi^* beta in basis (alpha, beta)
    OddFn h_alpha, h_beta;
    OddForm phi_alpha, phi_beta;  // the lifted pullbacks as reduced-input forms
    long p = 0;
    long K = 0;              // pole truncation of the Frobenius expansion
    long working_prec = 0;   // internal N used
    long achieved_prec = 0;  // min absolute precision across F entries
    long trace_agree_prec = 0;  // valuation to which tr F matches a_p
};

/** Frobenius structure of H^1_dR in the basis (dx/y, x dx/y): the p-power
 * lift phi(x) = x^p,  phi(1/y) = y^{-p} (1 + (f(x^p)-f(x)^p)/f^p)^{-1/2}. */
FrobeniusData frobenius_matrix(const WeierstrassCurve& E, long target_prec);

/// the expansion coefficients of phi(1/y): term k is c_k D(x)^k y^{-p-2pk}
struct FrobeniusLift {
    XPoly D;                        // f(x^p) - f(x)^p, divisible by p
    std::vector<PadicNumber> binom; // (-1/2 choose k), k = 0..K
    long K = 0;
};
FrobeniusLift frobenius_lift(const WeierstrassCurve& E, long working_prec, long rel_prec);

}  // namespace qchab
