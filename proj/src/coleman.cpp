#include "qchab/coleman.hpp"

#include <algorithm>
#include <cmath>

#include "qchab/hensel.hpp"
#include "qchab/matrix.hpp"

namespace qchab {

namespace {

// antiderivative with the t^{-1} slot required to vanish; constant term 0
LocalSeries reg_antider(const LocalSeries& s) {
    if (!s.coeff(-1).is_zero())
        throw DomainError("regularized antiderivative: nonzero residue at e");
    LocalSeries t = s;
    t.set_coeff(-1, PadicNumber::zero(s.prime()));
    return t.antiderivative();
}

PadicNumber eval_or_reg(const LocalSeries& s, const PadicNumber& t) {
    if (t.is_zero()) return PadicNumber::zero(s.prime());  // regularized value at e
    return s.eval(t);
}

}  // namespace

long ColemanEngine::disk_key(const ResidueDisk& d) const {
    if (d.kind == DiskKind::Infinity) return -1;
    return d.xbar * p_ + d.ybar;
}

ColemanEngine::ColemanEngine(const WeierstrassCurve& E, bool with_doubles)
    : E_(E), p_(E.prime()), N_(E.precision()), with_doubles_(with_doubles),
      frob_(frobenius_matrix(E, E.precision() + 6)) {
    N1_ = N_ + 6;
    re_ = N1_ + 14;
    Te_ = truncation_order(N1_ + 4, p_) + 2 * p_ + 16;
    build_edisk();
    if (with_doubles_) {
        build_double_constants();
        build_duplication();
    }
    for (const auto& d : affine_disks()) {
        DiskSeriesBundle b = build_bundle(d);
        solve_loss_ += b.solve_loss;
        cache_[disk_key(d)] = std::move(b);
    }
}

void ColemanEngine::build_edisk() {
    einf_ = local_expansion(E_, ResidueDisk{DiskKind::Infinity, 0, 0}, Te_, re_);
    La_ = reg_antider(einf_.alpha);
    Lb_ = reg_antider(einf_.beta);
    // the double integrands have a residue at e; split it off as the log coefficient
    LocalSeries i12 = La_ * einf_.beta;
    r12_ = i12.coeff(-1);
    i12.set_coeff(-1, PadicNumber::zero(p_));
    S12_ = i12.antiderivative();
    LocalSeries i21 = Lb_ * einf_.alpha;
    r21_ = i21.coeff(-1);
    i21.set_coeff(-1, PadicNumber::zero(p_));
    S21_ = i21.antiderivative();
    PadicNumber four = PadicNumber::from_integer(4, p_, re_);
    if (!(r12_ - four).is_zero() || !(r21_ + four).is_zero())
        throw DomainError("e-disk residue of the double word is not +-4");
    shuffle_defect_ = -series_product_const(La_, Lb_);
    PadicNumber log2 = padic_log(PadicNumber::from_integer(2, p_, re_ + 4));
    kappa12_ = shuffle_defect_ - r12_ * log2;
    kappa21_ = -r21_ * log2;
}

PadicNumber ColemanEngine::series_product_const(const LocalSeries& A, const LocalSeries& B) const {
    PadicNumber acc = PadicNumber::zero(p_);
    for (long k = A.low_degree(); k <= A.truncation(); ++k) {
        if (-k < B.low_degree() || -k > B.truncation()) continue;
        acc += A.coeff(k) * B.coeff(-k);
    }
    return acc;
}

PadicNumber ColemanEngine::pairing_const(const OddFn& h, const LocalSeries& L) const {
    // [h_e(z) L(z)]_0 where h = B(x) y (level 0) + sum_{j>=1} V_j(x) y^{1-2j}.
    // The level-0 piece uses the residue recurrence
    //   t_a = (a+1) P_{a-1},  (2k+9) P_{k+2} = -[(2k+3) a4 P_k + 2k a6 P_{k-1}],
    //   P_c = res_e(x^c y L dx),
    // valid because dL is a polynomial multiple of dx/y.
    bool is_alpha = (&L == &La_);
    PadicNumber acc = PadicNumber::zero(p_);
    const XPoly* B = h.level.count(0) ? &h.level.at(0) : nullptr;
    long A = B ? B->degree() : -1;
    if (A >= 0) {
        long budget = 0;
        for (long k = 0; k <= A; ++k) {
            long m = 2 * k + 9;
            while (m % p_ == 0) {
                ++budget;
                m /= p_;
            }
        }
        long rr = N1_ + budget + 12;
        DiskExpansion sh = local_expansion(E_, ResidueDisk{DiskKind::Infinity, 0, 0}, 16, rr);
        LocalSeries Lsh = reg_antider(is_alpha ? sh.alpha : sh.beta);
        LocalSeries xp = sh.x.derivative();
        LocalSeries base = sh.y * Lsh * xp;  // x^0 y L dx
        PadicNumber t0 = (sh.y * Lsh).coeff(0);
        acc += B->coeff(0) * t0;
        if (A >= 1) {
            std::vector<PadicNumber> P{base.coeff(-1), (base * sh.x).coeff(-1)};
            PadicNumber a4 = E_.a4p(rr), a6 = E_.a6p(rr);
            while ((long)P.size() < A) {
                long k = (long)P.size() - 2;
                PadicNumber num = -(PadicNumber::from_integer(2 * k + 3, p_, rr) * a4 * P[k]);
                if (k >= 1) num -= PadicNumber::from_integer(2 * k, p_, rr) * a6 * P[k - 1];
                P.push_back(num / PadicNumber::from_integer(2 * k + 9, p_, rr));
            }
            for (long a = 1; a <= A; ++a)
                acc += B->coeff(a) * PadicNumber::from_integer(a + 1, p_, rr) * P[a - 1];
        }
    }
    // pole levels reach degree zero only within the polar window of L
    for (const auto& [j, V] : h.level) {
        if (j < 1) continue;
        long minorder = 6 * j - 3 - 2 * std::max(V.degree(), 0L);
        if (minorder > 1) continue;
        LocalSeries part =
            (V.eval_series(einf_.x, 6 * j + 12) * einf_.y.inverse().pow(2 * j - 1)).truncated(4);
        acc += series_product_const(part, L);
    }
    return acc;
}

PadicNumber ColemanEngine::even_fn_const(const EvenFn& H) const {
    // [H_e]_0: the polynomial level via power sums u_a = sum over roots of f of r^a
    PadicNumber acc = PadicNumber::zero(p_);
    long rr = N1_ + 16;
    for (const auto& [s, D] : H.level) {
        if (s == 0) {
            long A = D.degree();
            PadicNumber a4 = E_.a4p(rr), a6 = E_.a6p(rr);
            std::vector<PadicNumber> u{PadicNumber::from_integer(3, p_, rr), PadicNumber::zero(p_),
                                       PadicNumber::from_integer(-2, p_, rr) * a4};
            for (long k = 3; k <= A; ++k)
                u.push_back(-(a4 * u[k - 2]) - a6 * u[k - 3]);
            acc += D.coeff(0);  // [x^0]_0 = 1, not the root count
            for (long a = 1; a <= A; ++a) acc += D.coeff(a) * u[a];
        } else {
            long minorder = 6 * s - 2 * std::max(D.degree(), 0L);
            if (minorder > 0) continue;
            LocalSeries part =
                (D.eval_series(einf_.x, 6 * s + 10) * (einf_.y * einf_.y).inverse().pow(s)).truncated(4);
            acc += part.coeff(0);
        }
    }
    return acc;
}

void ColemanEngine::build_double_constants() {
    const PadicNumber &F11 = frob_.F.at(0, 0), &F12 = frob_.F.at(0, 1), &F21 = frob_.F.at(1, 0),
                      &F22 = frob_.F.at(1, 1);
    long rring = F11.rel_prec() + 8;
    CurveRing R(E_, rring);
    XPoly one(p_), xx(p_);
    one.set(0, PadicNumber::from_integer(1, p_, rring));
    xx.set(1, PadicNumber::from_integer(1, p_, rring));
    OddForm alpha_form, beta_form;
    alpha_form.p = p_;
    beta_form.p = p_;
    alpha_form.add(0, one);
    beta_form.add(0, xx);

    // E^{ij} = h_i phi^* w_j - F_{1i} h_j alpha - F_{2i} h_j beta
    auto assemble = [&](const OddFn& hi, const OddForm& phi_j, const OddFn& hj,
                        const PadicNumber& F1i, const PadicNumber& F2i) {
        EvenForm out = mul(hi, phi_j);
        EvenForm t1 = mul(hj, alpha_form);
        EvenForm t2 = mul(hj, beta_form);
        for (auto& [s, Q] : t1.level) out.add(s, Q.scaled(-F1i));
        for (auto& [s, Q] : t2.level) out.add(s, Q.scaled(-F2i));
        return out;
    };

    PadicNumber half = PadicNumber::from_rational(BigRat(1, 2), p_, re_);

    // residue classes cancel identically; numerically they vanish to the
    // precision of the truncated Frobenius expansion
    auto residue_free = [&](const EvenReduction& red) {
        auto small = [&](const PadicNumber& v) {
            return v.is_zero() || v.valuation() >= N1_;
        };
        bool ok = small(red.dlog_coeff);
        for (long i = 0; i <= red.rho.degree(); ++i) ok = ok && small(red.rho.coeff(i));
        return ok;
    };
    EvenForm E12 = assemble(frob_.h_alpha, frob_.phi_beta, frob_.h_beta, F11, F21);
    EvenReduction red12 = even_reduce(R, E12);
    if (!residue_free(red12))
        throw PrecisionExhausted("double system: residue classes did not cancel (alpha-beta)");
    HE12_ = red12.primitive;
    C12_ = -(even_fn_const(HE12_) + F11 * pairing_const(frob_.h_beta, La_) +
             F21 * pairing_const(frob_.h_beta, Lb_) +
             F11 * F12 * half * series_product_const(La_, La_) +
             F21 * F12 * series_product_const(La_, Lb_) +
             F21 * F22 * half * series_product_const(Lb_, Lb_));

    EvenForm E21 = assemble(frob_.h_beta, frob_.phi_alpha, frob_.h_alpha, F12, F22);
    EvenReduction red21 = even_reduce(R, E21);
    if (!residue_free(red21))
        throw PrecisionExhausted("double system: residue classes did not cancel (beta-alpha)");
    HE21_ = red21.primitive;
    C21_ = -(even_fn_const(HE21_) + F22 * pairing_const(frob_.h_alpha, Lb_) +
             F12 * pairing_const(frob_.h_alpha, La_) +
             F22 * F21 * half * series_product_const(Lb_, Lb_) +
             F12 * F21 * series_product_const(La_, Lb_) +
             F12 * F11 * half * series_product_const(La_, La_));
}

void ColemanEngine::build_duplication() {
    long r = re_ + 10;
    CurveRing R(E_, r);
    // x([2]P) = (x^4 - 2 a4 x^2 - 8 a6 x + a4^2)/(4 f); delta alpha = numer/4 y^{-3} dx
    PadicNumber a4 = E_.a4p(r), a6 = E_.a6p(r);
    PadicNumber quarter = PadicNumber::from_rational(BigRat(1, 4), p_, r);
    XPoly numer(p_);
    numer.set(0, a4 * a4 * quarter);
    numer.set(1, PadicNumber::from_integer(-8, p_, r) * a6 * quarter);
    numer.set(2, PadicNumber::from_integer(-2, p_, r) * a4 * quarter);
    numer.set(4, quarter);
    OddForm da;
    da.p = p_;
    da.add(1, numer);
    OddReduction red = mw_reduce(R, da);
    dup_c_ = red.c_alpha;
    dup_d_ = red.c_beta;
    dup_H_ = red.primitive;
    PadicNumber one = PadicNumber::from_integer(1, p_, re_);
    if (!dup_c_.is_zero() || !(dup_d_ - one).is_zero())
        throw PrecisionExhausted("duplication pullback is not beta in cohomology");
    XPoly pone(p_);
    pone.set(0, one);
    OddForm alpha_form;
    alpha_form.p = p_;
    alpha_form.add(0, pone);
    EvenForm HpA = mul(dup_H_, alpha_form);
    EvenReduction ered = even_reduce(R, HpA);
    dup_H2_ = ered.primitive;
    dup_c1_ = ered.dlog_coeff;
    if (!ered.rho.is_zero())
        throw PrecisionExhausted("duplication: even leftover has a linear residue part");
    if (!(dup_c1_ - PadicNumber::from_rational(BigRat(-1, 2), p_, re_)).is_zero())
        throw PrecisionExhausted("duplication: dlog coefficient of H' alpha is not -1/2");
    PadicNumber bal = PadicNumber::from_integer(4, p_, re_) -
                      PadicNumber::from_integer(16, p_, re_) * dup_d_ -
                      PadicNumber::from_integer(24, p_, re_) * dup_c1_;
    if (!bal.is_zero()) throw PrecisionExhausted("duplication: log coefficients do not balance");
    PadicNumber log2 = padic_log(PadicNumber::from_integer(2, p_, re_ + 6));
    c5_ = PadicNumber::from_integer(4, p_, re_) * log2 -
          (dup_c_ + dup_c_) * series_product_const(La_, La_) -
          PadicNumber::from_integer(4, p_, re_) * pairing_const(dup_H_, La_) +
          PadicNumber::from_integer(4, p_, re_) * even_fn_const(dup_H2_);
}

PadicNumber ColemanEngine::R12_at(const PadicNumber& x, const PadicNumber& y, const PadicNumber& ga,
                                  const PadicNumber& gb) const {
    const PadicNumber &F11 = frob_.F.at(0, 0), &F12 = frob_.F.at(0, 1), &F21 = frob_.F.at(1, 0),
                      &F22 = frob_.F.at(1, 1);
    PadicNumber hb = frob_.h_beta.eval(x, y);
    PadicNumber half = PadicNumber::from_rational(BigRat(1, 2), p_, re_);
    return HE12_.eval(x, y * y) + F11 * ga * hb + F21 * gb * hb + F11 * F12 * half * ga * ga +
           F21 * F12 * ga * gb + F21 * F22 * half * gb * gb;
}

PadicNumber ColemanEngine::R21_at(const PadicNumber& x, const PadicNumber& y, const PadicNumber& ga,
                                  const PadicNumber& gb) const {
    const PadicNumber &F11 = frob_.F.at(0, 0), &F12 = frob_.F.at(0, 1), &F21 = frob_.F.at(1, 0),
                      &F22 = frob_.F.at(1, 1);
    PadicNumber ha = frob_.h_alpha.eval(x, y);
    PadicNumber half = PadicNumber::from_rational(BigRat(1, 2), p_, re_);
    return HE21_.eval(x, y * y) + F22 * gb * ha + F12 * ga * ha + F22 * F21 * half * gb * gb +
           F12 * F21 * ga * gb + F12 * F11 * half * ga * ga;
}

CurvePoint ColemanEngine::teichmuller_point(const ResidueDisk& d) const {
    if (d.kind == DiskKind::Infinity) throw DomainError("teichmuller_point: infinity disk");
    return disk_anchor(E_, d, re_);
}

std::vector<ResidueDisk> ColemanEngine::affine_disks() const {
    std::vector<ResidueDisk> out;
    for (auto& d : all_disks(E_))
        if (d.kind != DiskKind::Infinity) out.push_back(d);
    return out;
}

DiskSeriesBundle ColemanEngine::build_bundle(const ResidueDisk& d) const {
    DiskSeriesBundle b;
    b.disk = d;
    long Td = truncation_order(N1_ + 4, p_) + 10;
    b.ex = local_expansion(E_, d, Td, re_);
    b.origin = b.ex.origin;
    LocalSeries Aa = b.ex.alpha.antiderivative();
    LocalSeries Ab = b.ex.beta.antiderivative();
    if (d.kind == DiskKind::Generic) {
        PadicMatrix M(2, 2, p_);
        PadicNumber one = PadicNumber::from_integer(1, p_, frob_.F.at(0, 0).rel_prec());
        M.at(0, 0) = one - frob_.F.at(0, 0);
        M.at(0, 1) = -frob_.F.at(1, 0);
        M.at(1, 0) = -frob_.F.at(0, 1);
        M.at(1, 1) = one - frob_.F.at(1, 1);
        std::vector<PadicNumber> rhs{frob_.h_alpha.eval(b.origin.x, b.origin.y),
                                     frob_.h_beta.eval(b.origin.x, b.origin.y)};
        auto sol = linear_solve(M, rhs);
        b.ga0 = sol.x[0];
        b.gb0 = sol.x[1];
        b.solve_loss = sol.loss;
        if (with_doubles_) {
            PadicNumber R = R12_at(b.origin.x, b.origin.y, b.ga0, b.gb0);
            b.G0 = (R + C12_) / PadicNumber::from_integer(1 - p_, p_, re_) - kappa12_;
        } else {
            b.G0 = PadicNumber::zero(p_);
        }
    } else {
        // two-torsion disk: the involution fixes the origin, so both single
        // integrals vanish there; the double comes from the duplication map
        b.ga0 = PadicNumber::zero(p_);
        b.gb0 = PadicNumber::zero(p_);
        if (with_doubles_) {
            long r = re_ + 10;
            std::vector<PadicNumber> fshift{
                E_.a6p(r) - PadicNumber::from_integer(p_, p_, r).pow(2), E_.a4p(r),
                PadicNumber::zero(p_), PadicNumber::from_integer(1, p_, r)};
            PadicNumber x0 = hensel_root(fshift, b.origin.x);
            PadicNumber y0 = PadicNumber::from_integer(p_, p_, r);
            CurvePoint w0 = CurvePoint::make(x0, y0);
            PadicNumber ga_w0 = Aa.eval(y0);
            LocalSeries C2 = (Aa * b.ex.beta).antiderivative();
            PadicNumber Lambda = C2.eval(y0);
            CurvePoint dbl = padic_add(E_, w0, w0);
            PadicNumber z1 = z_param(dbl);
            PadicNumber G2w0 = r12_ * padic_log(z1) + S12_.eval(z1);
            PadicNumber Hp = dup_H_.eval(x0, y0);
            PadicNumber H2v = dup_H2_.eval(x0, y0 * y0);
            PadicNumber logf = padic_log(y0 * y0);  // 0 on the Iwasawa branch
            PadicNumber four = PadicNumber::from_integer(4, p_, re_);
            PadicNumber Gw0 = (G2w0 - (dup_c_ + dup_c_) * ga_w0 * ga_w0 - four * ga_w0 * Hp +
                               four * H2v + four * dup_c1_ * logf - c5_) /
                              (four * dup_d_);
            b.G0 = Gw0 - Lambda - kappa12_;
        } else {
            b.G0 = PadicNumber::zero(p_);
        }
    }
    long Ts = Aa.truncation();
    b.log_alpha = LocalSeries::constant(b.ga0, Ts) + Aa;
    b.log_beta = LocalSeries::constant(b.gb0, Ts) + Ab;
    if (with_doubles_) {
        LocalSeries C2 = (Aa * b.ex.beta).antiderivative().truncated(Ts);
        b.D2 = LocalSeries::constant(b.G0, Ts) + C2 + Ab.scaled(b.ga0);
    }
    return b;
}

const DiskSeriesBundle& ColemanEngine::disk_series(const ResidueDisk& d) const {
    auto it = cache_.find(disk_key(d));
    if (it == cache_.end()) throw DomainError("disk_series: not an affine disk of this curve");
    return it->second;
}

PadicNumber ColemanEngine::tiny_single(const ResidueDisk& d, const PadicNumber& ta,
                                       const PadicNumber& tb, BasisForm w) const {
    const DiskExpansion& ex = d.kind == DiskKind::Infinity ? einf_ : disk_series(d).ex;
    const LocalSeries& coefs = (w == BasisForm::Alpha) ? ex.alpha : ex.beta;
    LocalSeries A = d.kind == DiskKind::Infinity ? reg_antider(coefs) : coefs.antiderivative();
    return eval_or_reg(A, tb) - eval_or_reg(A, ta);
}

PadicNumber ColemanEngine::tiny_double(const ResidueDisk& d, const PadicNumber& ta,
                                       const PadicNumber& tb) const {
    if (d.kind == DiskKind::Infinity)
        throw DomainError("tiny_double on the e-disk carries a log term; use global_double");
    const DiskExpansion& ex = disk_series(d).ex;
    LocalSeries Aa = ex.alpha.antiderivative();
    LocalSeries Ab = ex.beta.antiderivative();
    LocalSeries C2 = (Aa * ex.beta).antiderivative();
    // int_{ta}^{tb} (int_{ta}^s alpha) beta(s) ds
    return C2.eval(tb) - C2.eval(ta) - Aa.eval(ta) * (Ab.eval(tb) - Ab.eval(ta));
}

LocalSeries ColemanEngine::regularized_at_e(const std::string& word) const {
    if (word == "alpha") return La_;
    if (word == "beta") return Lb_;
    if (word == "alphabeta" || word == "betaalpha") {
        const LocalSeries& inner = (word == "alphabeta") ? La_ : Lb_;
        const LocalSeries& outer = (word == "alphabeta") ? einf_.beta : einf_.alpha;
        LocalSeries integrand = inner * outer;
        if (!integrand.coeff(-1).is_zero())
            throw DomainError("regularized_at_e: nonzero residue to precision — log unsupported");
        return integrand.antiderivative();
    }
    throw DomainError("regularized_at_e: unknown word");
}

std::pair<PadicNumber, PadicNumber> ColemanEngine::global_single(const CurvePoint& z) const {
    if (z.infinity) return {PadicNumber::zero(p_), PadicNumber::zero(p_)};
    ResidueDisk d = reduce(E_, z);
    if (d.kind == DiskKind::Infinity) {
        PadicNumber t = z_param(z);
        return {La_.eval(t), Lb_.eval(t)};
    }
    const DiskSeriesBundle& b = disk_series(d);
    PadicNumber t = d.kind == DiskKind::Generic ? z.x - b.origin.x : z.y;
    PadicNumber match = d.kind == DiskKind::Generic ? b.ex.y.eval(t) - z.y : b.ex.x.eval(t) - z.x;
    if (!match.is_zero()) throw DomainError("global_single: point does not lie on the disk branch");
    return {b.log_alpha.eval(t), b.log_beta.eval(t)};
}

PadicNumber ColemanEngine::global_double(const CurvePoint& z) const {
    if (!with_doubles_) throw DomainError("engine built without double integrals");
    if (z.infinity) return PadicNumber::zero(p_);
    ResidueDisk d = reduce(E_, z);
    if (d.kind == DiskKind::Infinity) {
        PadicNumber t = z_param(z);
        return r12_ * padic_log(t) + S12_.eval(t) - kappa12_;
    }
    const DiskSeriesBundle& b = disk_series(d);
    PadicNumber t = d.kind == DiskKind::Generic ? z.x - b.origin.x : z.y;
    return b.D2.eval(t);
}

PadicNumber ColemanEngine::global_double_swapped(const CurvePoint& z) const {
    if (!with_doubles_) throw DomainError("engine built without double integrals");
    if (z.infinity) return PadicNumber::zero(p_);
    ResidueDisk d = reduce(E_, z);
    if (d.kind == DiskKind::Infinity) {
        PadicNumber t = z_param(z);
        return r21_ * padic_log(t) + S21_.eval(t) - kappa21_;
    }
    const DiskSeriesBundle& b = disk_series(d);
    PadicNumber t = d.kind == DiskKind::Generic ? z.x - b.origin.x : z.y;
    if (d.kind == DiskKind::TwoTorsion) {
        // canonical shuffle is defect-free and the fixed point kills the singles
        auto [ga, gb] = global_single(z);
        return ga * gb - b.D2.eval(t);
    }
    PadicNumber R = R21_at(b.origin.x, b.origin.y, b.ga0, b.gb0);
    PadicNumber G21_0 = (R + C21_) / PadicNumber::from_integer(1 - p_, p_, re_) - kappa21_;
    LocalSeries Aa = b.ex.alpha.antiderivative();
    LocalSeries Ab = b.ex.beta.antiderivative();
    LocalSeries C2s = (Ab * b.ex.alpha).antiderivative();
    return G21_0 + C2s.eval(t) + b.gb0 * Aa.eval(t);
}

IteratedValue ColemanEngine::global(const CurvePoint& z) const {
    IteratedValue out;
    out.endpoint = z;
    auto [ga, gb] = global_single(z);
    out.log_alpha = ga;
    out.log_beta = gb;
    out.D2 = with_doubles_ ? global_double(z) : PadicNumber::zero(p_);
    long a = std::min(ga.abs_prec(), gb.abs_prec());
    if (with_doubles_) a = std::min(a, out.D2.abs_prec());
    out.achieved_prec = a;
    return out;
}

}  // namespace qchab
