#include "qchab/chabauty.hpp"

#include <algorithm>
#include <limits>

#include "qchab/hensel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qchab {

PadicNumber qc_tau(const ColemanEngine& eng, const CurvePoint& w) {
    IteratedValue v = eng.global(w);
    return v.D2 - v.log_alpha * v.log_beta;
}

QCConstant qc_constant(const ColemanEngine& eng, const QCInstance& inst) {
    const CurvePoint& y0 = inst.known;
    if (y0.infinity) throw DomainError("qc_constant: the basepoint e is excluded");
    if (!on_curve(inst.curve, y0)) throw DomainError("qc_constant: known point not on curve");
    IteratedValue v = eng.global(y0);
    if (v.log_alpha.is_zero())
        throw PrecisionExhausted("qc_constant: log_alpha(y0) vanishes to precision");
    QCConstant out;
    out.from = y0;
    out.c = (v.D2 - v.log_alpha * v.log_beta) / (v.log_alpha * v.log_alpha);
    out.achieved_prec = out.c.abs_prec();
    return out;
}

PadicNumber corollary_residual(const ColemanEngine& eng, const CurvePoint& y, const CurvePoint& z) {
    IteratedValue vy = eng.global(y);
    IteratedValue vz = eng.global(z);
    PadicNumber ty = vy.D2 - vy.log_alpha * vy.log_beta;
    PadicNumber tz = vz.D2 - vz.log_alpha * vz.log_beta;
    return vy.log_alpha * vy.log_alpha * tz - vz.log_alpha * vz.log_alpha * ty;
}

LocalSeries qc_series_on_disk(const ColemanEngine& eng, const ResidueDisk& d, const QCConstant& c) {
    if (d.kind == DiskKind::Infinity) throw DomainError("qc_series_on_disk: infinity disk excluded");
    const DiskSeriesBundle& b = eng.disk_series(d);
    LocalSeries tau = b.D2 - b.log_alpha * b.log_beta;
    return tau - (b.log_alpha * b.log_alpha).scaled(c.c);
}

namespace {

class DiskScan {
public:
    DiskScan(const ColemanEngine& eng, const std::vector<ExactPoint>& known)
        : eng_(eng), known_(known), p_(eng.curve().prime()), prec_(eng.target_prec()) {}

    void scan(const ResidueDisk& d, const LocalSeries& rho, std::vector<CandidatePoint>& out) const {
        long M = rho.truncation();
        std::vector<PadicNumber> sigma;
        long content = std::numeric_limits<long>::max();
        PadicNumber pp = PadicNumber::from_integer(p_, p_, prec_ + 10);
        for (long m = 0; m <= M; ++m) {
            PadicNumber cm = rho.coeff(m) * pp.pow(m);
            sigma.push_back(cm);
            if (!cm.is_zero()) content = std::min(content, cm.valuation());
        }
        if (content == std::numeric_limits<long>::max()) return;  // rho = 0 to precision
        for (auto& cm : sigma) cm = cm.shift(-content);
        lift_level(d, sigma, PadicNumber::zero(p_), 0, 0, out);
    }

private:
    const ColemanEngine& eng_;
    const std::vector<ExactPoint>& known_;
    long p_, prec_;

    // roots of poly in Z_p, searching residues mod p; s_full = offset + p^scale * root
    void lift_level(const ResidueDisk& d, const std::vector<PadicNumber>& poly,
                    const PadicNumber& offset, long scale, int depth,
                    std::vector<CandidatePoint>& out) const {
        std::vector<PadicNumber> dpoly = poly_derivative(poly);
        PadicNumber pp = PadicNumber::from_integer(p_, p_, prec_ + 10);
        for (long s = 0; s < p_; ++s) {
            PadicNumber sv = PadicNumber::from_integer(s, p_, 2);
            PadicNumber v = poly_eval(poly, sv);
            if (!(v.is_zero() || v.valuation() >= 1)) continue;
            PadicNumber dv = poly_eval(dpoly, sv);
            bool simple = !(dv.is_zero() || dv.valuation() >= 1);
            if (simple) {
                PadicNumber root = hensel_root(poly, PadicNumber::from_integer(s, p_, prec_ + 10));
                PadicNumber s_full = offset + root.shift(scale);
                emit(d, s_full * pp, depth > 0, out);
            } else if (depth == 0) {
                // re-expand one level: s = s0 + p s'
                std::vector<PadicNumber> shifted = recenter(poly, s);
                long c2 = std::numeric_limits<long>::max();
                for (auto& q : shifted)
                    if (!q.is_zero()) c2 = std::min(c2, q.valuation());
                if (c2 == std::numeric_limits<long>::max()) continue;
                for (auto& q : shifted) q = q.shift(-c2);
                lift_level(d, shifted, offset + PadicNumber::from_integer(s, p_, prec_ + 10),
                           scale + 1, depth + 1, out);
            } else {
                // multiple to precision after subdivision: report the residue
                CandidatePoint cp;
                cp.disk = d;
                cp.t_star = (offset + PadicNumber::from_integer(s, p_, 2).shift(scale)) * pp;
                cp.multiple_root = true;
                cp.x = PadicNumber::zero_to_prec(p_, 1);
                cp.y = PadicNumber::zero_to_prec(p_, 1);
                cp.root_prec = 1;
                out.push_back(cp);
            }
        }
    }

    std::vector<PadicNumber> recenter(const std::vector<PadicNumber>& poly, long s0) const {
        PadicNumber off = PadicNumber::from_integer(s0, p_, prec_ + 10);
        PadicNumber pp = PadicNumber::from_integer(p_, p_, prec_ + 10);
        std::vector<PadicNumber> acc{PadicNumber::zero(p_)};
        for (long i = (long)poly.size() - 1; i >= 0; --i) {
            std::vector<PadicNumber> nxt(acc.size() + 1, PadicNumber::zero(p_));
            for (size_t k = 0; k < acc.size(); ++k) {
                nxt[k] += acc[k] * off;
                nxt[k + 1] += acc[k] * pp;
            }
            nxt[0] += poly[i];
            acc = std::move(nxt);
        }
        while (acc.size() > 1 && acc.back().is_exact_zero()) acc.pop_back();
        return acc;
    }

    void emit(const ResidueDisk& d, const PadicNumber& t_star, bool subdivided,
              std::vector<CandidatePoint>& out) const {
        CandidatePoint cp;
        cp.disk = d;
        cp.t_star = t_star;
        cp.multiple_root = subdivided;
        const DiskSeriesBundle& b = eng_.disk_series(d);
        cp.x = b.ex.x.eval(t_star);
        cp.y = d.kind == DiskKind::TwoTorsion ? t_star : b.ex.y.eval(t_star);
        cp.root_prec = std::min(cp.x.abs_prec(), cp.y.abs_prec());
        for (const auto& q : known_) {
            if (q.infinity) continue;
            PadicNumber dx = cp.x - PadicNumber::from_rational(q.x, p_, prec_ + 10);
            PadicNumber dy = cp.y - PadicNumber::from_rational(q.y, p_, prec_ + 10);
            if (dx.is_zero() && dy.is_zero()) {
                cp.matches_known = true;
                break;
            }
        }
        out.push_back(cp);
    }
};

std::vector<CandidatePoint> locate_impl(const ColemanEngine& eng, const QCInstance& inst,
                                        const std::vector<ExactPoint>& known, bool parallel) {
    QCConstant c = qc_constant(eng, inst);
    auto disks = eng.affine_disks();
    std::vector<std::vector<CandidatePoint>> per(disks.size());
    DiskScan scan(eng, known);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (long i = 0; i < (long)disks.size(); ++i) {
        LocalSeries rho = qc_series_on_disk(eng, disks[i], c);
        scan.scan(disks[i], rho, per[i]);
    }
    std::vector<CandidatePoint> out;
    for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
    return out;
}

}  // namespace

std::vector<CandidatePoint> qc_locate(const ColemanEngine& eng, const QCInstance& inst,
                                      const LocateOptions& opt) {
    return locate_impl(eng, inst, opt.cross_check, opt.parallel);
}

std::vector<CandidatePoint> qc_locate_serial(const ColemanEngine& eng, const QCInstance& inst,
                                             std::vector<ExactPoint> cross_check) {
    return locate_impl(eng, inst, cross_check, false);
}

}  // namespace qchab
