#pragma once

#include <map>
#include <string>
#include <vector>

#include "qchab/curve.hpp"
#include "qchab/derham.hpp"

namespace qchab {

/// values of the iterated integrals at a point, tangential basepoint at e
struct IteratedValue {
    PadicNumber log_alpha, log_beta, D2;
    CurvePoint endpoint;
    std::string basepoint = "tangential at e, unit tangent in t = -x/y";
    long achieved_prec = 0;
};

struct PathSpec {
    CurvePoint start, end;
    enum class Route { TinyWithinDisk, ViaTeichmuller } route = Route::ViaTeichmuller;
};

enum class BasisForm { Alpha, Beta };

/// per-disk package used by the quadratic Chabauty scan
struct DiskSeriesBundle {
    ResidueDisk disk;
    CurvePoint origin;  // Teichmuller anchor, or the 2-torsion point
    DiskExpansion ex;
    PadicNumber ga0, gb0, G0;  // log_alpha, log_beta, D2 at the origin
    LocalSeries log_alpha, log_beta, D2;  // series in the disk parameter
    long solve_loss = 0;
};

/** Single and double Coleman integrals on E minus e via the Frobenius
 * structure: locally by antiderivatives, globally by solving the
 * equivariance equations at Frobenius-fixed anchors.  Two-torsion disks,
 * where the Frobenius lift does not converge, are reached through the
 * functional equation of the duplication map.
 */
class ColemanEngine {
public:
    ColemanEngine(const WeierstrassCurve& E, bool with_doubles = true);

    const WeierstrassCurve& curve() const { return E_; }
    const FrobeniusData& frobenius() const { return frob_; }
    long target_prec() const { return N_; }
    long working_prec() const { return N1_; }
    long total_solve_loss() const { return solve_loss_; }

    CurvePoint teichmuller_point(const ResidueDisk& d) const;

    /// in-disk integral of alpha or beta between parameter values
    PadicNumber tiny_single(const ResidueDisk& d, const PadicNumber& ta, const PadicNumber& tb,
                            BasisForm w) const;
    /// in-disk iterated integral: inner alpha, then beta, both based at ta
    PadicNumber tiny_double(const ResidueDisk& d, const PadicNumber& ta,
                            const PadicNumber& tb) const;

    /** Regularized primitive at the tangential basepoint: the termwise
     * antiderivative with zero constant term.  Throws if the word has a
     * nonzero residue at e (a log term would be required). */
    LocalSeries regularized_at_e(const std::string& word) const;

    /// both single integrals from b to z
    std::pair<PadicNumber, PadicNumber> global_single(const CurvePoint& z) const;
    /// D2(z) = int_b^z alpha beta
    PadicNumber global_double(const CurvePoint& z) const;
    IteratedValue global(const CurvePoint& z) const;

    /// integral of the swapped word beta-alpha (for shuffle checks)
    PadicNumber global_double_swapped(const CurvePoint& z) const;

    const DiskSeriesBundle& disk_series(const ResidueDisk& d) const;
    std::vector<ResidueDisk> affine_disks() const;

    // e-disk data, exposed for tests
    const LocalSeries& L_alpha() const { return La_; }
    const LocalSeries& L_beta() const { return Lb_; }
    const LocalSeries& G12_regular() const { return S12_; }
    const PadicNumber& G12_log_coeff() const { return r12_; }
    const PadicNumber& duplication_c5() const { return c5_; }
    /** Naive constant-term regularization of the depth-2 words differs from
     * the canonical (group-like) tangential-basepoint normalization by a
     * constant per word:
     *   kappa_(alpha beta) = 4 - 4 log_p 2,   kappa_(beta alpha) = 4 log_p 2.
     * The 4 is the gauge correction pairing beta's double pole with the zero
     * of L_alpha (the naive shuffle defect -[L_alpha L_beta]_0); the log_p 2
     * renormalizes the tangent to the parameter adapted to alpha = 2 dt + ...
     * Public doubles are canonical; internals stay naive. */
    const PadicNumber& regularization_kappa() const { return kappa12_; }
    const PadicNumber& shuffle_defect() const { return shuffle_defect_; }

private:
    WeierstrassCurve E_;
    long p_, N_, N1_, re_, Te_;
    FrobeniusData frob_;
    bool with_doubles_;

    DiskExpansion einf_;
    LocalSeries La_, Lb_;        // regularized antiderivatives of alpha, beta
    LocalSeries S12_, S21_;      // regular parts of the e-disk doubles
    PadicNumber r12_, r21_;      // their log coefficients (4 and -4)
    PadicNumber C12_, C21_;      // global double constants
    PadicNumber shuffle_defect_;
    PadicNumber kappa12_, kappa21_;
    EvenFn HE12_, HE21_;         // even primitives of the equivariance aggregates

    // duplication-map data for two-torsion disks
    PadicNumber dup_c_, dup_d_;  // class of delta*alpha in (alpha, beta): expect (0,1)
    OddFn dup_H_;                // exact part of delta*alpha
    EvenFn dup_H2_;              // exact part of the even leftover H' alpha
    PadicNumber dup_c1_;         // dlog f coefficient of H' alpha: expect -1/2
    PadicNumber c5_;             // constant of the duplication functional equation

    mutable std::map<long, DiskSeriesBundle> cache_;  // key = xbar * p + ybar-ish
    long solve_loss_ = 0;

    long disk_key(const ResidueDisk& d) const;
    void build_edisk();
    void build_double_constants();
    void build_duplication();
    DiskSeriesBundle build_bundle(const ResidueDisk& d) const;
    PadicNumber R12_at(const PadicNumber& x, const PadicNumber& y, const PadicNumber& ga,
                       const PadicNumber& gb) const;
    PadicNumber R21_at(const PadicNumber& x, const PadicNumber& y, const PadicNumber& ga,
                       const PadicNumber& gb) const;
    // [ h_e(z) * L(z) ]_0 by the residue recurrence
    PadicNumber pairing_const(const OddFn& h, const LocalSeries& L) const;
    PadicNumber even_fn_const(const EvenFn& H) const;
    PadicNumber series_product_const(const LocalSeries& A, const LocalSeries& B) const;
    PadicNumber z_param(const CurvePoint& P) const { return -(P.x / P.y); }

    friend struct ColemanTestHooks;
};

}  // namespace qchab
