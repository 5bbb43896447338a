#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qchab/coleman.hpp"

namespace qchab {

/// problem instance: curve, prime, precision, one known integral point,
/// plus the user-declared hypotheses (echoed in reports, never verified)
struct QCInstance {
    WeierstrassCurve curve;
    CurvePoint known;               // integral, non-torsion
    std::string rank_declared;      // e.g. "1"
    std::string sha_declared;       // e.g. "trivial"

    QCInstance(WeierstrassCurve E, CurvePoint y0, std::string rank = "1",
               std::string sha = "trivial")
        : curve(std::move(E)), known(std::move(y0)), rank_declared(std::move(rank)),
          sha_declared(std::move(sha)) {}
};

struct QCConstant {
    PadicNumber c;
    CurvePoint from;
    long achieved_prec = 0;
};

struct CandidatePoint {
    ResidueDisk disk;
    PadicNumber t_star;
    PadicNumber x, y;
    bool multiple_root = false;   // flagged when the mod-p root was not simple
    bool matches_known = false;
    long root_prec = 0;
};

/// tau(w) = D2(w) - log_alpha(w) log_beta(w)
PadicNumber qc_tau(const ColemanEngine& eng, const CurvePoint& w);

/// c = tau(y0) / log_alpha(y0)^2
QCConstant qc_constant(const ColemanEngine& eng, const QCInstance& inst);

/// log_alpha(y)^2 tau(z) - log_alpha(z)^2 tau(y); vanishes on pairs of integral points
PadicNumber corollary_residual(const ColemanEngine& eng, const CurvePoint& y, const CurvePoint& z);

/// local series of rho(z) = tau(z) - c log_alpha(z)^2 in the disk parameter
LocalSeries qc_series_on_disk(const ColemanEngine& eng, const ResidueDisk& d, const QCConstant& c);

struct LocateOptions {
    bool parallel = true;
    std::vector<ExactPoint> cross_check;  // known integral points to match
};

/** Roots of rho per non-infinity disk.  The disk series is rescaled to
 * sigma(s) = rho(p s), the p-content cleared, simple roots of the mod-p
 * reduction lifted by Newton; a multiple root is re-expanded one level
 * (t = p s') before being flagged. */
std::vector<CandidatePoint> qc_locate(const ColemanEngine& eng, const QCInstance& inst,
                                      const LocateOptions& opt = {});
std::vector<CandidatePoint> qc_locate_serial(const ColemanEngine& eng, const QCInstance& inst,
                                             std::vector<ExactPoint> cross_check = {});

}  // namespace qchab
