#include "qchab/hensel.hpp"

namespace qchab {

PadicNumber poly_eval(const std::vector<PadicNumber>& c, const PadicNumber& x) {
    long p = x.prime();
    PadicNumber acc = PadicNumber::zero(p);
    for (long i = (long)c.size() - 1; i >= 0; --i) acc = acc * x + c[i];
    return acc;
}

std::vector<PadicNumber> poly_derivative(const std::vector<PadicNumber>& c) {
    std::vector<PadicNumber> d;
    for (size_t i = 1; i < c.size(); ++i)
        d.push_back(c[i] * PadicNumber::from_integer((long)i, c[i].prime() ? c[i].prime() : 2,
                                                     std::max<long>(c[i].rel_prec(), kDefaultRelPrec) + 2));
    return d;
}

namespace {
constexpr int kNewtonCap = 64;
}

PadicNumber hensel_root(const std::vector<PadicNumber>& f, const PadicNumber& x0) {
    std::vector<PadicNumber> fd = poly_derivative(f);
    PadicNumber x = x0;
    PadicNumber fx = poly_eval(f, x);
    PadicNumber dfx = poly_eval(fd, x);
    if (dfx.is_zero()) throw SingularToPrecision("hensel_root: non-simple-to-precision");
    if (fx.is_exact_zero()) return x;
    long vf = fx.is_zero() ? fx.abs_prec() : fx.valuation();
    if (!(vf > 2 * dfx.valuation()))
        throw SingularToPrecision("hensel_root: non-simple-to-precision");
    for (int it = 0; it < kNewtonCap; ++it) {
        fx = poly_eval(f, x);
        if (fx.is_zero()) return x;
        dfx = poly_eval(fd, x);
        PadicNumber step = fx / dfx;
        PadicNumber nx = x - step;
        if (step.is_zero() || (nx - x).is_zero()) return nx;
        x = nx;
    }
    throw PrecisionExhausted("hensel_root: no convergence within iteration cap");
}

PadicNumber hensel_root(const LocalSeries& f, const PadicNumber& x0) {
    if (f.low_degree() < 0) throw DomainError("hensel_root: polar series");
    std::vector<PadicNumber> c;
    for (long d = 0; d <= f.truncation(); ++d) c.push_back(f.coeff(d));
    return hensel_root(c, x0);
}

}  // namespace qchab
