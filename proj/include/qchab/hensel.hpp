#pragma once

#include <vector>

#include "qchab/padic.hpp"
#include "qchab/series.hpp"

namespace qchab {

/// dense polynomial evaluation, coefficients c[0..d]
PadicNumber poly_eval(const std::vector<PadicNumber>& c, const PadicNumber& x);
std::vector<PadicNumber> poly_derivative(const std::vector<PadicNumber>& c);

/** Newton iteration from x0.  Requires v(f(x0)) > 2 v(f'(x0)); throws
 * SingularToPrecision ("non-simple-to-precision") otherwise, and
 * PrecisionExhausted if the iteration cap (64) is hit without convergence.
 */
PadicNumber hensel_root(const std::vector<PadicNumber>& f, const PadicNumber& x0);
PadicNumber hensel_root(const LocalSeries& f, const PadicNumber& x0);

}  // namespace qchab
