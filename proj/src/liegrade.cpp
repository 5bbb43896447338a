#include "qchab/liegrade.hpp"
#include <limits>

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qchab {

namespace {

// target polynomial coefficients: 1 - k t or 1 - 2g t + t^2
std::vector<BigInt> target_poly(LieKind kind, long param, long n_max) {
    std::vector<BigInt> t(n_max + 1, 0);
    t[0] = 1;
    if (kind == LieKind::Free) {
        if (n_max >= 1) t[1] = -param;
    } else {
        if (n_max >= 1) t[1] = -2 * param;
        if (n_max >= 2) t[2] = 1;
    }
    return t;
}

// multiply truncated series by (1 - t^i)^b for b >= 0
void mul_power(std::vector<BigInt>& s, long i, const BigInt& b, long n_max) {
    // (1 - x)^b = sum C(b, m) (-x)^m with x = t^i
    std::vector<BigInt> out(n_max + 1, 0);
    BigInt binom = 1;
    long mmax = n_max / i;
    for (long m = 0; m <= mmax; ++m) {
        BigInt coef = (m % 2 == 0) ? binom : -binom;
        for (long d = 0; d + i * m <= n_max; ++d)
            if (s[d] != 0) out[d + i * m] += coef * s[d];
        binom = binom * (b - m) / (m + 1);
    }
    s = std::move(out);
}

long mobius(long n) {
    long m = 1;
    for (long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) return 0;
            m = -m;
        }
    }
    if (n > 1) m = -m;
    return m;
}

BigInt factorial(long n) {
    BigInt f = 1;
    for (long i = 2; i <= n; ++i) f *= i;
    return f;
}

BigInt binomial(const BigInt& n, long k) {
    BigInt r = 1;
    for (long i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

GradedDimTable graded_dims(LieKind kind, long param, long n_max) {
    if (n_max < 1) throw DomainError("graded_dims: n_max >= 1");
    if ((kind == LieKind::Free && param < 2) || (kind == LieKind::Surface && param < 2))
        throw DomainError("graded_dims: parameter >= 2");
    GradedDimTable out{kind, param, {}};
    std::vector<BigInt> target = target_poly(kind, param, n_max);
    std::vector<BigInt> prod(n_max + 1, 0);
    prod[0] = 1;
    for (long i = 1; i <= n_max; ++i) {
        // choose b_i to match the t^i coefficient of the target
        // current product P_i(t) = prod_{j<i} (1-t^j)^{b_j}; the factor
        // (1-t^i)^{b_i} changes the t^i coefficient by -b_i
        BigInt bi = prod[i] - target[i];
        out.dims.push_back(bi);
        mul_power(prod, i, bi, n_max);
    }
    return out;
}

GradedDimTable graded_dims_mobius(LieKind kind, long param, long n_max) {
    GradedDimTable out{kind, param, {}};
    // s_m = k^m (free) or alpha^m + beta^m with alpha+beta = 2g, alpha beta = 1
    std::vector<BigInt> s(n_max + 1, 0);
    if (kind == LieKind::Free) {
        BigInt k = param;
        s[0] = 1;
        for (long m = 1; m <= n_max; ++m) s[m] = (m == 1) ? k : s[m - 1] * k;
    } else {
        s[0] = 2;
        if (n_max >= 1) s[1] = 2 * param;
        for (long m = 2; m <= n_max; ++m) s[m] = 2 * param * s[m - 1] - s[m - 2];
    }
    for (long n = 1; n <= n_max; ++n) {
        BigInt acc = 0;
        for (long d = 1; d <= n; ++d) {
            if (n % d) continue;
            long mu = mobius(d);
            if (mu) acc += mu * s[n / d];
        }
        // surface correction: the relation removes one dimension at level 2
        // only through the generating identity; the necklace form already
        // encodes it via alpha beta = 1
        if (acc % n != 0) throw DomainError("graded_dims_mobius: non-integral dimension");
        out.dims.push_back(acc / n);
    }
    return out;
}

bool verify_generating_identity(const GradedDimTable& t) {
    long n_max = (long)t.dims.size();
    std::vector<BigInt> prod(n_max + 1, 0);
    prod[0] = 1;
    for (long i = 1; i <= n_max; ++i) mul_power(prod, i, t.dims[i - 1], n_max);
    std::vector<BigInt> target = target_poly(t.kind, t.param, n_max);
    return prod == target;
}

BigInt metabelian_count(long g, long i) {
    if (g < 2) throw DomainError("metabelian_count: g >= 2");
    if (i < 2) throw DomainError("metabelian_count: i >= 2");
    // sum over j2 = 2..2g of (#j1 < j2) * (multisets of size i-2 from {1..j2})
    BigInt acc = 0;
    for (long j2 = 2; j2 <= 2 * g; ++j2)
        acc += BigInt(j2 - 1) * binomial(BigInt(j2 + i - 3), i - 2);
    return acc;
}

BigInt metabelian_count_enumerate(long g, long i) {
    if (i < 2) throw DomainError("metabelian_count_enumerate: i >= 2");
    // walk valid sequences j1 < j2 >= j3 >= ... >= ji directly
    BigInt total = 0;
    // choose j2, j1 < j2, then non-increasing tail of length i-2 bounded by j2
    struct Walker {
        long len;
        BigInt count_tail(long bound, long remaining) {
            if (remaining == 0) return 1;
            BigInt acc = 0;
            for (long v = 1; v <= bound; ++v) acc += count_tail(v, remaining - 1);
            return acc;
        }
    } w{i};
    for (long j2 = 2; j2 <= 2 * g; ++j2) total += BigInt(j2 - 1) * w.count_tail(j2, i - 2);
    return total;
}

BigRat selmer_upper(long g, long n, const BigRat& C2) {
    if (g < 2) throw DomainError("selmer_upper: g >= 2");
    if (C2 < 0) throw DomainError("selmer_upper: C2 >= 0");
    BigInt npow = pow_int(BigInt(n), 2 * g - 1);
    return BigRat(2 * g - 1, 2) * BigRat(npow * n, factorial(2 * g)) + C2 * BigRat(npow);
}

BigRat dr_lower(long g, long n) {
    if (g < 2) throw DomainError("dr_lower: g >= 2");
    return BigRat(2 * g - 2) * BigRat(pow_int(BigInt(n), 2 * g), factorial(2 * g));
}

BigInt euler_ledger(long g, long i, const BigInt& h2_bound) {
    if (h2_bound < 0) throw DomainError("euler_ledger: h2 >= 0");
    BigInt count = metabelian_count(g, i);
    return (count + 1) / 2 + h2_bound;
}

long crossover_by_formula(long g, const BigRat& C2) {
    // selmer_upper < dr_lower <=> (2g-3)/2 * n^{2g}/(2g)! > C2 n^{2g-1}
    //                         <=> n > 2 C2 (2g)! / (2g-3)
    BigRat bound = 2 * C2 * BigRat(factorial(2 * g)) / (2 * g - 3);
    BigInt fl = numerator(bound) / denominator(bound);
    return std::max((long)fl + 1, 1L);
}

BoundReport crossover_report(long g, const BigRat& C2, long list_levels) {
    if (g < 2) throw DomainError("crossover_report: g >= 2");
    if (C2 < 0) throw DomainError("crossover_report: C2 >= 0");
    BoundReport out;
    out.g = g;
    out.C2 = C2;
    long n = 1;
    while (!(selmer_upper(g, n, C2) < dr_lower(g, n))) ++n;
    out.crossover = n;
    out.levels_listed = std::min(list_levels, std::max(n, 2L));
    for (long i = 2; i <= out.levels_listed + 1; ++i) out.metabelian.push_back(metabelian_count(g, i));
    return out;
}

long scan_bound_ordering(long g, const BigRat& C2, long n_lo, long n_hi, bool parallel) {
    long violation = std::numeric_limits<long>::max();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : violation) if (parallel)
#endif
    for (long n = n_lo; n <= n_hi; ++n) {
        if (!(selmer_upper(g, n, C2) < dr_lower(g, n))) violation = std::min(violation, n);
    }
    return violation == std::numeric_limits<long>::max() ? 0 : violation;
}

}  // namespace qchab
