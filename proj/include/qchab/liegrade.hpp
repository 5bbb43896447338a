#pragma once

#include <vector>

#include "qchab/padic.hpp"

namespace qchab {

enum class LieKind { Free, Surface };

/// graded dimensions b_1..b_nmax of the associated graded Lie algebra:
/// free on k generators, or a surface-type one-relator quotient on 2g
struct GradedDimTable {
    LieKind kind;
    long param = 0;  // k for Free, g for Surface
    std::vector<BigInt> dims;
};

/// coefficient matching against prod (1 - t^i)^{b_i} = 1 - k t (free) or
/// 1 - 2g t + t^2 (surface)
GradedDimTable graded_dims(LieKind kind, long param, long n_max);
/// necklace-style closed form: (1/n) sum_{d | n} mu(d) s_{n/d}
GradedDimTable graded_dims_mobius(LieKind kind, long param, long n_max);
/// expand prod (1 - t^i)^{b_i} and check it reproduces the target polynomial
bool verify_generating_identity(const GradedDimTable& t);

/// sequences j1 < j2 >= j3 >= ... >= ji from {1..2g}; closed form
BigInt metabelian_count(long g, long i);
/// independent enumeration oracle (walks only valid sequences)
BigInt metabelian_count_enumerate(long g, long i);

/// [(2g-1)/2] n^{2g} / (2g)! + C2 n^{2g-1}, exact
BigRat selmer_upper(long g, long n, const BigRat& C2);
/// (2g-2) n^{2g} / (2g)!
BigRat dr_lower(long g, long n);

/// ceil(metabelian_count/2) + h2 — the per-level ledger bound
BigInt euler_ledger(long g, long i, const BigInt& h2_bound);

struct BoundReport {
    long g = 0;
    BigRat C2;
    long crossover = 0;  // least n with selmer_upper < dr_lower
    std::vector<BigInt> metabelian;  // exact counts for i = 2..levels
    long levels_listed = 0;
};

BoundReport crossover_report(long g, const BigRat& C2, long list_levels = 20);
/// closed-form crossover by solving the degree comparison (two-method check)
long crossover_by_formula(long g, const BigRat& C2);

/// verify selmer_upper < dr_lower for all n in [n_lo, n_hi]; returns first
/// violation or 0
long scan_bound_ordering(long g, const BigRat& C2, long n_lo, long n_hi, bool parallel);

}  // namespace qchab
