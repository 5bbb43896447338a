#pragma once

#include <vector>

#include "qchab/padic.hpp"

namespace qchab {

class PadicMatrix {
public:
    PadicMatrix() : rows_(0), cols_(0) {}
    PadicMatrix(long rows, long cols, long p)
        : rows_(rows), cols_(cols), a_(rows * cols, PadicNumber::zero(p)) {}

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    PadicNumber& at(long i, long j) { return a_[i * cols_ + j]; }
    const PadicNumber& at(long i, long j) const { return a_[i * cols_ + j]; }

    PadicMatrix operator*(const PadicMatrix& o) const;
    std::vector<PadicNumber> operator*(const std::vector<PadicNumber>& v) const;
    PadicMatrix transpose() const;
    PadicNumber trace() const;
    PadicNumber det2() const;  // 2x2 determinant

private:
    long rows_, cols_;
    std::vector<PadicNumber> a_;
};

struct LinearSolveResult {
    std::vector<PadicNumber> x;
    long loss;  // sum of pivot valuations
};

/// Gaussian elimination with minimal-valuation pivoting.
LinearSolveResult linear_solve(PadicMatrix A, std::vector<PadicNumber> b);

}  // namespace qchab
