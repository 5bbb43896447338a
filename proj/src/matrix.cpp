#include "qchab/matrix.hpp"

namespace qchab {

PadicMatrix PadicMatrix::operator*(const PadicMatrix& o) const {
    long p = rows_ && cols_ ? a_[0].prime() : 0;
    PadicMatrix r(rows_, o.cols_, p);
    for (long i = 0; i < rows_; ++i)
        for (long k = 0; k < cols_; ++k)
            for (long j = 0; j < o.cols_; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
    return r;
}

std::vector<PadicNumber> PadicMatrix::operator*(const std::vector<PadicNumber>& v) const {
    long p = rows_ && cols_ ? a_[0].prime() : 0;
    std::vector<PadicNumber> r(rows_, PadicNumber::zero(p));
    for (long i = 0; i < rows_; ++i)
        for (long j = 0; j < cols_; ++j) r[i] += at(i, j) * v[j];
    return r;
}

PadicMatrix PadicMatrix::transpose() const {
    long p = rows_ && cols_ ? a_[0].prime() : 0;
    PadicMatrix r(cols_, rows_, p);
    for (long i = 0; i < rows_; ++i)
        for (long j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

PadicNumber PadicMatrix::trace() const {
    PadicNumber t = at(0, 0);
    for (long i = 1; i < rows_; ++i) t += at(i, i);
    return t;
}

PadicNumber PadicMatrix::det2() const {
    return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
}

LinearSolveResult linear_solve(PadicMatrix A, std::vector<PadicNumber> b) {
    long n = A.rows();
    if (n != A.cols() || (long)b.size() != n) throw DomainError("linear_solve: shape");
    long loss = 0;
    std::vector<long> perm(n);
    for (long i = 0; i < n; ++i) perm[i] = i;
    for (long k = 0; k < n; ++k) {
        long best = -1;
        long bestv = 0;
        for (long i = k; i < n; ++i) {
            const PadicNumber& x = A.at(i, k);
            if (x.is_zero()) continue;
            long v = x.valuation();
            if (best < 0 || v < bestv) {
                best = i;
                bestv = v;
            }
        }
        if (best < 0) throw SingularToPrecision("linear_solve: pivot indistinguishable from zero");
        if (best != k) {
            for (long j = 0; j < n; ++j) std::swap(A.at(best, j), A.at(k, j));
            std::swap(b[best], b[k]);
        }
        loss += bestv;
        PadicNumber inv = A.at(k, k).inverse();
        for (long i = k + 1; i < n; ++i) {
            if (A.at(i, k).is_zero()) continue;
            PadicNumber f = A.at(i, k) * inv;
            for (long j = k; j < n; ++j) A.at(i, j) -= f * A.at(k, j);
            b[i] -= f * b[k];
        }
    }
    for (long k = n - 1; k >= 0; --k) {
        PadicNumber s = b[k];
        for (long j = k + 1; j < n; ++j) s -= A.at(k, j) * b[j];
        b[k] = s / A.at(k, k);
    }
    return {std::move(b), loss};
}

}  // namespace qchab
