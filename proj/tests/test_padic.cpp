#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qchab/hensel.hpp"
#include "qchab/matrix.hpp"
#include "qchab/padic.hpp"
#include "qchab/series.hpp"

using namespace qchab;

TEST_CASE("inverse of 2 in Z_5 at r=3 is 63 mod 125") {
    PadicNumber two = PadicNumber::from_integer(2, 5, 3);
    PadicNumber inv = two.inverse();
    CHECK(inv.valuation() == 0);
    CHECK(inv.unit() == 63);
    CHECK(inv.str() == "3+2*5+2*5^2+O(5^3)");
}

TEST_CASE("a + 0 is bit-identical") {
    PadicNumber a = PadicNumber::make(5, 2, 13, 7);
    PadicNumber r = a + PadicNumber::zero(5);
    CHECK(r.valuation() == a.valuation());
    CHECK(r.rel_prec() == a.rel_prec());
    CHECK(r.unit() == a.unit());
}

TEST_CASE("multiplying by p shifts valuation, keeps unit") {
    PadicNumber a = PadicNumber::make(5, 0, 7, 6);
    PadicNumber r = PadicNumber::from_integer(5, 5, 6) * a;
    CHECK(r.valuation() == 1);
    CHECK(r.unit() == a.unit() % pow_int(5, r.rel_prec()));
}

TEST_CASE("cancellation produces inexact zero and precision loss") {
    PadicNumber a = PadicNumber::from_integer(7, 5, 5);
    CHECK((a - a).is_zero());
    CHECK_FALSE((a - a).is_exact_zero());
    CHECK((a - a).abs_prec() == 5);
    // partial cancellation: (1 + 5^3) - 1 has valuation 3, rel prec 5-3
    PadicNumber b = PadicNumber::from_integer(1 + 125, 5, 5);
    PadicNumber c = b - PadicNumber::from_integer(1, 5, 5);
    CHECK(c.valuation() == 3);
    CHECK(c.rel_prec() == 2);
}

TEST_CASE("division by inexact zero throws precision-exhausted") {
    PadicNumber a = PadicNumber::from_integer(3, 5, 4);
    PadicNumber z = a - a;
    CHECK_THROWS_AS(a / z, PrecisionExhausted);
}

TEST_CASE("prime mismatch throws") {
    PadicNumber a = PadicNumber::from_integer(2, 5, 4);
    PadicNumber b = PadicNumber::from_integer(2, 7, 4);
    CHECK_THROWS_AS(a + b, DomainError);
}

TEST_CASE("random arithmetic matches exact rationals") {
    std::mt19937 rng(42);
    const long p = 5, r = 12;
    BigInt mod = pow_int(p, 30);
    for (int i = 0; i < 300; ++i) {
        long a = (long)(rng() % 10000) - 5000;
        long b = (long)(rng() % 10000) - 5000;
        if (a == 0 || b == 0) continue;
        PadicNumber pa = PadicNumber::from_integer(a, p, r);
        PadicNumber pb = PadicNumber::from_integer(b, p, r);
        auto agree = [&](const PadicNumber& got, const BigRat& want) {
            PadicNumber w = PadicNumber::from_rational(want, p, r + 8);
            PadicNumber d = got - w;
            CHECK(d.is_zero());
            // stated precision never exceeds the propagation bound
            CHECK(got.abs_prec() <= w.abs_prec());
        };
        agree(pa + pb, BigRat(a + b));
        agree(pa - pb, BigRat(a - b));
        agree(pa * pb, BigRat(BigInt(a) * b));
        agree(pa / pb, BigRat(a) / b);
    }
}

TEST_CASE("teichmuller examples and battery") {
    PadicNumber t = teichmuller(2, 5, 3);
    CHECK(t.unit() == 57);
    CHECK(teichmuller(1, 5, 8).unit() == 1);
    CHECK(teichmuller(4, 5, 3).unit() == 124);
    for (long p : {5L, 7L, 11L, 13L}) {
        for (long r : {1L, 5L, 20L}) {
            BigInt m = pow_int(p, r);
            for (long res = 1; res < p; ++res) {
                PadicNumber x = teichmuller(res, p, r);
                CHECK(mod_pow(x.unit(), p, m) == x.unit());
                CHECK(x.unit() % p == res);
            }
        }
    }
    CHECK_THROWS_AS(teichmuller(0, 5, 3), DomainError);
}

TEST_CASE("canonical digit form") {
    CHECK(PadicNumber::zero(5).str() == "0");
    CHECK(PadicNumber::zero_to_prec(5, 4).str() == "O(5^4)");
    CHECK(PadicNumber::from_integer(1, 5, 3).str() == "1+O(5^3)");
    CHECK(PadicNumber::make(5, -1, 2, 2).str() == "2*5^-1+O(5)");
    CHECK(PadicNumber::from_integer(50, 5, 2).str() == "2*5^2+O(5^4)");
}

TEST_CASE("series antiderivative and derivative are inverse") {
    long p = 5, T = 8;
    LocalSeries s = LocalSeries::zero(p, T);
    s.set_coeff(0, PadicNumber::from_integer(1, p, 10));
    s.set_coeff(1, PadicNumber::from_integer(1, p, 10));
    LocalSeries a = s.antiderivative();
    CHECK(a.coeff(1).unit() == 1);
    CHECK((a.coeff(2) - PadicNumber::from_rational(BigRat(1, 2), p, 10)).is_zero());
    LocalSeries back = a.derivative();
    for (long d = 0; d <= T - 1; ++d) CHECK((back.coeff(d) - s.coeff(d)).is_zero());
}

TEST_CASE("series eval matches big-integer partial sum of -log(1-t)") {
    // sum t^m/m at t=5, p=5
    long p = 5, N = 14;
    long M = truncation_order(N, p);
    LocalSeries s = LocalSeries::zero(p, M);
    for (long m = 1; m <= M; ++m)
        s.set_coeff(m, PadicNumber::from_rational(BigRat(1, m), p, N + 6));
    PadicNumber got = s.eval(PadicNumber::from_integer(5, p, N + 6));
    BigRat want = 0;
    for (long m = 1; m <= M; ++m) want += BigRat(pow_int(5, m), m);
    PadicNumber w = PadicNumber::from_rational(want, p, N + 6);
    PadicNumber diff = got - w;
    CHECK((diff.is_zero() || diff.valuation() >= N));
}

TEST_CASE("series truncation rule") {
    CHECK(truncation_order(10, 5) >= 10);
    long M = truncation_order(12, 5);
    long lg = 0, q = M;
    while (q >= 5) { q /= 5; ++lg; }
    CHECK(M - lg >= 12);
}

TEST_CASE("series multiplication and inverse") {
    long p = 7, T = 10;
    LocalSeries s = LocalSeries::zero(p, T);
    s.set_coeff(0, PadicNumber::from_integer(1, p, 12));
    s.set_coeff(1, PadicNumber::from_integer(3, p, 12));
    s.set_coeff(2, PadicNumber::from_integer(-2, p, 12));
    LocalSeries inv = s.inverse();
    LocalSeries prod = s * inv;
    CHECK((prod.coeff(0) - PadicNumber::from_integer(1, p, 12)).is_zero());
    for (long d = 1; d <= prod.truncation(); ++d) CHECK(prod.coeff(d).is_zero());
}

TEST_CASE("laurent series support") {
    long p = 5, T = 6;
    LocalSeries s = LocalSeries::monomial(PadicNumber::from_integer(2, p, 10), -2, T);
    s.set_coeff(1, PadicNumber::from_integer(3, p, 10));
    LocalSeries sq = s * s;
    CHECK(sq.low_degree() == -4);
    CHECK(sq.coeff(-4).unit() == 4);
    CHECK(sq.coeff(-1).unit() == 12);
    CHECK_THROWS_AS(LocalSeries::monomial(PadicNumber::from_integer(1, p, 10), -1, T).antiderivative(),
                    DomainError);
}

TEST_CASE("linear_solve identity and diag(p,1)") {
    long p = 5;
    PadicMatrix I(2, 2, p);
    I.at(0, 0) = PadicNumber::from_integer(1, p, 10);
    I.at(1, 1) = PadicNumber::from_integer(1, p, 10);
    std::vector<PadicNumber> b{PadicNumber::from_integer(3, p, 10), PadicNumber::from_integer(4, p, 10)};
    auto res = linear_solve(I, b);
    CHECK(res.loss == 0);
    CHECK((res.x[0] - b[0]).is_zero());

    PadicMatrix D(2, 2, p);
    D.at(0, 0) = PadicNumber::from_integer(5, p, 10);
    D.at(1, 1) = PadicNumber::from_integer(1, p, 10);
    std::vector<PadicNumber> b2{PadicNumber::from_integer(5, p, 10), PadicNumber::from_integer(1, p, 10)};
    auto res2 = linear_solve(D, b2);
    CHECK(res2.loss == 1);
    CHECK((res2.x[0] - PadicNumber::from_integer(1, p, 10)).is_zero());
    CHECK((res2.x[1] - PadicNumber::from_integer(1, p, 10)).is_zero());
}

TEST_CASE("linear_solve residual battery") {
    std::mt19937 rng(7);
    long p = 5;
    int done = 0;
    while (done < 1000) {
        PadicMatrix A(2, 2, p);
        long a = (long)(rng() % 50) - 25, b = (long)(rng() % 50) - 25;
        long c = (long)(rng() % 50) - 25, d = (long)(rng() % 50) - 25;
        if (a * d - b * c == 0) continue;
        A.at(0, 0) = PadicNumber::from_integer(a, p, 12);
        A.at(0, 1) = PadicNumber::from_integer(b, p, 12);
        A.at(1, 0) = PadicNumber::from_integer(c, p, 12);
        A.at(1, 1) = PadicNumber::from_integer(d, p, 12);
        std::vector<PadicNumber> rhs{PadicNumber::from_integer((long)(rng() % 9) - 4, p, 12),
                                     PadicNumber::from_integer((long)(rng() % 9) - 4, p, 12)};
        auto res = linear_solve(A, rhs);
        auto back = A * res.x;
        for (int i = 0; i < 2; ++i) {
            PadicNumber resid = back[i] - rhs[i];
            long claimed = std::min(res.x[0].abs_prec(), res.x[1].abs_prec());
            CHECK((resid.is_zero() || resid.valuation() >= claimed));
        }
        ++done;
    }
}

TEST_CASE("singular matrix throws") {
    long p = 5;
    PadicMatrix A(2, 2, p);
    A.at(0, 0) = PadicNumber::from_integer(1, p, 8);
    A.at(0, 1) = PadicNumber::from_integer(2, p, 8);
    A.at(1, 0) = PadicNumber::from_integer(2, p, 8);
    A.at(1, 1) = PadicNumber::from_integer(4, p, 8);
    std::vector<PadicNumber> b{PadicNumber::from_integer(1, p, 8), PadicNumber::from_integer(1, p, 8)};
    CHECK_THROWS_AS(linear_solve(A, b), SingularToPrecision);
}

TEST_CASE("hensel_root examples") {
    long p = 5;
    // x^2 - 16 from x0 = 4: exact root 4
    std::vector<PadicNumber> f{PadicNumber::from_integer(-16, p, 12), PadicNumber::zero(p),
                               PadicNumber::from_integer(1, p, 12)};
    PadicNumber r = hensel_root(f, PadicNumber::from_integer(4, p, 12));
    CHECK((r - PadicNumber::from_integer(4, p, 12)).is_zero());

    // x^2 + 1 from x0 = 2: square root of -1; square it back
    std::vector<PadicNumber> g{PadicNumber::from_integer(1, p, 12), PadicNumber::zero(p),
                               PadicNumber::from_integer(1, p, 12)};
    PadicNumber i = hensel_root(g, PadicNumber::from_integer(2, p, 12));
    PadicNumber back = i * i + PadicNumber::from_integer(1, p, 12);
    CHECK((back.is_zero()));
    CHECK(back.abs_prec() >= i.abs_prec());

    // x^2 from 0: degenerate
    std::vector<PadicNumber> h{PadicNumber::zero(p), PadicNumber::zero(p),
                               PadicNumber::from_integer(1, p, 12)};
    CHECK_THROWS_AS(hensel_root(h, PadicNumber::zero(p)), SingularToPrecision);
}

TEST_CASE("iwasawa log") {
    long p = 5, r = 12;
    PadicNumber u = PadicNumber::from_integer(6, p, r);  // 1 + 5
    PadicNumber l1 = padic_log(u);
    PadicNumber l2 = padic_log(u * u);
    CHECK((l2 - l1 - l1).is_zero());
    // log kills Teichmuller representatives
    CHECK(padic_log(teichmuller(2, p, r)).is_zero());
    // log_p(p) = 0 branch: log(5*6) = log(6)
    CHECK((padic_log(PadicNumber::from_integer(30, p, r)) - l1).is_zero());
}
