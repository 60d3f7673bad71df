#include "doctest.h"

#include <random>

#include "icm/exact.hpp"
#include "icm/poly.hpp"

using namespace icm;

namespace {

// Reference HNF: repeated gcd-elimination with extended Euclid on pairs of rows,
// written independently of the library eliminator.
std::vector<IntVec> reference_hnf(std::vector<IntVec> rows, std::size_t n) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i][c] == 0) continue;
            Int a = rows[r][c], b = rows[i][c], g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            const Int ag = a / g, bg = b / g;
            IntVec nr(n), ni(n);
            for (std::size_t k = 0; k < n; ++k) {
                nr[k] = s * rows[r][k] + t * rows[i][k];
                ni[k] = -bg * rows[r][k] + ag * rows[i][k];
            }
            rows[r] = nr;
            rows[i] = ni;
        }
        if (rows[r][c] == 0) continue;
        if (rows[r][c] < 0)
            for (auto& x : rows[r]) x = -x;
        for (std::size_t i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
            for (std::size_t k = 0; k < n; ++k) rows[i][k] -= q * rows[r][k];
        }
        ++r;
    }
    rows.resize(r);
    return rows;
}

}  // namespace

TEST_CASE("hnf matches reference eliminator on random matrices") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + rng() % 6, n = 1 + rng() % 5;
        std::vector<IntVec> rows(m, IntVec(n));
        for (auto& r : rows)
            for (auto& x : r) x = static_cast<long>(rng() % 41) - 20;
        const auto ref = reference_hnf(rows, n);
        const auto got = hnf_rows(rows, n);
        CHECK(got == ref);
        const auto full = hnf(IntMat::from_rows(rows));
        CHECK(full.U * IntMat::from_rows(rows) == full.H);
        CHECK(std::abs(det(full.U).get_si()) == 1);
    }
}

TEST_CASE("snf gives divisibility chain and unimodular transforms") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 1 + rng() % 5, n = 1 + rng() % 5;
        IntMat M(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) M(i, j) = static_cast<long>(rng() % 25) - 12;
        const auto s = snf(M);
        CHECK(s.P * M * s.Q == s.D);
        CHECK(abs(det(s.P)) == 1);
        CHECK(abs(det(s.Q)) == 1);
        const std::size_t k = std::min(m, n);
        for (std::size_t i = 0; i + 1 < k; ++i) {
            if (s.D(i, i) == 0) CHECK(s.D(i + 1, i + 1) == 0);
            else CHECK(s.D(i + 1, i + 1) % s.D(i, i) == 0);
        }
        if (m == n) {
            Int prod = 1;
            for (std::size_t i = 0; i < k; ++i) prod *= s.D(i, i);
            CHECK(prod == abs(det(M)));
        }
    }
}

TEST_CASE("normal form examples") {
    CHECK(hnf(IntMat::from_rows({{0, 1}, {1, 0}})).H == IntMat::identity(2));
    CHECK(hnf(IntMat::from_rows({{4, 2}, {2, 4}})).H == IntMat::from_rows({{2, 4}, {0, 6}}));
    CHECK(elementary_divisors(IntMat::from_rows({{2, 0}, {0, 3}})) == std::vector<Int>{1, 6});
    CHECK(elementary_divisors(IntMat::from_rows({{2, 0}, {0, 4}})) == std::vector<Int>{2, 4});
    const auto h = hnf(IntMat::from_rows({{3, 5, 7}, {2, 2, 8}, {1, 9, 4}}));
    CHECK(hnf(h.H).H == h.H);
}

TEST_CASE("inverse, kernels and index") {
    const RatMat A = RatMat::from_rows({{2, 1}, {1, 1}});
    CHECK(A * inverse(A) == RatMat::identity(2));
    const RatVec x = solve_left(A, {Rat(3), Rat(2)});
    CHECK(x[0] * 2 + x[1] == 3);
    CHECK(x[0] + x[1] == 2);
    const IntMat K = IntMat::from_rows({{2, 4}, {1, 2}, {3, 6}});
    const auto ker = integer_left_kernel(K);
    CHECK(ker.size() == 2);
    for (const auto& v : ker) CHECK(v[0] * 2 + v[1] + v[2] * 3 == 0);
    CHECK(rank(to_rat(K)) == 1);
    CHECK(lattice_index(RatMat::identity(2), RatMat::from_rows({{2, 0}, {1, 3}})) == 6);
    CHECK_THROWS_AS(IntMat(0, 3), Error);
}

TEST_CASE("polynomial arithmetic") {
    const ZPoly f{-1, 0, 1};  // x^2 - 1
    CHECK(is_squarefree(f));
    CHECK(!is_squarefree(ZPoly{1, 2, 1}));
    CHECK(discriminant(f) == 4);
    CHECK(discriminant(ZPoly{3, 1, 1}) == -11);
    CHECK(resultant(ZPoly{-1, 1}, ZPoly{-2, 1}) == -1);
    CHECK(divide_exact(f, ZPoly{1, 1}) == ZPoly{-1, 1});
    CHECK(!divide_exact(f, ZPoly{2, 1}));
    const auto xg = xgcd(to_qpoly(ZPoly{1, 1}), to_qpoly(ZPoly{-1, 1}));
    CHECK(xg.g == QPoly{Rat(1)});
    CHECK(add(mul(xg.s, to_qpoly(ZPoly{1, 1})), mul(xg.t, to_qpoly(ZPoly{-1, 1}))) == QPoly{Rat(1)});
}

TEST_CASE("factor_weil") {
    const auto ag = factor_weil(ZPoly{25, 0, 6, 0, 1}, 5);
    REQUIRE(ag.size() == 2);
    CHECK(ag[0] == ZPoly{5, -2, 1});
    CHECK(ag[1] == ZPoly{5, 2, 1});
    CHECK(factor_weil(ZPoly{25, 5, -2, 1, 1}, 5) == std::vector<ZPoly>{{5, -3, 1}, {5, 4, 1}});
    CHECK(factor_weil(ZPoly{25, 0, 4, 0, 1}, 5).size() == 1);
    // (x^2+x+3)(x^2-x+3)
    const ZPoly h = mul(ZPoly{3, 1, 1}, ZPoly{3, -1, 1});
    const auto fs = factor_weil(h, 3);
    REQUIRE(fs.size() == 2);
    CHECK(fs[0] == ZPoly{3, -1, 1});
    CHECK(fs[1] == ZPoly{3, 1, 1});
    // supersingular-looking factors also found
    const auto gs = factor_weil(mul(ZPoly{-2, 1}, ZPoly{4, 1, 1}), 4);
    CHECK(gs.size() == 2);
}

TEST_CASE("F_p root splitting") {
    const std::int64_t p = 1000003;
    fp::Poly f{1};
    const std::vector<std::int64_t> roots{5, 77, 123456, 999999};
    for (auto r : roots) f = fp::mul(f, fp::Poly{p - r, 1}, p);
    CHECK(fp::split_roots(f, p) == roots);
    CHECK(fp::split_roots(fp::Poly{6, 5, 1}, 7) == std::vector<std::int64_t>{4, 5});
}
