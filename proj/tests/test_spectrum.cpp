#include "doctest.h"

#include <functional>
#include <memory>

#include "icm/fielddata.hpp"
#include "icm/spectrum.hpp"

using namespace icm;

namespace {

const std::vector<FieldData>& pool() {
    static const std::vector<FieldData> p = load_field_dir(std::string(ICM_DATA_DIR) + "/fields");
    return p;
}

// Every S-ideal between pS and S with a field quotient, found by listing all
// subspaces of S/pS in reduced echelon form.
std::vector<Lattice> brute_maximal(const AlgebraContext& ctx, const Order& S, long p) {
    const std::size_t n = S.dim();
    const auto B = S.basis();
    std::vector<Lattice> out;
    auto to_elem = [&](const std::vector<long>& c) {
        Elem e(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) e[k] += B[i][k] * Rat(c[i]);
        return e;
    };
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<std::size_t> piv;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) piv.push_back(i);
        if (piv.size() == n) continue;  // the whole ring
        // free entries: row r, column c > piv[r], c not a pivot
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        for (std::size_t r = 0; r < piv.size(); ++r)
            for (std::size_t c = piv[r] + 1; c < n; ++c)
                if (!(mask >> c & 1)) slots.emplace_back(r, c);
        std::vector<long> vals(slots.size(), 0);
        for (;;) {
            std::vector<Elem> gens;
            for (const auto& b : B) gens.push_back(ctx.scale(b, Rat(p)));
            for (std::size_t r = 0; r < piv.size(); ++r) {
                std::vector<long> c(n, 0);
                c[piv[r]] = 1;
                for (std::size_t s = 0; s < slots.size(); ++s)
                    if (slots[s].first == r) c[slots[s].second] = vals[s];
                gens.push_back(to_elem(c));
            }
            Lattice L = Lattice::from_generators(gens, n);
            if (is_ideal_of(ctx, L, S)) {
                // coset representatives of S/L: combinations of non-pivot basis vectors
                std::vector<std::size_t> np;
                for (std::size_t i = 0; i < n; ++i)
                    if (!(mask >> i & 1)) np.push_back(i);
                std::vector<Elem> reps;
                std::vector<long> cur(np.size(), 0);
                for (;;) {
                    std::vector<long> c(n, 0);
                    for (std::size_t t = 0; t < np.size(); ++t) c[np[t]] = cur[t];
                    reps.push_back(to_elem(c));
                    std::size_t t = 0;
                    while (t < cur.size() && ++cur[t] == p) cur[t++] = 0;
                    if (t == cur.size()) break;
                }
                bool field = true;
                for (std::size_t a = 1; a < reps.size() && field; ++a)
                    for (std::size_t b = 1; b < reps.size() && field; ++b)
                        if (L.contains(ctx.mul(reps[a], reps[b]))) field = false;
                if (field) out.push_back(L);
            }
            std::size_t s = 0;
            while (s < vals.size() && ++vals[s] == p) vals[s++] = 0;
            if (s == vals.size()) break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("primes of Q(sqrt(-11))") {
    AlgebraContext ctx(parse_weil(1, 3, ZPoly{3, 1, 1}));
    auto mo = assemble_maximal_order(ctx, select_field_data(ctx, pool()));
    auto P3 = maximal_ideals_above(ctx, mo.OK, 3);
    REQUIRE(P3.size() == 2);
    CHECK(P3[0].norm() == 3);
    CHECK(P3[1].norm() == 3);
    auto P2 = maximal_ideals_above(ctx, mo.OK, 2);
    REQUIRE(P2.size() == 1);
    CHECK(P2[0].norm() == 4);
    auto P11 = maximal_ideals_above(ctx, mo.OK, 11);
    REQUIRE(P11.size() == 1);
    CHECK(P11[0].norm() == 11);
    CHECK(prime_sort_key(ctx, mo, P11[0]) == PrimeSortKey{1, 11, 1});
    auto k0 = prime_sort_key(ctx, mo, P3[0]), k1 = prime_sort_key(ctx, mo, P3[1]);
    CHECK(k0.m == 3);
    CHECK(k1.m == 3);
    CHECK(std::min(k0.n, k1.n) == 1);
    CHECK(std::max(k0.n, k1.n) == 2);
    CHECK(primes_of_OK_above(ctx, mo.OK, P3[0]).size() == 1);
}

TEST_CASE("conductor-3 order of Q(sqrt(-3))") {
    AlgebraContext ctx(parse_weil(1, 7, ZPoly{7, 1, 1}));
    auto mo = assemble_maximal_order(ctx, select_field_data(ctx, pool()));
    const Order R = frobenius_order(ctx);
    auto P = maximal_ideals_above(ctx, R, 3);
    REQUIRE(P.size() == 1);
    CHECK(P[0].norm() == 3);
    auto above = primes_of_OK_above(ctx, mo.OK, P[0]);
    REQUIRE(above.size() == 1);
    CHECK(above[0].norm() == 3);
    CHECK(maximal_ideals_above(ctx, mo.OK, 3).size() == 1);
}

TEST_CASE("non-invertible prime below two primes of O_K") {
    AlgebraContext c7(parse_weil(1, 5, ZPoly{5, -4, 1}));  // Z[i]
    auto mo = assemble_maximal_order(c7, select_field_data(c7, pool()));
    // 5 splits in Z[i]; S = Z + 5 O_K has a single prime above 5.
    std::vector<Elem> gens{c7.one()};
    for (const auto& b : mo.OK.basis()) gens.push_back(c7.scale(b, 5));
    const Order S = Lattice::from_generators(gens, 2);
    REQUIRE(is_order(c7, S));
    auto P = maximal_ideals_above(c7, S, 5);
    REQUIRE(P.size() == 1);
    CHECK(P[0].norm() == 5);
    CHECK(primes_of_OK_above(c7, mo.OK, P[0]).size() == 2);
    CHECK(maximal_ideals_above(c7, mo.OK, 5).size() == 2);
}

TEST_CASE("maximal ideals agree with subspace enumeration") {
    struct Case {
        int g;
        long q;
        ZPoly h;
        std::vector<long> primes;
    };
    const std::vector<Case> cases = {
        {1, 3, {3, 1, 1}, {2, 3, 5, 11}},
        {1, 7, {7, 1, 1}, {2, 3, 7}},
        {2, 5, {25, 0, 6, 0, 1}, {2, 3, 5}},
        {2, 5, {25, 0, 4, 0, 1}, {2, 3, 5}},
        {2, 5, {25, 5, 4, 1, 1}, {2, 5}},
    };
    for (const auto& c : cases) {
        AlgebraContext ctx(parse_weil(c.g, c.q, c.h));
        auto mo = assemble_maximal_order(ctx, select_field_data(ctx, pool()));
        for (const Order& S : {frobenius_order(ctx), mo.OK})
            for (long p : c.primes) {
                auto got = maximal_ideals_above(ctx, S, p);
                std::vector<Lattice> lat;
                int deg = 0;
                for (const auto& P : got) {
                    lat.push_back(P.ideal);
                    CHECK(index(P.ideal, S) == Rat(1, P.norm()));
                    deg += P.f;
                }
                CHECK(lat == brute_maximal(ctx, S, p));
                CHECK(deg <= static_cast<int>(ctx.dim()));
            }
    }
}
