#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "icm/fielddata.hpp"
#include "icm/principal.hpp"
#include "icm/spectrum.hpp"

using namespace icm;

namespace {

const std::vector<FieldData>& pool() {
    static const std::vector<FieldData> p = load_field_dir(std::string(ICM_DATA_DIR) + "/fields");
    return p;
}

struct Setup {
    std::unique_ptr<AlgebraContext> ctx;
    MaximalOrderData mo;
    std::unique_ptr<IsoTester> iso;
};

Setup make(int g, long q, const ZPoly& h) {
    Setup s;
    s.ctx = std::make_unique<AlgebraContext>(parse_weil(g, q, h));
    s.mo = assemble_maximal_order(*s.ctx, select_field_data(*s.ctx, pool()));
    s.iso = std::make_unique<IsoTester>(*s.ctx, s.mo);
    return s;
}

// Isomorphism in an imaginary quadratic algebra by scanning a box in (I:J)
// large enough to hold every element of T2 at most 2N.
bool quadratic_iso_oracle(const AlgebraContext& ctx, const Lattice& I, const Lattice& J) {
    if (mult_ring(ctx, I) != mult_ring(ctx, J)) return false;
    const Lattice C = colon(ctx, I, J);
    const Rat N = I.covolume() / J.covolume();
    const auto B = C.basis();
    RatMat G = t2_gram(ctx, B);
    RatMat Gi = inverse(G);
    std::vector<long> box(2);
    for (int i = 0; i < 2; ++i) box[i] = static_cast<long>(std::sqrt(Rat(2 * N * Gi(i, i)).get_d())) + 1;
    for (long x = -box[0]; x <= box[0]; ++x)
        for (long y = -box[1]; y <= box[1]; ++y) {
            Elem a = ctx.add(ctx.scale(B[0], Rat(x)), ctx.scale(B[1], Rat(y)));
            if (ctx.is_zero(a)) continue;
            Rat n = ctx.norm(a);
            if (n != N) continue;
            if (mul(ctx, J, a) == I) return true;
        }
    return false;
}

Lattice random_ideal(const AlgebraContext& ctx, const Order& S, std::mt19937_64& rng) {
    std::vector<Elem> gens;
    for (int k = 0; k < 2; ++k) {
        Elem e(ctx.dim());
        for (auto& x : e) x = static_cast<long>(rng() % 11) - 5;
        gens.push_back(e);
    }
    gens.push_back(ctx.scale(ctx.one(), Rat(static_cast<long>(2 + rng() % 12))));
    return ideal_from_generators(ctx, S, gens);
}

}  // namespace

TEST_CASE("field fixtures load and assemble") {
    CHECK(pool().size() >= 23);
    for (const auto& fd : pool()) CHECK_NOTHROW(validate_field_data(fd));

    auto s = make(1, 7, {7, 1, 1});
    CHECK(index(frobenius_order(*s.ctx), s.mo.OK) == Rat(1, 3));
    CHECK(s.mo.comps[0].torsion_order == 6);

    auto t = make(2, 5, {25, 5, 4, 1, 1});
    CHECK(t.mo.comps.size() == 2);
    // [O_K : Z[F,V]] = 5 * 10 = 50
    CHECK(index(t.mo.OK, frobenius_order(*t.ctx)) == 50);
}

TEST_CASE("field data rejects inconsistent records") {
    AlgebraContext ctx(parse_weil(1, 3, ZPoly{3, 1, 1}));
    auto good = select_field_data(ctx, pool());
    CHECK_NOTHROW(assemble_maximal_order(ctx, good));

    auto bad = good;
    bad[0].integral_basis[1] = QPoly{Rat(1, 3), Rat(1, 3)};
    CHECK_THROWS_AS(validate_field_data(bad[0]), Error);
    try {
        validate_field_data(bad[0]);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotAnOrder);
    }

    AlgebraContext other(parse_weil(1, 5, ZPoly{5, 1, 1}));
    auto wrong = select_field_data(other, pool());
    try {
        assemble_maximal_order(ctx, wrong);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::FieldDataMismatch);
    }

    auto tors = good;
    tors[0].torsion_order = 4;
    try {
        assemble_maximal_order(ctx, tors);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::FieldDataMismatch);
    }

    AlgebraContext missing(parse_weil(1, 11, ZPoly{11, 1, 1}));
    try {
        select_field_data(missing, pool());
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MissingFieldData);
    }
}

TEST_CASE("principal ideals in Q(sqrt(-6))") {
    auto s = make(1, 7, {7, 2, 1});
    const auto& ctx = *s.ctx;
    const Order R = frobenius_order(ctx);
    CHECK(s.mo.OK == R);
    const Lattice P = ideal_from_generators(ctx, R, {ctx.scale(ctx.one(), 2), ctx.add(ctx.frob(), ctx.one())});
    CHECK_FALSE(s.iso->generator(R, P).has_value());
    auto a = s.iso->generator(R, mul(ctx, P, P));
    REQUIRE(a.has_value());
    CHECK(principal(ctx, R, *a) == mul(ctx, P, P));
    CHECK(s.mo.comps[0].cl_generators.size() == 1);
    CHECK_FALSE(s.iso->generator_OK(s.mo.comps[0].cl_generators[0]).has_value());
}

TEST_CASE("unit coset representatives modulo the conductor") {
    auto s = make(1, 7, {7, 1, 1});
    CHECK(s.iso->unit_coset_reps(frobenius_order(*s.ctx)).size() == 6);
    CHECK(s.iso->unit_coset_reps(s.mo.OK).size() == 1);
    auto t = make(1, 5, {5, 2, 1});
    CHECK(t.iso->unit_coset_reps(frobenius_order(*t.ctx)).size() == 2);
}

TEST_CASE("isomorphism agrees with a box-search oracle on quadratic orders") {
    std::mt19937_64 rng(7);
    const std::vector<std::pair<long, ZPoly>> cases = {
        {7, {7, 2, 1}}, {7, {7, 1, 1}}, {5, {5, 2, 1}}, {7, {7, 4, 1}}, {5, {5, -4, 1}}, {3, {3, 1, 1}}};
    int positives = 0, negatives = 0;
    for (const auto& [q, h] : cases) {
        auto s = make(1, q, h);
        const auto& ctx = *s.ctx;
        for (const Order& S : {frobenius_order(ctx), s.mo.OK}) {
            std::vector<Lattice> ideals;
            for (int k = 0; k < 8; ++k) ideals.push_back(random_ideal(ctx, S, rng));
            for (std::size_t i = 0; i < ideals.size(); ++i)
                for (std::size_t j = 0; j < ideals.size(); ++j) {
                    const bool expect = quadratic_iso_oracle(ctx, ideals[i], ideals[j]);
                    auto a = s.iso->isomorphism(ideals[i], ideals[j]);
                    CHECK(a.has_value() == expect);
                    if (a) CHECK(mul(ctx, ideals[j], *a) == ideals[i]);
                    (expect ? positives : negatives)++;
                }
        }
    }
    CHECK(positives > 0);
    CHECK(negatives > 0);
}

TEST_CASE("class group of the quartic field x^4 + 4x^2 + 25") {
    auto s = make(2, 5, {25, 0, 4, 0, 1});
    const auto& ctx = *s.ctx;
    const auto& comp = s.mo.comps[0];
    REQUIRE(comp.cl_invariants == std::vector<Int>{2, 4});
    REQUIRE(comp.cl_generators.size() == 2);
    const Lattice& A = comp.cl_generators[0];
    const Lattice& B = comp.cl_generators[1];

    // the 8 classes A^a B^b are pairwise distinct
    std::vector<Lattice> classes;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 4; ++b) {
            Lattice I = s.mo.OK;
            for (int k = 0; k < a; ++k) I = mul(ctx, I, A);
            for (int k = 0; k < b; ++k) I = mul(ctx, I, B);
            classes.push_back(I);
        }
    for (std::size_t i = 0; i < classes.size(); ++i)
        for (std::size_t j = 0; j < classes.size(); ++j)
            CHECK(s.iso->isomorphism(classes[i], classes[j]).has_value() == (i == j));
    CHECK(s.iso->generator_OK(mul(ctx, A, A)).has_value());
    CHECK(s.iso->generator_OK(power(ctx, B, 4, s.mo.OK)).has_value());

    // every prime below the Minkowski bound lies in one of these classes
    const double minkowski = 24.0 / 256.0 * 16.0 / (M_PI * M_PI) * std::sqrt(112896.0);
    int checked = 0;
    for (long p = 2; p <= minkowski; ++p) {
        if (prime_divisors(p).size() != 1 || prime_divisors(p)[0] != p) continue;
        for (const auto& P : maximal_ideals_above(ctx, s.mo.OK, p)) {
            if (P.norm() > minkowski) continue;
            int hits = 0;
            for (const auto& C : classes) hits += s.iso->isomorphism(P.ideal, C).has_value();
            CHECK(hits == 1);
            ++checked;
        }
    }
    CHECK(checked > 10);
}

TEST_CASE("a non-fundamental unit in field data is rejected") {
    AlgebraContext ctx(parse_weil(2, 5, ZPoly{25, 0, 4, 0, 1}));
    auto data = select_field_data(ctx, pool());
    const ZPoly& f = data[0].poly;
    QPoly eps = data[0].fundamental_units[0];
    data[0].fundamental_units[0] = icm::mod(icm::mul(eps, eps), to_qpoly(f));
    try {
        assemble_maximal_order(ctx, data);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::FieldDataMismatch);
    }
}
