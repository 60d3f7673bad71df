#include "doctest.h"

#include <set>

#include "icm/polarizations.hpp"
#include "support.hpp"

using namespace icm;
using testsupport::isogeny;

namespace {

struct Pol {
    const IsogenyClass& ic;
    Polarizer P;
    explicit Pol(const IsogenyClass& c) : ic(c), P(c.ctx(), c.iso(), st_cm_type(c.ctx())) {}
};

Pol& pol(const std::string& label) {
    static std::map<std::string, std::unique_ptr<Pol>> cache;
    auto& slot = cache[label];
    if (!slot) slot = std::make_unique<Pol>(isogeny(label));
    return *slot;
}

bool is_square(long d) {
    long r = 0;
    while (r * r < d) ++r;
    return r * r == d;
}

Elem unit_word(const AlgebraContext& ctx, const std::vector<Elem>& gens, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> e(-3, 3);
    Elem x = ctx.one();
    for (const auto& g : gens) {
        const int k = e(rng);
        const Elem base = k >= 0 ? g : *ctx.inverse(g);
        for (int i = 0; i < std::abs(k); ++i) x = ctx.mul(x, base);
    }
    return x;
}

}  // namespace

TEST_CASE("CM types") {
    {
        const auto& ctx = isogeny("1.3.b").ctx();
        const auto cm = st_cm_type(ctx);
        CHECK(cm.phi.size() == 1);
        CHECK(cm.reflex_minpoly == ZPoly{3, 1, 1});
    }
    for (const char* label : {"2.5.a_g", "2.5.b_ac", "2.5.a_e"}) {
        const auto& ctx = isogeny(label).ctx();
        const auto cm = st_cm_type(ctx);
        REQUIRE(cm.phi.size() == 2);
        const auto& tab = ctx.embeddings_auto();
        std::set<std::size_t> used;
        for (auto r : cm.phi) {
            CHECK(used.count(r) == 0);
            CHECK(used.count(tab.pair[r]) == 0);
            used.insert(r);
        }
        // the reflex norm of F has a root of valuation g v_p(q) = 2
        CHECK(std::count(cm.reflex_valuations.begin(), cm.reflex_valuations.end(), Rat(2)) >= 1);
    }
    {
        // one embedding per component when K is a product of two quadratic fields
        const auto& ctx = isogeny("2.5.a_g").ctx();
        if (ctx.num_components() == 2) {
            const auto cm = st_cm_type(ctx);
            const auto& tab = ctx.embeddings_auto();
            CHECK(tab.component[cm.phi[0]] != tab.component[cm.phi[1]]);
        }
    }
}

TEST_CASE("sort key of polarizations") {
    CHECK(pol_sort_key({Rat(1, 11), Rat(2, 11)}) == std::vector<Int>{11, 1, 2});
    CHECK(pol_sort_key({Rat(3), Rat(-4)}) == std::vector<Int>{1, 3, -4});
    CHECK(pol_sort_key({Rat(1, 11), Rat(2, 11)}) < pol_sort_key({Rat(2, 11), Rat(4, 11)}));
}

TEST_CASE("principal polarization of 1.3.b") {
    auto& X = pol("1.3.b");
    const auto& ctx = X.ic.ctx();
    const Lattice OK = X.ic.maximal().OK;
    const Elem lam{Rat(1, 11), Rat(2, 11)};  // (2F + 1) / 11
    const Elem neg = ctx.neg(lam);
    const auto d1 = is_polarization(ctx, X.P.cm_type(), OK, lam);
    const auto d2 = is_polarization(ctx, X.P.cm_type(), OK, neg);
    CHECK(d1.has_value() != d2.has_value());
    const Elem good = d1 ? lam : neg;
    CHECK((d1 ? *d1 : *d2) == 1);
    const auto classes = X.P.enumerate(OK, 1);
    REQUIRE(classes.size() == 1);
    CHECK(classes[0].lambda == good);
    CHECK(classes[0].label() == "1.1");
    const auto key = classes[0].key;
    CHECK(key[0] == 11);
    CHECK(abs(key[1]) == 1);
    CHECK(abs(key[2]) == 2);

    CHECK_FALSE(is_polarization(ctx, X.P.cm_type(), OK, ctx.one()).has_value());
    CHECK_THROWS_AS(is_polarization(ctx, X.P.cm_type(), OK, ctx.zero()), Error);
    for (long m = 1; m <= 4; ++m) CHECK(*is_polarization(ctx, X.P.cm_type(), OK, ctx.scale(good, Rat(m))) == m * m);
}

TEST_CASE("g = 1 polarization counts by degree") {
    for (const char* label : {"1.3.b", "1.5.c", "1.7.ab", "1.7.ae"}) {
        auto& X = pol(label);
        for (const auto& r : X.ic.records())
            for (long d = 1; d <= 9; ++d) {
                INFO(r.full_label() << " d=" << d);
                const auto cls = X.P.enumerate(r.rep, d);
                CHECK(cls.size() == (is_square(d) ? 1u : 0u));
                for (const auto& c : cls) CHECK(*is_polarization(X.ic.ctx(), X.P.cm_type(), r.rep, c.lambda) == d);
            }
    }
}

TEST_CASE("degree formula and canonical forms for g = 2") {
    std::mt19937_64 rng(4);
    for (const char* label : {"2.5.a_g", "2.5.b_ac", "2.5.a_e", "2.5.b_e"}) {
        auto& X = pol(label);
        const auto& ctx = X.ic.ctx();
        std::size_t seen = 0;
        for (const auto& r : X.ic.records()) {
            if (seen++ > 14) break;
            const Order S = mult_ring(ctx, r.rep);
            const Lattice A = trace_dual(ctx, conj(ctx, r.rep));
            for (long d : {1L, 4L}) {
                const auto cls = X.P.enumerate(r.rep, d);
                std::set<std::vector<Int>> keys;
                for (const auto& c : cls) {
                    CHECK(keys.insert(c.key).second);
                    CHECK(*is_polarization(ctx, X.P.cm_type(), r.rep, c.lambda) == d);
                    CHECK(index(A, mul(ctx, r.rep, c.lambda)) == index(A, r.rep) * abs(ctx.norm(c.lambda)));
                    CHECK(X.P.distinguished(S, c.lambda) == c.lambda);
                    const auto& gens = X.P.norm_unit_generators(S);
                    for (int t = 0; t < 5; ++t) {
                        const Elem u = unit_word(ctx, gens, rng);
                        CHECK(X.P.distinguished(S, ctx.mul(c.lambda, u)) == c.lambda);
                    }
                }
            }
        }
    }
}

TEST_CASE("norm unit generators are norms of units of S") {
    CHECK(pol("2.5.b_ac").P.norm_unit_generators(isogeny("2.5.b_ac").orders()[0].order).empty());
    auto& X = pol("2.5.a_e");
    const auto& ctx = X.ic.ctx();
    for (const auto& rec : X.ic.orders()) {
        const auto& gens = X.P.norm_unit_generators(rec.order);
        CHECK(gens.size() == 1);
        for (const auto& w : gens) {
            CHECK(ctx.conj(w) == w);
            CHECK(abs(ctx.norm(w)) == 1);
            CHECK(rec.order.contains(w));
        }
    }
}

TEST_CASE("Log_Phi is a homomorphism") {
    std::mt19937_64 rng(8);
    auto& X = pol("2.5.a_e");
    const auto& ctx = X.ic.ctx();
    for (int t = 0; t < 20; ++t) {
        const Elem a = testsupport::random_scalar(ctx, rng), b = testsupport::random_scalar(ctx, rng);
        const auto la = X.P.log_phi(a, 128), lb = X.P.log_phi(b, 128), lab = X.P.log_phi(ctx.mul(a, b), 128);
        for (std::size_t i = 0; i < la.size(); ++i) CHECK(overlaps(la[i] + lb[i], lab[i]));
    }
}

TEST_CASE("CM types need an ordinary class") {
    const AlgebraContext ctx(parse_weil(1, 5, {5, 0, 1}));
    CHECK_FALSE(ctx.input().ordinary);
    CHECK_THROWS_AS(st_cm_type(ctx), Error);
}
