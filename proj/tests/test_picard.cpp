#include "doctest.h"

#include "support.hpp"

using namespace icm;
using testsupport::isogeny;

namespace {

std::vector<Int> invariants_of(const std::string& isog, const std::string& order) {
    const auto& ic = isogeny(isog);
    for (std::size_t s = 0; s < ic.orders().size(); ++s)
        if (ic.orders()[s].label() == order) return ic.pics()[s].invariants;
    FAIL("order " << order << " missing");
    return {};
}

std::vector<Int> ints(std::initializer_list<long> v) {
    std::vector<Int> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

}  // namespace

TEST_CASE("abelian group from relations") {
    AbelianGroup G(2, {{Int(4), Int(0)}, {Int(0), Int(6)}});
    CHECK(G.invariants() == ints({2, 12}));
    CHECK(G.order() == 24);
    CHECK(G.element_order({Int(1), Int(1)}) == 12);
    CHECK(G.is_zero({Int(4), Int(-6)}));
    CHECK_FALSE(G.is_zero({Int(2), Int(0)}));
    const auto Q = G.quotient({{Int(1), Int(0)}});
    CHECK(Q.order() == 6);
    CHECK_THROWS_AS(AbelianGroup(2, {{Int(1), Int(1)}}), Error);
}

TEST_CASE("Picard groups of the worked examples") {
    CHECK(invariants_of("2.5.b_ac", "1.1").empty());
    CHECK(invariants_of("2.5.b_ac", "49.1") == ints({12}));
    CHECK(invariants_of("2.5.ab_ac", "49.1") == ints({12}));
    CHECK(invariants_of("2.5.a_e", "1.1") == ints({2, 4}));
    CHECK(invariants_of("2.5.b_e", "50.1") == ints({2, 4}));
    CHECK(invariants_of("2.5.ab_e", "50.1") == ints({2, 4}));
    CHECK(invariants_of("2.5.a_g", "8.1").empty());
}

TEST_CASE("g = 1 Picard groups agree with reduced forms") {
    for (const auto& label : testsupport::g1_sweep()) {
        const auto& ic = isogeny(label);
        for (std::size_t s = 0; s < ic.orders().size(); ++s) {
            const Int D = testsupport::order_discriminant(ic.ctx(), ic.orders()[s].order);
            INFO(label << " order " << ic.orders()[s].label() << " disc " << D);
            CHECK(ic.pics()[s].count.pic_order == testsupport::reduced_forms(D.get_si()));
            CHECK(static_cast<long>(ic.pics()[s].elements.size()) == testsupport::reduced_forms(D.get_si()));
        }
    }
}

TEST_CASE("exact sequence factors and element representatives") {
    for (const char* label : {"2.5.b_ac", "2.5.a_e", "2.5.b_e", "2.5.a_g", "1.7.ab", "1.5.c"}) {
        const auto& ic = isogeny(label);
        const auto& ctx = ic.ctx();
        for (std::size_t s = 0; s < ic.orders().size(); ++s) {
            const auto& P = ic.pics()[s];
            const Order& S = ic.orders()[s].order;
            const auto& c = P.count;
            CHECK(c.pic_order * c.units_S_mod_f * c.unit_index == c.class_number_OK * c.units_OK_mod_f);
            Int prod = 1;
            for (const auto& m : P.invariants) prod *= m;
            CHECK(prod == c.pic_order);
            for (std::size_t i = 1; i < P.invariants.size(); ++i) CHECK(P.invariants[i] % P.invariants[i - 1] == 0);
            CHECK(P.elements.front().rep == S);
            for (const auto& e : P.elements) {
                CHECK(mult_ring(ctx, e.rep) == S);
                CHECK(is_invertible(ctx, e.rep, S));
            }
            // exponent vectors in e_1-major lexicographic order
            for (std::size_t j = 1; j < P.elements.size(); ++j) CHECK(P.elements[j - 1].exponents < P.elements[j].exponents);
            // basis elements have the stated orders
            for (std::size_t i = 0; i < P.basis_exps.size(); ++i)
                CHECK(P.group.element_order(P.basis_exps[i]) == P.invariants[i]);
        }
    }
}

TEST_CASE("distinct elements are pairwise non-isomorphic") {
    const auto& ic = isogeny("2.5.a_e");
    const auto& P = ic.pics()[0];
    REQUIRE(P.elements.size() == 8);
    for (std::size_t a = 0; a < P.elements.size(); ++a)
        for (std::size_t b = a + 1; b < P.elements.size(); ++b)
            CHECK_FALSE(ic.iso().isomorphism(P.elements[a].rep, P.elements[b].rep).has_value());
}

TEST_CASE("discrete logarithm of products and rescalings") {
    std::mt19937_64 rng(11);
    for (const char* label : {"2.5.a_e", "2.5.b_ac", "2.5.b_e"}) {
        const auto& ic = isogeny(label);
        const auto& ctx = ic.ctx();
        for (std::size_t s = 0; s < ic.orders().size(); ++s) {
            const auto& P = ic.pics()[s];
            if (P.elements.size() < 2) continue;
            const std::size_t k = P.invariants.size();
            for (std::size_t a = 0; a < P.elements.size(); ++a) {
                const std::size_t b = std::uniform_int_distribution<std::size_t>(0, P.elements.size() - 1)(rng);
                const Lattice prod = mul(ctx, mul(ctx, P.elements[a].rep, P.elements[b].rep),
                                         testsupport::random_scalar(ctx, rng));
                IntVec e(k);
                for (std::size_t i = 0; i < k; ++i) {
                    Int v = P.elements[a].exponents[i] + P.elements[b].exponents[i];
                    e[i] = v % P.invariants[i];
                }
                std::size_t expect = P.elements.size();
                for (std::size_t j = 0; j < P.elements.size(); ++j)
                    if (P.elements[j].exponents == e) expect = j;
                CHECK(pic_discrete_log(ctx, ic.iso(), P, prod) == expect);
            }
            // L_i itself has exponent vector e_i
            for (std::size_t i = 0; i < k; ++i) {
                const auto j = pic_discrete_log(ctx, ic.iso(), P, P.basis[i]);
                IntVec e(k, 0);
                e[i] = 1;
                CHECK(P.elements[j].exponents == e);
            }
        }
    }
}

TEST_CASE("non-invertible ideals are rejected") {
    const auto& ic = isogeny("2.5.a_g");
    std::size_t s = 0;
    while (ic.orders()[s].label() != "8.1") ++s;
    const auto& rec = ic.orders()[s];
    REQUIRE(!rec.noninvertible_primes.empty());
    CHECK_THROWS_AS(pic_discrete_log(ic.ctx(), ic.iso(), ic.pics()[s], rec.noninvertible_primes[0].ideal), Error);
}

TEST_CASE("greedy generator set") {
    const auto& ic = isogeny("2.5.b_ac");
    const auto& G = ic.pic_generators();
    CHECK(G.size() >= 1);
    CHECK(G.size() <= 2);
    for (std::size_t i = 1; i < G.size(); ++i) CHECK(G[i - 1].norm() <= G[i].norm());
    CHECK(isogeny("1.3.b").pic_generators().empty());
}
