#include "doctest.h"

#include <regex>

#include "support.hpp"

using namespace icm;
using testsupport::isogeny;

namespace {

std::vector<Int> ints(std::initializer_list<long> v) {
    std::vector<Int> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

}  // namespace

TEST_CASE("integer codec") {
    CHECK(encode_int(0) == "a");
    CHECK(encode_int(1) == "b");
    CHECK(encode_int(6) == "g");
    CHECK(encode_int(25) == "z");
    CHECK(encode_int(26) == "ba");
    CHECK(encode_int(-1) == "ab");
    CHECK(encode_int(-2) == "ac");
    CHECK(encode_int(-26) == "aba");
    CHECK(decode_int("ba") == 26);
    CHECK(decode_int("aba") == -26);
    CHECK_THROWS_AS(decode_int(""), Error);
    CHECK_THROWS_AS(decode_int("aa"), Error);
    CHECK_THROWS_AS(decode_int("B"), Error);
}

TEST_CASE("isogeny labels of the worked examples") {
    CHECK(encode_isog(2, 5, ints({0, 6})) == "2.5.a_g");
    CHECK(encode_isog(2, 5, ints({1, -2})) == "2.5.b_ac");
    CHECK(encode_isog(2, 5, ints({-1, -2})) == "2.5.ab_ac");
    CHECK(encode_isog(2, 5, ints({0, 4})) == "2.5.a_e");
    CHECK(encode_isog(2, 5, ints({1, 4})) == "2.5.b_e");
    CHECK(encode_isog(2, 5, ints({-1, 4})) == "2.5.ab_e");
    const auto d = decode_isog("2.5.a_g");
    CHECK(d.h == ZPoly{25, 0, 6, 0, 1});
    CHECK(decode_isog("2.5.b_ac").h == ZPoly{25, 5, -2, 1, 1});
    CHECK(decode_isog("1.3.b").h == ZPoly{3, 1, 1});
    for (const char* s : {"2.5.a_g", "2.5.b_ac", "2.5.ab_ac", "2.5.a_e", "2.5.b_e", "2.5.ab_e"}) {
        const auto x = decode_isog(s);
        CHECK(encode_isog(x.g, x.q, x.a) == s);
        CHECK(isog_label(parse_weil(x.g, x.q, x.h)) == s);
    }
}

TEST_CASE("malformed labels") {
    for (const char* s : {"2.5.zz!", "2.5.a", "2.5.a_g_b", "0.5.a", "2.05.a_g", "2.5.aa_g", "2.5.a__g", "2..a_g", "x.5.a_g",
                          "2.5.A_g", "2.5.a_g-"})
        CHECK_THROWS_AS(decode_isog(s), Error);
    try {
        decode_isog("2.5.zz!");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedLabel);
        CHECK(e.error_class() == ErrorClass::Input);
    }
}

TEST_CASE("codec round trip on random vectors") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<long> coef(-5000, 5000), gd(1, 4), qd(2, 50);
    for (int t = 0; t < 1000; ++t) {
        const int g = static_cast<int>(gd(rng));
        const Int q(qd(rng));
        std::vector<Int> a;
        for (int i = 0; i < g; ++i) a.emplace_back(coef(rng));
        const std::string s = encode_isog(g, q, a);
        const auto d = decode_isog(s);
        CHECK(d.g == g);
        CHECK(d.q == q);
        CHECK(d.a == a);
    }
}

TEST_CASE("records of small examples") {
    const auto& a = isogeny("1.3.b");
    REQUIRE(a.records().size() == 1);
    CHECK(a.records()[0].full_label() == "1.3.b-1.1.1.1");
    CHECK(a.records()[0].rep == a.maximal().OK);

    const auto& b = isogeny("1.7.b");
    REQUIRE(b.records().size() == 2);
    CHECK(b.records()[0].full_label() == "1.7.b-1.1.1.1");
    CHECK(b.records()[1].full_label() == "1.7.b-3.1.1.1");

    const auto& c = isogeny("2.5.a_g");
    std::vector<std::string> eight;
    for (const auto& r : c.records())
        if (r.order_label() == "8.1") eight.push_back(r.full_label());
    CHECK(eight == std::vector<std::string>{"2.5.a_g-8.1.1.1", "2.5.a_g-8.1.2.1", "2.5.a_g-8.1.3.1", "2.5.a_g-8.1.4.1",
                                            "2.5.a_g-8.1.5.1"});
}

TEST_CASE("record structure") {
    const std::regex grammar(R"(\d+\.\d+\.[a-z_]+-\d+\.\d+\.\d+\.\d+)");
    for (const char* label : {"2.5.a_g", "2.5.b_ac", "1.7.b", "1.5.c"}) {
        const auto& ic = isogeny(label);
        const auto& ctx = ic.ctx();
        std::size_t expect = 0;
        for (std::size_t s = 0; s < ic.orders().size(); ++s) expect += ic.weak()[s].size() * ic.pics()[s].elements.size();
        CHECK(ic.records().size() == expect);
        for (std::size_t k = 0; k < ic.records().size(); ++k) {
            const auto& r = ic.records()[k];
            CHECK(std::regex_match(r.full_label(), grammar));
            CHECK(mult_ring(ctx, r.rep) == ic.orders()[r.order].order);
            if (k > 0) {
                const auto& p = ic.records()[k - 1];
                CHECK(std::tie(p.order, p.w, p.j) < std::tie(r.order, r.w, r.j));
            }
        }
    }
}

TEST_CASE("random pairs of records are not isomorphic") {
    std::mt19937_64 rng(3);
    const auto& ic = isogeny("2.5.b_ac");
    const auto& R = ic.records();
    std::uniform_int_distribution<std::size_t> pick(0, R.size() - 1);
    for (int t = 0; t < 30; ++t) {
        const auto a = pick(rng), b = pick(rng);
        if (a == b) continue;
        CHECK_FALSE(ic.iso().isomorphism(R[a].rep, R[b].rep).has_value());
    }
}

TEST_CASE("classification of rescaled representatives") {
    std::mt19937_64 rng(9);
    for (const char* label : {"2.5.a_g", "2.5.b_ac", "1.7.b"}) {
        const auto& ic = isogeny(label);
        const auto& ctx = ic.ctx();
        for (const auto& r : ic.records()) {
            const Lattice I = mul(ctx, r.rep, testsupport::random_scalar(ctx, rng));
            const auto& got = ic.classify(I);
            CHECK(got.full_label() == r.full_label());
            CHECK(got.rep == r.rep);
        }
        CHECK(ic.classify(frobenius_order(ctx)).label() == ic.records().back().order_label() + ".1.1");
    }
}

TEST_CASE("classification of ideals with smaller multiplicator rings") {
    std::mt19937_64 rng(21);
    const auto& ic = isogeny("2.5.a_g");
    const auto& ctx = ic.ctx();
    const Order R = frobenius_order(ctx);
    for (int t = 0; t < 40; ++t) {
        // R-ideal generated by two random elements of O_K
        const Elem x = testsupport::random_member(ctx, ic.maximal().OK, rng, 2);
        const Elem y = testsupport::random_member(ctx, ic.maximal().OK, rng, 2);
        const Lattice I = ideal_from_generators(ctx, R, {x, y});
        const auto& rec = ic.classify(I);
        CHECK(ic.orders()[rec.order].order == mult_ring(ctx, I));
        CHECK(ic.iso().isomorphism(I, rec.rep).has_value());
    }
}
