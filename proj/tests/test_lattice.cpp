#include "doctest.h"

#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "icm/lattice.hpp"

using namespace icm;

namespace {

Lattice random_ideal(const AlgebraContext& ctx, const Order& S, std::mt19937_64& rng) {
    std::vector<Elem> gens;
    for (int k = 0; k < 2; ++k) {
        Elem e(ctx.dim());
        for (auto& x : e) x = static_cast<long>(rng() % 13) - 6;
        gens.push_back(e);
    }
    Elem m(ctx.dim());
    m[ctx.dim() - 1] = 7 + rng() % 5;
    gens.push_back(ctx.one());
    for (auto& x : gens.back()) x *= 30;
    std::vector<Elem> all;
    for (const auto& gen : gens)
        for (const auto& s : S.basis()) all.push_back(ctx.mul(gen, s));
    return scale(Lattice::from_generators(all, ctx.dim()), Rat(1, 1 + rng() % 3));
}

// least d with d*L integral, found by trial
Int least_denominator(const Lattice& L) {
    for (Int d = 1;; ++d) {
        bool ok = true;
        for (const auto& b : L.basis())
            for (const auto& x : b)
                if (Rat(x * d).get_den() != 1) ok = false;
        if (ok) return d;
    }
}

}  // namespace

TEST_CASE("ideals in Q(sqrt(-11))") {
    AlgebraContext ctx(parse_weil(1, 3, ZPoly{3, 1, 1}));
    const Order R = frobenius_order(ctx);
    CHECK(is_order(ctx, R));
    CHECK(mul(ctx, R, R) == R);
    const Elem F = ctx.frob();
    const Lattice P1 = Lattice::from_generators({ctx.scale(ctx.one(), 3), F, ctx.scale(F, 3), ctx.mul(F, F)}, 2);
    const Elem F1 = ctx.add(F, ctx.one());
    const Lattice P2 = module_closure(ctx, Lattice::from_generators({ctx.scale(ctx.one(), 3), F1}, 2), R);
    CHECK(mul(ctx, P1, P2) == scale(R, 3));
    CHECK(colon(ctx, scale(R, 3), P1) == P2);
    CHECK(colon(ctx, R, R) == R);
    const Lattice Rt = trace_dual(ctx, R);
    CHECK(Rt.denom() == 11);
    CHECK(Rt.mat() == IntMat::from_rows({{1, 2}, {0, 11}}));
    const Elem w = ctx.scale(ctx.add(ctx.scale(F, 2), ctx.one()), Rat(1, 11));
    CHECK(Rt == principal(ctx, R, w));
}

TEST_CASE("monogenic different") {
    for (const ZPoly& h : {ZPoly{3, 1, 1}, ZPoly{7, 1, 1}, ZPoly{5, -3, 1}, ZPoly{11, 3, 1}}) {
        AlgebraContext ctx(parse_weil(1, h[0], h));
        const Order R = frobenius_order(ctx);
        const Elem hp = ctx.add(ctx.scale(ctx.frob(), 2), ctx.scale(ctx.one(), Rat(h[1])));
        CHECK(trace_dual(ctx, R) == principal(ctx, R, *ctx.inverse(hp)));
    }
}

TEST_CASE("lattice operation properties") {
    std::mt19937_64 rng(5);
    for (const auto& [g, q, h] : std::vector<std::tuple<int, long, ZPoly>>{
             {1, 3, {3, 1, 1}}, {2, 5, {25, 0, 6, 0, 1}}, {2, 5, {25, 0, 4, 0, 1}}}) {
        AlgebraContext ctx(parse_weil(g, q, h));
        const Order R = frobenius_order(ctx);
        for (int t = 0; t < 5; ++t) {
            const Lattice I = random_ideal(ctx, R, rng), J = random_ideal(ctx, R, rng), K = random_ideal(ctx, R, rng);
            CHECK(trace_dual(ctx, trace_dual(ctx, I)) == I);
            CHECK(mul(ctx, I, J) == mul(ctx, J, I));
            CHECK(mul(ctx, mul(ctx, I, J), K) == mul(ctx, I, mul(ctx, J, K)));
            CHECK(mul(ctx, R, I) == I);
            const Lattice C = colon(ctx, I, J);
            CHECK(I.contains(mul(ctx, C, J)));
            // adjunction on boundary elements: a basis element of C scaled by 1/p leaves C
            for (const auto& b : C.basis()) {
                const Elem out = ctx.scale(b, Rat(1, 2));
                CHECK(C.contains(out) == I.contains(mul(ctx, J, out)));
            }
            const Order S = mult_ring(ctx, I);
            CHECK(is_order(ctx, S));
            CHECK(S.contains(R));
            Elem a(ctx.dim());
            for (auto& x : a) x = static_cast<long>(rng() % 7) - 3;
            a[0] += 1;
            if (ctx.inverse(a)) CHECK(mult_ring(ctx, mul(ctx, I, a)) == S);
            CHECK(I.denom() == least_denominator(I));
            CHECK(intersect(I, J).contains(mul(ctx, I, J)) == (I.contains(mul(ctx, I, J)) && J.contains(mul(ctx, I, J))));
            const Lattice IJ = intersect(I, J);
            CHECK(I.contains(IJ));
            CHECK(J.contains(IJ));
            CHECK(sum(I, J).contains(I));
            CHECK(index(sum(I, J), I) * index(I, IJ) == index(sum(I, J), IJ));
        }
    }
}

TEST_CASE("fincke-pohst agrees with box enumeration") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 2 + rng() % 3;
        IntMat B(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) B(i, j) = static_cast<long>(rng() % 7) - 3 + (i == j ? 4 : 0);
        if (det(B) == 0) continue;
        const RatMat G = to_rat(B * B.transpose());
        const Rat bound(30 + static_cast<long>(rng() % 40));
        std::set<IntVec> got;
        fincke_pohst(G, bound, [&](const IntVec& x) {
            got.insert(x);
            return true;
        });
        // box oracle: |x_i| bounded through the inverse Gram diagonal
        const RatMat Gi = inverse(G);
        std::set<IntVec> expect;
        std::vector<long> lim(n);
        for (std::size_t i = 0; i < n; ++i) lim[i] = static_cast<long>(std::sqrt(Rat(bound * Gi(i, i)).get_d())) + 1;
        IntVec x(n);
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == n) {
                Rat s = 0;
                bool nz = false;
                for (std::size_t a = 0; a < n; ++a) {
                    if (x[a] != 0) nz = true;
                    for (std::size_t b = 0; b < n; ++b) s += G(a, b) * x[a] * x[b];
                }
                if (nz && s <= bound) expect.insert(x);
                return;
            }
            for (long v = -lim[i]; v <= lim[i]; ++v) {
                x[i] = v;
                rec(i + 1);
            }
        };
        rec(0);
        CHECK(got == expect);
    }
}
