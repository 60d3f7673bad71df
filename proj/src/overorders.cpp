#include "icm/overorders.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace icm {

namespace {

const char* const kModule = "overorders";

// Basis w of U with S = span(d_i w_i), plus the indices with d_i = p.
std::vector<Elem> quotient_generators(const Lattice& U, const Lattice& S, const Int& p) {
    const std::size_t n = U.dim();
    IntMat M(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        auto c = U.coords(S.basis(i));
        ensure(c.has_value(), kModule, "lattice not contained in its extension");
        for (std::size_t k = 0; k < n; ++k) M(i, k) = (*c)[k];
    }
    const SnfResult r = snf(M);
    const RatMat Qi = inverse(to_rat(r.Q));
    const auto Ub = U.basis();
    std::vector<Elem> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (r.D(i, i) == 1) continue;
        ensure(r.D(i, i) == p, kModule, "extension is not elementary");
        Elem w(n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t c = 0; c < n; ++c) w[c] += Qi(i, k) * Ub[k][c];
        out.push_back(std::move(w));
    }
    return out;
}

// All orders between R and T, where [T : R] is a power of p.
std::vector<Order> local_overorders(const AlgebraContext& ctx, const Order& R, const Order& T, const Int& p) {
    std::set<Order> seen{R};
    std::deque<Order> queue{R};
    const long pl = p.get_si();
    while (!queue.empty()) {
        const Order S = queue.front();
        queue.pop_front();
        if (S == T) continue;
        const Lattice U = intersect(T, scale(S, Rat(1, p)));
        const auto W = quotient_generators(U, S, p);
        const std::size_t k = W.size();
        // one representative per line of U/S
        std::vector<long> c(k, 0);
        for (;;) {
            std::size_t t = 0;
            while (t < k && ++c[t] == pl) c[t++] = 0;
            if (t == k) break;
            std::size_t lead = k;
            for (std::size_t i = k; i-- > 0;)
                if (c[i] != 0) {
                    lead = i;
                    break;
                }
            if (c[lead] != 1) continue;
            Elem x = ctx.zero();
            for (std::size_t i = 0; i < k; ++i)
                if (c[i]) x = ctx.add(x, ctx.scale(W[i], Rat(c[i])));
            std::vector<Elem> gens = S.basis();
            gens.push_back(std::move(x));
            Order S2 = ring_closure(ctx, Lattice::from_generators(gens, ctx.dim()));
            if (seen.insert(S2).second) queue.push_back(S2);
        }
    }
    return {seen.begin(), seen.end()};
}

}  // namespace

Order ring_closure(const AlgebraContext& ctx, const Lattice& L) {
    Lattice cur = L;
    for (;;) {
        Lattice next = mul(ctx, cur, cur);
        if (next == cur) return cur;
        cur = next;
    }
}

std::vector<Int> order_sort_key(const Lattice& L) { return L.sort_key(); }

bool is_invertible_prime(const AlgebraContext& ctx, const MaxIdeal& P) {
    return mul(ctx, P.ideal, colon(ctx, P.order, P.ideal)) == P.order;
}

int cm_type_at(const AlgebraContext& ctx, const Order& S, const MaxIdeal& P) {
    const Lattice St = trace_dual(ctx, S);
    const Rat size = index(St, mul(ctx, P.ideal, St));
    ensure(size.get_den() == 1, kModule, "non-integral quotient size");
    Int m = size.get_num();
    int e = 0;
    while (m > 1) {
        ensure(m % P.p == 0, kModule, "quotient size is not a power of p");
        m /= P.p;
        ++e;
    }
    ensure(e % P.f == 0, kModule, "quotient is not a vector space over the residue field");
    return e / P.f;
}

std::vector<OverorderRecord> enumerate_overorders(const AlgebraContext& ctx, const MaximalOrderData& mo,
                                                  const Int& max_index) {
    const Order R = frobenius_order(ctx);
    const Rat idx = index(mo.OK, R);
    ensure(idx.get_den() == 1, kModule, "Z[F,V] is not contained in O_K");
    const Int N = idx.get_num();
    if (N > max_index)
        throw Error(ErrorKind::IndexOverflow, kModule,
                    "[O_K : R] = " + N.get_str() + " exceeds the cap " + max_index.get_str());

    std::vector<Order> all{R};
    for (const Int& p : prime_divisors(N)) {
        Int m = N;
        while (m % p == 0) m /= p;
        const Order Tp = sum(R, scale(mo.OK, Rat(m)));
        const auto local = local_overorders(ctx, R, Tp, p);
        std::vector<Order> next;
        for (const auto& A : all)
            for (const auto& B : local) next.push_back(sum(A, B));
        all = std::move(next);
    }

    std::vector<OverorderRecord> recs;
    for (const auto& S : all) {
        ensure(is_order(ctx, S), kModule, "combined lattice is not an order");
        OverorderRecord rec;
        rec.order = S;
        rec.N = index(mo.OK, S).get_num();
        rec.sort_key = order_sort_key(S);
        std::vector<std::pair<PrimeSortKey, MaxIdeal>> bad;
        for (const Int& p : prime_divisors(rec.N))
            for (auto& P : maximal_ideals_above(ctx, S, p))
                if (!is_invertible_prime(ctx, P)) bad.emplace_back(prime_sort_key(ctx, mo, P), std::move(P));
        std::sort(bad.begin(), bad.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t k = 0; k + 1 < bad.size(); ++k)
            ensure(bad[k].first < bad[k + 1].first, kModule, "prime sort keys collide");
        for (auto& [key, P] : bad) {
            const int t = cm_type_at(ctx, S, P);
            rec.cm_type = std::max(rec.cm_type, t);
            rec.local_types.push_back(t);
            rec.noninvertible_keys.push_back(key);
            rec.noninvertible_primes.push_back(std::move(P));
        }
        recs.push_back(std::move(rec));
    }
    std::sort(recs.begin(), recs.end(), [](const OverorderRecord& a, const OverorderRecord& b) {
        if (a.N != b.N) return a.N < b.N;
        return a.sort_key < b.sort_key;
    });
    for (std::size_t k = 0; k < recs.size(); ++k) {
        recs[k].i = (k > 0 && recs[k - 1].N == recs[k].N) ? recs[k - 1].i + 1 : 1;
        if (k > 0) ensure(recs[k - 1].N != recs[k].N || recs[k - 1].sort_key != recs[k].sort_key, kModule, "duplicate overorder");
    }
    return recs;
}

}  // namespace icm
