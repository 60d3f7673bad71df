#include "icm/weakeq.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace icm {

namespace {

const char* const kModule = "weakeq";

// Integer e with n = b^e.
int exact_log(Int n, const Int& b) {
    int e = 0;
    while (n > 1) {
        ensure(n % b == 0, kModule, "quotient size is not a power of the residue field size");
        n /= b;
        ++e;
    }
    return e;
}

// A_q inside B_q, for S-modules A, B and a maximal ideal q of S.
bool locally_contained(const AlgebraContext& ctx, const Lattice& A, const Lattice& B, const MaxIdeal& q) {
    const Lattice X = intersect(colon(ctx, B, A), q.order);
    return !q.ideal.contains(X);
}

// Representatives of O_K / f: sums c_i b_i over the O_K basis with c_i below
// the HNF pivots of f in O_K coordinates.
std::vector<Elem> residues(const Order& OK, const Lattice& f) {
    const std::size_t n = OK.dim();
    std::vector<IntVec> rows;
    for (const auto& b : f.basis()) {
        auto c = OK.coords(b);
        ensure(c.has_value(), kModule, "conductor is not inside O_K");
        rows.push_back(*c);
    }
    rows = hnf_rows(rows, n);
    ensure(rows.size() == n, kModule, "conductor does not have full rank");
    const auto B = OK.basis();
    std::vector<Elem> out;
    std::vector<Int> c(n, 0);
    for (;;) {
        Elem x(n);
        for (std::size_t i = 0; i < n; ++i)
            if (c[i] != 0)
                for (std::size_t k = 0; k < n; ++k) x[k] += B[i][k] * Rat(c[i]);
        out.push_back(std::move(x));
        std::size_t i = 0;
        while (i < n && ++c[i] == rows[i][i]) c[i++] = 0;
        if (i == n) break;
    }
    return out;
}

}  // namespace

std::vector<int> weak_sort_key(const AlgebraContext& ctx, const OverorderRecord& rec, const Lattice& I) {
    if (rec.noninvertible_primes.empty()) return {1};
    std::vector<int> key;
    for (const auto& P : rec.noninvertible_primes) {
        const Rat size = index(I, mul(ctx, P.ideal, I));
        ensure(size.get_den() == 1, kModule, "pI is not inside I");
        key.push_back(exact_log(size.get_num(), P.norm()));
    }
    return key;
}

std::vector<Lattice> weak_class_members(const AlgebraContext& ctx, const MaximalOrderData& mo,
                                        const OverorderRecord& rec) {
    const Order& S = rec.order;
    if (rec.cm_type == 1) return {S};
    const std::size_t n = ctx.dim();
    const Lattice f = conductor(ctx, S, mo.OK);
    const auto SB = S.basis();
    const auto FB = f.basis();

    std::set<Lattice> cyclic;
    for (const auto& x : residues(mo.OK, f)) {
        std::vector<Elem> gens = FB;
        for (const auto& s : SB) gens.push_back(ctx.mul(s, x));
        cyclic.insert(Lattice::from_generators(gens, n));
    }
    std::set<Lattice> modules{f};
    std::deque<Lattice> queue{f};
    while (!queue.empty()) {
        Lattice M = std::move(queue.front());
        queue.pop_front();
        for (const auto& C : cyclic) {
            if (M.contains(C)) continue;
            Lattice N = sum(M, C);
            if (modules.insert(N).second) queue.push_back(std::move(N));
        }
    }

    std::vector<Lattice> reps{S};
    std::vector<std::vector<int>> keys{weak_sort_key(ctx, rec, S)};
    for (const auto& M : modules) {
        if (mult_ring(ctx, M) != S) continue;
        auto key = weak_sort_key(ctx, rec, M);
        bool known = false;
        for (std::size_t k = 0; k < reps.size() && !known; ++k)
            known = keys[k] == key && weakly_equivalent(ctx, reps[k], M);
        if (known) continue;
        reps.push_back(M);
        keys.push_back(std::move(key));
    }
    return reps;
}

Int dual_denominator(const AlgebraContext& ctx, const Order& S) {
    const Lattice St = trace_dual(ctx, S);
    const std::size_t n = S.dim();
    RatMat B(n, n);
    const auto SB = S.basis();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) B(i, j) = SB[i][j];
    Int d = 1;
    for (const auto& x : St.basis())
        for (const auto& c : solve_left(B, x)) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), c.get_den_mpz_t());
    return d;
}

Lattice distinguished_rep_type2(const AlgebraContext& ctx, const OverorderRecord& rec, const Lattice& I) {
    if (rec.cm_type != 2) throw Error(ErrorKind::TypeMismatch, kModule, "order does not have type 2");
    const Order& S = rec.order;
    const Lattice dSt = scale(trace_dual(ctx, S), Rat(dual_denominator(ctx, S)));
    const auto key = weak_sort_key(ctx, rec, I);

    struct Local {
        const MaxIdeal* q;
        Lattice qm;
        bool dual;
    };
    std::vector<Local> loc;
    for (std::size_t i = 0; i < rec.noninvertible_primes.size(); ++i) {
        if (rec.local_types[i] != 2) continue;
        const MaxIdeal& q = rec.noninvertible_primes[i];
        Lattice qm = q.ideal;
        int m = 1;
        while (!locally_contained(ctx, qm, dSt, q)) {
            ensure(++m <= 64, kModule, "no power of the prime lies in dS^t locally");
            qm = mul(ctx, qm, q.ideal);
        }
        ensure(key[i] == 1 || key[i] == 2, kModule, "local dimension at a type-2 prime exceeds 2");
        loc.push_back({&q, std::move(qm), key[i] == 2});
    }
    ensure(!loc.empty(), kModule, "type-2 order without a type-2 prime");

    Lattice J;
    for (std::size_t i = 0; i < loc.size(); ++i) {
        Lattice term = sum(loc[i].dual ? dSt : S, loc[i].qm);
        for (std::size_t j = 0; j < loc.size(); ++j)
            if (j != i) term = mul(ctx, term, loc[j].qm);
        J = J.empty() ? term : sum(J, term);
    }
    ensure(mult_ring(ctx, J) == S, kModule, "distinguished representative has the wrong multiplicator ring");
    ensure(weakly_equivalent(ctx, J, I), kModule, "distinguished representative left its weak class");
    return J;
}

std::size_t order_index(const WeakContext& wc, const Order& S) {
    for (std::size_t k = 0; k < wc.orders.size(); ++k)
        if (wc.orders[k].order == S) return k;
    throw Error(ErrorKind::InvariantBreach, kModule, "order is not an overorder of R");
}

std::size_t recursion_order(const WeakContext& wc, std::size_t s) {
    const OverorderRecord& rec = wc.orders[s];
    const PicGroup& ps = wc.pics[s];
    std::size_t best = 0;
    Int best_size = -1;
    for (const auto& P : rec.noninvertible_primes) {
        const Order T = colon(wc.ctx, P.ideal, P.ideal);
        if (T == rec.order) throw Error(ErrorKind::RecursionBase, kModule, "(p:p) equals S at a non-invertible prime");
        const std::size_t t = order_index(wc, T);
        const PicGroup& pt = wc.pics[t];
        ensure(ps.count.unit_index % pt.count.unit_index == 0, kModule, "unit indices do not divide");
        ensure(ps.count.pic_order % pt.count.pic_order == 0, kModule, "Pic(S) -> Pic(T) is not surjective");
        const Int G = (ps.count.unit_index / pt.count.unit_index) * (ps.count.pic_order / pt.count.pic_order);
        // primes are already in sort-key order, so the first strict minimum wins ties
        if (best_size < 0 || G < best_size) {
            best_size = G;
            best = t;
        }
    }
    ensure(best_size > 0, kModule, "order has no non-invertible prime");
    return best;
}

Lattice distinguished_rep_general(const WeakContext& wc, std::size_t s, const Lattice& I) {
    const AlgebraContext& ctx = wc.ctx;
    const Order& S = wc.orders[s].order;
    const PicGroup& ps = wc.pics[s];
    const std::size_t t = recursion_order(wc, s);
    const Order& T = wc.orders[t].order;
    const PicGroup& pt = wc.pics[t];

    // The distinguished representative of the weak class of IT.
    const Lattice IT = mul(ctx, I, T);
    const std::size_t t2 = order_index(wc, mult_ring(ctx, IT));
    ensure(t2 < s && t2 < wc.done.size(), kModule, "recursion reached an unresolved order");
    const Lattice* Jt = nullptr;
    for (const auto& wcls : wc.done[t2])
        if (weakly_equivalent(ctx, IT, wcls.rep)) {
            Jt = &wcls.rep;
            break;
        }
    ensure(Jt != nullptr, kModule, "IT lies in no weak class of its multiplicator ring");

    // I_0 = a^{-1} I L with I_0 T = J_t, using surjectivity of Pic(S) -> Pic(T').
    std::optional<Lattice> I0;
    for (const auto& el : ps.elements) {
        const Lattice IL = mul(ctx, I, el.rep);
        auto a = wc.iso.isomorphism(mul(ctx, IL, T), *Jt);
        if (!a) continue;
        auto ai = ctx.inverse(*a);
        ensure(ai.has_value(), kModule, "isomorphism is a zero divisor");
        I0 = mul(ctx, IL, *ai);
        break;
    }
    ensure(I0.has_value(), kModule, "no twist of I extends to the representative over T");
    ensure(mul(ctx, *I0, T) == *Jt, kModule, "I_0 T differs from the representative over T");

    std::vector<Elem> U;
    for (auto& u : unit_transversal(ctx, wc.iso, S))
        if (T.contains(u)) U.push_back(std::move(u));
    ensure(Int(static_cast<long>(U.size())) == ps.count.unit_index / pt.count.unit_index, kModule,
           "transversal of T^x/S^x has the wrong size");

    std::vector<Lattice> K;
    for (std::size_t j = 0; j < ps.elements.size(); ++j) {
        if (!pt.group.is_zero(ps.gens_exponents(j))) continue;
        const Lattice& L = ps.elements[j].rep;
        auto b = wc.iso.generator(T, mul(ctx, L, T));
        ensure(b.has_value(), kModule, "kernel element is not principal over T");
        auto bi = ctx.inverse(*b);
        ensure(bi.has_value(), kModule, "generator is a zero divisor");
        K.push_back(mul(ctx, L, *bi));
        ensure(mul(ctx, K.back(), T) == T, kModule, "kernel representative does not satisfy LT = T");
    }
    ensure(Int(static_cast<long>(K.size())) == ps.count.pic_order / pt.count.pic_order, kModule,
           "kernel of Pic(S) -> Pic(T) has the wrong size");

    std::optional<Lattice> best;
    std::vector<Int> best_key;
    std::set<Lattice> seen;
    for (const auto& L : K) {
        const Lattice LI = mul(ctx, L, *I0);
        for (const auto& u : U) {
            Lattice c = mul(ctx, LI, u);
            auto key = c.sort_key();
            ensure(seen.insert(c).second, kModule, "candidates u L I_0 are not distinct");
            if (!best || key < best_key) {
                best = std::move(c);
                best_key = std::move(key);
            }
        }
    }
    ensure(weakly_equivalent(ctx, *best, I), kModule, "distinguished representative left its weak class");
    ensure(mult_ring(ctx, *best) == S, kModule, "distinguished representative has the wrong multiplicator ring");
    return *best;
}

std::vector<WeakClass> weak_classes(const WeakContext& wc, std::size_t s) {
    const OverorderRecord& rec = wc.orders[s];
    const Order& S = rec.order;
    const auto members = weak_class_members(wc.ctx, wc.iso.maximal(), rec);
    std::vector<WeakClass> out;
    for (std::size_t k = 0; k < members.size(); ++k) {
        WeakClass c;
        c.sort_key = weak_sort_key(wc.ctx, rec, members[k]);
        if (k == 0) {
            c.rep = S;
        } else if (rec.cm_type == 2) {
            c.rep = distinguished_rep_type2(wc.ctx, rec, members[k]);
        } else {
            c.rep = distinguished_rep_general(wc, s, members[k]);
            c.extended_key.assign(c.sort_key.begin(), c.sort_key.end());
            const auto sj = c.rep.sort_key();
            c.extended_key.insert(c.extended_key.end(), sj.begin(), sj.end());
        }
        out.push_back(std::move(c));
    }
    ensure(std::all_of(out[0].sort_key.begin(), out[0].sort_key.end(), [](int v) { return v == 1; }), kModule,
           "invertible class has a non-trivial key");
    std::sort(out.begin() + 1, out.end(), [&](const WeakClass& a, const WeakClass& b) {
        if (rec.cm_type > 2) return a.extended_key < b.extended_key;
        return a.sort_key < b.sort_key;
    });
    for (std::size_t k = 1; k < out.size(); ++k) {
        if (rec.cm_type <= 2)
            ensure(out[k - 1].sort_key < out[k].sort_key, kModule, "weak sort keys are not a complete invariant");
        else
            ensure(out[k - 1].extended_key < out[k].extended_key, kModule, "extended weak keys collide");
    }
    for (std::size_t k = 0; k < out.size(); ++k) out[k].w = static_cast<long>(k + 1);
    return out;
}

}  // namespace icm
