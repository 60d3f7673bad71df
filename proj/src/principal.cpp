#include "icm/principal.hpp"

#include <deque>

namespace icm {

namespace {

const char* const kModule = "weakeq";

// Upper bound of an interval as a rational (the endpoint is exact in binary).
Rat upper_rat(const Interval& x) {
    Rat r;
    mpfr_get_q(r.get_mpq_t(), x.hi().get());
    return r;
}

Rat abs_rat(const Rat& x) { return x < 0 ? Rat(-x) : x; }

Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

}  // namespace

Elem reduce_mod(const Lattice& L, const Elem& x) {
    const std::size_t n = L.dim();
    Int D = L.denom();
    for (const auto& c : x) D = lcm(D, c.get_den());
    IntVec y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = Rat(x[k] * D).get_num();
    const Int s = D / L.denom();
    const IntMat& M = L.mat();
    // M is upper triangular with positive pivots; reduce left to right.
    for (std::size_t i = 0; i < n; ++i) {
        Int piv = M(i, i) * s;
        Int qt;
        mpz_fdiv_q(qt.get_mpz_t(), y[i].get_mpz_t(), piv.get_mpz_t());
        if (qt == 0) continue;
        for (std::size_t k = i; k < n; ++k) y[k] -= qt * M(i, k) * s;
    }
    Elem out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = Rat(y[k], D);
        out[k].canonicalize();
    }
    return out;
}

bool weakly_equivalent(const AlgebraContext& ctx, const Lattice& I, const Lattice& J) {
    Lattice P = mul(ctx, colon(ctx, I, J), colon(ctx, J, I));
    return P.contains(ctx.one());
}

Lattice conductor(const AlgebraContext& ctx, const Order& S, const Order& OK) { return colon(ctx, S, OK); }

std::vector<std::pair<Elem, long>> IsoTester::unit_generators() const {
    std::vector<std::pair<Elem, long>> out;
    for (const auto& c : mo_.comps) out.emplace_back(c.torsion, c.torsion_order);
    for (const auto& c : mo_.comps)
        for (const auto& u : c.free_units) out.emplace_back(u, 0);
    return out;
}

const std::vector<Elem>& IsoTester::unit_coset_reps(const Order& S) const {
    auto key = S.sort_key();
    {
        std::lock_guard lk(mu_);
        auto it = coset_cache_.find(key);
        if (it != coset_cache_.end()) return it->second;
    }
    const Lattice f = conductor(ctx_, S, mo_.OK);
    std::vector<Elem> gens;
    for (auto& [u, ord] : unit_generators()) gens.push_back(u);
    // Closure of the images of the generators in (O_K/f)^x; the finite group is
    // closed under products alone.
    std::map<Elem, std::size_t> seen;
    std::vector<Elem> reps{ctx_.one()};
    seen.emplace(reduce_mod(f, ctx_.one()), 0);
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        std::size_t i = queue.front();
        queue.pop_front();
        for (const auto& gen : gens) {
            Elem v = ctx_.mul(reps[i], gen);
            Elem k = reduce_mod(f, v);
            if (seen.count(k)) continue;
            seen.emplace(std::move(k), reps.size());
            queue.push_back(reps.size());
            reps.push_back(std::move(v));
        }
    }
    std::lock_guard lk(mu_);
    return coset_cache_.emplace(std::move(key), std::move(reps)).first->second;
}

std::optional<Elem> IsoTester::component_generator(std::size_t j, const std::vector<Elem>& L) const {
    const ComponentData& comp = mo_.comps.at(j);
    const std::vector<Elem>& B = comp.basis;
    const std::size_t m = B.size();
    ensure(L.size() == m, kModule, "component lattice has the wrong rank");

    // [O_{K_j} : L] from trace pairings against the basis of O_{K_j}.
    RatMat G(m, m), Y(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) {
            G(i, k) = ctx_.trace(ctx_.mul(B[i], B[k]));
            Y(i, k) = ctx_.trace(ctx_.mul(L[i], B[k]));
        }
    const Rat N = abs_rat(det(Y) / det(G));
    const Elem off = ctx_.sub(ctx_.one(), ctx_.idempotents()[j]);

    // A generator can be moved by units so that each log|phi_r| lies within
    // half the sum of |log|phi_r(eps_k)|| of log N / g_j.
    mpfr_prec_t prec = 128;
    Rat bound;
    for (;;) {
        try {
            const EmbeddingTable& t = ctx_.embeddings_auto(prec);
            Interval total = Interval::from_int(0, t.prec);
            Interval logN = log(Interval::from_rat(N, t.prec)) / Interval::from_int(comp.g, t.prec);
            for (std::size_t r = 0; r < t.roots.size(); ++r) {
                if (t.component[r] != j) continue;
                Interval s = logN;
                for (const auto& u : comp.free_units)
                    s = s + abs(log(sqrt(ctx_.embed(u, r, t).norm2())));
                total = total + exp(s);
            }
            bound = upper_rat(total);
            break;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::PrecisionInsufficient || prec >= 16384) throw;
            prec *= 2;
        }
    }
    // Avoid boundary loss from the exact comparison inside the enumeration.
    bound = bound * Rat(1025, 1024);

    const std::vector<Elem> span_L = basis_of_span(L, ctx_.dim());
    std::optional<Elem> found;
    fincke_pohst(t2_gram(ctx_, L), bound, [&](const IntVec& x) {
        Elem beta = ctx_.zero();
        for (std::size_t i = 0; i < m; ++i)
            if (x[i] != 0) beta = ctx_.add(beta, ctx_.scale(L[i], Rat(x[i])));
        if (abs_rat(ctx_.norm(ctx_.add(beta, off))) != N) return true;
        std::vector<Elem> gens = L;
        for (const auto& b : B) gens.push_back(ctx_.mul(beta, b));
        if (basis_of_span(gens, ctx_.dim()) != span_L) return true;
        found = std::move(beta);
        return false;
    });
    return found;
}

std::optional<Elem> IsoTester::generator_OK(const Lattice& I) const {
    const auto& e = ctx_.idempotents();
    Elem beta = ctx_.zero();
    for (std::size_t j = 0; j < mo_.comps.size(); ++j) {
        std::vector<Elem> proj;
        for (const auto& b : I.basis()) proj.push_back(ctx_.mul(b, e[j]));
        auto bj = component_generator(j, basis_of_span(proj, ctx_.dim()));
        if (!bj) return std::nullopt;
        beta = ctx_.add(beta, *bj);
    }
    ensure(principal(ctx_, mo_.OK, beta) == I, kModule, "component generators do not generate the ideal");
    return beta;
}

std::optional<Elem> IsoTester::generator(const Order& S, const Lattice& C) const {
    auto beta = generator_OK(mul(ctx_, C, mo_.OK));
    if (!beta) return std::nullopt;
    // Any generator is beta*u for a unit u of O_K; beta*u in C forces beta*u*S
    // inside C, and equality then only depends on the covolume.
    if (abs_rat(ctx_.norm(*beta)) * S.covolume() != C.covolume()) return std::nullopt;
    for (const auto& u : unit_coset_reps(S)) {
        Elem a = ctx_.mul(*beta, u);
        if (C.contains(a)) {
            ensure(principal(ctx_, S, a) == C, kModule, "generator check failed");
            return a;
        }
    }
    return std::nullopt;
}

std::optional<Elem> IsoTester::isomorphism(const Lattice& I, const Lattice& J) const {
    Order S = mult_ring(ctx_, I);
    if (mult_ring(ctx_, J) != S) return std::nullopt;
    if (!weakly_equivalent(ctx_, I, J)) return std::nullopt;
    auto a = generator(S, colon(ctx_, I, J));
    if (!a) return std::nullopt;
    ensure(mul(ctx_, J, *a) == I, kModule, "isomorphism check failed");
    return a;
}

std::optional<Elem> IsoTester::isomorphism_invertible(const Order& S, const Lattice& I, const Lattice& J) const {
    auto a = generator(S, colon(ctx_, I, J));
    if (!a) return std::nullopt;
    ensure(mul(ctx_, J, *a) == I, kModule, "isomorphism check failed");
    return a;
}

}  // namespace icm
