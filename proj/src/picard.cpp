#include "icm/picard.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace icm {

namespace {

const char* const kModule = "picard";

// Classes reachable from S by multiplying with the generators, found by
// isomorphism testing, and the Schreier relations among the generators.
struct Closure {
    std::vector<IntVec> exps;
    std::vector<Lattice> reps;
    std::vector<IntVec> relations;
};

std::optional<std::size_t> find_class(const IsoTester& iso, const Order& S, const std::vector<Lattice>& reps,
                                      const Lattice& I) {
    for (std::size_t c = 0; c < reps.size(); ++c)
        if (iso.isomorphism_invertible(S, I, reps[c])) return c;
    return std::nullopt;
}

Closure close(const AlgebraContext& ctx, const IsoTester& iso, const Order& S, const std::vector<Lattice>& gens) {
    const std::size_t k = gens.size();
    Closure cl;
    cl.exps.push_back(IntVec(k, 0));
    cl.reps.push_back(S);
    for (std::size_t c = 0; c < cl.reps.size(); ++c) {
        for (std::size_t t = 0; t < k; ++t) {
            Lattice prod = mul(ctx, cl.reps[c], gens[t]);
            IntVec e = cl.exps[c];
            e[t] += 1;
            if (auto hit = find_class(iso, S, cl.reps, prod)) {
                IntVec rel(k);
                for (std::size_t i = 0; i < k; ++i) rel[i] = e[i] - cl.exps[*hit][i];
                cl.relations.push_back(std::move(rel));
            } else {
                cl.exps.push_back(std::move(e));
                cl.reps.push_back(std::move(prod));
            }
        }
    }
    return cl;
}

Lattice power_product(const AlgebraContext& ctx, const Order& S, const std::vector<Lattice>& gens, const IntVec& e) {
    Lattice r = S;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        ensure(e[i] >= 0, kModule, "negative exponent");
        if (e[i] > 0) r = mul(ctx, r, power(ctx, gens[i], static_cast<unsigned>(e[i].get_ui()), S));
    }
    return r;
}

// Units of the finite ring A/f for an order A containing the ideal f.
Int unit_count_mod(const AlgebraContext& ctx, const Order& A, const Lattice& f) {
    const Rat size = index(A, f);
    ensure(size.get_den() == 1, kModule, "conductor is not contained in the order");
    Rat u = size;
    for (const Int& p : prime_divisors(size.get_num()))
        for (const auto& P : maximal_ideals_above(ctx, A, p))
            if (P.ideal.contains(f)) u *= Rat(P.norm() - 1, P.norm());
    ensure(u.get_den() == 1, kModule, "unit count is not integral");
    return u.get_num();
}

}  // namespace

AbelianGroup::AbelianGroup(std::size_t ngens, const std::vector<IntVec>& relations)
    : ngens_(ngens), rel_(relations) {
    if (ngens == 0) return;
    std::vector<IntVec> rows = relations;
    if (rows.size() < ngens)
        throw Error(ErrorKind::GenerationFailure, kModule, "relation lattice does not have full rank");
    SnfResult s = snf(IntMat::from_rows(rows));
    Q_ = s.Q;
    for (std::size_t i = 0; i < ngens; ++i) {
        const Int& d = s.D(i, i);
        if (d == 0) throw Error(ErrorKind::GenerationFailure, kModule, "group is infinite");
        if (d == 1)
            ++skip_;
        else
            inv_.push_back(d);
    }
}

Int AbelianGroup::order() const {
    Int o = 1;
    for (const auto& m : inv_) o *= m;
    return o;
}

IntVec AbelianGroup::reduce(const IntVec& x) const {
    ensure(x.size() == ngens_, kModule, "element has the wrong length");
    IntVec out(inv_.size());
    for (std::size_t i = 0; i < inv_.size(); ++i) {
        Int c = 0;
        for (std::size_t r = 0; r < ngens_; ++r) c += x[r] * Q_(r, skip_ + i);
        mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), inv_[i].get_mpz_t());
        out[i] = c;
    }
    return out;
}

Int AbelianGroup::element_order(const IntVec& x) const {
    const IntVec c = reduce(x);
    Int o = 1;
    for (std::size_t i = 0; i < c.size(); ++i) o = lcm(o, inv_[i] / gcd(c[i], inv_[i]));
    return o;
}

bool AbelianGroup::is_zero(const IntVec& x) const {
    const IntVec c = reduce(x);
    return std::all_of(c.begin(), c.end(), [](const Int& v) { return v == 0; });
}

AbelianGroup AbelianGroup::quotient(const std::vector<IntVec>& elts) const {
    std::vector<IntVec> rel = rel_;
    rel.insert(rel.end(), elts.begin(), elts.end());
    return AbelianGroup(ngens_, rel);
}

std::vector<Elem> unit_transversal(const AlgebraContext& ctx, const IsoTester& iso, const Order& S) {
    std::vector<Elem> gens;
    for (auto& [u, ord] : iso.unit_generators()) gens.push_back(u);
    std::vector<Elem> reps{ctx.one()}, invs{ctx.one()};
    for (std::size_t i = 0; i < reps.size(); ++i) {
        for (const auto& u : gens) {
            Elem x = ctx.mul(reps[i], u);
            bool known = false;
            for (const auto& v : invs)
                if (S.contains(ctx.mul(x, v))) {
                    known = true;
                    break;
                }
            if (known) continue;
            auto xi = ctx.inverse(x);
            ensure(xi.has_value(), kModule, "unit is a zero divisor");
            reps.push_back(std::move(x));
            invs.push_back(std::move(*xi));
        }
    }
    return reps;
}

ExactSequenceCount exact_sequence_count(const AlgebraContext& ctx, const IsoTester& iso, const Order& S) {
    const MaximalOrderData& mo = iso.maximal();
    ExactSequenceCount c;
    c.class_number_OK = 1;
    for (const auto& comp : mo.comps)
        for (const auto& m : comp.cl_invariants) c.class_number_OK *= m;
    const Lattice f = conductor(ctx, S, mo.OK);
    c.units_OK_mod_f = unit_count_mod(ctx, mo.OK, f);
    c.units_S_mod_f = unit_count_mod(ctx, S, f);
    c.unit_index = static_cast<long>(unit_transversal(ctx, iso, S).size());
    const Int num = c.class_number_OK * c.units_OK_mod_f;
    const Int den = c.units_S_mod_f * c.unit_index;
    ensure(num % den == 0, kModule, "exact sequence quotient is not integral");
    c.pic_order = num / den;
    return c;
}

std::size_t PicGroup::index_of(const IntVec& x) const {
    const IntVec c = group.reduce(x);
    for (std::size_t j = 0; j < elements.size(); ++j)
        if (group.reduce(gens_exponents(j)) == c) return j;
    throw Error(ErrorKind::InvariantBreach, kModule, "element not found in Pic");
}

IntVec PicGroup::gens_exponents(std::size_t j) const {
    IntVec x(gens.size(), 0);
    const IntVec& e = elements.at(j).exponents;
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t t = 0; t < gens.size(); ++t) x[t] += e[i] * basis_exps[i][t];
    return x;
}

std::vector<MaxIdeal> pic_generators(const AlgebraContext& ctx, const MaximalOrderData& mo, const IsoTester& iso,
                                     const Order& R) {
    const Int target = exact_sequence_count(ctx, iso, R).pic_order;
    std::vector<MaxIdeal> chosen;
    if (target == 1) return chosen;
    std::vector<Lattice> gens;
    Closure cl = close(ctx, iso, R, gens);
    std::size_t scanned = 0;
    for (long bound = 64; bound <= (1L << 20); bound *= 2) {
        std::vector<std::pair<std::pair<Int, PrimeSortKey>, MaxIdeal>> cands;
        for (long p = 2; p <= bound; ++p) {
            if (prime_divisors(p) != std::vector<Int>{Int(p)}) continue;
            for (auto& P : maximal_ideals_above(ctx, R, p)) {
                if (P.norm() > bound || !is_invertible_prime(ctx, P)) continue;
                auto key = std::make_pair(P.norm(), prime_sort_key(ctx, mo, P));
                cands.emplace_back(std::move(key), std::move(P));
            }
        }
        std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (; scanned < cands.size(); ++scanned) {
            const MaxIdeal& P = cands[scanned].second;
            if (find_class(iso, R, cl.reps, P.ideal)) continue;
            chosen.push_back(P);
            gens.push_back(P.ideal);
            cl = close(ctx, iso, R, gens);
            if (Int(static_cast<long>(cl.reps.size())) == target) return chosen;
            ensure(Int(static_cast<long>(cl.reps.size())) < target, kModule,
                   "more ideal classes than the exact sequence allows");
        }
    }
    throw Error(ErrorKind::GenerationFailure, kModule, "primes of bounded norm do not generate Pic(R)");
}

PicGroup pic_group(const AlgebraContext& ctx, const IsoTester& iso, const Order& S,
                   const std::vector<MaxIdeal>& global_gens) {
    PicGroup pic;
    pic.order = S;
    for (const auto& P : global_gens) pic.gens.push_back(mul(ctx, P.ideal, S));
    const std::size_t n = pic.gens.size();
    pic.count = exact_sequence_count(ctx, iso, S);

    Closure cl = close(ctx, iso, S, pic.gens);
    if (Int(static_cast<long>(cl.reps.size())) != pic.count.pic_order)
        throw Error(ErrorKind::InvariantBreach, kModule,
                    "Pic(S) has " + std::to_string(cl.reps.size()) + " classes but the exact sequence gives " +
                        pic.count.pic_order.get_str());
    pic.group = AbelianGroup(n, cl.relations);
    ensure(pic.group.order() == pic.count.pic_order, kModule, "presentation has the wrong order");
    pic.invariants = pic.group.invariants();
    const std::size_t k = pic.invariants.size();

    // Basis g_k, ..., g_1 from exponent vectors over the generators in graded
    // lexicographic order, entries below the group exponent.
    pic.basis_exps.assign(k, IntVec());
    pic.basis.assign(k, Lattice());
    const long E = k ? pic.invariants.back().get_si() : 1;
    for (std::size_t ii = k; ii-- > 0;) {
        std::vector<IntVec> H(pic.basis_exps.begin() + static_cast<long>(ii) + 1, pic.basis_exps.end());
        const AbelianGroup Q = pic.group.quotient(H);
        const Int& m = pic.invariants[ii];
        std::optional<IntVec> found;
        IntVec x(n, 0);
        std::function<bool(std::size_t, long)> rec = [&](std::size_t pos, long left) {
            if (pos + 1 == n) {
                if (left > E - 1) return false;
                x[pos] = left;
                if (pic.group.element_order(x) == m && Q.element_order(x) == m) {
                    found = x;
                    return true;
                }
                return false;
            }
            const long rest = (E - 1) * static_cast<long>(n - pos - 1);
            for (long v = std::max(0L, left - rest); v <= std::min(E - 1, left); ++v) {
                x[pos] = v;
                if (rec(pos + 1, left - v)) return true;
            }
            return false;
        };
        for (long deg = 1; deg <= (E - 1) * static_cast<long>(n) && !found; ++deg) rec(0, deg);
        if (!found) throw Error(ErrorKind::GenerationFailure, kModule, "no basis element of the required order");
        pic.basis_exps[ii] = *found;
        pic.basis[ii] = power_product(ctx, S, pic.gens, *found);
    }

    // Elements in lexicographic order of (e_1, ..., e_k).
    IntVec e(k, 0);
    std::vector<IntVec> seen;
    for (;;) {
        PicElem el;
        el.exponents = e;
        el.rep = power_product(ctx, S, pic.basis, e);
        pic.elements.push_back(std::move(el));
        seen.push_back(pic.group.reduce(pic.gens_exponents(pic.elements.size() - 1)));
        bool more = false;
        for (std::size_t i = k; i-- > 0;) {
            if (++e[i] < pic.invariants[i]) {
                more = true;
                break;
            }
            e[i] = 0;
        }
        if (!more) break;
    }
    std::sort(seen.begin(), seen.end());
    ensure(std::adjacent_find(seen.begin(), seen.end()) == seen.end(), kModule, "basis does not span Pic(S)");
    ensure(Int(static_cast<long>(pic.elements.size())) == pic.count.pic_order, kModule, "element count mismatch");
    return pic;
}

std::size_t pic_discrete_log(const AlgebraContext& ctx, const IsoTester& iso, const PicGroup& pic,
                             const Lattice& I) {
    if (!is_invertible(ctx, I, pic.order))
        throw Error(ErrorKind::NotInvertible, kModule, "ideal is not an invertible ideal of the order");
    for (std::size_t j = 0; j < pic.elements.size(); ++j)
        if (iso.isomorphism_invertible(pic.order, I, pic.elements[j].rep)) return j;
    throw Error(ErrorKind::InvariantBreach, kModule, "invertible ideal matches no Pic element");
}

}  // namespace icm
