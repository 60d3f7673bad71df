#pragma once

// Maximal ideals of orders and their sort keys.

#include <compare>

#include "icm/fielddata.hpp"
#include "icm/lattice.hpp"

namespace icm {

struct MaxIdeal {
    Order order;
    Lattice ideal;
    Int p;
    int f = 1;  ///< residue degree
    Int norm() const;
    bool operator==(const MaxIdeal& o) const { return order == o.order && ideal == o.ideal; }
};

/// Maximal ideals of S containing the prime p (p < 2^31), sorted by lattice key.
std::vector<MaxIdeal> maximal_ideals_above(const AlgebraContext& ctx, const Order& S, const Int& p);

/// Maximal ideals P of O_K with P intersect S equal to the given prime.
std::vector<MaxIdeal> primes_of_OK_above(const AlgebraContext& ctx, const Order& OK, const MaxIdeal& P);

/// Distinct prime divisors of |n|, ascending.
std::vector<Int> prime_divisors(Int n);

struct PrimeSortKey {
    std::size_t j = 0;  ///< component, 1-based
    Int m;              ///< norm
    long n = 0;         ///< tiebreaker, 1-based
    auto operator<=>(const PrimeSortKey& o) const {
        if (j != o.j) return j <=> o.j;
        if (int c = cmp(m, o.m); c != 0) return c <=> 0;
        return n <=> o.n;
    }
    bool operator==(const PrimeSortKey& o) const { return j == o.j && m == o.m && n == o.n; }
};

/// Key of a maximal ideal of any order between Z[F,V] and O_K: the least key
/// among the primes of O_K above it. Same-norm primes of one component are
/// ordered by their HNF over the integral basis of O_{K_j}.
PrimeSortKey prime_sort_key(const AlgebraContext& ctx, const MaximalOrderData& mo, const MaxIdeal& P);

/// Component index (0-based) of a maximal ideal of O_K.
std::size_t prime_component(const AlgebraContext& ctx, const Lattice& P);

/// Coordinates of an element supported on component j over the O_{K_j} basis.
RatVec component_coords(const AlgebraContext& ctx, const ComponentData& comp, const Elem& x);

}  // namespace icm
