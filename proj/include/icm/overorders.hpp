#pragma once

// Orders between Z[F,V] and O_K, their labels N.i and Cohen-Macaulay types.

#include <string>

#include "icm/spectrum.hpp"

namespace icm {

struct OverorderRecord {
    Order order;
    Int N;  ///< [O_K : S]
    long i = 0;
    std::vector<Int> sort_key;
    int cm_type = 1;
    /// Non-invertible maximal ideals ordered by prime sort key.
    std::vector<MaxIdeal> noninvertible_primes;
    std::vector<PrimeSortKey> noninvertible_keys;
    std::vector<int> local_types;  ///< type at each non-invertible prime
    std::string label() const { return N.get_str() + "." + std::to_string(i); }
};

/// Smallest order containing the lattice L (which must contain 1).
Order ring_closure(const AlgebraContext& ctx, const Lattice& L);

/// All orders S with R subset S subset O_K, sorted by (N, i).
/// Throws IndexOverflow when [O_K : R] exceeds max_index.
std::vector<OverorderRecord> enumerate_overorders(const AlgebraContext& ctx, const MaximalOrderData& mo,
                                                  const Int& max_index = Int(1000000));

/// dim over S/P of S^t / P S^t.
int cm_type_at(const AlgebraContext& ctx, const Order& S, const MaxIdeal& P);

bool is_invertible_prime(const AlgebraContext& ctx, const MaxIdeal& P);

/// Sort key [d, upper triangle of the HNF of dH] of any full lattice.
std::vector<Int> order_sort_key(const Lattice& L);

}  // namespace icm
