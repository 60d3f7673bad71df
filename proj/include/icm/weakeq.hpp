#pragma once

// Weak equivalence classes W_S, their sort keys and distinguished representatives.

#include "icm/picard.hpp"

namespace icm {

struct WeakClass {
    long w = 1;
    Lattice rep;                       ///< distinguished representative
    std::vector<int> sort_key;         ///< s(omega)
    std::vector<Int> extended_key;     ///< s(omega) ++ s(J); empty unless type > 2
};

/// [dim over S/p_i of I / p_i I] over the non-invertible primes, or [1].
std::vector<int> weak_sort_key(const AlgebraContext& ctx, const OverorderRecord& rec, const Lattice& I);

/// One fractional ideal with multiplicator ring S per weak class, found among
/// the S-modules between the conductor and O_K. The invertible class (S) is first.
std::vector<Lattice> weak_class_members(const AlgebraContext& ctx, const MaximalOrderData& mo,
                                        const OverorderRecord& rec);

/// Smallest positive d with d S^t inside S.
Int dual_denominator(const AlgebraContext& ctx, const Order& S);

/// Distinguished representative for an order of type 2.
Lattice distinguished_rep_type2(const AlgebraContext& ctx, const OverorderRecord& rec, const Lattice& I);

/// Overorders with their Picard groups and the weak classes resolved so far.
struct WeakContext {
    const AlgebraContext& ctx;
    const IsoTester& iso;
    const std::vector<OverorderRecord>& orders;
    const std::vector<PicGroup>& pics;
    const std::vector<std::vector<WeakClass>>& done;  ///< entries for orders before the current one
};

/// Index of an order in ctx.orders.
std::size_t order_index(const WeakContext& wc, const Order& S);

/// Index of the order T = (p:p) used by the recursion for an order of type > 2.
std::size_t recursion_order(const WeakContext& wc, std::size_t s);

/// Distinguished representative for an order of type > 2, given any member of
/// a non-invertible class.
Lattice distinguished_rep_general(const WeakContext& wc, std::size_t s, const Lattice& I);

/// W_S for orders[s], sorted and labelled. All strictly larger orders must be in wc.done.
std::vector<WeakClass> weak_classes(const WeakContext& wc, std::size_t s);

}  // namespace icm
