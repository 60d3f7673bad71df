#pragma once

// Principal ideal testing and ideal isomorphism.

#include <map>
#include <mutex>
#include <optional>

#include "icm/fielddata.hpp"
#include "icm/lattice.hpp"

namespace icm {

/// Canonical representative of x modulo the lattice L.
Elem reduce_mod(const Lattice& L, const Elem& x);

/// 1 in (I:J)(J:I).
bool weakly_equivalent(const AlgebraContext& ctx, const Lattice& I, const Lattice& J);

/// Conductor (S : O_K), the largest O_K-ideal contained in S.
Lattice conductor(const AlgebraContext& ctx, const Order& S, const Order& OK);

class IsoTester {
  public:
    IsoTester(const AlgebraContext& ctx, const MaximalOrderData& mo) : ctx_(ctx), mo_(mo) {}

    const AlgebraContext& ctx() const { return ctx_; }
    const MaximalOrderData& maximal() const { return mo_; }

    /// a with a O_K = I for a fractional O_K-ideal I.
    std::optional<Elem> generator_OK(const Lattice& I) const;
    /// a with a S = C, for C with (C:C) = S.
    std::optional<Elem> generator(const Order& S, const Lattice& C) const;
    /// a with I = a J.
    std::optional<Elem> isomorphism(const Lattice& I, const Lattice& J) const;
    /// Same, for invertible S-ideals I and J.
    std::optional<Elem> isomorphism_invertible(const Order& S, const Lattice& I, const Lattice& J) const;

    /// Units of O_K representing O_K^x modulo the units congruent to 1 mod the
    /// conductor of S. The first representative is 1.
    const std::vector<Elem>& unit_coset_reps(const Order& S) const;
    /// Generators of O_K^x (torsion first) with their orders (0 when free).
    std::vector<std::pair<Elem, long>> unit_generators() const;

  private:
    std::optional<Elem> component_generator(std::size_t j, const std::vector<Elem>& basis) const;

    const AlgebraContext& ctx_;
    const MaximalOrderData& mo_;
    mutable std::mutex mu_;
    mutable std::map<std::vector<Int>, std::vector<Elem>> coset_cache_;
};

}  // namespace icm
