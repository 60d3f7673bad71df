#pragma once

// Picard groups of overorders, their bases and element orderings.

#include <optional>

#include "icm/overorders.hpp"
#include "icm/principal.hpp"

namespace icm {

/// Z^n modulo a relation lattice, assumed of finite index.
class AbelianGroup {
  public:
    AbelianGroup() = default;
    AbelianGroup(std::size_t ngens, const std::vector<IntVec>& relations);

    std::size_t ngens() const { return ngens_; }
    /// Nontrivial invariant factors m_1 | m_2 | ... | m_k.
    const std::vector<Int>& invariants() const { return inv_; }
    Int order() const;
    /// Canonical coordinates in Z/m_1 x ... x Z/m_k.
    IntVec reduce(const IntVec& x) const;
    Int element_order(const IntVec& x) const;
    bool is_zero(const IntVec& x) const;
    /// The quotient by the subgroup generated by `elts`.
    AbelianGroup quotient(const std::vector<IntVec>& elts) const;
    const std::vector<IntVec>& relations() const { return rel_; }

  private:
    std::size_t ngens_ = 0;
    std::vector<IntVec> rel_;
    std::vector<Int> inv_;
    IntMat Q_;               ///< SNF column transform
    std::size_t skip_ = 0;   ///< leading unit elementary divisors
};

/// [O_K^x : S^x] and a transversal of O_K^x / S^x starting with 1.
std::vector<Elem> unit_transversal(const AlgebraContext& ctx, const IsoTester& iso, const Order& S);

/// |Pic(O_K)| |(O_K/f)^x| / (|(S/f)^x| [O_K^x : S^x]) with its factors.
struct ExactSequenceCount {
    Int class_number_OK;
    Int units_OK_mod_f;
    Int units_S_mod_f;
    Int unit_index;
    Int pic_order;
};
ExactSequenceCount exact_sequence_count(const AlgebraContext& ctx, const IsoTester& iso, const Order& S);

struct PicElem {
    IntVec exponents;  ///< (e_1, ..., e_k), 0 <= e_i < m_i
    Lattice rep;
};

struct PicGroup {
    Order order;
    std::vector<Lattice> gens;                ///< pS for p in the global generator set
    AbelianGroup group;                       ///< Pic(S) presented on `gens`
    std::vector<Int> invariants;              ///< m_1 | ... | m_k
    std::vector<IntVec> basis_exps;           ///< g_i over `gens`
    std::vector<Lattice> basis;               ///< L_i
    std::vector<PicElem> elements;            ///< e_1 major lexicographic order
    ExactSequenceCount count;

    /// The class of `gens` exponent vector x as an element index.
    std::size_t index_of(const IntVec& x) const;
    /// Exponents over `gens` of element j.
    IntVec gens_exponents(std::size_t j) const;
};

/// Greedy generator set of Pic(R): invertible maximal ideals of R sorted by
/// (norm, sort key), keeping those that enlarge the generated subgroup.
std::vector<MaxIdeal> pic_generators(const AlgebraContext& ctx, const MaximalOrderData& mo, const IsoTester& iso,
                                     const Order& R);

/// Pic(S) presented on the extensions of the global generators.
PicGroup pic_group(const AlgebraContext& ctx, const IsoTester& iso, const Order& S,
                   const std::vector<MaxIdeal>& global_gens);

/// Index of the element of Pic(S) containing the invertible S-ideal I.
std::size_t pic_discrete_log(const AlgebraContext& ctx, const IsoTester& iso, const PicGroup& pic,
                             const Lattice& I);

}  // namespace icm
