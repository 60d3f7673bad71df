#pragma once

// Full-rank lattices in K stored as (1/d) * rowspan(M) over B_K with M in HNF.
// Orders and fractional ideals share this representation.

#include <functional>
#include <vector>

#include "icm/algebra.hpp"
#include "icm/exact.hpp"

namespace icm {

class Lattice {
  public:
    Lattice() = default;
    /// Lattice spanned by integer rows scaled by 1/d; rows need full rank.
    Lattice(Int d, const std::vector<IntVec>& rows, std::size_t dim);
    static Lattice from_generators(const std::vector<Elem>& gens, std::size_t dim);
    static Lattice standard(std::size_t dim);

    std::size_t dim() const { return n_; }
    const Int& denom() const { return d_; }
    const IntMat& mat() const { return M_; }
    bool empty() const { return n_ == 0; }

    Elem basis(std::size_t i) const;
    std::vector<Elem> basis() const;
    /// Integer row i of M (the basis element times d).
    IntVec int_row(std::size_t i) const { return M_.row_vec(i); }

    bool contains(const Elem& x) const;
    bool contains(const Lattice& o) const;
    /// Integer coordinates of x in the HNF basis, or none if x is not in L.
    std::optional<IntVec> coords(const Elem& x) const;
    /// det of the basis matrix relative to B_K.
    Rat covolume() const;
    /// [d, M_ij for i <= j row-major].
    std::vector<Int> sort_key() const;

    bool operator==(const Lattice& o) const { return d_ == o.d_ && M_ == o.M_; }
    bool operator!=(const Lattice& o) const { return !(*this == o); }
    bool operator<(const Lattice& o) const;

  private:
    std::size_t n_ = 0;
    Int d_ = 1;
    IntMat M_;
};

using Order = Lattice;
using FracIdeal = Lattice;

/// Generalized index [A : B] = covol(B) / covol(A).
Rat index(const Lattice& A, const Lattice& B);

Lattice sum(const Lattice& A, const Lattice& B);
Lattice intersect(const Lattice& A, const Lattice& B);
Lattice scale(const Lattice& A, const Rat& c);

Lattice mul(const AlgebraContext& ctx, const Lattice& I, const Lattice& J);
Lattice mul(const AlgebraContext& ctx, const Lattice& I, const Elem& a);
Lattice principal(const AlgebraContext& ctx, const Order& S, const Elem& a);
Lattice power(const AlgebraContext& ctx, const Lattice& I, unsigned e, const Order& S);
Lattice trace_dual(const AlgebraContext& ctx, const Lattice& I);
/// (I : J) = {a : aJ subset I}.
Lattice colon(const AlgebraContext& ctx, const Lattice& I, const Lattice& J);
Order mult_ring(const AlgebraContext& ctx, const Lattice& I);
Lattice conj(const AlgebraContext& ctx, const Lattice& I);
/// Frobenius order: the Z-span of B_K.
Order frobenius_order(const AlgebraContext& ctx);
/// Contains 1 and is closed under multiplication.
bool is_order(const AlgebraContext& ctx, const Lattice& L);
/// Closed under multiplication by S.
bool is_ideal_of(const AlgebraContext& ctx, const Lattice& I, const Order& S);
/// S-submodule generated by the lattice L (the smallest S-module containing it).
Lattice module_closure(const AlgebraContext& ctx, const Lattice& L, const Order& S);
/// The S-ideal generated by a list of elements (must have full rank).
Lattice ideal_from_generators(const AlgebraContext& ctx, const Order& S, const std::vector<Elem>& gens);
/// Inverse of an invertible S-ideal: (S : I).
Lattice inverse_ideal(const AlgebraContext& ctx, const Lattice& I, const Order& S);
bool is_invertible(const AlgebraContext& ctx, const Lattice& I, const Order& S);

// ---------------------------------------------------------------------------
// Short vectors

/// LLL reduction (delta = 3/4) of a basis with respect to a positive definite
/// rational Gram matrix. Returns the unimodular transform U (rows combine the
/// input basis).
IntMat lll_transform(const RatMat& gram);

/// Calls visit(x) for every nonzero integer vector x with x G x^T <= bound,
/// until visit returns false. Returns false if stopped early.
bool fincke_pohst(const RatMat& gram, const Rat& bound, const std::function<bool(const IntVec&)>& visit);

/// Gram matrix of Tr(x conj(y)) on a list of elements.
RatMat t2_gram(const AlgebraContext& ctx, const std::vector<Elem>& basis);
Rat t2(const AlgebraContext& ctx, const Elem& a);

/// Z-basis (in HNF) of a lattice of arbitrary rank given by generators.
std::vector<Elem> basis_of_span(const std::vector<Elem>& gens, std::size_t dim);

}  // namespace icm
