#pragma once

// The etale algebra K = Q[x]/h(x) attached to a Weil polynomial, with the
// fixed basis B_K = (V^{g-1}, ..., V, 1, F, ..., F^g), where F = x and V = q/F.

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "icm/balls.hpp"
#include "icm/exact.hpp"
#include "icm/poly.hpp"

namespace icm {

struct WeilInput {
    int g = 0;
    Int p, q;
    int a = 0;
    ZPoly h;  ///< ascending coefficients, monic of degree 2g
    bool ordinary = false;
};

/// Validates (g, q, h). Coefficients are ascending and must number 2g+1.
WeilInput parse_weil(int g, const Int& q, const ZPoly& h);

/// Element of K as coordinates over B_K.
using Elem = RatVec;

struct EmbeddingTable {
    mpfr_prec_t prec = 0;
    std::vector<CInterval> roots;       ///< sorted by real part, then imaginary part
    std::vector<std::size_t> pair;      ///< index of the complex-conjugate root
    std::vector<std::size_t> component; ///< factor index each root belongs to
};

class AlgebraContext {
  public:
    explicit AlgebraContext(const WeilInput& in);

    const WeilInput& input() const { return in_; }
    int g() const { return in_.g; }
    std::size_t dim() const { return n_; }
    const Int& q() const { return in_.q; }
    const Int& p() const { return in_.p; }
    const ZPoly& h() const { return in_.h; }

    const std::vector<ZPoly>& factors() const { return factors_; }
    std::size_t num_components() const { return factors_.size(); }
    const std::vector<Elem>& idempotents() const { return idem_; }

    Elem zero() const { return Elem(n_); }
    Elem one() const { return basis(static_cast<std::size_t>(in_.g - 1)); }
    Elem basis(std::size_t i) const;
    /// F^t for 0 <= t <= g and V^t for 1 <= t <= g-1 as basis indices.
    std::size_t index_of_F(int t) const { return static_cast<std::size_t>(in_.g - 1 + t); }
    std::size_t index_of_V(int t) const { return static_cast<std::size_t>(in_.g - 1 - t); }
    Elem frob() const { return basis(index_of_F(1)); }
    Elem ver() const;

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem scale(const Elem& a, const Rat& c) const;
    Elem mul(const Elem& a, const Elem& b) const;
    IntVec mul(const IntVec& a, const IntVec& b) const;
    Elem pow(const Elem& a, unsigned e) const;
    Elem conj(const Elem& a) const;
    /// None when a is a zero divisor.
    std::optional<Elem> inverse(const Elem& a) const;
    bool is_zero(const Elem& a) const;

    /// Structure constants: b_i * b_j as integer coordinates.
    const IntVec& table(std::size_t i, std::size_t j) const { return table_[i * n_ + j]; }
    const IntMat& conj_matrix() const { return conj_; }

    /// Matrix of x -> x*a: row i holds b_i * a.
    RatMat regular(const Elem& a) const;
    Rat trace(const Elem& a) const;
    Rat norm(const Elem& a) const;
    /// Gram matrix of the trace form on B_K.
    const IntMat& trace_form() const { return trace_form_; }
    /// Gram matrix of Tr(x * conj(y)) on B_K; positive definite.
    const IntMat& t2_form() const { return t2_form_; }

    QPoly to_power(const Elem& a) const;
    Elem from_power(const QPoly& f) const;
    /// Residue of a in Q[x]/h_j as a polynomial of degree < deg h_j.
    QPoly component_poly(const Elem& a, std::size_t j) const;
    /// The element of K equal to f mod h_j in component j and 0 elsewhere.
    Elem from_component(const QPoly& f, std::size_t j) const;
    /// Index j with a = a*e_j, or none if a has support in several components.
    std::optional<std::size_t> support(const Elem& a) const;

    /// Certified complex roots; throws PrecisionInsufficient when the
    /// requested precision cannot separate them.
    const EmbeddingTable& embeddings(mpfr_prec_t prec) const;
    /// Certified embeddings at the first precision >= floor that succeeds.
    const EmbeddingTable& embeddings_auto(mpfr_prec_t floor = 128) const;
    CInterval embed(const Elem& a, std::size_t root, const EmbeddingTable& t) const;

  private:
    WeilInput in_;
    std::size_t n_ = 0;
    std::vector<ZPoly> factors_;
    std::vector<Elem> idem_;
    std::vector<IntVec> table_;
    IntMat conj_;
    IntMat trace_form_, t2_form_;
    IntVec basis_trace_;
    RatMat to_power_, from_power_;

    mutable std::mutex emb_mutex_;
    mutable std::vector<std::unique_ptr<EmbeddingTable>> emb_cache_;
};

EmbeddingTable compute_embeddings(const AlgebraContext& ctx, mpfr_prec_t prec);

}  // namespace icm
