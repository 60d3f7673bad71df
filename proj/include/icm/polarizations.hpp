#pragma once

// CM types, polarizations of ideal classes and their distinguished representatives.

#include <map>
#include <optional>

#include "icm/principal.hpp"
#include "icm/spectrum.hpp"

namespace icm {

struct CMType {
    std::vector<std::size_t> phi;  ///< root indices into the embedding table, one per conjugate pair
    /// Certificate: minimal polynomial (ascending) of prod_{phi} phi(F) and the
    /// p-adic valuations of its roots; one of them equals g * v_p(q).
    ZPoly reflex_minpoly;
    std::vector<Rat> reflex_valuations;
};

/// The first CM type, in lexicographic order of root indices, that is the
/// Shimura-Taniyama type of some embedding of the algebraic closure into C_p.
CMType st_cm_type(const AlgebraContext& ctx);

/// [e, n_1, ..., n_2g] with e the least common denominator of the B_K coordinates.
std::vector<Int> pol_sort_key(const Elem& a);

/// Degree of lambda as a polarization of I, or none if one of the conditions fails.
std::optional<Int> is_polarization(const AlgebraContext& ctx, const CMType& phi, const Lattice& I, const Elem& lambda);

struct PolClass {
    Int degree;
    long k = 1;
    Elem lambda;
    std::vector<Int> key;
    std::string label() const { return degree.get_str() + "." + std::to_string(k); }
};

class Polarizer {
  public:
    Polarizer(const AlgebraContext& ctx, const IsoTester& iso, CMType phi, mpfr_prec_t prec = 128);

    const CMType& cm_type() const { return phi_; }

    /// Log_Phi(a) = (log|phi_1(a)|, ..., log|phi_g(a)|) at the given precision.
    std::vector<Interval> log_phi(const Elem& a, mpfr_prec_t prec) const;

    /// Generators of {u conj(u) : u in S^x}.
    const std::vector<Elem>& norm_unit_generators(const Order& S) const;

    /// Canonical member of the orbit of lambda under {u conj(u) : u in S^x}.
    Elem distinguished(const Order& S, const Elem& lambda) const;

    /// All isomorphism classes of polarizations of I of degree d, ranked by key.
    std::vector<PolClass> enumerate(const Lattice& I, const Int& d) const;

  private:
    struct UnitData {
        std::vector<Elem> gens;          ///< u conj(u) over a basis of the exponent lattice
        std::vector<Elem> coset_reps;    ///< {eps conj(eps)} modulo gens
    };
    const UnitData& unit_data(const Order& S) const;

    const AlgebraContext& ctx_;
    const IsoTester& iso_;
    CMType phi_;
    mpfr_prec_t prec_;
    std::vector<Elem> free_units_;   ///< fundamental units of O_K, all components
    std::vector<std::size_t> free_comp_;
    std::vector<Elem> torsion_;      ///< all roots of unity of O_K
    mutable std::mutex mu_;
    mutable std::map<std::vector<Int>, UnitData> cache_;
};

}  // namespace icm
