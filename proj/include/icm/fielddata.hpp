#pragma once

// Number-field fixture data (integral basis, class group, units) and the
// maximal order of K assembled from it.

#include <filesystem>
#include <string>
#include <vector>

#include "icm/lattice.hpp"

namespace icm {

struct FieldData {
    ZPoly poly;                          ///< defining polynomial, ascending
    std::vector<QPoly> integral_basis;   ///< over the power basis
    Int disc;
    std::vector<Int> cl_invariants;      ///< divisibility order, trivial factors omitted
    struct ClassGen {
        Int p;
        QPoly elem;  ///< ideal = p O + elem O
    };
    std::vector<ClassGen> cl_generators;
    QPoly torsion_generator;
    long torsion_order = 2;
    std::vector<QPoly> fundamental_units;
    std::string source;  ///< file the record came from
};

FieldData parse_field_data(const std::string& text, const std::string& source = "");
FieldData load_field_data(const std::filesystem::path& path);
/// All *.json records in a directory.
std::vector<FieldData> load_field_dir(const std::filesystem::path& dir);

/// Number of reduced primitive positive definite binary quadratic forms of
/// discriminant D < 0.
long form_class_number(long D);

/// Component j of the maximal order: basis and unit/class data lifted into K.
struct ComponentData {
    std::vector<Elem> basis;              ///< Z-basis of O_{K_j} inside K (supported on e_j)
    std::vector<Elem> free_units;         ///< lifted as u + (1 - e_j)
    Elem torsion;                         ///< lifted torsion generator
    long torsion_order = 2;
    std::vector<Int> cl_invariants;
    std::vector<Lattice> cl_generators;   ///< O_K-ideals, trivial outside component j
    int g = 0;                            ///< half the degree of K_j
};

struct MaximalOrderData {
    Order OK;
    std::vector<ComponentData> comps;
};

/// Assembles O_K from one validated record per sorted factor of h.
MaximalOrderData assemble_maximal_order(const AlgebraContext& ctx, const std::vector<FieldData>& data);
/// Picks the record for each factor from a pool; throws MissingFieldData.
std::vector<FieldData> select_field_data(const AlgebraContext& ctx, const std::vector<FieldData>& pool);

/// Structural checks that do not need ideal arithmetic beyond the field itself.
void validate_field_data(const FieldData& fd);

}  // namespace icm
