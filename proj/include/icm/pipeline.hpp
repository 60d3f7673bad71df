#pragma once

// Orchestration of one or more isogeny classes into serializable records.

#include <filesystem>
#include <optional>
#include <string>

#include "icm/fielddata.hpp"
#include "icm/labels.hpp"
#include "icm/polarizations.hpp"

namespace icm {

struct PolarizationOut {
    Int degree;
    long k = 1;
    std::vector<Int> lambda;  ///< (e, n_1, ..., n_2g)
    std::string label;        ///< full label with the -d.k suffix
};

struct OutputRecord {
    std::string full_label;
    std::string isog_label;
    std::string order_label;
    long weak_index = 1;
    long pic_index = 1;
    Int rep_denom;
    std::vector<IntVec> rep_rows;
    std::string endo_ring_label;
    int cm_type = 1;  ///< Cohen-Macaulay type of the endomorphism ring
    std::optional<std::vector<PolarizationOut>> polarizations;
};

struct PipelineOptions {
    std::vector<Int> pols;  ///< degrees; empty means no polarizations
    mpfr_prec_t precision = 128;
    Int max_index = 1000000;
    bool check = false;
    unsigned jobs = 1;
    std::uint64_t seed = 1;  ///< for the randomized audits
};

/// "g.q.coeffs" label or "G,Q,C0,...,C2g" (ascending coefficients).
WeilInput weil_from_label(const std::string& label);
WeilInput weil_from_list(const std::string& text);

/// All records of one isogeny class, in label order.
std::vector<OutputRecord> run_class(const WeilInput& in, const std::vector<FieldData>& pool, const PipelineOptions& opt);

/// Runs several classes, `opt.jobs` at a time; results keep the input order.
std::vector<std::vector<OutputRecord>> run_pipeline(const std::vector<WeilInput>& inputs,
                                                    const std::vector<FieldData>& pool, const PipelineOptions& opt);

/// Postcondition replay for a computed class; throws InvariantBreach on failure.
void audit_class(const IsogenyClass& ic, const Polarizer* pz, const PipelineOptions& opt);

std::string to_jsonl(const OutputRecord& r);
std::string csv_header();
std::string to_csv(const OutputRecord& r);

}  // namespace icm
