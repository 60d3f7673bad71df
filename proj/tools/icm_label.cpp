// Command-line front end: labels the ideal classes of one or more isogeny classes.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "icm/pipeline.hpp"

#ifndef ICM_DEFAULT_FIELDS
#define ICM_DEFAULT_FIELDS "data/fields"
#endif

int main(int argc, char** argv) {
    using namespace icm;
    CLI::App app{"Labels isomorphism classes of abelian varieties over finite fields via ideal class monoids"};
    std::vector<std::string> isog, weil;
    std::string fields = ICM_DEFAULT_FIELDS, out_path, format = "jsonl", pols_text;
    PipelineOptions opt;
    long precision = 128;
    std::string max_index = "1000000";
    unsigned jobs = 1;

    auto* o_isog = app.add_option("--isog", isog, "isogeny label g.q.a1_..._ag (repeatable)");
    auto* o_weil = app.add_option("--weil", weil, "G,Q,C0,...,C2g with ascending coefficients (repeatable)");
    app.add_option("--fields", fields, "directory of number-field records");
    app.add_option("--pols", pols_text, "comma-separated polarization degrees");
    app.add_option("--out", out_path, "output file (default: standard output)");
    app.add_option("--format", format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
    app.add_option("--precision", precision, "floor for embedding precision in bits")->check(CLI::Range(32L, 1L << 16));
    app.add_option("--max-index", max_index, "cap on [O_K : S] for overorders");
    app.add_flag("--check", opt.check, "replay postcondition audits");
    app.add_option("--jobs", jobs, "isogeny classes computed in parallel")->check(CLI::Range(1u, 256u));
    o_isog->excludes(o_weil);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (isog.empty() && weil.empty()) {
        std::cerr << "one of --isog or --weil is required\n";
        return 2;
    }

    try {
        opt.precision = static_cast<mpfr_prec_t>(precision);
        opt.jobs = jobs;
        try {
            opt.max_index = Int(max_index);
        } catch (const std::invalid_argument&) {
            throw Error(ErrorKind::ParseError, "cli-ingest", "bad --max-index");
        }
        if (!pols_text.empty()) {
            std::stringstream in(pols_text);
            std::string tok;
            while (std::getline(in, tok, ',')) {
                if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
                    throw Error(ErrorKind::ParseError, "cli-ingest", "bad polarization degree '" + tok + "'");
                opt.pols.emplace_back(tok);
            }
        }
        std::vector<WeilInput> inputs;
        for (const auto& s : isog) inputs.push_back(weil_from_label(s));
        for (const auto& s : weil) inputs.push_back(weil_from_list(s));
        const auto pool = load_field_dir(fields);
        const auto results = run_pipeline(inputs, pool, opt);

        std::ofstream file;
        if (!out_path.empty()) {
            file.open(out_path);
            if (!file) throw Error(ErrorKind::ParseError, "cli-ingest", "cannot write " + out_path);
        }
        std::ostream& out = out_path.empty() ? std::cout : file;
        if (format == "csv") out << csv_header() << '\n';
        for (const auto& cls : results)
            for (const auto& r : cls) out << (format == "csv" ? to_csv(r) : to_jsonl(r)) << '\n';
        out.flush();
        if (!out) throw Error(ErrorKind::InvariantBreach, "cli-ingest", "write failed");
        return 0;
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return static_cast<int>(e.error_class());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }
}
