#include "icm/pipeline.hpp"

#include <atomic>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace icm {

namespace {

const char* const kModule = "cli-ingest";

Int parse_int(const std::string& s) {
    std::size_t i = (s.size() > 1 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.empty() || i == s.size() || s.size() > 200) throw Error(ErrorKind::ParseError, kModule, "bad integer '" + s + "'");
    for (std::size_t k = i; k < s.size(); ++k)
        if (s[k] < '0' || s[k] > '9') throw Error(ErrorKind::ParseError, kModule, "bad integer '" + s + "'");
    return Int(s[0] == '+' ? s.substr(1) : s);
}

std::string rows_text(const std::vector<IntVec>& rows) {
    std::string out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) out += ";";
        for (std::size_t k = 0; k < rows[i].size(); ++k) out += (k ? " " : "") + rows[i][k].get_str();
    }
    return out;
}

nlohmann::ordered_json int_list(const std::vector<Int>& v) {
    auto a = nlohmann::ordered_json::array();
    // integers beyond 64 bits are written as strings
    for (const auto& x : v) {
        if (x.fits_slong_p()) a.push_back(x.get_si());
        else a.push_back(x.get_str());
    }
    return a;
}

nlohmann::ordered_json int_value(const Int& x) {
    return x.fits_slong_p() ? nlohmann::ordered_json(x.get_si()) : nlohmann::ordered_json(x.get_str());
}

}  // namespace

WeilInput weil_from_label(const std::string& label) {
    const auto d = decode_isog(label);
    return parse_weil(d.g, d.q, d.h);
}

WeilInput weil_from_list(const std::string& text) {
    std::vector<Int> v;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) v.push_back(parse_int(tok));
    if (v.size() < 5) throw Error(ErrorKind::ParseError, kModule, "expected G,Q,C0,...,C2g");
    if (v[0] <= 0 || v[0] > 64) throw Error(ErrorKind::ParseError, kModule, "bad dimension");
    const int g = static_cast<int>(v[0].get_si());
    ZPoly h(v.begin() + 2, v.end());
    if (h.size() != static_cast<std::size_t>(2 * g + 1))
        throw Error(ErrorKind::ParseError, kModule, "expected " + std::to_string(2 * g + 1) + " coefficients");
    return parse_weil(g, v[1], h);
}

void audit_class(const IsogenyClass& ic, const Polarizer* pz, const PipelineOptions& opt) {
    const auto& ctx = ic.ctx();
    std::size_t expect = 0;
    for (std::size_t s = 0; s < ic.orders().size(); ++s) {
        const auto& P = ic.pics()[s];
        ensure(P.count.pic_order == Int(static_cast<unsigned long>(P.elements.size())), kModule,
               "exact sequence count differs from |Pic| for " + ic.orders()[s].label());
        ensure(P.count.pic_order * P.count.units_S_mod_f * P.count.unit_index ==
                   P.count.class_number_OK * P.count.units_OK_mod_f,
               kModule, "exact sequence factors are inconsistent");
        expect += ic.weak()[s].size() * P.elements.size();
    }
    ensure(expect == ic.records().size(), kModule, "|ICM| differs from the sum of |W_S||Pic S|");
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<long> coef(-4, 4), den(1, 5);
    for (const auto& r : ic.records()) {
        ensure(trace_dual(ctx, trace_dual(ctx, r.rep)) == r.rep, kModule, "trace dual is not an involution");
        ensure(mult_ring(ctx, r.rep) == ic.orders()[r.order].order, kModule, "representative has the wrong order");
        Elem a;
        do {
            a.assign(ctx.dim(), 0);
            for (auto& c : a) {
                c = Rat(coef(rng), den(rng));
                c.canonicalize();
            }
        } while (!ctx.inverse(a));
        const auto& back = ic.classify(mul(ctx, r.rep, a));
        ensure(back.full_label() == r.full_label() && back.rep == r.rep, kModule,
               "rescaled representative of " + r.full_label() + " is not canonical");
        if (pz) {
            const Order S = ic.orders()[r.order].order;
            for (const auto& d : opt.pols)
                for (const auto& pc : pz->enumerate(r.rep, d)) {
                    const auto deg = is_polarization(ctx, pz->cm_type(), r.rep, pc.lambda);
                    ensure(deg && *deg == d, kModule, "polarization fails its degree check");
                    ensure(pz->distinguished(S, pc.lambda) == pc.lambda, kModule, "distinguished form is not idempotent");
                }
        }
    }
}

std::vector<OutputRecord> run_class(const WeilInput& in, const std::vector<FieldData>& pool, const PipelineOptions& opt) {
    IcmOptions io;
    io.max_index = opt.max_index;
    IsogenyClass ic(in, pool, io);
    std::optional<Polarizer> pz;
    if (!opt.pols.empty()) {
        for (const auto& d : opt.pols)
            if (d <= 0) throw Error(ErrorKind::ParseError, kModule, "polarization degrees must be positive");
        pz.emplace(ic.ctx(), ic.iso(), st_cm_type(ic.ctx()), std::max<mpfr_prec_t>(opt.precision, 64));
    }
    if (opt.check) audit_class(ic, pz ? &*pz : nullptr, opt);
    std::vector<OutputRecord> out;
    for (const auto& r : ic.records()) {
        OutputRecord o;
        o.full_label = r.full_label();
        o.isog_label = r.isog;
        o.order_label = r.order_label();
        o.weak_index = r.w;
        o.pic_index = r.j;
        o.rep_denom = r.rep.denom();
        for (std::size_t i = 0; i < r.rep.dim(); ++i) o.rep_rows.push_back(r.rep.int_row(i));
        o.endo_ring_label = r.order_label();
        o.cm_type = ic.orders()[r.order].cm_type;
        if (pz) {
            std::vector<PolarizationOut> ps;
            for (const auto& d : opt.pols)
                for (auto& pc : pz->enumerate(r.rep, d)) {
                    PolarizationOut po;
                    po.degree = pc.degree;
                    po.k = pc.k;
                    po.lambda = pc.key;
                    po.label = o.full_label + "-" + pc.label();
                    ps.push_back(std::move(po));
                }
            o.polarizations = std::move(ps);
        }
        out.push_back(std::move(o));
    }
    return out;
}

std::vector<std::vector<OutputRecord>> run_pipeline(const std::vector<WeilInput>& inputs,
                                                    const std::vector<FieldData>& pool, const PipelineOptions& opt) {
    std::vector<std::vector<OutputRecord>> results(inputs.size());
    std::vector<std::exception_ptr> errors(inputs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next++) < inputs.size();) {
            try {
                results[k] = run_class(inputs[k], pool, opt);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(inputs.size())));
    std::vector<std::thread> pool_threads;
    for (unsigned t = 1; t < n; ++t) pool_threads.emplace_back(worker);
    worker();
    for (auto& t : pool_threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

std::string to_jsonl(const OutputRecord& r) {
    nlohmann::ordered_json j;
    j["full_label"] = r.full_label;
    j["isog_label"] = r.isog_label;
    j["order_label"] = r.order_label;
    j["weak_index"] = r.weak_index;
    j["pic_index"] = r.pic_index;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rep_rows) rows.push_back(int_list(row));
    j["rep"] = {{"denom", int_value(r.rep_denom)}, {"rows", rows}};
    j["endo_ring_label"] = r.endo_ring_label;
    j["cm_type"] = r.cm_type;
    if (r.polarizations) {
        auto ps = nlohmann::ordered_json::array();
        for (const auto& p : *r.polarizations) {
            nlohmann::ordered_json e;
            e["degree"] = int_value(p.degree);
            e["k"] = p.k;
            e["lambda"] = int_list(p.lambda);
            e["label"] = p.label;
            ps.push_back(std::move(e));
        }
        j["polarizations"] = std::move(ps);
    }
    return j.dump();
}

std::string csv_header() {
    return "full_label,isog_label,order_label,weak_index,pic_index,rep_denom,rep_rows,endo_ring_label,cm_type,polarizations";
}

std::string to_csv(const OutputRecord& r) {
    std::string pols;
    if (r.polarizations)
        for (std::size_t i = 0; i < r.polarizations->size(); ++i) {
            const auto& p = (*r.polarizations)[i];
            pols += (i ? ";" : "") + p.label + ":";
            for (std::size_t k = 0; k < p.lambda.size(); ++k) pols += (k ? " " : "") + p.lambda[k].get_str();
        }
    std::ostringstream o;
    o << r.full_label << ',' << r.isog_label << ',' << r.order_label << ',' << r.weak_index << ',' << r.pic_index << ','
      << r.rep_denom.get_str() << ',' << rows_text(r.rep_rows) << ',' << r.endo_ring_label << ',' << r.cm_type << ','
      << pols;
    return o.str();
}

}  // namespace icm
