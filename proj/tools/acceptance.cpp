// Acceptance checks: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "icm/pipeline.hpp"

using namespace icm;

namespace {

using Clock = std::chrono::steady_clock;

const std::vector<FieldData>& pool() {
    static const auto p = load_field_dir(ICM_DEFAULT_FIELDS);
    return p;
}

const IsogenyClass& cls(const std::string& label) {
    static std::map<std::string, std::unique_ptr<IsogenyClass>> cache;
    auto& slot = cache[label];
    if (!slot) slot = std::make_unique<IsogenyClass>(weil_from_label(label), pool());
    return *slot;
}

std::vector<std::string> g1_labels() {
    std::vector<std::string> out;
    for (long p : {3L, 5L, 7L})
        for (long a = -p; a <= p; ++a)
            if (a != 0 && a * a <= 4 * p && std::gcd(a, p) == 1) out.push_back(encode_isog(1, p, {Int(-a)}));
    return out;
}

std::string ints_str(const std::vector<Int>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
    return s + "]";
}

// Primitive reduced forms of discriminant D < 0.
long forms(long D) {
    long h = 0;
    for (long a = 1; 3 * a * a <= -D; ++a)
        for (long b = -a + 1; b <= a; ++b) {
            const long num = b * b - D;
            if (num % (4 * a) != 0) continue;
            const long c = num / (4 * a);
            if (c < a || (c == a && b < 0)) continue;
            if (std::gcd(std::gcd(a, std::labs(b)), c) == 1) ++h;
        }
    return h;
}

// D = f^2 d with d fundamental.
std::pair<long, long> conductor_split(long D) {
    long f = 1;
    for (long k = 2; k * k <= -D; ++k)
        while (D % (k * k) == 0) {
            const long d = D / (k * k);
            if (d % 4 == 1 || d % 4 == -3 || d % 4 == 0) {
                D = d;
                f *= k;
            } else {
                break;
            }
        }
    return {f, D};
}

Elem random_scalar(const AlgebraContext& ctx, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> u(-6, 6), den(1, 7);
    for (;;) {
        Elem x(ctx.dim());
        for (auto& c : x) {
            c = Rat(u(rng), den(rng));
            c.canonicalize();
        }
        if (ctx.inverse(x)) return x;
    }
}

Elem random_member(const AlgebraContext& ctx, const Lattice& L, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> u(-3, 3);
    for (;;) {
        Elem x = ctx.zero();
        for (const auto& b : L.basis()) x = ctx.add(x, ctx.scale(b, Rat(u(rng))));
        if (ctx.inverse(x)) return x;
    }
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

void report(int n, const std::string& title, const std::function<Outcome()>& body, bool& all) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream t;
    t.precision(2);
    t << std::fixed << secs;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << title << " -- " << o.detail << " ["
              << t.str() << "s]" << std::endl;
    all = all && o.pass;
}

const std::vector<const char*> kStructural = {"2.5.a_g", "2.5.b_ac", "2.5.ab_ac", "2.5.a_e", "2.5.b_e", "2.5.ab_e"};

}  // namespace

int main() {
    bool all = true;

    report(1, "2.5.a_g index-8 order and its five weak classes", [] {
        Outcome o;
        const auto t0 = Clock::now();
        const auto& ic = cls("2.5.a_g");
        std::vector<std::size_t> eight;
        for (std::size_t s = 0; s < ic.orders().size(); ++s)
            if (ic.orders()[s].N == 8) eight.push_back(s);
        if (eight.size() != 1) return Outcome{false, std::to_string(eight.size()) + " orders of index 8"};
        const std::size_t s = eight[0];
        const auto& rec = ic.orders()[s];
        std::vector<std::string> labels;
        for (const auto& r : ic.records())
            if (r.order == s) labels.push_back(r.full_label());
        std::vector<std::string> want;
        for (int w = 1; w <= 5; ++w) want.push_back("2.5.a_g-8.1." + std::to_string(w) + ".1");
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        o.pass = rec.cm_type == 3 && ic.weak()[s].size() == 5 && ic.pics()[s].invariants.empty() && labels == want &&
                 secs < 300;
        o.detail = "type " + std::to_string(rec.cm_type) + ", |W| " + std::to_string(ic.weak()[s].size()) + ", Pic " +
                   ints_str(ic.pics()[s].invariants) + ", labels";
        for (const auto& l : labels) o.detail += " " + l;
        return o;
    }, all);

    report(2, "Pic(R) of 2.5.b_ac and 2.5.ab_ac", [] {
        Outcome o;
        for (const char* l : {"2.5.b_ac", "2.5.ab_ac"}) {
            const auto& ic = cls(l);
            const auto& inv = ic.pics().back().invariants;
            o.pass = o.pass && ic.orders().back().order == frobenius_order(ic.ctx()) && inv == std::vector<Int>{12};
            o.detail += std::string(l) + " " + ints_str(inv) + " ";
        }
        return o;
    }, all);

    report(3, "2.5.a_e, 2.5.b_e, 2.5.ab_e", [] {
        Outcome o;
        for (const char* l : {"2.5.a_e", "2.5.b_e", "2.5.ab_e"}) {
            const auto& ic = cls(l);
            const Order R = frobenius_order(ic.ctx());
            const Int N = index(ic.maximal().OK, R).get_num();
            const auto& inv = ic.pics().back().invariants;
            const bool ok = ic.orders().back().order == R && inv == std::vector<Int>{2, 4} &&
                            N == (std::string(l) == "2.5.a_e" ? 1 : 50);
            o.pass = o.pass && ok;
            o.detail += std::string(l) + " index " + N.get_str() + " Pic " + ints_str(inv) + " ";
        }
        return o;
    }, all);

    report(4, "g = 1 sweep against reduced binary quadratic forms", [] {
        Outcome o;
        const auto t0 = Clock::now();
        long classes = 0;
        for (const auto& l : g1_labels()) {
            const auto d = decode_isog(l);
            const long p = d.q.get_si(), a = -d.a[0].get_si();
            const auto [f, dK] = conductor_split(a * a - 4 * p);
            long expect = 0;
            for (long k = 1; k <= f; ++k)
                if (f % k == 0) expect += forms(k * k * dK);
            IsogenyClass ic(parse_weil(1, d.q, d.h), pool());
            const long got = static_cast<long>(ic.records().size());
            if (got != expect) {
                o.pass = false;
                o.detail += l + " got " + std::to_string(got) + " want " + std::to_string(expect) + "; ";
            }
            ++classes;
        }
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        if (secs >= 60) o.pass = false;
        o.detail += std::to_string(classes) + " classes";
        return o;
    }, all);

    report(5, "canonical labels and representatives under rescaling", [] {
        Outcome o;
        std::mt19937_64 rng(2024);
        std::vector<std::string> labels(kStructural.begin(), kStructural.end());
        for (const auto& l : g1_labels()) labels.push_back(l);
        long fails = 0, n = 0;
        for (; n < 200; ++n) {
            const auto& ic = cls(labels[std::uniform_int_distribution<std::size_t>(0, labels.size() - 1)(rng)]);
            const auto& R = ic.records();
            const auto& r = R[std::uniform_int_distribution<std::size_t>(0, R.size() - 1)(rng)];
            const auto& back = ic.classify(mul(ic.ctx(), r.rep, random_scalar(ic.ctx(), rng)));
            if (back.full_label() != r.full_label() || back.rep != r.rep) ++fails;
        }
        o.pass = fails == 0;
        o.detail = std::to_string(n) + " rescalings, " + std::to_string(fails) + " failures";
        return o;
    }, all);

    report(6, "structural identities", [] {
        Outcome o;
        std::mt19937_64 rng(77);
        long dual = 0, mr = 0, hnf = 0, icm = 0, exs = 0, fails = 0;
        std::vector<std::string> labels(kStructural.begin(), kStructural.end());
        for (const auto& l : g1_labels()) labels.push_back(l);
        // whole-class identities on every computed class
        for (const auto& l : labels) {
            const auto& ic = cls(l);
            std::size_t sum = 0;
            for (std::size_t s = 0; s < ic.orders().size(); ++s) {
                const auto& P = ic.pics()[s];
                sum += ic.weak()[s].size() * P.elements.size();
                const auto& c = P.count;
                if (c.pic_order != Int(static_cast<unsigned long>(P.elements.size())) ||
                    c.pic_order * c.units_S_mod_f * c.unit_index != c.class_number_OK * c.units_OK_mod_f)
                    ++fails;
                ++exs;
            }
            if (sum != ic.records().size()) ++fails;
            ++icm;
        }
        // randomized instances
        for (int t = 0; t < 500; ++t) {
            const auto& ic = cls(labels[static_cast<std::size_t>(t) % labels.size()]);
            const auto& ctx = ic.ctx();
            const Order R = frobenius_order(ctx);
            const Lattice I = ideal_from_generators(ctx, R, {random_member(ctx, ic.maximal().OK, rng),
                                                             random_member(ctx, ic.maximal().OK, rng)});
            const Lattice aI = mul(ctx, I, random_scalar(ctx, rng));
            if (trace_dual(ctx, trace_dual(ctx, aI)) != aI) ++fails;
            ++dual;
            if (mult_ring(ctx, aI) != mult_ring(ctx, I)) ++fails;
            ++mr;
            // unimodular change of basis
            const auto B = aI.basis();
            std::vector<Elem> C = B;
            std::uniform_int_distribution<std::size_t> pick(0, B.size() - 1);
            std::uniform_int_distribution<long> coef(-4, 4);
            for (int k = 0; k < 12; ++k) {
                const auto i = pick(rng), j = pick(rng);
                if (i == j) continue;
                C[i] = ctx.add(C[i], ctx.scale(C[j], Rat(coef(rng))));
            }
            std::shuffle(C.begin(), C.end(), rng);
            if (Lattice::from_generators(C, ctx.dim()) != aI) ++fails;
            ++hnf;
            // I lands in exactly one enumerated class, certified by an isomorphism
            const auto& rec = ic.classify(aI);
            if (!ic.iso().isomorphism(aI, rec.rep)) ++fails;
            ++icm;
            // the class of an invertible ideal of its own order is among the |Pic S| elements
            const Order S = mult_ring(ctx, aI);
            const Lattice J = ideal_from_generators(ctx, S, {random_member(ctx, S, rng), random_member(ctx, S, rng)});
            if (is_invertible(ctx, J, S)) {
                const auto& pics = ic.pics();
                const auto& P = pics[rec.order];
                const auto j = pic_discrete_log(ctx, ic.iso(), P, J);
                if (j >= P.elements.size() || !ic.iso().isomorphism(J, P.elements[j].rep)) ++fails;
                ++exs;
            }
        }
        o.pass = fails == 0 && dual >= 500 && mr >= 500 && hnf >= 500 && icm >= 500 && exs >= 500;
        o.detail = "dual " + std::to_string(dual) + ", mult_ring " + std::to_string(mr) + ", hnf " + std::to_string(hnf) +
                   ", icm count " + std::to_string(icm) + ", exact sequence " + std::to_string(exs) + ", failures " +
                   std::to_string(fails);
        return o;
    }, all);

    report(7, "g = 1 principal polarizations", [] {
        Outcome o;
        std::mt19937_64 rng(5);
        long records = 0, words = 0, fails = 0;
        for (const auto& l : g1_labels()) {
            const auto& ic = cls(l);
            const auto& ctx = ic.ctx();
            Polarizer pz(ctx, ic.iso(), st_cm_type(ctx));
            for (const auto& r : ic.records()) {
                if (!ic.pics()[r.order].invariants.empty()) continue;
                ++records;
                const Order S = ic.orders()[r.order].order;
                const auto ps = pz.enumerate(r.rep, 1);
                if (ps.size() != 1) {
                    ++fails;
                    continue;
                }
                const Elem& lam = ps[0].lambda;
                const auto deg = is_polarization(ctx, pz.cm_type(), r.rep, lam);
                if (!deg || *deg != 1) ++fails;
                if (pz.distinguished(S, lam) != lam) ++fails;
                // roots of unity of S: u conj(u) = 1 for every word
                std::vector<Elem> mu;
                for (const auto& c : ic.maximal().comps) {
                    Elem z = c.torsion;
                    for (long k = 0; k < c.torsion_order; ++k, z = ctx.mul(z, c.torsion))
                        if (S.contains(z)) mu.push_back(z);
                }
                for (int t = 0; t < 100; ++t) {
                    Elem u = ctx.one();
                    for (int k = 0; k < 5; ++k)
                        u = ctx.mul(u, mu[std::uniform_int_distribution<std::size_t>(0, mu.size() - 1)(rng)]);
                    if (pz.distinguished(S, ctx.mul(lam, ctx.mul(u, ctx.conj(u)))) != lam) ++fails;
                    ++words;
                }
            }
        }
        o.pass = fails == 0 && records > 0;
        o.detail = std::to_string(records) + " classes with trivial Pic, " + std::to_string(words) + " unit words, " +
                   std::to_string(fails) + " failures";
        return o;
    }, all);

    report(8, "isogeny label codec", [] {
        Outcome o;
        long fails = 0;
        for (const char* l : {"2.5.a_g", "2.5.b_ac", "2.5.ab_ac", "2.5.a_e", "2.5.b_e", "2.5.ab_e"}) {
            const auto d = decode_isog(l);
            if (encode_isog(d.g, d.q, d.a) != l || isog_label(parse_weil(d.g, d.q, d.h)) != l) ++fails;
        }
        std::mt19937_64 rng(99);
        std::uniform_int_distribution<long> coef(-100000, 100000), gd(1, 5), qd(2, 97);
        for (int t = 0; t < 1000; ++t) {
            const int g = static_cast<int>(gd(rng));
            const Int q(qd(rng));
            std::vector<Int> a;
            for (int i = 0; i < g; ++i) a.emplace_back(coef(rng));
            const auto d = decode_isog(encode_isog(g, q, a));
            if (d.g != g || d.q != q || d.a != a) ++fails;
        }
        o.pass = fails == 0;
        o.detail = "6 worked-example labels, 1000 random vectors, " + std::to_string(fails) + " failures";
        return o;
    }, all);

    return all ? 0 : 1;
}
