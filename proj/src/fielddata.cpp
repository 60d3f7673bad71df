#include "icm/fielddata.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace icm {

namespace {

constexpr const char* kModule = "cli-ingest";

using json = nlohmann::json;

Rat parse_rat(const json& v, const std::string& where) {
    try {
        if (v.is_number_integer()) return Rat(std::to_string(v.get<long long>()));
        if (v.is_string()) {
            Rat r(v.get<std::string>());
            r.canonicalize();
            return r;
        }
    } catch (const std::invalid_argument&) {
    }
    throw Error(ErrorKind::ParseError, kModule, "expected a rational at " + where);
}

Int parse_int(const json& v, const std::string& where) {
    const Rat r = parse_rat(v, where);
    if (r.get_den() != 1) throw Error(ErrorKind::ParseError, kModule, "expected an integer at " + where);
    return r.get_num();
}

QPoly parse_qpoly(const json& v, const std::string& where) {
    if (!v.is_array()) throw Error(ErrorKind::ParseError, kModule, "expected an array at " + where);
    QPoly f;
    for (std::size_t i = 0; i < v.size(); ++i) f.push_back(parse_rat(v[i], where));
    trim(f);
    return f;
}

const json& field(const json& j, const char* key) {
    if (!j.contains(key)) throw Error(ErrorKind::ParseError, kModule, std::string("missing key '") + key + "'");
    return j.at(key);
}

// coordinates of f (deg < n) over the rows of B, or none if not integral
std::optional<IntVec> integral_coords(const RatMat& Binv, const QPoly& f, std::size_t n) {
    IntVec c(n);
    for (std::size_t k = 0; k < n; ++k) {
        Rat s = 0;
        for (std::size_t i = 0; i < f.size() && i < n; ++i) s += f[i] * Binv(i, k);
        if (s.get_den() != 1) return std::nullopt;
        c[k] = s.get_num();
    }
    return c;
}

QPoly mulmod(const QPoly& a, const QPoly& b, const QPoly& f) { return mod(mul(a, b), f); }

QPoly powmod(const QPoly& a, long e, const QPoly& f) {
    QPoly r{Rat(1)}, b = a;
    while (e) {
        if (e & 1) r = mulmod(r, b, f);
        e >>= 1;
        if (e) b = mulmod(b, b, f);
    }
    return r;
}

Rat trace_mod(const QPoly& a, const QPoly& f) {
    // trace of multiplication by a on the power basis
    const std::size_t n = static_cast<std::size_t>(degree(f));
    Rat t = 0;
    for (std::size_t i = 0; i < n; ++i) {
        QPoly xi(i + 1);
        xi[i] = 1;
        const QPoly p = mulmod(a, xi, f);
        if (i < p.size()) t += p[i];
    }
    return t;
}

Rat norm_mod(const QPoly& a, const QPoly& f) {
    const std::size_t n = static_cast<std::size_t>(degree(f));
    RatMat M(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        QPoly xi(i + 1);
        xi[i] = 1;
        const QPoly p = mulmod(a, xi, f);
        for (std::size_t k = 0; k < p.size(); ++k) M(i, k) = p[k];
    }
    return det(M);
}

bool squarefree_long(long m) {
    m = m < 0 ? -m : m;
    for (long d = 2; d * d <= m; ++d)
        if (m % (d * d) == 0) return false;
    return true;
}

bool is_fundamental_disc(long D) {
    const long r = ((D % 4) + 4) % 4;
    if (r == 1) return squarefree_long(D);
    if (r != 0) return false;
    const long m = D / 4, rm = ((m % 4) + 4) % 4;
    return (rm == 2 || rm == 3) && squarefree_long(m);
}

// Free units are independent iff the log matrix on g_j - 1 of the conjugate
// pairs is nonsingular; its determinant is enclosed via the Leibniz sum.
void check_log_rank(const AlgebraContext& ctx, const ComponentData& cd, std::size_t j) {
    const std::size_t r = cd.free_units.size();
    if (r == 0) return;
    for (mpfr_prec_t prec = 128;; prec *= 2) {
        const EmbeddingTable& t = ctx.embeddings_auto(prec);
        std::vector<std::size_t> roots;
        for (std::size_t i = 0; i < t.roots.size() && roots.size() < r; ++i)
            if (t.component[i] == j && t.pair[i] > i) roots.push_back(i);
        std::vector<std::vector<Interval>> L(r);
        for (std::size_t k = 0; k < r; ++k)
            for (std::size_t i : roots) L[k].push_back(log(sqrt(ctx.embed(cd.free_units[k], i, t).norm2())));
        std::vector<std::size_t> perm(r);
        std::iota(perm.begin(), perm.end(), 0);
        Interval det = Interval::from_int(0, t.prec);
        do {
            int sign = 1;
            for (std::size_t a = 0; a < r; ++a)
                for (std::size_t b = a + 1; b < r; ++b)
                    if (perm[a] > perm[b]) sign = -sign;
            Interval term = Interval::from_int(sign, t.prec);
            for (std::size_t k = 0; k < r; ++k) term = term * L[k][perm[k]];
            det = det + term;
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (!det.contains_zero()) return;
        if (prec >= 4096)
            throw Error(ErrorKind::ValidationError, kModule, "fundamental units are not multiplicatively independent");
    }
}

// A unit eps of rank-one unit group is fundamental up to torsion unless some
// unit eta has |phi(eta)|^2 = |phi(eps)|^(2/k), k >= 2, at every embedding.
// Such eta (or its inverse) has T2 at most sum_r max(1, |phi_r(eps)|), so a
// short-vector search over O_{K_j} finds it.
void check_unit_not_power(const AlgebraContext& ctx, const ComponentData& cd, std::size_t j) {
    const Elem& e = ctx.idempotents()[j];
    const Elem& eps = cd.free_units.front();
    const Elem epsj = ctx.mul(eps, e);
    const Elem rest = ctx.sub(ctx.one(), e);
    const EmbeddingTable& t = ctx.embeddings_auto();
    std::size_t r0 = t.roots.size();
    Interval bound = Interval::from_int(0, t.prec);
    for (std::size_t r = 0; r < t.roots.size(); ++r) {
        if (t.component[r] != j) continue;
        if (r0 == t.roots.size()) r0 = r;
        Interval a = sqrt(ctx.embed(eps, r, t).norm2());
        bound = bound + (certainly_less(a, Interval::from_int(1, t.prec)) ? Interval::from_int(1, t.prec) : a);
    }
    Rat B;
    mpfr_get_q(B.get_mpq_t(), bound.hi().get());
    const Interval leps = abs(log(sqrt(ctx.embed(eps, r0, t).norm2())));
    fincke_pohst(t2_gram(ctx, cd.basis), B * Rat(1025, 1024), [&](const IntVec& x) {
        Elem z = ctx.zero();
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] != 0) z = ctx.add(z, ctx.scale(cd.basis[i], Rat(x[i])));
        const Rat N = ctx.norm(ctx.add(z, rest));
        if (N != 1 && N != -1) return true;
        const Elem zz = ctx.mul(z, ctx.conj(z));
        if (zz == e) return true;  // root of unity
        const Elem ee = ctx.mul(epsj, ctx.conj(epsj));
        if (zz == ee || ctx.mul(zz, ee) == e) return true;  // same absolute values as eps^(+-1)
        const Interval lz = abs(log(sqrt(ctx.embed(ctx.add(z, rest), r0, t).norm2())));
        if (certainly_less(lz, leps))
            throw Error(ErrorKind::FieldDataMismatch, kModule, "listed fundamental unit is a proper power");
        if (!certainly_less(leps, lz))
            throw Error(ErrorKind::PrecisionInsufficient, kModule, "cannot compare unit heights");
        return true;
    });
}

}  // namespace

FieldData parse_field_data(const std::string& text, const std::string& source) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, kModule, source + ": " + e.what());
    }
    FieldData fd;
    fd.source = source;
    const QPoly pq = parse_qpoly(field(j, "defining_poly"), "defining_poly");
    for (const auto& c : pq) {
        if (c.get_den() != 1) throw Error(ErrorKind::ParseError, kModule, "defining_poly must be integral");
        fd.poly.push_back(c.get_num());
    }
    if (fd.poly.empty() || fd.poly.back() != 1) throw Error(ErrorKind::ParseError, kModule, "defining_poly must be monic");
    for (const auto& row : field(j, "integral_basis")) fd.integral_basis.push_back(parse_qpoly(row, "integral_basis"));
    fd.disc = parse_int(field(j, "disc"), "disc");
    const json& cg = field(j, "class_group");
    for (const auto& v : field(cg, "invariants")) fd.cl_invariants.push_back(parse_int(v, "class_group.invariants"));
    for (const auto& gen : field(cg, "generators"))
        fd.cl_generators.push_back({parse_int(field(gen, "p"), "generator p"), parse_qpoly(field(gen, "element"), "generator element")});
    const json& u = field(j, "units");
    const json& tor = field(u, "torsion");
    fd.torsion_generator = parse_qpoly(field(tor, "generator"), "torsion generator");
    fd.torsion_order = static_cast<long>(parse_int(field(tor, "order"), "torsion order").get_si());
    for (const auto& v : field(u, "fundamental")) fd.fundamental_units.push_back(parse_qpoly(v, "fundamental unit"));
    if (fd.cl_generators.size() != fd.cl_invariants.size())
        throw Error(ErrorKind::ParseError, kModule, "class group needs one generator per invariant");
    return fd;
}

FieldData load_field_data(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::MissingFieldData, kModule, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    FieldData fd = parse_field_data(ss.str(), path.filename().string());
    validate_field_data(fd);
    return fd;
}

std::vector<FieldData> load_field_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw Error(ErrorKind::MissingFieldData, kModule, "not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<FieldData> out;
    for (const auto& f : files) out.push_back(load_field_data(f));
    return out;
}

long form_class_number(long D) {
    if (D >= 0 || ((D % 4) + 4) % 4 > 1) throw Error(ErrorKind::ValidationError, kModule, "not a negative discriminant");
    long h = 0;
    // reduced: |b| <= a <= c, b >= 0 if |b| = a or a = c
    for (long a = 1; 3 * a * a <= -D; ++a)
        for (long b = -a + 1; b <= a; ++b) {
            const long num = b * b - D;
            if (num % (4 * a)) continue;
            const long c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            long g = std::gcd(std::gcd(a, std::labs(b)), c);
            if (g != 1) continue;
            ++h;
        }
    return h;
}

void validate_field_data(const FieldData& fd) {
    const std::size_t n = static_cast<std::size_t>(degree(fd.poly));
    const QPoly f = to_qpoly(fd.poly);
    const std::string tag = fd.source.empty() ? std::string("field data") : fd.source;
    if (fd.integral_basis.size() != n) throw Error(ErrorKind::ValidationError, kModule, tag + ": integral basis has wrong length");
    if (!is_squarefree(fd.poly)) throw Error(ErrorKind::ValidationError, kModule, tag + ": defining polynomial not squarefree");
    RatMat B(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (fd.integral_basis[i].size() > n) throw Error(ErrorKind::ValidationError, kModule, tag + ": basis element not reduced");
        for (std::size_t k = 0; k < fd.integral_basis[i].size(); ++k) B(i, k) = fd.integral_basis[i][k];
    }
    if (det(B) == 0) throw Error(ErrorKind::ValidationError, kModule, tag + ": integral basis is singular");
    const RatMat Binv = icm::inverse(B);
    auto in_order = [&](const QPoly& a) { return integral_coords(Binv, a, n).has_value(); };
    for (std::size_t k = 0; k < n; ++k) {
        QPoly xk(k + 1);
        xk[k] = 1;
        if (!in_order(xk)) throw Error(ErrorKind::NotAnOrder, kModule, tag + ": basis does not contain the power order");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (!in_order(mulmod(fd.integral_basis[i], fd.integral_basis[j], f)))
                throw Error(ErrorKind::NotAnOrder, kModule, tag + ": integral basis is not closed under multiplication");
    RatMat T(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) T(i, j) = trace_mod(mulmod(fd.integral_basis[i], fd.integral_basis[j], f), f);
    const Rat d = det(T);
    if (d != Rat(fd.disc)) throw Error(ErrorKind::DiscriminantCheckFailed, kModule, tag + ": discriminant does not match the basis");
    const Rat idx = abs(det(B));  // [O : Z[x]] = 1/|det B|
    if (Rat(discriminant(fd.poly)) * idx * idx != Rat(fd.disc))
        throw Error(ErrorKind::DiscriminantCheckFailed, kModule, tag + ": disc(f) != index^2 disc(O)");
    // every element of O has integral characteristic polynomial; a p-maximality
    // certificate would need more than this, so the class number oracle below
    // doubles as the maximality check for quadratic fields.
    for (std::size_t i = 1; i < fd.cl_invariants.size(); ++i)
        if (fd.cl_invariants[i] % fd.cl_invariants[i - 1] != 0)
            throw Error(ErrorKind::ValidationError, kModule, tag + ": class group invariants not in divisibility order");
    for (const auto& m : fd.cl_invariants)
        if (m < 2) throw Error(ErrorKind::ValidationError, kModule, tag + ": trivial class group invariant listed");
    Int h = 1;
    for (const auto& m : fd.cl_invariants) h *= m;
    if (n == 2 && fd.disc < 0 && fd.disc > -1000000) {
        const long hf = form_class_number(fd.disc.get_si());
        if (h != hf)
            throw Error(ErrorKind::ValidationError, kModule,
                        tag + ": class number " + h.get_str() + " disagrees with the forms count " + std::to_string(hf));
        if (!is_fundamental_disc(fd.disc.get_si()))
            throw Error(ErrorKind::ValidationError, kModule, tag + ": discriminant is not fundamental");
    }
    // units
    auto check_unit = [&](const QPoly& u, const std::string& what) {
        if (!in_order(u)) throw Error(ErrorKind::ValidationError, kModule, tag + ": " + what + " not integral");
        const Rat N = norm_mod(u, f);
        if (N != 1 && N != -1) throw Error(ErrorKind::ValidationError, kModule, tag + ": " + what + " is not a unit");
    };
    check_unit(fd.torsion_generator, "torsion generator");
    if (fd.torsion_order < 2) throw Error(ErrorKind::ValidationError, kModule, tag + ": torsion order must be at least 2");
    if (powmod(fd.torsion_generator, fd.torsion_order, f) != QPoly{Rat(1)})
        throw Error(ErrorKind::ValidationError, kModule, tag + ": torsion generator has the wrong order");
    for (long p = 2; p <= fd.torsion_order; ++p) {
        if (fd.torsion_order % p) continue;
        if (powmod(fd.torsion_generator, fd.torsion_order / p, f) == QPoly{Rat(1)})
            throw Error(ErrorKind::ValidationError, kModule, tag + ": torsion generator has smaller order");
    }
    if (fd.fundamental_units.size() != n / 2 - 1)
        throw Error(ErrorKind::ValidationError, kModule, tag + ": expected " + std::to_string(n / 2 - 1) + " fundamental units for a CM field");
    for (const auto& u : fd.fundamental_units) {
        check_unit(u, "fundamental unit");
        // roots of unity in a degree-n field have order m with phi(m) <= n, so m <= 2n^2
        for (long k = 1; k <= static_cast<long>(2 * n * n); ++k)
            if (powmod(u, k, f) == QPoly{Rat(1)})
                throw Error(ErrorKind::ValidationError, kModule, tag + ": fundamental unit is a root of unity");
    }
}

std::vector<FieldData> select_field_data(const AlgebraContext& ctx, const std::vector<FieldData>& pool) {
    std::vector<FieldData> out;
    for (const auto& f : ctx.factors()) {
        auto it = std::find_if(pool.begin(), pool.end(), [&](const FieldData& d) { return d.poly == f; });
        if (it == pool.end()) throw Error(ErrorKind::MissingFieldData, kModule, "no field data for factor " + to_string(f));
        out.push_back(*it);
    }
    return out;
}

MaximalOrderData assemble_maximal_order(const AlgebraContext& ctx, const std::vector<FieldData>& data) {
    if (data.size() != ctx.num_components())
        throw Error(ErrorKind::FieldDataMismatch, kModule, "need one field record per factor");
    MaximalOrderData mo;
    std::vector<Elem> gens;
    for (std::size_t j = 0; j < data.size(); ++j) {
        const FieldData& fd = data[j];
        if (fd.poly != ctx.factors()[j])
            throw Error(ErrorKind::FieldDataMismatch, kModule,
                        "field data polynomial " + to_string(fd.poly) + " does not match factor " + to_string(ctx.factors()[j]));
        ComponentData cd;
        cd.g = degree(fd.poly) / 2;
        for (const auto& b : fd.integral_basis) cd.basis.push_back(ctx.from_component(b, j));
        const Elem rest = ctx.sub(ctx.one(), ctx.idempotents()[j]);
        cd.torsion = ctx.add(ctx.from_component(fd.torsion_generator, j), rest);
        cd.torsion_order = fd.torsion_order;
        for (const auto& u : fd.fundamental_units) cd.free_units.push_back(ctx.add(ctx.from_component(u, j), rest));
        cd.cl_invariants = fd.cl_invariants;
        mo.comps.push_back(std::move(cd));
        gens.insert(gens.end(), mo.comps.back().basis.begin(), mo.comps.back().basis.end());
    }
    mo.OK = Lattice::from_generators(gens, ctx.dim());
    if (!is_order(ctx, mo.OK)) throw Error(ErrorKind::NotAnOrder, kModule, "assembled maximal order is not a ring");
    if (!mo.OK.contains(frobenius_order(ctx)))
        throw Error(ErrorKind::NotAnOrder, kModule, "assembled maximal order does not contain Z[F,V]");
    for (std::size_t j = 0; j < data.size(); ++j) {
        // Roots of unity are the x with x * conj(x) = 1, all of T2 = 2g.
        const ComponentData& cd = mo.comps[j];
        const Elem& e = ctx.idempotents()[j];
        long roots = 0;
        fincke_pohst(t2_gram(ctx, cd.basis), Rat(2 * cd.g), [&](const IntVec& x) {
            Elem z = ctx.zero();
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] != 0) z = ctx.add(z, ctx.scale(cd.basis[i], Rat(x[i])));
            if (ctx.mul(z, ctx.conj(z)) == e) ++roots;
            return true;
        });
        if (roots != cd.torsion_order)
            throw Error(ErrorKind::FieldDataMismatch, kModule,
                        "torsion order " + std::to_string(cd.torsion_order) + " but the field has " +
                            std::to_string(roots) + " roots of unity");
    }
    for (std::size_t j = 0; j < data.size(); ++j) {
        check_log_rank(ctx, mo.comps[j], j);
        if (mo.comps[j].free_units.size() == 1) check_unit_not_power(ctx, mo.comps[j], j);
    }
    for (std::size_t j = 0; j < data.size(); ++j) {
        const Elem rest = ctx.sub(ctx.one(), ctx.idempotents()[j]);
        for (const auto& gen : data[j].cl_generators) {
            const Lattice I = ideal_from_generators(
                ctx, mo.OK, {ctx.from_component(QPoly{Rat(gen.p)}, j), ctx.from_component(gen.elem, j), rest});
            mo.comps[j].cl_generators.push_back(I);
        }
    }
    return mo;
}

}  // namespace icm
