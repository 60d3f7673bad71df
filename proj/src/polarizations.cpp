#include "icm/polarizations.hpp"

#include <algorithm>
#include <cmath>

namespace icm {

namespace {

const char* const kModule = "polarizations";

Rat upper_rat(const Interval& x) {
    Rat r;
    mpfr_get_q(r.get_mpq_t(), x.hi().get());
    return r;
}

Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

long vp(Int x, const Int& p) {
    long v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

// Integer polynomial with the given roots, if the enclosures pin down every coefficient.
std::optional<ZPoly> integer_poly(const std::vector<CInterval>& roots, mpfr_prec_t prec) {
    std::vector<CInterval> c{CInterval::from_rat(1, prec)};
    for (const auto& r : roots) {
        std::vector<CInterval> next(c.size() + 1, CInterval::from_rat(0, prec));
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] = next[i + 1] + c[i];
            next[i] = next[i] - c[i] * r;
        }
        c = std::move(next);
    }
    ZPoly out;
    for (const auto& z : c) {
        if (!z.im.contains(0) || z.re.width_double() >= 0.5) return std::nullopt;
        const Int k(static_cast<long>(std::llround(z.re.mid_double())));
        if (!z.re.contains(Rat(k))) return std::nullopt;
        out.push_back(k);
    }
    return out;
}

// Valuations of the roots of f (f(0) != 0) from its Newton polygon at p.
std::vector<Rat> newton_valuations(const ZPoly& f, const Int& p) {
    std::vector<std::pair<long, long>> pts;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] != 0) pts.emplace_back(static_cast<long>(i), vp(abs(f[i]), p));
    std::vector<Rat> out;
    std::size_t cur = 0;
    while (cur + 1 < pts.size()) {
        // steepest descent from the current vertex: least slope, farthest point on ties
        std::size_t best = cur + 1;
        for (std::size_t k = cur + 2; k < pts.size(); ++k) {
            const long a = (pts[k].second - pts[cur].second) * (pts[best].first - pts[cur].first);
            const long b = (pts[best].second - pts[cur].second) * (pts[k].first - pts[cur].first);
            if (a <= b) best = k;
        }
        const Rat slope(pts[best].second - pts[cur].second, pts[best].first - pts[cur].first);
        for (long k = pts[cur].first; k < pts[best].first; ++k) out.push_back(-slope);
        cur = best;
    }
    return out;
}

Elem elem_pow(const AlgebraContext& ctx, const Elem& x, const Elem& xinv, const Int& e) {
    if (e == 0) return ctx.one();
    return ctx.pow(e > 0 ? x : xinv, static_cast<unsigned>(Int(abs(e)).get_ui()));
}

}  // namespace

CMType st_cm_type(const AlgebraContext& ctx) {
    if (!ctx.input().ordinary) throw Error(ErrorKind::NotOrdinary, kModule, "CM types are only computed for ordinary classes");
    const int g = ctx.g();
    const long target = g * ctx.input().a;
    for (mpfr_prec_t prec = 256; prec <= 8192; prec *= 2) {
        const EmbeddingTable* tab = nullptr;
        try {
            tab = &ctx.embeddings(prec);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::PrecisionInsufficient) continue;
            throw;
        }
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t r = 0; r < tab->roots.size(); ++r)
            if (tab->pair[r] > r) pairs.emplace_back(r, tab->pair[r]);
        ensure(pairs.size() == static_cast<std::size_t>(g), kModule, "roots do not form g conjugate pairs");

        std::vector<std::vector<std::size_t>> types;
        for (unsigned long mask = 0; mask < (1UL << g); ++mask) {
            std::vector<std::size_t> t;
            for (int i = 0; i < g; ++i) t.push_back((mask >> (g - 1 - i) & 1) ? pairs[i].second : pairs[i].first);
            std::sort(t.begin(), t.end());
            types.push_back(std::move(t));
        }
        std::sort(types.begin(), types.end());
        std::vector<CInterval> alpha;
        for (const auto& t : types) {
            CInterval a = CInterval::from_rat(1, prec);
            for (auto r : t) a = a * tab->roots[r];
            alpha.push_back(a);
        }
        auto Q = integer_poly(alpha, prec);
        if (!Q) continue;

        bool retry = false;
        for (std::size_t t = 0; t < types.size() && !retry; ++t) {
            // minimal polynomial: the smallest subset of the alphas containing t
            // whose product is an integral factor of Q
            std::optional<ZPoly> minpoly;
            const std::size_t m = types.size();
            for (std::size_t size = 1; size <= m && !minpoly; ++size) {
                for (unsigned long sub = 0; sub < (1UL << m) && !minpoly; ++sub) {
                    if (!(sub >> t & 1) || static_cast<std::size_t>(__builtin_popcountl(sub)) != size) continue;
                    std::vector<CInterval> rs;
                    for (std::size_t k = 0; k < m; ++k)
                        if (sub >> k & 1) rs.push_back(alpha[k]);
                    auto D = integer_poly(rs, prec);
                    if (D && divide_exact(*Q, *D)) minpoly = D;
                }
            }
            if (!minpoly) {
                retry = true;
                break;
            }
            auto vals = newton_valuations(*minpoly, ctx.p());
            if (std::find(vals.begin(), vals.end(), Rat(target)) == vals.end()) continue;
            CMType out;
            out.phi = types[t];
            out.reflex_minpoly = *minpoly;
            out.reflex_valuations = vals;
            return out;
        }
        if (!retry) throw Error(ErrorKind::InvariantBreach, kModule, "no CM type satisfies the Shimura-Taniyama condition");
    }
    throw Error(ErrorKind::PrecisionInsufficient, kModule, "could not certify the reflex polynomial");
}

std::vector<Int> pol_sort_key(const Elem& a) {
    Int e = 1;
    for (const auto& c : a) e = lcm(e, c.get_den());
    std::vector<Int> key{e};
    for (const auto& c : a) key.push_back(Rat(c * e).get_num());
    return key;
}

std::optional<Int> is_polarization(const AlgebraContext& ctx, const CMType& phi, const Lattice& I, const Elem& lambda) {
    if (ctx.is_zero(lambda)) throw Error(ErrorKind::ZeroLambda, kModule, "lambda is zero");
    if (ctx.conj(lambda) != ctx.neg(lambda)) return std::nullopt;
    const Lattice A = trace_dual(ctx, conj(ctx, I));
    if (!ctx.inverse(lambda)) return std::nullopt;
    const Lattice LI = mul(ctx, I, lambda);
    if (!A.contains(LI)) return std::nullopt;
    for (mpfr_prec_t prec = 128;; prec *= 2) {
        if (prec > 16384) throw Error(ErrorKind::PrecisionInsufficient, kModule, "cannot certify the sign of Im phi(lambda)");
        const EmbeddingTable* tab = nullptr;
        try {
            tab = &ctx.embeddings(prec);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::PrecisionInsufficient) continue;
            throw;
        }
        bool certain = true, positive = true;
        for (auto r : phi.phi) {
            const CInterval z = ctx.embed(lambda, r, *tab);
            if (z.im.contains_zero()) certain = false;
            else if (z.im.certainly_negative()) positive = false;
        }
        if (!positive) return std::nullopt;
        if (certain) break;
    }
    const Rat deg = index(A, LI);
    ensure(deg.get_den() == 1, kModule, "polarization degree is not an integer");
    return deg.get_num();
}

Polarizer::Polarizer(const AlgebraContext& ctx, const IsoTester& iso, CMType phi, mpfr_prec_t prec)
    : ctx_(ctx), iso_(iso), phi_(std::move(phi)), prec_(prec) {
    torsion_.push_back(ctx.one());
    for (std::size_t j = 0; j < iso.maximal().comps.size(); ++j) {
        const auto& c = iso.maximal().comps[j];
        for (const auto& u : c.free_units) {
            free_units_.push_back(u);
            free_comp_.push_back(j);
        }
        std::vector<Elem> next;
        for (const auto& t : torsion_) {
            Elem z = t;
            for (long k = 0; k < c.torsion_order; ++k) {
                next.push_back(z);
                z = ctx.mul(z, c.torsion);
            }
        }
        torsion_ = std::move(next);
    }
}

std::vector<Interval> Polarizer::log_phi(const Elem& a, mpfr_prec_t prec) const {
    const EmbeddingTable& tab = ctx_.embeddings(prec);
    std::vector<Interval> out;
    for (auto r : phi_.phi) {
        const CInterval z = ctx_.embed(a, r, tab);
        const Interval n2 = z.norm2();
        if (!n2.certainly_positive())
            throw Error(ErrorKind::PrecisionInsufficient, kModule, "cannot separate |phi(a)| from zero");
        out.push_back(log(n2) * Interval::from_rat(Rat(1, 2), prec));
    }
    return out;
}

const Polarizer::UnitData& Polarizer::unit_data(const Order& S) const {
    auto key = S.sort_key();
    {
        std::lock_guard lk(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    UnitData ud;
    const std::size_t r = free_units_.size();
    std::vector<Elem> nu, nuinv;  // eps conj(eps) and inverses
    for (const auto& e : free_units_) {
        nu.push_back(ctx_.mul(e, ctx_.conj(e)));
        nuinv.push_back(*ctx_.inverse(nu.back()));
    }
    auto nu_pow = [&](const IntVec& k) {
        Elem x = ctx_.one();
        for (std::size_t i = 0; i < r; ++i) x = ctx_.mul(x, elem_pow(ctx_, nu[i], nuinv[i], k[i]));
        return x;
    };
    if (r == 0) {
        ud.coset_reps.push_back(ctx_.one());
    } else {
        // Schreier relations of Z^r -> O_K^x / (mu S^x), e_i -> eps_i
        std::vector<Elem> reps{ctx_.one()}, invs{ctx_.one()};
        std::vector<IntVec> exps{IntVec(r, 0)}, rel;
        for (std::size_t c = 0; c < reps.size(); ++c)
            for (std::size_t i = 0; i < r; ++i) {
                Elem x = ctx_.mul(reps[c], free_units_[i]);
                IntVec e = exps[c];
                e[i] += 1;
                std::optional<std::size_t> hit;
                for (std::size_t d = 0; d < reps.size() && !hit; ++d) {
                    const Elem y = ctx_.mul(x, invs[d]);
                    for (const auto& z : torsion_)
                        if (S.contains(ctx_.mul(z, y))) {
                            hit = d;
                            break;
                        }
                }
                if (hit) {
                    IntVec rr(r);
                    for (std::size_t t = 0; t < r; ++t) rr[t] = e[t] - exps[*hit][t];
                    rel.push_back(std::move(rr));
                } else {
                    invs.push_back(*ctx_.inverse(x));
                    reps.push_back(std::move(x));
                    exps.push_back(std::move(e));
                }
            }
        auto H = hnf_rows(rel, r);
        ensure(H.size() == r, kModule, "unit exponent lattice does not have full rank");
        for (const auto& row : H) ud.gens.push_back(nu_pow(row));
        IntVec c(r, 0);
        for (;;) {
            ud.coset_reps.push_back(nu_pow(c));
            std::size_t i = 0;
            while (i < r && ++c[i] == H[i][i]) c[i++] = 0;
            if (i == r) break;
        }
    }
    std::lock_guard lk(mu_);
    return cache_.emplace(std::move(key), std::move(ud)).first->second;
}

const std::vector<Elem>& Polarizer::norm_unit_generators(const Order& S) const { return unit_data(S).gens; }

Elem Polarizer::distinguished(const Order& S, const Elem& lambda) const {
    const auto& W = unit_data(S).gens;
    const std::size_t r = W.size();
    if (r == 0) return lambda;
    std::vector<Elem> Winv;
    for (const auto& w : W) Winv.push_back(*ctx_.inverse(w));
    const std::size_t g = phi_.phi.size();

    // Candidate exponent vectors from a floating point closest-vector search.
    std::vector<double> a(g);
    std::vector<std::vector<double>> L(r, std::vector<double>(g));
    {
        auto la = log_phi(lambda, prec_);
        for (std::size_t i = 0; i < g; ++i) a[i] = la[i].mid_double();
        for (std::size_t b = 0; b < r; ++b) {
            auto lw = log_phi(W[b], prec_);
            for (std::size_t i = 0; i < g; ++i) L[b][i] = lw[i].mid_double();
        }
    }
    RatMat G(r, r);
    RatVec rhs(r);
    for (std::size_t b = 0; b < r; ++b) {
        for (std::size_t c = 0; c < r; ++c) {
            double s = 0;
            for (std::size_t i = 0; i < g; ++i) s += L[b][i] * L[c][i];
            G(b, c) = Rat(s);
        }
        double s = 0;
        for (std::size_t i = 0; i < g; ++i) s -= L[b][i] * a[i];
        rhs[b] = Rat(s);
    }
    const RatMat Gi = inverse(G);
    std::vector<double> cstar(r, 0);
    for (std::size_t b = 0; b < r; ++b)
        for (std::size_t c = 0; c < r; ++c) cstar[b] += Gi(b, c).get_d() * rhs[c].get_d();
    auto dist2 = [&](const std::vector<long>& c) {
        double s = 0;
        for (std::size_t i = 0; i < g; ++i) {
            double v = a[i];
            for (std::size_t b = 0; b < r; ++b) v += static_cast<double>(c[b]) * L[b][i];
            s += v * v;
        }
        return s;
    };
    std::vector<long> c0(r);
    for (std::size_t b = 0; b < r; ++b) c0[b] = std::lround(cstar[b]);
    const double d0 = dist2(c0) + 1e-6;
    std::vector<long> lo(r), hi(r);
    for (std::size_t b = 0; b < r; ++b) {
        const double rad = std::sqrt(d0 * std::max(0.0, Gi(b, b).get_d())) + 1;
        lo[b] = static_cast<long>(std::floor(cstar[b] - rad));
        hi[b] = static_cast<long>(std::ceil(cstar[b] + rad));
    }
    std::vector<std::vector<long>> cands;
    std::vector<long> c = lo;
    for (;;) {
        if (dist2(c) <= d0 + 1e-6 * (1 + d0)) cands.push_back(c);
        std::size_t b = 0;
        while (b < r && ++c[b] > hi[b]) {
            c[b] = lo[b];
            ++b;
        }
        if (b == r) break;
    }
    ensure(!cands.empty(), kModule, "closest-vector search found no candidate");

    // Certified comparison; candidates whose distances cannot be separated tie.
    std::vector<Elem> elems;
    for (const auto& cv : cands) {
        Elem x = lambda;
        for (std::size_t b = 0; b < r; ++b) x = ctx_.mul(x, elem_pow(ctx_, W[b], Winv[b], Int(cv[b])));
        elems.push_back(std::move(x));
    }
    std::vector<std::size_t> tied;
    for (mpfr_prec_t prec = prec_; prec <= 4096; prec *= 2) {
        std::vector<Interval> d;
        try {
            for (const auto& x : elems) {
                auto lx = log_phi(x, prec);
                Interval s = Interval::from_int(0, prec);
                for (const auto& v : lx) s = s + sqr(v);
                d.push_back(s);
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::PrecisionInsufficient) continue;
            throw;
        }
        std::size_t best = 0;
        for (std::size_t k = 1; k < d.size(); ++k)
            if (certainly_less(d[k], d[best]) || mpfr_less_p(d[k].hi().get(), d[best].hi().get())) best = k;
        tied.clear();
        for (std::size_t k = 0; k < d.size(); ++k)
            if (!certainly_less(d[best], d[k])) tied.push_back(k);
        if (tied.size() == 1) break;
    }
    ensure(!tied.empty(), kModule, "no closest orbit element");
    std::size_t pick = tied[0];
    for (auto k : tied)
        if (pol_sort_key(elems[k]) < pol_sort_key(elems[pick])) pick = k;
    return elems[pick];
}

std::vector<PolClass> Polarizer::enumerate(const Lattice& I0, const Int& d) const {
    if (!ctx_.input().ordinary) throw Error(ErrorKind::NotOrdinary, kModule, "polarizations need an ordinary class");
    if (d <= 0) throw Error(ErrorKind::ValidationError, kModule, "degree must be positive");
    // Work with the isomorphic ideal I = x^{-1} I0 for a short x in I0; lambda of I
    // corresponds to lambda / (x conj(x)) on I0. Keeps the skew lattice well shaped.
    Elem x;
    {
        const auto B0 = I0.basis();
        const IntMat U = lll_transform(t2_gram(ctx_, B0));
        std::vector<Elem> red;
        for (std::size_t r = 0; r < B0.size(); ++r) {
            Elem v = ctx_.zero();
            for (std::size_t k = 0; k < B0.size(); ++k)
                if (U(r, k) != 0) v = ctx_.add(v, ctx_.scale(B0[k], Rat(U(r, k))));
            red.push_back(std::move(v));
        }
        // short vectors may be zero divisors when K is not a field
        std::vector<Elem> cands = red;
        for (std::size_t a = 0; a < red.size(); ++a)
            for (std::size_t b = a + 1; b < red.size(); ++b) {
                cands.push_back(ctx_.add(red[a], red[b]));
                cands.push_back(ctx_.sub(red[a], red[b]));
            }
        Elem sum = ctx_.zero();
        for (std::size_t a = 0; a < red.size(); ++a) sum = ctx_.add(sum, ctx_.scale(red[a], Rat(static_cast<long>(a + 1))));
        cands.push_back(sum);
        for (const auto& c : cands)
            if (ctx_.inverse(c)) {
                x = c;
                break;
            }
        if (x.empty()) x = ctx_.one();
    }
    std::optional<Elem> xinv = ctx_.inverse(x);
    if (!xinv) x = ctx_.one(), xinv = ctx_.one();
    const Elem rinv = *ctx_.inverse(ctx_.mul(x, ctx_.conj(x)));
    const Lattice I = mul(ctx_, I0, *xinv);
    const Order S = mult_ring(ctx_, I);
    const std::size_t n = ctx_.dim();
    const Lattice A = trace_dual(ctx_, conj(ctx_, I));
    const Lattice J0 = colon(ctx_, A, I);
    const Rat target = Rat(d) / index(A, I);

    // skew part of J0
    const auto JB = J0.basis();
    std::vector<Elem> skew;
    {
        Int den = 1;
        std::vector<Elem> s;
        for (const auto& b : JB) {
            s.push_back(ctx_.add(b, ctx_.conj(b)));
            for (const auto& x : s.back()) den = lcm(den, x.get_den());
        }
        IntMat M(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) M(i, k) = Rat(s[i][k] * den).get_num();
        for (const auto& y : integer_left_kernel(M)) {
            Elem v(n);
            for (std::size_t i = 0; i < n; ++i)
                if (y[i] != 0) v = ctx_.add(v, ctx_.scale(JB[i], Rat(y[i])));
            skew.push_back(std::move(v));
        }
    }
    ensure(skew.size() == static_cast<std::size_t>(ctx_.g()), kModule, "skew part has the wrong rank");

    // component norms are multiples of the norms nu_j of the O_{K_j}-ideals
    // generated by the components of the skew lattice
    const auto& comps = iso_.maximal().comps;
    std::vector<Rat> nu;
    for (std::size_t j = 0; j < comps.size(); ++j) {
        std::vector<Elem> gens;
        for (const auto& v : skew) {
            const Elem vj = ctx_.mul(v, ctx_.idempotents()[j]);
            for (const auto& w : comps[j].basis) gens.push_back(ctx_.mul(vj, w));
        }
        const auto B = basis_of_span(gens, n);
        const std::size_t m = comps[j].basis.size();
        ensure(B.size() == m, kModule, "component ideal has the wrong rank");
        RatMat C(m, m);
        for (std::size_t i = 0; i < m; ++i) {
            auto cc = component_coords(ctx_, comps[j], B[i]);
            for (std::size_t k = 0; k < m; ++k) C(i, k) = cc[k];
        }
        Rat dt = det(C);
        nu.push_back(dt < 0 ? Rat(-dt) : dt);
    }
    Rat prod = 1;
    for (const auto& v : nu) prod *= v;
    const Rat mq = target / prod;
    if (mq <= 0 || mq.get_den() != 1) return {};
    const Int m = mq.get_num();

    // all ordered factorizations of m over the components
    std::vector<std::vector<Int>> facts{{}};
    std::vector<Int> divs;
    for (Int k = 1; k * k <= m; ++k)
        if (m % k == 0) {
            divs.push_back(k);
            if (k * k != m) divs.push_back(m / k);
        }
    for (std::size_t j = 0; j < comps.size(); ++j) {
        std::vector<std::vector<Int>> next;
        for (const auto& f : facts) {
            Int used = 1;
            for (const auto& x : f) used *= x;
            for (const auto& dv : divs) {
                if ((m / used) % dv != 0) continue;
                if (j + 1 == comps.size() && used * dv != m) continue;
                auto g2 = f;
                g2.push_back(dv);
                next.push_back(std::move(g2));
            }
        }
        facts = std::move(next);
    }

    // T2 bound for orbit members in the fundamental box of each component
    Rat bound = 0;
    for (mpfr_prec_t prec = prec_;; prec *= 2) {
        if (prec > 16384) throw Error(ErrorKind::PrecisionInsufficient, kModule, "cannot bound the search region");
        try {
            const EmbeddingTable& tab = ctx_.embeddings(prec);
            Rat best = 0;
            for (const auto& f : facts) {
                Interval total = Interval::from_int(0, prec);
                for (auto rt : phi_.phi) {
                    const std::size_t j = tab.component[rt];
                    Interval s = log(Interval::from_rat(nu[j] * Rat(f[j]), prec)) /
                                 Interval::from_int(comps[j].g, prec);
                    for (std::size_t k = 0; k < free_units_.size(); ++k) {
                        if (free_comp_[k] != j) continue;
                        const Interval lu = log(ctx_.embed(free_units_[k], rt, tab).norm2());
                        s = s + Interval::from_int(2, prec) * abs(lu);
                    }
                    total = total + exp(s);
                }
                best = std::max(best, upper_rat(total));
            }
            bound = 2 * best * Rat(1025, 1024);
            break;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::PrecisionInsufficient) throw;
        }
    }

    std::vector<PolClass> out;
    std::vector<Elem> found;
    for (const auto& c : unit_data(S).coset_reps) {
        std::vector<Elem> cb;
        for (const auto& v : skew) cb.push_back(ctx_.mul(v, c));
        const RatMat G = t2_gram(ctx_, cb);
        fincke_pohst(G, bound, [&](const IntVec& y) {
            Elem lam(n);
            for (std::size_t i = 0; i < skew.size(); ++i)
                if (y[i] != 0) lam = ctx_.add(lam, ctx_.scale(skew[i], Rat(y[i])));
            if (ctx_.norm(lam) != target) return true;
            auto deg = is_polarization(ctx_, phi_, I, lam);
            if (!deg) return true;
            ensure(*deg == d, kModule, "degree disagrees with the norm");
            Elem l0 = distinguished(S, ctx_.mul(lam, rinv));
            if (std::find(found.begin(), found.end(), l0) == found.end()) found.push_back(std::move(l0));
            return true;
        });
    }
    for (auto& l : found) {
        PolClass pc;
        pc.degree = d;
        pc.key = pol_sort_key(l);
        pc.lambda = std::move(l);
        auto deg = is_polarization(ctx_, phi_, I0, pc.lambda);
        ensure(deg && *deg == d, kModule, "distinguished polarization failed its own check");
        out.push_back(std::move(pc));
    }
    std::sort(out.begin(), out.end(), [](const PolClass& a, const PolClass& b) { return a.key < b.key; });
    for (std::size_t k = 0; k < out.size(); ++k) out[k].k = static_cast<long>(k + 1);
    return out;
}

}  // namespace icm
