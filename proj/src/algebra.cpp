#include "icm/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace icm {

namespace {

constexpr const char* kModule = "algebra";

// prime power decomposition q = p^a; returns false when q is not a prime power
bool prime_power(const Int& q, Int& p, int& a) {
    if (q < 2) return false;
    Int n = q;
    Int d = 2;
    while (d * d <= n) {
        if (n % d == 0) break;
        ++d;
    }
    if (d * d > n) d = n;
    p = d;
    a = 0;
    while (n % p == 0) {
        n /= p;
        ++a;
    }
    return n == 1;
}

// Real polynomial P of degree g with h(x) = x^g P(x + q/x).
QPoly real_weil_poly(int g, const Int& q, const ZPoly& h) {
    // Laurent coefficients of h / x^g, exponents -g..g stored at offset g
    std::vector<Rat> L(h.begin(), h.end());
    QPoly P(static_cast<std::size_t>(g) + 1);
    std::vector<Rat> binom;
    for (int k = g; k >= 0; --k) {
        const Rat c = L[static_cast<std::size_t>(g + k)];
        P[static_cast<std::size_t>(k)] = c;
        if (c == 0) continue;
        // subtract c (x + q/x)^k = c sum_i C(k,i) q^{k-i} x^{2i-k}
        Int C = 1, qp;
        for (int i = 0; i <= k; ++i) {
            mpz_pow_ui(qp.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(k - i));
            L[static_cast<std::size_t>(g + 2 * i - k)] -= c * Rat(C * qp);
            C = C * (k - i) / (i + 1);
        }
    }
    return P;
}

// Sign of f(2 sqrt(q)) (or f(-2 sqrt(q)) when neg), exactly.
int sign_at_bound(const QPoly& f, const Int& q, bool neg) {
    // (2s)^k = 2^k q^{k/2} for even k, 2^k q^{(k-1)/2} s for odd k
    Rat A = 0, B = 0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        Int m;
        mpz_pow_ui(m.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(k / 2));
        m <<= static_cast<mp_bitcnt_t>(k);
        Rat t = f[k] * Rat(m);
        if (neg && (k % 2 == 1)) t = -t;
        if (k % 2 == 0) A += t;
        else B += t;
    }
    const int sa = sgn(A), sb = sgn(B);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // A + B s with opposite signs: compare A^2 and B^2 q
    const Rat d = A * A - B * B * Rat(q);
    return sgn(d) * sa;
}

// All roots of h have absolute value sqrt(q): P has g real roots in (-2 sqrt q, 2 sqrt q).
bool weil_roots(int g, const Int& q, const ZPoly& h) {
    const QPoly P = real_weil_poly(g, q, h);
    std::vector<QPoly> st{P};
    QPoly d;
    for (std::size_t k = 1; k < P.size(); ++k) d.push_back(P[k] * Rat(static_cast<long>(k)));
    trim(d);
    st.push_back(d);
    while (!st.back().empty() && degree(st.back()) > 0) {
        QPoly r = mod(st[st.size() - 2], st.back());
        for (auto& c : r) c = -c;
        trim(r);
        if (r.empty()) break;
        st.push_back(r);
    }
    auto changes = [&](bool neg) {
        int v = 0, last = 0;
        for (const auto& f : st) {
            const int s = sign_at_bound(f, q, neg);
            if (s == 0) continue;
            if (last != 0 && s != last) ++v;
            last = s;
        }
        return v;
    };
    if (sign_at_bound(P, q, false) == 0 || sign_at_bound(P, q, true) == 0) return false;
    return changes(true) - changes(false) == g;
}

QPoly x_power(int k) {
    QPoly f(static_cast<std::size_t>(k) + 1);
    f[static_cast<std::size_t>(k)] = 1;
    return f;
}

}  // namespace

WeilInput parse_weil(int g, const Int& q, const ZPoly& h) {
    if (g < 1) throw Error(ErrorKind::ParseError, kModule, "dimension must be positive");
    if (h.size() != static_cast<std::size_t>(2 * g + 1))
        throw Error(ErrorKind::ParseError, kModule, "expected 2g+1 coefficients");
    if (h.back() != 1) throw Error(ErrorKind::ParseError, kModule, "Weil polynomial must be monic");
    WeilInput in;
    in.g = g;
    in.q = q;
    in.h = h;
    if (!prime_power(q, in.p, in.a)) throw Error(ErrorKind::ParseError, kModule, "q must be a prime power");
    // h[i] = q^{g-i} h[2g-i] for 0 <= i <= g
    for (int i = 0; i <= g; ++i) {
        Int pw;
        mpz_pow_ui(pw.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(g - i));
        if (h[static_cast<std::size_t>(i)] != pw * h[static_cast<std::size_t>(2 * g - i)])
            throw Error(ErrorKind::FunctionalEquationViolated, kModule,
                        "coefficient of x^" + std::to_string(i) + " violates the functional equation");
    }
    if (!is_squarefree(h)) throw Error(ErrorKind::NotSquarefree, kModule, "Weil polynomial has repeated roots");
    if (!weil_roots(g, q, h))
        throw Error(ErrorKind::ValidationError, kModule, "roots of h do not all have absolute value sqrt(q)");
    Int gc;
    const Int mid = h[static_cast<std::size_t>(g)];
    mpz_gcd(gc.get_mpz_t(), mid.get_mpz_t(), in.p.get_mpz_t());
    in.ordinary = (gc == 1);
    if (!in.ordinary && in.a > 1)
        throw Error(ErrorKind::NotOrdinaryNotPrimeField, kModule, "non-ordinary isogeny class over a non-prime field");
    return in;
}

AlgebraContext::AlgebraContext(const WeilInput& in) : in_(in), n_(static_cast<std::size_t>(2 * in.g)) {
    const int g = in_.g;
    const QPoly hq = to_qpoly(in_.h);
    factors_ = factor_weil(in_.h, in_.q);

    // power-basis coordinates of B_K
    QPoly xinv(n_);
    {
        // h = x*k(x) + h0  =>  x^{-1} = -k(x)/h0
        const Rat h0 = hq[0];
        for (std::size_t i = 1; i < hq.size(); ++i) xinv[i - 1] = -hq[i] / h0;
        trim(xinv);
    }
    const QPoly V = mod(icm::mul(QPoly{Rat(in_.q)}, xinv), hq);
    std::vector<QPoly> bpow(n_);
    {
        QPoly cur{Rat(1)};
        bpow[static_cast<std::size_t>(g - 1)] = cur;
        for (int t = 1; t <= g - 1; ++t) {
            cur = mod(icm::mul(cur, V), hq);
            bpow[static_cast<std::size_t>(g - 1 - t)] = cur;
        }
        for (int t = 1; t <= g; ++t) bpow[static_cast<std::size_t>(g - 1 + t)] = x_power(t);
    }
    to_power_ = RatMat(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < bpow[i].size(); ++k) to_power_(i, k) = bpow[i][k];
    from_power_ = icm::inverse(to_power_);

    table_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j) {
            const Elem e = from_power(mod(icm::mul(bpow[i], bpow[j]), hq));
            IntVec v(n_);
            for (std::size_t k = 0; k < n_; ++k) {
                if (e[k].get_den() != 1) throw Error(ErrorKind::InvariantBreach, kModule, "non-integral structure constant");
                v[k] = e[k].get_num();
            }
            table_[i * n_ + j] = v;
            table_[j * n_ + i] = v;
        }

    conj_ = IntMat(n_, n_);
    for (int t = 0; t <= g - 1; ++t) {
        conj_(index_of_F(t), index_of_V(t)) = 1;
        conj_(index_of_V(t), index_of_F(t)) = 1;
    }
    {
        QPoly vg{Rat(1)};
        for (int t = 0; t < g; ++t) vg = mod(icm::mul(vg, V), hq);
        const Elem e = from_power(vg);
        for (std::size_t k = 0; k < n_; ++k) {
            ensure(e[k].get_den() == 1, kModule, "V^g not integral over B_K");
            conj_(index_of_F(g), k) = e[k].get_num();
        }
    }

    basis_trace_.assign(n_, 0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) basis_trace_[i] += table(i, k)[k];
    trace_form_ = IntMat(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            Int s = 0;
            const IntVec& b = table(i, j);
            for (std::size_t k = 0; k < n_; ++k) s += b[k] * basis_trace_[k];
            trace_form_(i, j) = s;
        }
    // T2(x, y) = Tr(x conj(y)); conj(b_j) = sum_k conj_(j,k) b_k
    t2_form_ = IntMat(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            Int s = 0;
            for (std::size_t k = 0; k < n_; ++k)
                if (conj_(j, k) != 0) s += conj_(j, k) * trace_form_(i, k);
            t2_form_(i, j) = s;
        }

    // idempotents by CRT
    for (std::size_t j = 0; j < factors_.size(); ++j) {
        const ZPoly cof = *divide_exact(in_.h, factors_[j]);
        const XgcdResult x = xgcd(to_qpoly(cof), to_qpoly(factors_[j]));
        ensure(x.g == QPoly{Rat(1)}, kModule, "factors not coprime");
        idem_.push_back(from_power(mod(icm::mul(x.s, to_qpoly(cof)), hq)));
    }
}

Elem AlgebraContext::basis(std::size_t i) const {
    Elem e(n_);
    e[i] = 1;
    return e;
}

Elem AlgebraContext::ver() const {
    if (in_.g >= 2) return basis(index_of_V(1));
    Elem e(n_);
    for (std::size_t k = 0; k < n_; ++k) e[k] = conj_(index_of_F(1), k);
    return e;
}

Elem AlgebraContext::add(const Elem& a, const Elem& b) const {
    Elem r(n_);
    for (std::size_t i = 0; i < n_; ++i) r[i] = a[i] + b[i];
    return r;
}

Elem AlgebraContext::sub(const Elem& a, const Elem& b) const {
    Elem r(n_);
    for (std::size_t i = 0; i < n_; ++i) r[i] = a[i] - b[i];
    return r;
}

Elem AlgebraContext::neg(const Elem& a) const {
    Elem r(n_);
    for (std::size_t i = 0; i < n_; ++i) r[i] = -a[i];
    return r;
}

Elem AlgebraContext::scale(const Elem& a, const Rat& c) const {
    Elem r(n_);
    for (std::size_t i = 0; i < n_; ++i) r[i] = a[i] * c;
    return r;
}

Elem AlgebraContext::mul(const Elem& a, const Elem& b) const {
    Elem r(n_);
    Rat c;
    for (std::size_t i = 0; i < n_; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < n_; ++j) {
            if (b[j] == 0) continue;
            c = a[i] * b[j];
            const IntVec& t = table(i, j);
            for (std::size_t k = 0; k < n_; ++k)
                if (t[k] != 0) r[k] += c * t[k];
        }
    }
    return r;
}

IntVec AlgebraContext::mul(const IntVec& a, const IntVec& b) const {
    IntVec r(n_);
    Int c;
    for (std::size_t i = 0; i < n_; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < n_; ++j) {
            if (b[j] == 0) continue;
            c = a[i] * b[j];
            const IntVec& t = table(i, j);
            for (std::size_t k = 0; k < n_; ++k)
                if (t[k] != 0) r[k] += c * t[k];
        }
    }
    return r;
}

Elem AlgebraContext::pow(const Elem& a, unsigned e) const {
    Elem r = one(), b = a;
    while (e) {
        if (e & 1) r = mul(r, b);
        e >>= 1;
        if (e) b = mul(b, b);
    }
    return r;
}

Elem AlgebraContext::conj(const Elem& a) const {
    Elem r(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t k = 0; k < n_; ++k)
            if (conj_(i, k) != 0) r[k] += a[i] * conj_(i, k);
    }
    return r;
}

bool AlgebraContext::is_zero(const Elem& a) const {
    return std::all_of(a.begin(), a.end(), [](const Rat& x) { return x == 0; });
}

RatMat AlgebraContext::regular(const Elem& a) const {
    RatMat M(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const Elem r = mul(basis(i), a);
        for (std::size_t k = 0; k < n_; ++k) M(i, k) = r[k];
    }
    return M;
}

std::optional<Elem> AlgebraContext::inverse(const Elem& a) const {
    const RatMat M = regular(a);
    if (det(M) == 0) return std::nullopt;
    // x * a = 1  <=>  sum_i x_i (b_i a) = 1
    return solve_left(M, one());
}

Rat AlgebraContext::trace(const Elem& a) const {
    Rat s = 0;
    for (std::size_t i = 0; i < n_; ++i) s += a[i] * basis_trace_[i];
    return s;
}

Rat AlgebraContext::norm(const Elem& a) const { return det(regular(a)); }

QPoly AlgebraContext::to_power(const Elem& a) const {
    QPoly r(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t k = 0; k < n_; ++k) r[k] += a[i] * to_power_(i, k);
    }
    trim(r);
    return r;
}

Elem AlgebraContext::from_power(const QPoly& f0) const {
    const QPoly f = f0.size() > n_ ? mod(f0, to_qpoly(in_.h)) : f0;
    Elem r(n_);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0) continue;
        for (std::size_t k = 0; k < n_; ++k) r[k] += f[i] * from_power_(i, k);
    }
    return r;
}

QPoly AlgebraContext::component_poly(const Elem& a, std::size_t j) const {
    return mod(to_power(a), to_qpoly(factors_[j]));
}

Elem AlgebraContext::from_component(const QPoly& f, std::size_t j) const {
    return mul(from_power(f), idem_[j]);
}

std::optional<std::size_t> AlgebraContext::support(const Elem& a) const {
    std::optional<std::size_t> s;
    for (std::size_t j = 0; j < factors_.size(); ++j) {
        if (component_poly(a, j).empty()) continue;
        if (s) return std::nullopt;
        s = j;
    }
    return s;
}

const EmbeddingTable& AlgebraContext::embeddings(mpfr_prec_t prec) const {
    {
        std::lock_guard<std::mutex> lock(emb_mutex_);
        for (const auto& t : emb_cache_)
            if (t->prec == prec) return *t;
    }
    auto table = std::make_unique<EmbeddingTable>(compute_embeddings(*this, prec));
    std::lock_guard<std::mutex> lock(emb_mutex_);
    for (const auto& t : emb_cache_)
        if (t->prec == prec) return *t;
    emb_cache_.push_back(std::move(table));
    return *emb_cache_.back();
}

const EmbeddingTable& AlgebraContext::embeddings_auto(mpfr_prec_t floor) const {
    for (mpfr_prec_t prec = floor;; prec *= 2) {
        try {
            return embeddings(prec);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::PrecisionInsufficient || prec >= 16384) throw;
        }
    }
}

CInterval AlgebraContext::embed(const Elem& a, std::size_t root, const EmbeddingTable& t) const {
    const QPoly f = to_power(a);
    const CInterval& z = t.roots[root];
    CInterval acc = CInterval::from_rat(0, t.prec);
    for (std::size_t k = f.size(); k-- > 0;) acc = acc * z + CInterval::from_rat(f[k], t.prec);
    return acc;
}

// ---------------------------------------------------------------------------
// Root isolation

namespace {

struct Cx {
    Mpfr re, im;
    explicit Cx(mpfr_prec_t p) : re(p), im(p) {}
};

void cx_mul(Cx& r, const Cx& a, const Cx& b, mpfr_prec_t p) {
    Mpfr t1(p), t2(p), t3(p);
    mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_mul(t3.get(), a.re.get(), b.im.get(), MPFR_RNDN);
    mpfr_fma(r.im.get(), a.im.get(), b.re.get(), t3.get(), MPFR_RNDN);
    mpfr_sub(r.re.get(), t1.get(), t2.get(), MPFR_RNDN);
}

void cx_div(Cx& r, const Cx& a, const Cx& b, mpfr_prec_t p) {
    Mpfr n(p), t(p);
    mpfr_sqr(n.get(), b.re.get(), MPFR_RNDN);
    mpfr_sqr(t.get(), b.im.get(), MPFR_RNDN);
    mpfr_add(n.get(), n.get(), t.get(), MPFR_RNDN);
    Cx bc(p);
    mpfr_set(bc.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_neg(bc.im.get(), b.im.get(), MPFR_RNDN);
    Cx num(p);
    cx_mul(num, a, bc, p);
    mpfr_div(r.re.get(), num.re.get(), n.get(), MPFR_RNDN);
    mpfr_div(r.im.get(), num.im.get(), n.get(), MPFR_RNDN);
}

void cx_sub(Cx& r, const Cx& a, const Cx& b) {
    mpfr_sub(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_sub(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
}

double cx_abs(const Cx& a) {
    return std::hypot(a.re.to_double(), a.im.to_double());
}

// value and derivative of f at z by Horner
void horner(const ZPoly& f, const Cx& z, Cx& val, Cx& der, mpfr_prec_t p) {
    mpfr_set_zero(val.re.get(), 1);
    mpfr_set_zero(val.im.get(), 1);
    mpfr_set_zero(der.re.get(), 1);
    mpfr_set_zero(der.im.get(), 1);
    Cx t(p);
    for (std::size_t k = f.size(); k-- > 0;) {
        cx_mul(t, der, z, p);
        mpfr_add(der.re.get(), t.re.get(), val.re.get(), MPFR_RNDN);
        mpfr_add(der.im.get(), t.im.get(), val.im.get(), MPFR_RNDN);
        cx_mul(t, val, z, p);
        mpfr_add_z(val.re.get(), t.re.get(), f[k].get_mpz_t(), MPFR_RNDN);
        mpfr_set(val.im.get(), t.im.get(), MPFR_RNDN);
    }
}

// Aberth iteration from deterministic starting points on |z| = sqrt(q).
std::vector<Cx> aberth(const ZPoly& f, double radius, mpfr_prec_t p) {
    const std::size_t m = static_cast<std::size_t>(degree(f));
    std::vector<Cx> z;
    Mpfr ang(p), s(p), c(p), pi(p);
    mpfr_const_pi(pi.get(), MPFR_RNDN);
    for (std::size_t k = 0; k < m; ++k) {
        Cx w(p);
        mpfr_mul_ui(ang.get(), pi.get(), 2 * k, MPFR_RNDN);
        mpfr_div_ui(ang.get(), ang.get(), static_cast<unsigned long>(m), MPFR_RNDN);
        mpfr_add_d(ang.get(), ang.get(), 0.4, MPFR_RNDN);
        mpfr_sin_cos(s.get(), c.get(), ang.get(), MPFR_RNDN);
        mpfr_mul_d(w.re.get(), c.get(), radius, MPFR_RNDN);
        mpfr_mul_d(w.im.get(), s.get(), radius, MPFR_RNDN);
        z.push_back(std::move(w));
    }
    const double tol = std::ldexp(1.0, -static_cast<int>(p) + 8) * (1 + radius);
    Cx val(p), der(p), ratio(p), sum(p), diff(p), inv(p), one(p), corr(p), t(p);
    mpfr_set_ui(one.re.get(), 1, MPFR_RNDN);
    for (int it = 0; it < 400 + static_cast<int>(p); ++it) {
        double maxstep = 0;
        for (std::size_t k = 0; k < m; ++k) {
            horner(f, z[k], val, der, p);
            if (mpfr_zero_p(der.re.get()) && mpfr_zero_p(der.im.get())) continue;
            cx_div(ratio, val, der, p);
            mpfr_set_zero(sum.re.get(), 1);
            mpfr_set_zero(sum.im.get(), 1);
            for (std::size_t j = 0; j < m; ++j) {
                if (j == k) continue;
                cx_sub(diff, z[k], z[j]);
                cx_div(inv, one, diff, p);
                mpfr_add(sum.re.get(), sum.re.get(), inv.re.get(), MPFR_RNDN);
                mpfr_add(sum.im.get(), sum.im.get(), inv.im.get(), MPFR_RNDN);
            }
            cx_mul(t, ratio, sum, p);
            cx_sub(t, one, t);
            cx_div(corr, ratio, t, p);
            cx_sub(z[k], z[k], corr);
            maxstep = std::max(maxstep, cx_abs(corr));
        }
        if (maxstep < tol) break;
    }
    return z;
}

}  // namespace

EmbeddingTable compute_embeddings(const AlgebraContext& ctx, mpfr_prec_t prec) {
    const double radius = std::sqrt(ctx.q().get_d());
    struct Root {
        CInterval box;
        Mpfr cre, cim, rad;
        std::size_t comp;
    };
    std::vector<Root> roots;
    for (std::size_t j = 0; j < ctx.factors().size(); ++j) {
        const ZPoly& f = ctx.factors()[j];
        const std::vector<Cx> z = aberth(f, radius, prec);
        const std::size_t m = z.size();
        for (std::size_t k = 0; k < m; ++k) {
            // Weierstrass radius m |f(z_k)| / prod |z_k - z_l|
            const CInterval zk{Interval::around(z[k].re, Mpfr(prec), prec), Interval::around(z[k].im, Mpfr(prec), prec)};
            CInterval val = CInterval::from_rat(0, prec);
            for (std::size_t c = f.size(); c-- > 0;) val = val * zk + CInterval::from_rat(Rat(f[c]), prec);
            Interval num = sqrt(val.norm2()) * Interval::from_int(static_cast<long>(m), prec);
            Interval den = Interval::from_int(1, prec);
            for (std::size_t l = 0; l < m; ++l) {
                if (l == k) continue;
                const CInterval zl{Interval::around(z[l].re, Mpfr(prec), prec), Interval::around(z[l].im, Mpfr(prec), prec)};
                den = den * sqrt((zk - zl).norm2());
            }
            const Interval r = num / den;
            Root root{CInterval(prec), z[k].re, z[k].im, r.hi(), j};
            root.box = CInterval{Interval::around(root.cre, root.rad, prec), Interval::around(root.cim, root.rad, prec)};
            roots.push_back(std::move(root));
        }
    }
    const std::size_t n = roots.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const CInterval za{Interval::around(roots[a].cre, Mpfr(prec), prec), Interval::around(roots[a].cim, Mpfr(prec), prec)};
            const CInterval zb{Interval::around(roots[b].cre, Mpfr(prec), prec), Interval::around(roots[b].cim, Mpfr(prec), prec)};
            const Interval dist = sqrt((za - zb).norm2());
            Mpfr rr(prec);
            mpfr_add(rr.get(), roots[a].rad.get(), roots[b].rad.get(), MPFR_RNDU);
            if (!(mpfr_greater_p(dist.lo().get(), rr.get())))
                throw Error(ErrorKind::PrecisionInsufficient, kModule, "root disks not separated");
        }
    const Rat q(ctx.q());
    for (const Root& r : roots)
        if (!r.box.norm2().contains(q))
            throw Error(ErrorKind::PrecisionInsufficient, kModule, "Weil condition not certified");

    // conjugate pairing
    std::vector<std::size_t> pair(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        const CInterval c = roots[a].box.conj();
        for (std::size_t b = 0; b < n; ++b) {
            if (b == a || !roots[b].box.overlaps(c)) continue;
            if (pair[a] != n) throw Error(ErrorKind::PrecisionInsufficient, kModule, "ambiguous conjugate pairing");
            pair[a] = b;
        }
        if (pair[a] == n) throw Error(ErrorKind::PrecisionInsufficient, kModule, "no conjugate root found");
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    // Distinct conjugate pairs have distinct real parts because the real Weil
    // polynomial of a squarefree h is squarefree, so overlaps are only allowed
    // inside a pair.
    auto less = [&](std::size_t a, std::size_t b) {
        if (a == b) return false;
        const CInterval &x = roots[a].box, &y = roots[b].box;
        if (certainly_less(x.re, y.re)) return true;
        if (certainly_less(y.re, x.re)) return false;
        if (pair[a] != b) throw Error(ErrorKind::PrecisionInsufficient, kModule, "real parts not separated");
        if (certainly_less(x.im, y.im)) return true;
        if (certainly_less(y.im, x.im)) return false;
        throw Error(ErrorKind::PrecisionInsufficient, kModule, "imaginary parts not separated");
    };
    std::sort(order.begin(), order.end(), less);
    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;

    EmbeddingTable t;
    t.prec = prec;
    for (std::size_t i = 0; i < n; ++i) {
        t.roots.push_back(roots[order[i]].box);
        t.pair.push_back(pos[pair[order[i]]]);
        t.component.push_back(roots[order[i]].comp);
    }
    return t;
}

}  // namespace icm
