#include "icm/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace icm {

namespace {
constexpr const char* kModule = "lattice-ideals";

Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}
}  // namespace

Lattice::Lattice(Int d, const std::vector<IntVec>& rows, std::size_t dim) : n_(dim) {
    auto H = hnf_rows(rows, dim);
    if (H.size() != dim) throw Error(ErrorKind::RankMismatch, kModule, "lattice generators are not of full rank");
    Int g = d;
    for (const auto& r : H)
        for (const auto& x : r) {
            if (g == 1) break;
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        }
    d_ = d / g;
    M_ = IntMat(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) M_(i, j) = H[i][j] / g;
    if (d_ < 0) throw Error(ErrorKind::InvariantBreach, kModule, "negative denominator");
}

Lattice Lattice::from_generators(const std::vector<Elem>& gens, std::size_t dim) {
    Int D = 1;
    for (const auto& v : gens)
        for (const auto& x : v) D = lcm(D, x.get_den());
    std::vector<IntVec> rows;
    rows.reserve(gens.size());
    for (const auto& v : gens) {
        IntVec r(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            const Rat t = v[k] * D;
            r[k] = t.get_num();
        }
        rows.push_back(std::move(r));
    }
    return Lattice(D, rows, dim);
}

Lattice Lattice::standard(std::size_t dim) {
    std::vector<IntVec> rows(dim, IntVec(dim));
    for (std::size_t i = 0; i < dim; ++i) rows[i][i] = 1;
    return Lattice(1, rows, dim);
}

Elem Lattice::basis(std::size_t i) const {
    Elem e(n_);
    for (std::size_t k = 0; k < n_; ++k) {
        e[k] = Rat(M_(i, k), d_);
        e[k].canonicalize();
    }
    return e;
}

std::vector<Elem> Lattice::basis() const {
    std::vector<Elem> b;
    for (std::size_t i = 0; i < n_; ++i) b.push_back(basis(i));
    return b;
}

std::optional<IntVec> Lattice::coords(const Elem& x) const {
    IntVec y(n_);
    for (std::size_t k = 0; k < n_; ++k) {
        const Rat t = x[k] * d_;
        if (t.get_den() != 1) return std::nullopt;
        y[k] = t.get_num();
    }
    // c * M = y with M upper triangular
    IntVec c(n_);
    for (std::size_t j = 0; j < n_; ++j) {
        Int s = y[j];
        for (std::size_t i = 0; i < j; ++i)
            if (c[i] != 0 && M_(i, j) != 0) s -= c[i] * M_(i, j);
        if (!mpz_divisible_p(s.get_mpz_t(), M_(j, j).get_mpz_t())) return std::nullopt;
        mpz_divexact(c[j].get_mpz_t(), s.get_mpz_t(), M_(j, j).get_mpz_t());
    }
    return c;
}

bool Lattice::contains(const Elem& x) const { return coords(x).has_value(); }

bool Lattice::contains(const Lattice& o) const {
    for (std::size_t i = 0; i < o.n_; ++i)
        if (!contains(o.basis(i))) return false;
    return true;
}

Rat Lattice::covolume() const {
    Int p = 1;
    for (std::size_t i = 0; i < n_; ++i) p *= M_(i, i);
    Int dn;
    mpz_pow_ui(dn.get_mpz_t(), d_.get_mpz_t(), n_);
    Rat r(p, dn);
    r.canonicalize();
    return r;
}

std::vector<Int> Lattice::sort_key() const {
    std::vector<Int> k{d_};
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j) k.push_back(M_(i, j));
    return k;
}

bool Lattice::operator<(const Lattice& o) const {
    const auto a = sort_key(), b = o.sort_key();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Rat index(const Lattice& A, const Lattice& B) { return B.covolume() / A.covolume(); }

Lattice sum(const Lattice& A, const Lattice& B) {
    const Int D = lcm(A.denom(), B.denom());
    const Int fa = D / A.denom(), fb = D / B.denom();
    std::vector<IntVec> rows;
    for (std::size_t i = 0; i < A.dim(); ++i) {
        IntVec r = A.int_row(i);
        for (auto& x : r) x *= fa;
        rows.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < B.dim(); ++i) {
        IntVec r = B.int_row(i);
        for (auto& x : r) x *= fb;
        rows.push_back(std::move(r));
    }
    return Lattice(D, rows, A.dim());
}

Lattice intersect(const Lattice& A, const Lattice& B) {
    const std::size_t n = A.dim();
    const Int D = lcm(A.denom(), B.denom());
    const Int fa = D / A.denom(), fb = D / B.denom();
    IntMat st(2 * n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            st(i, j) = A.mat()(i, j) * fa;
            st(n + i, j) = B.mat()(i, j) * fb;
        }
    const auto ker = integer_left_kernel(st);
    std::vector<IntVec> rows;
    for (const auto& k : ker) {
        IntVec r(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (k[i] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) r[j] += k[i] * st(i, j);
        }
        rows.push_back(std::move(r));
    }
    return Lattice(D, rows, n);
}

Lattice scale(const Lattice& A, const Rat& c) {
    std::vector<Elem> b = A.basis();
    for (auto& v : b)
        for (auto& x : v) x *= c;
    return Lattice::from_generators(b, A.dim());
}

Lattice mul(const AlgebraContext& ctx, const Lattice& I, const Lattice& J) {
    const std::size_t n = I.dim();
    std::vector<IntVec> rows;
    rows.reserve(n * (n + 1) / 2);
    const bool same = (&I == &J) || I == J;
    for (std::size_t i = 0; i < n; ++i) {
        const IntVec a = I.int_row(i);
        for (std::size_t j = same ? i : 0; j < n; ++j) rows.push_back(ctx.mul(a, J.int_row(j)));
    }
    return Lattice(I.denom() * J.denom(), rows, n);
}

Lattice mul(const AlgebraContext& ctx, const Lattice& I, const Elem& a) {
    std::vector<Elem> gens;
    for (const auto& b : I.basis()) gens.push_back(ctx.mul(b, a));
    return Lattice::from_generators(gens, I.dim());
}

Lattice principal(const AlgebraContext& ctx, const Order& S, const Elem& a) { return mul(ctx, S, a); }

Lattice power(const AlgebraContext& ctx, const Lattice& I, unsigned e, const Order& S) {
    Lattice r = S, b = I;
    while (e) {
        if (e & 1) r = mul(ctx, r, b);
        e >>= 1;
        if (e) b = mul(ctx, b, b);
    }
    return r;
}

Lattice trace_dual(const AlgebraContext& ctx, const Lattice& I) {
    // rows of (T B^T)^{-1}
    const std::size_t n = I.dim();
    RatMat B(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) B(i, j) = Rat(I.mat()(i, j), I.denom());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) B(i, j).canonicalize();
    const RatMat X = icm::inverse(to_rat(ctx.trace_form()) * B.transpose());
    std::vector<Elem> gens;
    for (std::size_t i = 0; i < n; ++i) gens.push_back(X.row_vec(i));
    return Lattice::from_generators(gens, n);
}

Lattice colon(const AlgebraContext& ctx, const Lattice& I, const Lattice& J) {
    return trace_dual(ctx, mul(ctx, J, trace_dual(ctx, I)));
}

Order mult_ring(const AlgebraContext& ctx, const Lattice& I) { return colon(ctx, I, I); }

Lattice conj(const AlgebraContext& ctx, const Lattice& I) {
    std::vector<Elem> gens;
    for (const auto& b : I.basis()) gens.push_back(ctx.conj(b));
    return Lattice::from_generators(gens, I.dim());
}

Order frobenius_order(const AlgebraContext& ctx) { return Lattice::standard(ctx.dim()); }

bool is_order(const AlgebraContext& ctx, const Lattice& L) {
    if (!L.contains(ctx.one())) return false;
    const auto b = L.basis();
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i; j < b.size(); ++j)
            if (!L.contains(ctx.mul(b[i], b[j]))) return false;
    return true;
}

bool is_ideal_of(const AlgebraContext& ctx, const Lattice& I, const Order& S) {
    const auto bi = I.basis(), bs = S.basis();
    for (const auto& x : bi)
        for (const auto& s : bs)
            if (!I.contains(ctx.mul(x, s))) return false;
    return true;
}

Lattice module_closure(const AlgebraContext& ctx, const Lattice& L, const Order& S) { return mul(ctx, L, S); }

Lattice ideal_from_generators(const AlgebraContext& ctx, const Order& S, const std::vector<Elem>& gens) {
    std::vector<Elem> all;
    const auto bs = S.basis();
    for (const auto& g : gens)
        for (const auto& s : bs) all.push_back(ctx.mul(g, s));
    return Lattice::from_generators(all, ctx.dim());
}

Lattice inverse_ideal(const AlgebraContext& ctx, const Lattice& I, const Order& S) { return colon(ctx, S, I); }

bool is_invertible(const AlgebraContext& ctx, const Lattice& I, const Order& S) {
    return mul(ctx, I, inverse_ideal(ctx, I, S)) == S;
}

// ---------------------------------------------------------------------------

IntMat lll_transform(const RatMat& gram) {
    const std::size_t n = gram.rows();
    RatMat G = gram;
    IntMat U = IntMat::identity(n);
    if (n < 2) return U;
    const Rat delta(3, 4);
    std::vector<std::vector<Rat>> mu(n, std::vector<Rat>(n));
    std::vector<Rat> Bv(n);
    auto gso = [&]() {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                Rat s = G(i, j);
                for (std::size_t k = 0; k < j; ++k) s -= mu[j][k] * mu[i][k] * Bv[k];
                mu[i][j] = s / Bv[j];
            }
            Rat s = G(i, i);
            for (std::size_t k = 0; k < i; ++k) s -= mu[i][k] * mu[i][k] * Bv[k];
            Bv[i] = s;
        }
    };
    auto reduce = [&](std::size_t k, std::size_t j, const Int& r) {
        // b_k -= r b_j
        const Rat rr(r);
        const Rat gkk = G(k, k) - 2 * rr * G(k, j) + rr * rr * G(j, j);
        for (std::size_t l = 0; l < n; ++l) {
            if (l == k) continue;
            G(k, l) -= rr * G(j, l);
            G(l, k) = G(k, l);
        }
        G(k, k) = gkk;
        for (std::size_t l = 0; l < n; ++l) U(k, l) -= r * U(j, l);
        for (std::size_t l = 0; l < j; ++l) mu[k][l] -= rr * mu[j][l];
        mu[k][j] -= rr;
    };
    gso();
    std::size_t k = 1;
    std::size_t guard = 0;
    while (k < n) {
        if (++guard > 100000) throw Error(ErrorKind::InvariantBreach, kModule, "LLL did not terminate");
        for (std::size_t j = k; j-- > 0;) {
            Rat m = mu[k][j];
            // nearest integer
            Rat t = m + Rat(1, 2);
            Int r;
            mpz_fdiv_q(r.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
            if (r != 0) reduce(k, j, r);
        }
        gso();
        if (Bv[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * Bv[k - 1]) {
            ++k;
        } else {
            for (std::size_t l = 0; l < n; ++l) std::swap(G(k, l), G(k - 1, l));
            for (std::size_t l = 0; l < n; ++l) std::swap(G(l, k), G(l, k - 1));
            U.swap_rows(k, k - 1);
            gso();
            k = std::max<std::size_t>(k - 1, 1);
        }
    }
    return U;
}

namespace {
Rat quad(const RatMat& G, const IntVec& x) {
    Rat s = 0;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        Rat row = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (x[j] != 0) row += G(i, j) * x[j];
        s += row * x[i];
    }
    return s;
}
}  // namespace

bool fincke_pohst(const RatMat& gram, const Rat& bound, const std::function<bool(const IntVec&)>& visit) {
    const std::size_t n = gram.rows();
    const IntMat U = lll_transform(gram);
    const RatMat Ur = to_rat(U);
    const RatMat G = Ur * gram * Ur.transpose();
    // Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
    std::vector<std::vector<double>> q(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) q[i][j] = G(i, j).get_d();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            q[j][i] = q[i][j];
            q[i][j] = q[i][j] / q[i][i];
        }
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!(q[i][i] > 0)) throw Error(ErrorKind::InvariantBreach, kModule, "Gram matrix not positive definite");
    const double C = bound.get_d() * (1 + 1e-9) + 1e-9;
    std::vector<long> x(n, 0);
    std::vector<double> T(n + 1, 0.0), centre(n, 0.0);
    IntVec xi(n), xo(n);
    bool keep_going = true;
    // iterative enumeration from the last coordinate down
    std::function<void(std::size_t, double)> rec = [&](std::size_t i, double remaining) {
        if (!keep_going) return;
        double c = 0;
        for (std::size_t j = i + 1; j < n; ++j) c += q[i][j] * static_cast<double>(x[j]);
        c = -c;
        const double r = std::sqrt(std::max(0.0, remaining / q[i][i]));
        const long lo = static_cast<long>(std::ceil(c - r - 1e-9));
        const long hi = static_cast<long>(std::floor(c + r + 1e-9));
        for (long v = lo; v <= hi && keep_going; ++v) {
            x[i] = v;
            const double t = static_cast<double>(v) - c;
            const double rem = remaining - q[i][i] * t * t;
            if (rem < -1e-9 * (1 + C)) continue;
            if (i == 0) {
                bool nz = false;
                for (std::size_t k = 0; k < n; ++k) {
                    xi[k] = x[k];
                    if (x[k]) nz = true;
                }
                if (!nz) continue;
                if (quad(G, xi) > bound) continue;
                for (std::size_t k = 0; k < n; ++k) {
                    Int s = 0;
                    for (std::size_t l = 0; l < n; ++l)
                        if (xi[l] != 0) s += xi[l] * U(l, k);
                    xo[k] = s;
                }
                if (!visit(xo)) keep_going = false;
            } else {
                rec(i - 1, rem);
            }
        }
        x[i] = 0;
    };
    rec(n - 1, C);
    return keep_going;
}

RatMat t2_gram(const AlgebraContext& ctx, const std::vector<Elem>& basis) {
    const std::size_t m = basis.size();
    RatMat G(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            const Rat v = ctx.trace(ctx.mul(basis[i], ctx.conj(basis[j])));
            G(i, j) = v;
            G(j, i) = v;
        }
    return G;
}

Rat t2(const AlgebraContext& ctx, const Elem& a) { return ctx.trace(ctx.mul(a, ctx.conj(a))); }

std::vector<Elem> basis_of_span(const std::vector<Elem>& gens, std::size_t dim) {
    Int D = 1;
    for (const auto& v : gens)
        for (const auto& x : v) D = lcm(D, x.get_den());
    std::vector<IntVec> rows;
    for (const auto& v : gens) {
        IntVec r(dim);
        for (std::size_t k = 0; k < dim; ++k) r[k] = Rat(v[k] * D).get_num();
        rows.push_back(std::move(r));
    }
    std::vector<Elem> out;
    for (const auto& r : hnf_rows(rows, dim)) {
        Elem e(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            e[k] = Rat(r[k], D);
            e[k].canonicalize();
        }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace icm
