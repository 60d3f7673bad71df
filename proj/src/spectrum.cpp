#include "icm/spectrum.hpp"

#include <algorithm>

namespace icm {

namespace {

const char* const kModule = "spectrum";

using Row = std::vector<std::int64_t>;

struct Echelon {
    std::vector<Row> rows;            // reduced, pivot entries 1
    std::vector<std::size_t> pivots;  // pivot column of each row
};

std::int64_t md(std::int64_t a, std::int64_t p) {
    a %= p;
    return a < 0 ? a + p : a;
}

Echelon echelon(std::vector<Row> rows, std::int64_t p) {
    Echelon E;
    if (rows.empty()) return E;
    const std::size_t n = rows.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][c] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        const std::int64_t iv = fp::inv(rows[r][c], p);
        for (auto& x : rows[r]) x = fp::mulmod(x, iv, p);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            const std::int64_t t = rows[i][c];
            for (std::size_t k = 0; k < n; ++k) rows[i][k] = md(rows[i][k] - fp::mulmod(t, rows[r][k], p), p);
        }
        E.pivots.push_back(c);
        ++r;
    }
    rows.resize(r);
    E.rows = std::move(rows);
    return E;
}

Row reduce(Row x, const Echelon& E, std::int64_t p) {
    for (std::size_t i = 0; i < E.rows.size(); ++i) {
        const std::int64_t t = x[E.pivots[i]];
        if (t == 0) continue;
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = md(x[k] - fp::mulmod(t, E.rows[i][k], p), p);
    }
    return x;
}

// {x : x * M = 0} where M is given by its rows.
std::vector<Row> left_kernel(const std::vector<Row>& M, std::int64_t p) {
    const std::size_t r = M.size(), c = M.front().size();
    std::vector<Row> aug(r, Row(c + r, 0));
    for (std::size_t i = 0; i < r; ++i) {
        std::copy(M[i].begin(), M[i].end(), aug[i].begin());
        aug[i][c + i] = 1;
    }
    // Eliminate only on the first c columns, carrying the identity along.
    std::size_t row = 0;
    for (std::size_t col = 0; col < c && row < r; ++col) {
        std::size_t piv = row;
        while (piv < r && aug[piv][col] == 0) ++piv;
        if (piv == r) continue;
        std::swap(aug[row], aug[piv]);
        const std::int64_t iv = fp::inv(aug[row][col], p);
        for (auto& x : aug[row]) x = fp::mulmod(x, iv, p);
        for (std::size_t i = 0; i < r; ++i) {
            if (i == row || aug[i][col] == 0) continue;
            const std::int64_t t = aug[i][col];
            for (std::size_t k = 0; k < c + r; ++k) aug[i][k] = md(aug[i][k] - fp::mulmod(t, aug[row][k], p), p);
        }
        ++row;
    }
    std::vector<Row> out;
    for (std::size_t i = row; i < r; ++i) out.emplace_back(aug[i].begin() + static_cast<long>(c), aug[i].end());
    return out;
}

// The finite ring S/pS with structure constants over the HNF basis of S.
class Quotient {
  public:
    Quotient(const AlgebraContext& ctx, const Order& S, std::int64_t p) : n_(S.dim()), p_(p), T_(n_ * n_) {
        const auto B = S.basis();
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i; j < n_; ++j) {
                auto c = S.coords(ctx.mul(B[i], B[j]));
                ensure(c.has_value(), kModule, "order is not closed under multiplication");
                Row r(n_);
                for (std::size_t k = 0; k < n_; ++k) r[k] = md(Int((*c)[k] % p).get_si(), p);
                T_[i * n_ + j] = T_[j * n_ + i] = r;
            }
        auto one = S.coords(ctx.one());
        ensure(one.has_value(), kModule, "order does not contain 1");
        one_.resize(n_);
        for (std::size_t k = 0; k < n_; ++k) one_[k] = md(Int((*one)[k] % p).get_si(), p);
    }

    std::size_t n() const { return n_; }
    const Row& one() const { return one_; }

    Row mul(const Row& a, const Row& b) const {
        Row r(n_, 0);
        for (std::size_t i = 0; i < n_; ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (b[j] == 0) continue;
                const std::int64_t t = fp::mulmod(a[i], b[j], p_);
                const Row& c = T_[i * n_ + j];
                for (std::size_t k = 0; k < n_; ++k)
                    if (c[k]) r[k] = (r[k] + fp::mulmod(t, c[k], p_)) % p_;
            }
        }
        return r;
    }
    Row pow(Row a, Int e) const {
        Row r = one_;
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    Row add(const Row& a, const Row& b) const {
        Row r(n_);
        for (std::size_t k = 0; k < n_; ++k) r[k] = (a[k] + b[k]) % p_;
        return r;
    }
    Row scale(const Row& a, std::int64_t c) const {
        Row r(n_);
        for (std::size_t k = 0; k < n_; ++k) r[k] = fp::mulmod(a[k], md(c, p_), p_);
        return r;
    }
    Row unit(std::size_t i) const {
        Row r(n_, 0);
        r[i] = 1;
        return r;
    }

  private:
    std::size_t n_;
    std::int64_t p_;
    std::vector<Row> T_;
    Row one_;
};

Lattice lift(const Order& S, const std::vector<Row>& rows, const Int& p) {
    const auto B = S.basis();
    const std::size_t n = S.dim();
    std::vector<Elem> gens;
    for (const auto& b : B) {
        Elem e = b;
        for (auto& x : e) x *= p;
        gens.push_back(std::move(e));
    }
    for (const auto& r : rows) {
        Elem e(n);
        for (std::size_t i = 0; i < n; ++i)
            if (r[i])
                for (std::size_t k = 0; k < n; ++k) e[k] += B[i][k] * Rat(r[i]);
        gens.push_back(std::move(e));
    }
    return Lattice::from_generators(gens, n);
}

}  // namespace

Int MaxIdeal::norm() const {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(f));
    return r;
}

std::vector<Int> prime_divisors(Int n) {
    if (n < 0) n = -n;
    std::vector<Int> out;
    for (Int d = 2; d * d <= n; ++d) {
        if (n % d != 0) continue;
        out.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) out.push_back(n);
    return out;
}

std::vector<MaxIdeal> maximal_ideals_above(const AlgebraContext& ctx, const Order& S, const Int& pz) {
    if (pz < 2 || pz >= (Int(1) << 31) || mpz_probab_prime_p(pz.get_mpz_t(), 30) == 0)
        throw Error(ErrorKind::ValidationError, kModule, "residue characteristic must be a prime below 2^31");
    const std::int64_t p = pz.get_si();
    const Quotient A(ctx, S, p);
    const std::size_t n = A.n();

    // Nilradical: kernel of x -> x^(p^k) with p^k >= n; Frobenius is F_p-linear.
    Int pk = pz;
    while (pk < Int(static_cast<long>(n))) pk *= pz;
    std::vector<Row> frobk;
    for (std::size_t i = 0; i < n; ++i) frobk.push_back(A.pow(A.unit(i), pk));
    const Echelon J = echelon(left_kernel(frobk, p), p);

    // Fixed points of Frobenius on A/J form F_p^r, r = number of maximal ideals.
    std::vector<Row> phi_minus_id;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0, t = 0; c < n; ++c) {
        if (t < J.pivots.size() && J.pivots[t] == c) {
            ++t;
            continue;
        }
        free_cols.push_back(c);
    }
    for (std::size_t c : free_cols) {
        Row img = reduce(A.pow(A.unit(c), pz), J, p);
        img[c] = md(img[c] - 1, p);
        phi_minus_id.push_back(img);
    }
    std::vector<Row> fixed;
    if (!free_cols.empty())
        for (const Row& k : left_kernel(phi_minus_id, p)) {
            Row x(n, 0);
            for (std::size_t i = 0; i < free_cols.size(); ++i) x[free_cols[i]] = k[i];
            fixed.push_back(x);
        }
    const std::size_t r = fixed.size();
    ensure(r >= 1, kModule, "no maximal ideal above p");

    // Split 1 into primitive idempotents of the fixed algebra.
    std::vector<Row> idem{reduce(A.one(), J, p)};
    for (const Row& z : fixed) {
        if (idem.size() == r) break;
        std::vector<Row> next;
        for (const Row& e : idem) {
            const Row w = reduce(A.mul(z, e), J, p);
            // minimal polynomial of w in the ring eB with identity e
            std::vector<Row> powers{e};
            std::vector<Row> coeffs;
            for (;;) {
                const Row cand = reduce(A.mul(powers.back(), w), J, p);
                std::vector<Row> M = powers;
                M.push_back(cand);
                auto ker = left_kernel(M, p);
                if (!ker.empty()) {
                    coeffs = ker;
                    break;
                }
                powers.push_back(cand);
            }
            Row rel = coeffs.front();  // relation sum rel_i w^i = 0, degree = powers.size()
            const std::size_t d = powers.size();
            ensure(rel[d] != 0, kModule, "minimal polynomial relation");
            fp::Poly mp(rel.begin(), rel.begin() + static_cast<long>(d) + 1);
            const std::int64_t lead = fp::inv(mp[d], p);
            for (auto& c : mp) c = fp::mulmod(c, lead, p);
            const auto roots = fp::split_roots(mp, p);
            ensure(roots.size() == d, kModule, "fixed algebra element does not split");
            if (d == 1) {
                next.push_back(e);
                continue;
            }
            for (std::size_t a = 0; a < d; ++a) {
                Row acc = e;
                for (std::size_t b = 0; b < d; ++b) {
                    if (b == a) continue;
                    const std::int64_t den = fp::inv(md(roots[a] - roots[b], p), p);
                    Row lin = A.add(w, A.scale(e, -roots[b]));
                    acc = reduce(A.scale(A.mul(acc, lin), den), J, p);
                }
                next.push_back(acc);
            }
        }
        idem = std::move(next);
    }
    ensure(idem.size() == r, kModule, "failed to split the semisimple quotient");

    std::vector<MaxIdeal> out;
    for (const Row& eps : idem) {
        std::vector<Row> gens = J.rows;
        const Row comp = A.add(A.one(), A.scale(eps, -1));
        for (std::size_t i = 0; i < n; ++i) gens.push_back(A.mul(comp, A.unit(i)));
        const Echelon M = echelon(gens, p);
        MaxIdeal P{S, lift(S, M.rows, pz), pz, static_cast<int>(n - M.rows.size())};
        out.push_back(std::move(P));
    }
    std::sort(out.begin(), out.end(), [](const MaxIdeal& a, const MaxIdeal& b) { return a.ideal < b.ideal; });
    // norm bookkeeping: distinct residue fields of total degree dim(A/J)
    int total = 0;
    for (const auto& P : out) total += P.f;
    ensure(static_cast<std::size_t>(total) == free_cols.size(), kModule, "residue degrees do not add up");
    return out;
}

std::vector<MaxIdeal> primes_of_OK_above(const AlgebraContext& ctx, const Order& OK, const MaxIdeal& P) {
    if (P.order == OK) return {P};
    std::vector<MaxIdeal> out;
    for (auto& Q : maximal_ideals_above(ctx, OK, P.p))
        if (Q.ideal.contains(P.ideal)) out.push_back(std::move(Q));
    ensure(!out.empty(), kModule, "no prime of O_K above a maximal ideal");
    return out;
}

std::size_t prime_component(const AlgebraContext& ctx, const Lattice& P) {
    std::size_t found = ctx.num_components();
    for (std::size_t j = 0; j < ctx.num_components(); ++j)
        if (!P.contains(ctx.idempotents()[j])) {
            ensure(found == ctx.num_components(), kModule, "prime supported on two components");
            found = j;
        }
    ensure(found < ctx.num_components(), kModule, "ideal contains all idempotents");
    return found;
}

RatVec component_coords(const AlgebraContext& ctx, const ComponentData& comp, const Elem& x) {
    const std::size_t m = comp.basis.size();
    RatMat G(m, m);
    RatVec y(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) G(i, k) = ctx.trace(ctx.mul(comp.basis[i], comp.basis[k]));
        y[i] = ctx.trace(ctx.mul(x, comp.basis[i]));
    }
    return solve_left(G, y);
}

namespace {

// HNF of p_j(P) over the integral basis of O_{K_j}, flattened row-major.
std::vector<Int> component_hnf(const AlgebraContext& ctx, const ComponentData& comp, std::size_t j, const Lattice& P) {
    std::vector<IntVec> rows;
    for (const auto& b : P.basis()) {
        RatVec c = component_coords(ctx, comp, ctx.mul(b, ctx.idempotents()[j]));
        IntVec r;
        for (const auto& x : c) {
            ensure(x.get_den() == 1, kModule, "prime not integral over O_{K_j}");
            r.push_back(x.get_num());
        }
        rows.push_back(std::move(r));
    }
    std::vector<Int> flat;
    for (const auto& r : hnf_rows(rows, comp.basis.size()))
        for (const auto& x : r) flat.push_back(x);
    return flat;
}

}  // namespace

PrimeSortKey prime_sort_key(const AlgebraContext& ctx, const MaximalOrderData& mo, const MaxIdeal& P) {
    std::optional<PrimeSortKey> best;
    const auto above = primes_of_OK_above(ctx, mo.OK, P);
    std::vector<MaxIdeal> all = maximal_ideals_above(ctx, mo.OK, P.p);
    for (const auto& Q : above) {
        const std::size_t j = prime_component(ctx, Q.ideal);
        const auto key = component_hnf(ctx, mo.comps[j], j, Q.ideal);
        long n = 1;
        for (const auto& R : all) {
            if (R.ideal == Q.ideal || R.f != Q.f || prime_component(ctx, R.ideal) != j) continue;
            if (component_hnf(ctx, mo.comps[j], j, R.ideal) < key) ++n;
        }
        PrimeSortKey k{j + 1, Q.norm(), n};
        if (!best || k < *best) best = k;
    }
    return *best;
}

}  // namespace icm
