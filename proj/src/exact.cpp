#include "icm/exact.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace icm {

namespace {

constexpr const char* kModule = "exact-core";

int cmpabs(const Int& a, const Int& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

// row_i -= q * row_r over columns [from, cols)
void axpy_row(IntMat& M, std::size_t i, std::size_t r, const Int& q, std::size_t from) {
    for (std::size_t j = from; j < M.cols(); ++j)
        if (M(r, j) != 0) M(i, j) -= q * M(r, j);
}

void negate_row(IntMat& M, std::size_t i) {
    for (std::size_t j = 0; j < M.cols(); ++j) M(i, j) = -M(i, j);
}

template <bool WithU>
std::size_t hnf_inplace(IntMat& H, IntMat* U) {
    const std::size_t m = H.rows(), n = H.cols();
    std::size_t r = 0;
    Int q;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        for (;;) {
            std::size_t best = m;
            for (std::size_t i = r; i < m; ++i) {
                if (H(i, c) == 0) continue;
                if (best == m || cmpabs(H(i, c), H(best, c)) < 0) best = i;
            }
            if (best == m) break;
            H.swap_rows(r, best);
            if constexpr (WithU) U->swap_rows(r, best);
            bool clean = true;
            for (std::size_t i = r + 1; i < m; ++i) {
                if (H(i, c) == 0) continue;
                mpz_tdiv_q(q.get_mpz_t(), H(i, c).get_mpz_t(), H(r, c).get_mpz_t());
                axpy_row(H, i, r, q, c);
                if constexpr (WithU) axpy_row(*U, i, r, q, 0);
                if (H(i, c) != 0) clean = false;
            }
            if (clean) break;
        }
        if (H(r, c) == 0) continue;
        if (H(r, c) < 0) {
            negate_row(H, r);
            if constexpr (WithU) negate_row(*U, r);
        }
        for (std::size_t i = 0; i < r; ++i) {
            if (H(i, c) == 0) continue;
            mpz_fdiv_q(q.get_mpz_t(), H(i, c).get_mpz_t(), H(r, c).get_mpz_t());
            if (q == 0) continue;
            axpy_row(H, i, r, q, c);
            if constexpr (WithU) axpy_row(*U, i, r, q, 0);
        }
        ++r;
    }
    return r;
}

}  // namespace

std::string to_string(const IntMat& m) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j).get_str();
        os << ']';
    }
    os << ']';
    return os.str();
}

RatMat to_rat(const IntMat& m) {
    RatMat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
    return r;
}

HnfResult hnf(const IntMat& M) {
    HnfResult res{M, IntMat::identity(M.rows()), 0};
    res.rank = hnf_inplace<true>(res.H, &res.U);
    return res;
}

std::vector<IntVec> hnf_rows(std::vector<IntVec> gens, std::size_t dim) {
    std::erase_if(gens, [](const IntVec& v) { return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; }); });
    if (gens.empty()) return {};
    IntMat H = IntMat::from_rows(gens);
    if (H.cols() != dim) throw Error(ErrorKind::RankMismatch, kModule, "generator length mismatch");
    const std::size_t r = hnf_inplace<false>(H, nullptr);
    std::vector<IntVec> out;
    out.reserve(r);
    for (std::size_t i = 0; i < r; ++i) out.push_back(H.row_vec(i));
    return out;
}

SnfResult snf(const IntMat& M) {
    const std::size_t m = M.rows(), n = M.cols();
    SnfResult s{M, IntMat::identity(m), IntMat::identity(n)};
    IntMat& D = s.D;
    Int q;
    auto col_axpy = [&](IntMat& A, std::size_t j, std::size_t t, const Int& k) {
        for (std::size_t i = 0; i < A.rows(); ++i)
            if (A(i, t) != 0) A(i, j) -= k * A(i, t);
    };
    auto swap_cols = [&](IntMat& A, std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < A.rows(); ++i) std::swap(A(i, a), A(i, b));
    };
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        for (;;) {
            std::size_t bi = m, bj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (D(i, j) != 0 && (bi == m || cmpabs(D(i, j), D(bi, bj)) < 0)) bi = i, bj = j;
            if (bi == m) return s;
            D.swap_rows(t, bi);
            s.P.swap_rows(t, bi);
            swap_cols(D, t, bj);
            swap_cols(s.Q, t, bj);
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (D(i, t) == 0) continue;
                mpz_tdiv_q(q.get_mpz_t(), D(i, t).get_mpz_t(), D(t, t).get_mpz_t());
                axpy_row(D, i, t, q, 0);
                axpy_row(s.P, i, t, q, 0);
                if (D(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (D(t, j) == 0) continue;
                mpz_tdiv_q(q.get_mpz_t(), D(t, j).get_mpz_t(), D(t, t).get_mpz_t());
                col_axpy(D, j, t, q);
                col_axpy(s.Q, j, t, q);
                if (D(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            bool divides = true;
            for (std::size_t i = t + 1; i < m && divides; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (D(i, j) % D(t, t) != 0) {
                        // fold row i into row t and retry
                        for (std::size_t c = 0; c < n; ++c) D(t, c) += D(i, c);
                        for (std::size_t c = 0; c < m; ++c) s.P(t, c) += s.P(i, c);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (D(t, t) < 0) {
            negate_row(D, t);
            negate_row(s.P, t);
        }
    }
    return s;
}

std::vector<Int> elementary_divisors(const IntMat& M) {
    const SnfResult s = snf(M);
    std::vector<Int> d;
    for (std::size_t i = 0; i < std::min(M.rows(), M.cols()); ++i) d.push_back(s.D(i, i));
    return d;
}

namespace {

// Gaussian elimination to row echelon form; returns rank and the determinant
// sign/scale accumulated when square.
std::size_t echelon(RatMat& A, Rat* detacc) {
    const std::size_t m = A.rows(), n = A.cols();
    std::size_t r = 0;
    if (detacc) *detacc = 1;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && A(p, c) == 0) ++p;
        if (p == m) {
            if (detacc) *detacc = 0;
            continue;
        }
        if (p != r) {
            A.swap_rows(p, r);
            if (detacc) *detacc = -*detacc;
        }
        if (detacc) *detacc *= A(r, c);
        for (std::size_t i = r + 1; i < m; ++i) {
            if (A(i, c) == 0) continue;
            const Rat f = A(i, c) / A(r, c);
            for (std::size_t j = c; j < n; ++j) A(i, j) -= f * A(r, j);
        }
        ++r;
    }
    return r;
}

}  // namespace

Rat det(const RatMat& m) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::RankMismatch, kModule, "det of non-square matrix");
    RatMat a = m;
    Rat d;
    const std::size_t r = echelon(a, &d);
    return r == m.rows() ? d : Rat(0);
}

Int det(const IntMat& m) {
    const Rat d = det(to_rat(m));
    return d.get_num();
}

std::size_t rank(const RatMat& m) {
    RatMat a = m;
    return echelon(a, nullptr);
}

RatMat inverse(const RatMat& m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw Error(ErrorKind::RankMismatch, kModule, "inverse of non-square matrix");
    RatMat a = m, inv = RatMat::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a(p, c) == 0) ++p;
        if (p == n) throw Error(ErrorKind::RankMismatch, kModule, "singular matrix");
        a.swap_rows(p, c);
        inv.swap_rows(p, c);
        const Rat piv = a(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) /= piv;
            inv(c, j) /= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a(i, c) == 0) continue;
            const Rat f = a(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(c, j);
                inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

RatVec solve_left(const RatMat& A, const RatVec& b) {
    const RatMat inv = inverse(A);
    RatVec x(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            if (b[j] != 0) x[i] += b[j] * inv(j, i);
    return x;
}

std::vector<RatVec> left_kernel(const RatMat& A) {
    // x * A = 0  <=>  A^T x^T = 0: reduce A^T to RREF and read off free columns.
    RatMat t = A.transpose();
    const std::size_t m = t.rows(), n = t.cols();
    std::vector<std::size_t> pivcol;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && t(p, c) == 0) ++p;
        if (p == m) continue;
        t.swap_rows(p, r);
        const Rat piv = t(r, c);
        for (std::size_t j = 0; j < n; ++j) t(r, j) /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || t(i, c) == 0) continue;
            const Rat f = t(i, c);
            for (std::size_t j = 0; j < n; ++j) t(i, j) -= f * t(r, j);
        }
        pivcol.push_back(c);
        ++r;
    }
    std::vector<RatVec> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (std::find(pivcol.begin(), pivcol.end(), f) != pivcol.end()) continue;
        RatVec v(n);
        v[f] = 1;
        for (std::size_t k = 0; k < pivcol.size(); ++k) v[pivcol[k]] = -t(k, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<IntVec> integer_left_kernel(const IntMat& A) {
    const HnfResult h = hnf(A);
    std::vector<IntVec> rows;
    for (std::size_t i = h.rank; i < A.rows(); ++i) rows.push_back(h.U.row_vec(i));
    return hnf_rows(std::move(rows), A.rows());
}

Rat lattice_index(const RatMat& A, const RatMat& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw Error(ErrorKind::RankMismatch, kModule, "lattice_index needs square bases of equal dimension");
    const Rat da = det(A), db = det(B);
    if (da == 0 || db == 0) throw Error(ErrorKind::RankMismatch, kModule, "lattice_index of a degenerate lattice");
    return abs(db / da);
}

Int lcm_denominators(std::span<const Rat> v) {
    Int d = 1;
    for (const Rat& x : v) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den_mpz_t());
    return d;
}

Int content(std::span<const Int> v) {
    Int g = 0;
    for (const Int& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

}  // namespace icm
