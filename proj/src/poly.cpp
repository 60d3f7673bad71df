#include "icm/poly.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace icm {

namespace {
constexpr const char* kModule = "algebra";
}

QPoly to_qpoly(const ZPoly& f) {
    QPoly r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i];
    return r;
}

ZPoly mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

QPoly mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

QPoly add(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}

QPoly sub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

ZPoly derivative(const ZPoly& f) {
    if (f.size() <= 1) return {};
    ZPoly d(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) d[i - 1] = f[i] * static_cast<unsigned long>(i);
    trim(d);
    return d;
}

std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
    if (b.empty()) throw Error(ErrorKind::InvariantBreach, kModule, "polynomial division by zero");
    QPoly r = a;
    trim(r);
    if (r.size() < b.size()) return {{}, r};
    QPoly q(r.size() - b.size() + 1);
    const Rat& lead = b.back();
    for (std::size_t k = q.size(); k-- > 0;) {
        const Rat c = r[k + b.size() - 1] / lead;
        q[k] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[k + j] -= c * b[j];
    }
    trim(q);
    trim(r);
    return {q, r};
}

QPoly mod(const QPoly& a, const QPoly& b) { return divmod(a, b).second; }

QPoly gcd(QPoly a, QPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        QPoly r = mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const Rat lead = a.back();
        for (Rat& c : a) c /= lead;
    }
    return a;
}

XgcdResult xgcd(const QPoly& a, const QPoly& b) {
    QPoly r0 = a, r1 = b, s0{Rat(1)}, s1{}, t0{}, t1{Rat(1)};
    trim(r0);
    trim(r1);
    while (!r1.empty()) {
        auto [q, r] = divmod(r0, r1);
        QPoly s2 = sub(s0, mul(q, s1)), t2 = sub(t0, mul(q, t1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (!r0.empty()) {
        const Rat lead = r0.back();
        for (Rat& c : r0) c /= lead;
        for (Rat& c : s0) c /= lead;
        for (Rat& c : t0) c /= lead;
    }
    return {r0, s0, t0};
}

std::optional<ZPoly> divide_exact(const ZPoly& a, const ZPoly& b) {
    if (b.empty() || b.back() != 1) throw Error(ErrorKind::InvariantBreach, kModule, "divide_exact needs a monic divisor");
    if (a.size() < b.size()) {
        if (a.empty()) return ZPoly{};
        return std::nullopt;
    }
    ZPoly r = a;
    ZPoly q(a.size() - b.size() + 1);
    for (std::size_t k = q.size(); k-- > 0;) {
        const Int c = r[k + b.size() - 1];
        q[k] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[k + j] -= c * b[j];
    }
    for (const Int& c : r)
        if (c != 0) return std::nullopt;
    trim(q);
    return q;
}

Int eval(const ZPoly& f, const Int& x) {
    Int v = 0;
    for (std::size_t k = f.size(); k-- > 0;) v = v * x + f[k];
    return v;
}

bool is_squarefree(const ZPoly& f) {
    const QPoly g = gcd(to_qpoly(f), to_qpoly(derivative(f)));
    return g.size() == 1;
}

Int resultant(const ZPoly& a, const ZPoly& b) {
    const int m = degree(a), n = degree(b);
    if (m < 0 || n < 0) return 0;
    if (m + n == 0) return 1;
    const std::size_t N = static_cast<std::size_t>(m + n);
    RatMat S(N, N);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= m; ++k) S(i, i + k) = a[m - k];
    for (int i = 0; i < m; ++i)
        for (int k = 0; k <= n; ++k) S(n + i, i + k) = b[n - k];
    return det(S).get_num();
}

Int discriminant(const ZPoly& f) {
    const int n = degree(f);
    Int r = resultant(f, derivative(f));
    if ((n * (n - 1) / 2) % 2) r = -r;
    return r / f.back();
}

std::string to_string(const ZPoly& f) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i].get_str();
    os << ']';
    return os.str();
}

bool coeff_lex_less(const ZPoly& a, const ZPoly& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

Int isqrt_exact(const Int& n, bool& exact) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    exact = (r * r == n);
    return r;
}

Int binom(unsigned n, unsigned k) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// floor(C(k, i) * root_norm^(i/2)), an upper bound on |a_i| for a monic
// degree-k factor all of whose roots have absolute value sqrt(root_norm).
Int coeff_bound(unsigned k, unsigned i, const Int& root_norm) {
    Int pw;
    mpz_pow_ui(pw.get_mpz_t(), root_norm.get_mpz_t(), i);
    Int b2 = binom(k, i) * binom(k, i) * pw;  // bound^2
    Int b;
    mpz_sqrt(b.get_mpz_t(), b2.get_mpz_t());
    return b + 1;
}

// Smallest-degree monic divisor of h among Weil-shaped candidates.
std::optional<ZPoly> smallest_divisor(const ZPoly& h, const Int& root_norm) {
    const int n = degree(h);
    bool sq = false;
    const Int s = isqrt_exact(root_norm, sq);
    if (sq) {
        for (const Int& c : {Int(-s), s}) {
            ZPoly f{c, 1};
            if (divide_exact(h, f)) return f;
        }
    }
    for (int k = 2; k <= n / 2; k += 2) {
        const unsigned m = static_cast<unsigned>(k / 2);
        // free monic coefficients a_1..a_m (a_i multiplies x^{k-i});
        // a_{k-i} = sign * root_norm^{m-i} * a_i, constant = sign * root_norm^m.
        std::vector<Int> bound(m + 1);
        for (unsigned i = 1; i <= m; ++i) bound[i] = coeff_bound(static_cast<unsigned>(k), i, root_norm);
        for (int sign : {1, -1}) {
            std::vector<Int> a(m + 1);
            for (unsigned i = 1; i <= m; ++i) a[i] = -bound[i];
            for (;;) {
                bool ok = !(sign < 0 && a[m] != 0);
                if (ok) {
                    ZPoly f(static_cast<std::size_t>(k) + 1);
                    f[static_cast<std::size_t>(k)] = 1;
                    for (unsigned i = 1; i <= m; ++i) f[static_cast<std::size_t>(k) - i] = a[i];
                    for (unsigned i = 0; i < m; ++i) {
                        Int pw;
                        mpz_pow_ui(pw.get_mpz_t(), root_norm.get_mpz_t(), m - i);
                        const Int ai = (i == 0) ? Int(1) : a[i];
                        f[i] = sign * pw * ai;
                    }
                    if (divide_exact(h, f)) return f;
                }
                unsigned i = 1;
                while (i <= m) {
                    if (a[i] < bound[i]) {
                        ++a[i];
                        break;
                    }
                    a[i] = -bound[i];
                    ++i;
                }
                if (i > m) break;
            }
        }
    }
    return std::nullopt;
}

}  // namespace

std::vector<ZPoly> factor_weil(const ZPoly& h, const Int& root_norm) {
    if (h.empty() || h.back() != 1) throw Error(ErrorKind::InvariantBreach, kModule, "factor_weil needs a monic polynomial");
    std::vector<ZPoly> factors;
    ZPoly rest = h;
    while (degree(rest) > 0) {
        auto f = smallest_divisor(rest, root_norm);
        if (!f) {
            factors.push_back(rest);
            break;
        }
        factors.push_back(*f);
        rest = *divide_exact(rest, *f);
    }
    std::sort(factors.begin(), factors.end(), coeff_lex_less);
    return factors;
}

namespace fp {

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t p) {
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % p);
}

std::int64_t powmod(std::int64_t a, std::uint64_t e, std::int64_t p) {
    std::int64_t r = 1 % p;
    a %= p;
    if (a < 0) a += p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

std::int64_t inv(std::int64_t a, std::int64_t p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) throw Error(ErrorKind::InvariantBreach, kModule, "inverse of zero mod p");
    return powmod(a, static_cast<std::uint64_t>(p - 2), p);
}

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly mul(const Poly& a, const Poly& b, std::int64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
    trim(r);
    return r;
}

Poly sub(const Poly& a, const Poly& b, std::int64_t p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = ((r[i] - b[i]) % p + p) % p;
    trim(r);
    return r;
}

namespace {
Poly divmod_impl(Poly& a, const Poly& b, std::int64_t p) {
    trim(a);
    if (b.empty()) throw Error(ErrorKind::InvariantBreach, kModule, "F_p division by zero");
    if (a.size() < b.size()) return {};
    Poly q(a.size() - b.size() + 1, 0);
    const std::int64_t li = inv(b.back(), p);
    for (std::size_t k = q.size(); k-- > 0;) {
        const std::int64_t c = mulmod(a[k + b.size() - 1], li, p);
        q[k] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) a[k + j] = ((a[k + j] - mulmod(c, b[j], p)) % p + p) % p;
    }
    trim(a);
    trim(q);
    return q;
}
}  // namespace

Poly rem(Poly a, const Poly& b, std::int64_t p) {
    divmod_impl(a, b, p);
    return a;
}

Poly quo(Poly a, const Poly& b, std::int64_t p) { return divmod_impl(a, b, p); }

Poly gcd(Poly a, Poly b, std::int64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const std::int64_t li = inv(a.back(), p);
        for (auto& c : a) c = mulmod(c, li, p);
    }
    return a;
}

Poly powmod(const Poly& base, const Int& e, const Poly& m, std::int64_t p) {
    Poly r{1 % p}, b = rem(base, m, p);
    trim(r);
    const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        r = rem(mul(r, r, p), m, p);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = rem(mul(r, b, p), m, p);
    }
    return r;
}

std::vector<std::int64_t> split_roots(const Poly& f0, std::int64_t p) {
    Poly f = f0;
    trim(f);
    std::vector<std::int64_t> roots;
    if (f.size() <= 1) return roots;
    if (p < 1024) {
        for (std::int64_t c = 0; c < p; ++c) {
            std::int64_t v = 0;
            for (std::size_t k = f.size(); k-- > 0;) v = (mulmod(v, c, p) + f[k]) % p;
            if (v == 0) roots.push_back(c);
        }
        return roots;
    }
    std::function<void(const Poly&)> split = [&](const Poly& g) {
        if (g.size() <= 1) return;
        if (g.size() == 2) {
            const std::int64_t r = mulmod(p - g[0] % p, inv(g[1], p), p);
            roots.push_back(r % p);
            return;
        }
        for (std::int64_t a = 1;; ++a) {
            const Poly lin{a % p, 1};
            Poly t = powmod(lin, Int((p - 1) / 2), g, p);
            t = sub(t, Poly{1}, p);
            Poly d = gcd(t, g, p);
            if (d.size() > 1 && d.size() < g.size()) {
                split(d);
                split(quo(g, d, p));
                return;
            }
        }
    };
    split(f);
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace fp

}  // namespace icm
