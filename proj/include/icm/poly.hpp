#pragma once

// Dense univariate polynomials over Z, Q and F_p. Coefficients are stored in
// ascending order (index k holds the coefficient of x^k); the zero polynomial
// is the empty vector.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icm/exact.hpp"

namespace icm {

using ZPoly = std::vector<Int>;
using QPoly = std::vector<Rat>;

template <class P>
void trim(P& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int degree(const ZPoly& f) { return static_cast<int>(f.size()) - 1; }
inline int degree(const QPoly& f) { return static_cast<int>(f.size()) - 1; }

QPoly to_qpoly(const ZPoly& f);
ZPoly mul(const ZPoly& a, const ZPoly& b);
QPoly mul(const QPoly& a, const QPoly& b);
QPoly add(const QPoly& a, const QPoly& b);
QPoly sub(const QPoly& a, const QPoly& b);
ZPoly derivative(const ZPoly& f);
/// Quotient and remainder over Q; `b` must be nonzero.
std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b);
QPoly mod(const QPoly& a, const QPoly& b);
/// Monic gcd over Q.
QPoly gcd(QPoly a, QPoly b);
/// Returns (g, s, t) with s*a + t*b = g monic gcd.
struct XgcdResult {
    QPoly g, s, t;
};
XgcdResult xgcd(const QPoly& a, const QPoly& b);
/// Exact division of monic-divisor polynomials over Z.
std::optional<ZPoly> divide_exact(const ZPoly& a, const ZPoly& b);
Int eval(const ZPoly& f, const Int& x);
bool is_squarefree(const ZPoly& f);
Int discriminant(const ZPoly& f);
Int resultant(const ZPoly& a, const ZPoly& b);

std::string to_string(const ZPoly& f);

/// Lexicographic comparison of coefficient sequences, constant term first.
bool coeff_lex_less(const ZPoly& a, const ZPoly& b);

/// Factors a monic squarefree polynomial whose complex roots all satisfy
/// |alpha|^2 = root_norm (a Weil polynomial for root_norm = q) into monic
/// irreducible factors over Q, sorted with coeff_lex_less.
std::vector<ZPoly> factor_weil(const ZPoly& h, const Int& root_norm);

/// Polynomials over F_p (p < 2^31), coefficients in [0, p).
namespace fp {

using Poly = std::vector<std::int64_t>;

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t p);
std::int64_t powmod(std::int64_t a, std::uint64_t e, std::int64_t p);
std::int64_t inv(std::int64_t a, std::int64_t p);

void trim(Poly& f);
Poly mul(const Poly& a, const Poly& b, std::int64_t p);
Poly sub(const Poly& a, const Poly& b, std::int64_t p);
Poly rem(Poly a, const Poly& b, std::int64_t p);
Poly quo(Poly a, const Poly& b, std::int64_t p);
Poly gcd(Poly a, Poly b, std::int64_t p);
Poly powmod(const Poly& base, const Int& e, const Poly& m, std::int64_t p);
/// Distinct roots in F_p of a polynomial that splits into distinct linear
/// factors, sorted ascending. Deterministic.
std::vector<std::int64_t> split_roots(const Poly& f, std::int64_t p);

}  // namespace fp

}  // namespace icm
