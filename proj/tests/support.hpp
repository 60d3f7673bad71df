#pragma once

#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <string>

#include "icm/fielddata.hpp"
#include "icm/labels.hpp"

namespace testsupport {

inline const std::vector<icm::FieldData>& pool() {
    static const std::vector<icm::FieldData> p = icm::load_field_dir(std::string(ICM_DATA_DIR) + "/fields");
    return p;
}

// One IsogenyClass per label, built on first use.
inline const icm::IsogenyClass& isogeny(const std::string& label) {
    static std::map<std::string, std::unique_ptr<icm::IsogenyClass>> cache;
    auto& slot = cache[label];
    if (!slot) {
        const auto d = icm::decode_isog(label);
        slot = std::make_unique<icm::IsogenyClass>(icm::parse_weil(d.g, d.q, d.h), pool());
    }
    return *slot;
}

// Labels of the ordinary g = 1 classes over F_p for p = 3, 5, 7.
inline std::vector<std::string> g1_sweep() {
    std::vector<std::string> out;
    for (long p : {3L, 5L, 7L})
        for (long a = -p; a <= p; ++a) {
            if (a == 0 || a * a > 4 * p || std::gcd(a, p) != 1) continue;
            out.push_back(icm::encode_isog(1, p, {icm::Int(-a)}));
        }
    return out;
}

// Number of primitive reduced binary quadratic forms of discriminant D < 0.
inline long reduced_forms(long D) {
    long h = 0;
    for (long a = 1; 3 * a * a <= -D; ++a)
        for (long b = -a + 1; b <= a; ++b) {
            const long num = b * b - D;
            if (num % (4 * a) != 0) continue;
            const long c = num / (4 * a);
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
            ++h;
        }
    return h;
}

// Discriminant of an order: determinant of its trace form.
inline icm::Int order_discriminant(const icm::AlgebraContext& ctx, const icm::Order& S) {
    const auto B = S.basis();
    icm::RatMat T(B.size(), B.size());
    for (std::size_t i = 0; i < B.size(); ++i)
        for (std::size_t j = 0; j < B.size(); ++j) T(i, j) = ctx.trace(ctx.mul(B[i], B[j]));
    const icm::Rat d = icm::det(T);
    return d.get_num();
}

// Random element of a lattice with small coefficients.
inline icm::Elem random_member(const icm::AlgebraContext& ctx, const icm::Lattice& L, std::mt19937_64& rng, long r = 3) {
    std::uniform_int_distribution<long> u(-r, r);
    for (;;) {
        icm::Elem x = ctx.zero();
        for (const auto& b : L.basis()) x = ctx.add(x, ctx.scale(b, icm::Rat(u(rng))));
        if (ctx.inverse(x)) return x;
    }
}

// Random invertible element of K with small rational coordinates.
inline icm::Elem random_scalar(const icm::AlgebraContext& ctx, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> u(-5, 5), den(1, 6);
    for (;;) {
        icm::Elem x(ctx.dim());
        for (auto& c : x) c = icm::Rat(u(rng), den(rng));
        for (auto& c : x) c.canonicalize();
        if (ctx.inverse(x)) return x;
    }
}

}  // namespace testsupport
