#include "doctest.h"

#include <functional>
#include <set>

#include "icm/fielddata.hpp"
#include "icm/overorders.hpp"

using namespace icm;

namespace {

const std::vector<FieldData>& pool() {
    static const std::vector<FieldData> p = load_field_dir(std::string(ICM_DATA_DIR) + "/fields");
    return p;
}

// Every lattice between R and O_K that is a ring, by listing all HNF
// sublattices of O_K whose index divides [O_K : R].
std::set<Order> brute_overorders(const AlgebraContext& ctx, const Order& OK) {
    const std::size_t n = ctx.dim();
    const Order R = frobenius_order(ctx);
    const long N = index(OK, R).get_num().get_si();
    const auto B = OK.basis();
    std::vector<std::vector<long>> Rc;
    for (const auto& b : R.basis()) {
        auto c = OK.coords(b);
        REQUIRE(c.has_value());
        std::vector<long> v;
        for (const auto& x : *c) v.push_back(x.get_si());
        Rc.push_back(v);
    }
    std::set<Order> out;
    std::vector<long> diag(n, 1);
    std::vector<std::vector<long>> rows(n, std::vector<long>(n, 0));
    auto contains_R = [&] {
        for (auto x : Rc) {
            for (std::size_t r = 0; r < n; ++r) {
                if (x[r] % diag[r] != 0) return false;
                const long t = x[r] / diag[r];
                if (t)
                    for (std::size_t c = r; c < n; ++c) x[c] -= t * rows[r][c];
            }
        }
        return true;
    };
    std::function<void(std::size_t, long)> rec_diag = [&](std::size_t i, long prod) {
        if (i == n) {
            std::vector<std::pair<std::size_t, std::size_t>> slots;
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = r + 1; c < n; ++c)
                    if (diag[c] > 1) slots.emplace_back(r, c);
            std::vector<long> v(slots.size(), 0);
            for (;;) {
                for (std::size_t r = 0; r < n; ++r) {
                    std::fill(rows[r].begin(), rows[r].end(), 0);
                    rows[r][r] = diag[r];
                }
                for (std::size_t s = 0; s < slots.size(); ++s) rows[slots[s].first][slots[s].second] = v[s];
                if (contains_R()) {
                    std::vector<Elem> gens;
                    for (std::size_t r = 0; r < n; ++r) {
                        Elem e(n);
                        for (std::size_t k = 0; k < n; ++k)
                            for (std::size_t c = 0; c < n; ++c) e[c] += B[k][c] * Rat(rows[r][k]);
                        gens.push_back(e);
                    }
                    Lattice L = Lattice::from_generators(gens, n);
                    if (is_order(ctx, L)) out.insert(L);
                }
                std::size_t s = 0;
                while (s < v.size() && ++v[s] == diag[slots[s].second]) v[s++] = 0;
                if (s == v.size()) break;
            }
            return;
        }
        for (long d = 1; prod * d <= N; ++d) {
            if (N % (prod * d) != 0) continue;
            diag[i] = d;
            rec_diag(i + 1, prod * d);
        }
    };
    rec_diag(0, 1);
    return out;
}

struct Built {
    std::unique_ptr<AlgebraContext> ctx;
    MaximalOrderData mo;
};

Built build(int g, long q, const ZPoly& h) {
    Built b;
    b.ctx = std::make_unique<AlgebraContext>(parse_weil(g, q, h));
    b.mo = assemble_maximal_order(*b.ctx, select_field_data(*b.ctx, pool()));
    return b;
}

}  // namespace

TEST_CASE("overorders of x^2 + x + 7") {
    auto b = build(1, 7, {7, 1, 1});
    auto recs = enumerate_overorders(*b.ctx, b.mo);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].label() == "1.1");
    CHECK(recs[0].order == b.mo.OK);
    CHECK(recs[1].label() == "3.1");
    CHECK(recs[1].order == frobenius_order(*b.ctx));
    for (const auto& r : recs) CHECK(r.cm_type == 1);
    CHECK(recs[1].noninvertible_primes.size() == 1);
}

TEST_CASE("sort key of the Frobenius order") {
    auto b = build(1, 3, {3, 1, 1});
    auto recs = enumerate_overorders(*b.ctx, b.mo);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].label() == "1.1");
    CHECK(recs[0].sort_key == std::vector<Int>{1, 1, 0, 1});
    CHECK(order_sort_key(mult_ring(*b.ctx, trace_dual(*b.ctx, frobenius_order(*b.ctx)))) == order_sort_key(b.mo.OK));
}

TEST_CASE("the index-8 overorder of 2.5.a_g has type 3") {
    auto b = build(2, 5, {25, 0, 6, 0, 1});
    auto recs = enumerate_overorders(*b.ctx, b.mo);
    int count8 = 0;
    for (const auto& r : recs) {
        if (r.N == 8) {
            ++count8;
            CHECK(r.label() == "8.1");
            CHECK(r.cm_type == 3);
        }
        CHECK(r.cm_type <= 3);
        CHECK(mult_ring(*b.ctx, r.order) == r.order);
    }
    CHECK(count8 == 1);
}

TEST_CASE("overorder enumeration is complete") {
    const std::vector<std::tuple<int, long, ZPoly>> cases = {
        {1, 7, {7, 1, 1}},          {1, 5, {5, 2, 1}},           {1, 7, {7, 4, 1}},
        {2, 5, {25, 0, 6, 0, 1}},   {2, 5, {25, 5, 4, 1, 1}},    {2, 5, {25, 5, -2, 1, 1}},
        {2, 5, {25, -5, -2, -1, 1}}};
    for (const auto& [g, q, h] : cases) {
        auto b = build(g, q, h);
        auto recs = enumerate_overorders(*b.ctx, b.mo);
        std::set<Order> got;
        std::set<std::pair<Int, long>> labels;
        for (const auto& r : recs) {
            got.insert(r.order);
            labels.emplace(r.N, r.i);
            CHECK(r.sort_key.size() == 1 + static_cast<std::size_t>(g * (2 * g + 1)));
        }
        CHECK(labels.size() == recs.size());
        CHECK(got == brute_overorders(*b.ctx, b.mo.OK));
    }
}

TEST_CASE("index cap") {
    auto b = build(2, 5, {25, 5, 4, 1, 1});
    try {
        enumerate_overorders(*b.ctx, b.mo, 10);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IndexOverflow);
    }
}
