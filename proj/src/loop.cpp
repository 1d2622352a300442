#include "ncloop/loop.hpp"

#include <algorithm>
#include <stdexcept>

#include "ncloop/parallel.hpp"

namespace ncloop {

namespace {

std::uint64_t abs_diff(std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; }

void require_member(const s_table& table, std::uint64_t v) {
    if (!table.contains(v))
        throw std::invalid_argument("dot: " + std::to_string(v) + " is not in S");
}

}  // namespace

std::uint64_t dot(const s_table& table, std::uint64_t a, std::uint64_t b) {
    require_member(table, a);
    require_member(table, b);
    auto v = table.next_after(abs_diff(a, b));
    if (!v) throw std::logic_error("dot: table bound too small for N(|a-b|)");
    return *v;
}

std::uint64_t dot(s_pool& pool, std::uint64_t a, std::uint64_t b) {
    auto tab = pool.ensure(std::max({a, b, std::uint64_t{4}}));
    require_member(*tab, a);
    require_member(*tab, b);
    return pool.next_in_s(abs_diff(a, b));
}

axiom_report check_axioms(s_pool& pool, std::uint64_t bound, unsigned threads) {
    if (bound == 0) throw std::invalid_argument("check_axioms: bound must be >= 1");
    auto tab = pool.ensure(2 * bound + 2);  // N(|a-b|) < 2*bound by Bertrand
    auto elems = tab->elements();
    std::size_t m = tab->upper_rank(bound);

    auto scan_rows = [&](std::size_t ib, std::size_t ie) {
        std::vector<axiom_counterexample> bad;
        for (std::size_t i = ib; i < ie; ++i) {
            for (std::size_t j = i; j < m; ++j) {
                std::uint64_t a = elems[i], b = elems[j];
                auto v = tab->next_after(b - a);
                auto w = tab->next_after(abs_diff(a, b));  // arguments swapped
                if (!v || !tab->contains(*v)) bad.push_back({"closure", a, b});
                if (!v || !w || *v != *w) bad.push_back({"commutativity", a, b});
                if (i == 0 && v && *v != b) bad.push_back({"identity", b, a});
                if (i == j && v && *v != 1) bad.push_back({"self_inverse", a, b});
            }
        }
        return bad;
    };

    auto chunks = run_blocks<std::vector<axiom_counterexample>>(m, threads, scan_rows);
    axiom_report rep;
    rep.bound = bound;
    for (auto& c : chunks)
        rep.counterexamples.insert(rep.counterexamples.end(), c.begin(), c.end());
    std::sort(rep.counterexamples.begin(), rep.counterexamples.end(),
              [](const auto& x, const auto& y) { return x.tie() < y.tie(); });

    auto none = [&](const char* name) {
        return std::none_of(rep.counterexamples.begin(), rep.counterexamples.end(),
                            [&](const auto& c) { return c.axiom == name; });
    };
    rep.closure_ok = none("closure");
    rep.commutativity_ok = none("commutativity");
    rep.identity_ok = none("identity");
    rep.self_inverse_ok = none("self_inverse");
    return rep;
}

std::optional<std::array<std::uint64_t, 3>> find_nonassociative_witness(s_pool& pool,
                                                                        std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("find_nonassociative_witness: bound must be >= 1");
    // inner dots stay below 2*bound, outer ones below 4*bound
    auto tab = pool.ensure(4 * bound + 4);
    auto elems = tab->elements();
    std::size_t m = tab->upper_rank(bound);

    auto na = [&](std::uint64_t x) { return *tab->next_after(x); };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k) {
                if (i == j || j == k || i == k) continue;
                std::uint64_t a = elems[i], b = elems[j], c = elems[k];
                std::uint64_t left = na(abs_diff(na(abs_diff(a, b)), c));
                std::uint64_t right = na(abs_diff(a, na(abs_diff(b, c))));
                if (left != right) return std::array<std::uint64_t, 3>{a, b, c};
            }
    return std::nullopt;
}

}  // namespace ncloop
