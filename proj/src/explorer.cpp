#include "ncloop/explorer.hpp"

#include <algorithm>
#include <stdexcept>

#include "ncloop/loop.hpp"
#include "ncloop/parallel.hpp"

namespace ncloop {

namespace {

// Even differences d with N(d) == v form the window [prev_S(v)+1, v-1].
// v == 1 admits only d == 0, useless for distinct operands.
std::optional<std::pair<std::uint64_t, std::uint64_t>> edge_window(const s_table& tab,
                                                                   std::uint64_t v) {
    if (v <= 1) return std::nullopt;
    auto prev = tab.prev_before(v);
    if (!prev) return std::nullopt;
    return std::pair{*prev + 1, v - 1};
}

// Visit indices w < m of elements with |elems[w] - u| in [lo, hi], ascending.
template <class Fn>
void for_window_neighbors(std::span<const std::uint64_t> elems, std::size_t m, std::uint64_t u,
                          std::uint64_t lo, std::uint64_t hi, Fn&& fn) {
    auto first = elems.begin();
    auto last = elems.begin() + static_cast<std::ptrdiff_t>(m);
    if (u > lo) {
        std::uint64_t from = u > hi ? u - hi : 0;
        for (auto it = std::lower_bound(first, last, from); it != last && *it <= u - lo; ++it)
            fn(static_cast<std::size_t>(it - first));
    }
    for (auto it = std::lower_bound(first, last, u + lo); it != last && *it <= u + hi; ++it)
        fn(static_cast<std::size_t>(it - first));
}

bool chain_self_check(const s_table& tab, const chain& c) {
    if (c.elements.size() < 2) return false;
    auto sorted = c.elements;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    for (std::size_t i = 0; i + 1 < c.elements.size(); ++i)
        if (dot(tab, c.elements[i], c.elements[i + 1]) != c.edge_value) return false;
    if (c.is_arithmetic) {
        if (!c.common_difference) return false;
        for (std::size_t i = 0; i + 1 < c.elements.size(); ++i)
            if (c.elements[i + 1] - c.elements[i] != *c.common_difference) return false;
        if (tab.next_after(*c.common_difference) != c.edge_value) return false;
    }
    return true;
}

bool cycle_self_check(const s_table& tab, const equal_edge_cycle& c) {
    std::size_t n = c.vertices.size();
    if (n < 3) return false;
    auto sorted = c.vertices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    for (std::size_t i = 0; i < n; ++i)
        if (dot(tab, c.vertices[i], c.vertices[(i + 1) % n]) != c.edge_value) return false;
    return true;
}

chain make_chain(const s_table& tab, std::vector<std::uint64_t> elements, std::uint64_t edge) {
    chain c;
    c.elements = std::move(elements);
    c.edge_value = edge;
    bool arith = c.elements.size() >= 2;
    for (std::size_t i = 0; arith && i + 1 < c.elements.size(); ++i) {
        if (c.elements[i + 1] <= c.elements[i] ||
            c.elements[i + 1] - c.elements[i] != c.elements[1] - c.elements[0])
            arith = false;
    }
    if (arith && c.elements[1] > c.elements[0]) {
        c.is_arithmetic = true;
        c.common_difference = c.elements[1] - c.elements[0];
    }
    if (!chain_self_check(tab, c)) throw std::logic_error("chain failed self-check");
    return c;
}

}  // namespace

std::vector<std::uint64_t> canonical_cycle(const std::vector<std::uint64_t>& vertices) {
    std::size_t n = vertices.size();
    if (n < 3) throw std::invalid_argument("canonical_cycle: need at least 3 vertices");
    {
        auto sorted = vertices;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("canonical_cycle: vertices must be distinct");
    }
    std::size_t i = static_cast<std::size_t>(
        std::min_element(vertices.begin(), vertices.end()) - vertices.begin());
    std::vector<std::uint64_t> fwd(n), bwd(n);
    for (std::size_t k = 0; k < n; ++k) {
        fwd[k] = vertices[(i + k) % n];
        bwd[k] = vertices[(i + n - k) % n];
    }
    return fwd[1] < bwd[1] ? fwd : bwd;
}

std::optional<std::uint64_t> absorbing_partner(s_pool& pool, std::uint64_t s,
                                               std::uint64_t limit) {
    if (!is_in_s(s)) throw std::invalid_argument("absorbing_partner: s must be in S");
    if (limit < s) throw std::invalid_argument("absorbing_partner: limit must be >= s");
    auto tab = pool.ensure(2 * limit + 2);
    auto elems = tab->elements();
    // the equation reads N(a - s) = a, so only a >= s qualifies
    for (std::size_t i = tab->upper_rank(s - 1); i < elems.size() && elems[i] <= limit; ++i)
        if (tab->next_after(elems[i] - s) == elems[i]) return elems[i];
    return std::nullopt;
}

std::optional<chain> find_ap_chain(s_pool& pool, std::size_t n, std::uint64_t bound,
                                   std::uint64_t min_start) {
    if (n < 2) throw std::invalid_argument("find_ap_chain: n must be >= 2");
    auto tab = pool.ensure(2 * bound + 2);
    auto elems = tab->elements();
    std::size_t m = tab->upper_rank(bound);
    for (std::size_t i = 1; i < m; ++i) {  // skip 1: chain members are odd primes
        std::uint64_t p = elems[i];
        if (p < min_start) continue;
        if (bound < p) break;
        std::uint64_t dmax = (bound - p) / (n - 1);
        for (std::uint64_t d = 2; d <= dmax; d += 2) {
            bool all = true;
            for (std::size_t k = 1; all && k < n; ++k) all = tab->contains(p + k * d);
            if (!all) continue;
            std::vector<std::uint64_t> terms(n);
            for (std::size_t k = 0; k < n; ++k) terms[k] = p + k * d;
            return make_chain(*tab, std::move(terms), *tab->next_after(d));
        }
    }
    return std::nullopt;
}

namespace {

struct path_search_ctx {
    std::span<const std::uint64_t> elems;
    std::size_t m = 0;
    std::size_t n = 0;
    std::uint64_t lo = 0, hi = 0;
    std::vector<std::size_t> path;
    std::vector<char> used;

    // depth-first in ascending vertex order; the first complete path is the
    // lexicographically minimal one
    bool extend() {
        if (path.size() == n) return true;
        bool done = false;
        for_window_neighbors(elems, m, elems[path.back()], lo, hi, [&](std::size_t w) {
            if (done || used[w]) return;
            used[w] = 1;
            path.push_back(w);
            done = extend();
            if (!done) {
                path.pop_back();
                used[w] = 0;
            }
        });
        return done;
    }
};

}  // namespace

std::optional<chain> find_equal_edge_path(s_pool& pool, std::size_t n, std::uint64_t bound,
                                          std::optional<std::uint64_t> edge) {
    if (n < 2) throw std::invalid_argument("find_equal_edge_path: n must be >= 2");
    if (edge && !is_in_s(*edge))
        throw std::invalid_argument("find_equal_edge_path: edge value must be in S");
    auto tab = pool.ensure(2 * bound + 2);
    auto elems = tab->elements();
    std::size_t m = tab->upper_rank(bound);
    if (edge && *edge >= tab->bound()) return std::nullopt;  // unreachable edge value

    path_search_ctx ctx;
    ctx.elems = elems;
    ctx.m = m;
    ctx.n = n;
    ctx.used.assign(m, 0);

    for (std::size_t i = 1; i < m; ++i) {  // vertex 1 stays out of path searches
        for (std::size_t j = 1; j < m; ++j) {
            if (j == i) continue;
            std::uint64_t d = elems[i] > elems[j] ? elems[i] - elems[j] : elems[j] - elems[i];
            std::uint64_t v = *tab->next_after(d);
            if (edge && v != *edge) continue;
            auto win = edge_window(*tab, v);
            ctx.lo = win->first;
            ctx.hi = win->second;
            ctx.path = {i, j};
            ctx.used[i] = ctx.used[j] = 1;
            bool found = ctx.extend();
            if (found) {
                std::vector<std::uint64_t> values(ctx.path.size());
                for (std::size_t k = 0; k < ctx.path.size(); ++k) values[k] = elems[ctx.path[k]];
                return make_chain(*tab, std::move(values), v);
            }
            ctx.used[i] = ctx.used[j] = 0;
        }
    }
    return std::nullopt;
}

verification_report verify_no_equal_triangle(s_pool& pool, std::uint64_t bound,
                                             unsigned threads) {
    if (bound == 0) throw std::invalid_argument("verify_no_equal_triangle: bound must be >= 1");
    auto tab = pool.ensure(2 * bound + 2);
    auto elems = tab->elements();
    std::size_t m = tab->upper_rank(bound);

    auto scan = [&](std::size_t ib, std::size_t ie) {
        std::vector<std::vector<std::uint64_t>> bad;
        for (std::size_t i = ib; i < ie; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                std::uint64_t v = *tab->next_after(elems[j] - elems[i]);
                // N(c-b) > c-b, so once c-b >= v no k can match
                for (std::size_t k = j + 1; k < m && elems[k] - elems[j] < v; ++k) {
                    if (*tab->next_after(elems[k] - elems[j]) != v) continue;
                    if (*tab->next_after(elems[k] - elems[i]) == v)
                        bad.push_back({elems[i], elems[j], elems[k]});
                }
            }
        }
        return bad;
    };

    verification_report rep;
    rep.statement = verified_statement::no_triangle;
    rep.bound = bound;
    rep.checked = m < 3 ? 0 : static_cast<std::uint64_t>(m) * (m - 1) * (m - 2) / 6;
    auto chunks = run_blocks<std::vector<std::vector<std::uint64_t>>>(m, threads, scan);
    for (auto& c : chunks) rep.violations.insert(rep.violations.end(), c.begin(), c.end());
    return rep;
}

verification_report verify_twin_adjacency(s_pool& pool, std::uint64_t bound, unsigned threads) {
    if (bound < 5) throw std::invalid_argument("verify_twin_adjacency: bound must be >= 5");
    auto tab = pool.ensure(2 * bound + 2);
    auto elems = tab->elements();
    std::size_t m = tab->upper_rank(bound);

    std::vector<std::size_t> twins;  // index of the smaller prime of each pair
    for (std::size_t i = 1; i + 1 < m; ++i)
        if (elems[i + 1] == elems[i] + 2) twins.push_back(i);

    struct part {
        std::uint64_t checked = 0;
        std::vector<std::vector<std::uint64_t>> bad;
    };
    auto scan = [&](std::size_t tb, std::size_t te) {
        part res;
        for (std::size_t t = tb; t < te; ++t) {
            std::uint64_t a = elems[twins[t]], b = a + 2;
            for (std::size_t xi = 0; elems[xi] < a; ++xi) {
                std::uint64_t x = elems[xi];
                std::size_t ra = tab->upper_rank(a - x);  // rank of N(a-x)
                std::size_t rb = tab->upper_rank(b - x);
                ++res.checked;
                if (rb - ra > 1) res.bad.push_back({a, b, x});
            }
        }
        return res;
    };

    verification_report rep;
    rep.statement = verified_statement::twin_adjacency;
    rep.bound = bound;
    auto chunks = run_blocks<part>(twins.size(), threads, scan);
    for (auto& c : chunks) {
        rep.checked += c.checked;
        rep.violations.insert(rep.violations.end(), c.bad.begin(), c.bad.end());
    }
    return rep;
}

verification_report verify_lemma_adjacent(s_pool& pool, std::uint64_t t_max) {
    if (t_max < 2 || t_max % 2 != 0)
        throw std::invalid_argument("verify_lemma_adjacent: t_max must be even and >= 2");
    auto tab = pool.ensure(2 * t_max + 6);
    auto elems = tab->elements();

    verification_report rep;
    rep.statement = verified_statement::lemma_adjacent;
    rep.bound = t_max;
    std::size_t idx = tab->upper_rank(2);  // rank of N(2)
    for (std::uint64_t t = 2; t <= t_max; t += 2) {
        std::size_t next = idx;
        while (elems[next] <= t + 2) ++next;  // rank of N(t+2)
        ++rep.checked;
        if (next - idx > 1) rep.violations.push_back({t, elems[idx], elems[next]});
        idx = next;
    }
    return rep;
}

verification_report verify_bertrand_bound(s_pool& pool, std::uint64_t t_max) {
    if (t_max < 2) throw std::invalid_argument("verify_bertrand_bound: t_max must be >= 2");
    auto tab = pool.ensure(2 * t_max + 2);
    auto elems = tab->elements();

    verification_report rep;
    rep.statement = verified_statement::bertrand_bound;
    rep.bound = t_max;
    std::size_t idx = tab->upper_rank(2);
    for (std::uint64_t t = 2; t <= t_max; ++t) {
        while (elems[idx] <= t) ++idx;
        ++rep.checked;
        if (elems[idx] >= 2 * t) rep.violations.push_back({t, elems[idx]});
    }
    return rep;
}

fiber_report fiber_solutions(s_pool& pool, std::uint64_t x, std::uint64_t bound, bool include_one,
                             unsigned threads) {
    if (!is_in_s(x)) throw std::invalid_argument("fiber_solutions: x must be in S");
    if (bound == 0) throw std::invalid_argument("fiber_solutions: bound must be >= 1");

    fiber_report rep;
    rep.x = x;
    rep.bound = bound;
    rep.includes_one = include_one;
    // dot never exceeds N(bound-1) < 2*bound, so larger x has an empty fiber
    if (x == 1 || x > 2 * bound + 1) return rep;

    auto tab = pool.ensure(2 * bound + 2);
    auto elems = tab->elements();
    std::size_t m = tab->upper_rank(bound);
    auto win = edge_window(*tab, x);
    if (!win) return rep;
    auto [lo, hi] = *win;

    std::size_t b_begin = include_one ? 0 : 1;
    auto scan = [&](std::size_t bb, std::size_t be) {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> got;
        for (std::size_t bi = b_begin + bb; bi < b_begin + be; ++bi) {
            std::uint64_t b = elems[bi];
            for (std::uint64_t d = lo; d <= hi; d += 2) {
                std::uint64_t a = b + d;
                if (a > bound) break;
                if (tab->contains(a)) got.emplace_back(a, b);
            }
        }
        return got;
    };

    std::size_t nb = m > b_begin ? m - b_begin : 0;
    auto chunks =
        run_blocks<std::vector<std::pair<std::uint64_t, std::uint64_t>>>(nb, threads, scan);
    for (auto& c : chunks) rep.pairs.insert(rep.pairs.end(), c.begin(), c.end());
    std::sort(rep.pairs.begin(), rep.pairs.end());
    return rep;
}

namespace {

struct cycle_search_ctx {
    std::span<const std::uint64_t> elems;
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t start = 0;
    std::uint64_t lo = 0, hi = 0, v = 0;
    std::vector<std::size_t> path;
    std::vector<char>* used = nullptr;
    std::vector<equal_edge_cycle>* out = nullptr;
    const s_table* tab = nullptr;

    void dfs() {
        std::uint64_t u = elems[path.back()];
        std::uint64_t sv = elems[start];
        std::size_t depth = path.size();
        if (u - sv > static_cast<std::uint64_t>(n - depth + 1) * hi) return;  // cannot close

        if (depth == n - 1) {
            for_window_neighbors(elems, m, u, lo, hi, [&](std::size_t w) {
                if ((*used)[w] || w <= start) return;
                std::uint64_t wv = elems[w];
                std::uint64_t ds = wv - sv;
                if (ds < lo || ds > hi) return;                // closing edge
                if (elems[path[1]] > wv) return;               // reflection dedup
                equal_edge_cycle cyc;
                cyc.edge_value = v;
                cyc.vertices.reserve(n);
                for (std::size_t p : path) cyc.vertices.push_back(elems[p]);
                cyc.vertices.push_back(wv);
                if (!cycle_self_check(*tab, cyc)) throw std::logic_error("cycle failed self-check");
                out->push_back(std::move(cyc));
            });
            return;
        }
        for_window_neighbors(elems, m, u, lo, hi, [&](std::size_t w) {
            if ((*used)[w] || w <= start) return;
            (*used)[w] = 1;
            path.push_back(w);
            dfs();
            path.pop_back();
            (*used)[w] = 0;
        });
    }
};

}  // namespace

std::vector<equal_edge_cycle> find_equal_edge_cycles(s_pool& pool, std::size_t n,
                                                     std::uint64_t bound,
                                                     std::optional<std::uint64_t> edge,
                                                     bool include_one, unsigned threads) {
    if (n < 3) throw std::invalid_argument("find_equal_edge_cycles: n must be >= 3");
    if (edge && !is_in_s(*edge))
        throw std::invalid_argument("find_equal_edge_cycles: edge value must be in S");
    auto tab = pool.ensure(2 * bound + 2);
    auto elems = tab->elements();
    std::size_t m = tab->upper_rank(bound);
    std::size_t base = include_one ? 0 : 1;
    if (edge && *edge >= tab->bound()) return {};

    auto scan = [&](std::size_t sb, std::size_t se) {
        std::vector<equal_edge_cycle> found;
        std::vector<char> used(m, 0);
        cycle_search_ctx ctx;
        ctx.elems = elems;
        ctx.m = m;
        ctx.n = n;
        ctx.used = &used;
        ctx.out = &found;
        ctx.tab = tab.get();
        for (std::size_t s = base + sb; s < base + se; ++s) {
            ctx.start = s;
            used[s] = 1;
            for (std::size_t j = s + 1; j < m; ++j) {
                std::uint64_t d = elems[j] - elems[s];
                std::uint64_t v = *tab->next_after(d);
                if (edge && v != *edge) continue;
                auto win = edge_window(*tab, v);
                if (!win) continue;
                ctx.lo = win->first;
                ctx.hi = win->second;
                ctx.v = v;
                ctx.path = {s, j};
                used[j] = 1;
                ctx.dfs();
                used[j] = 0;
            }
            used[s] = 0;
        }
        return found;
    };

    std::size_t nstarts = m > base ? m - base : 0;
    auto chunks = run_blocks<std::vector<equal_edge_cycle>>(nstarts, threads, scan);
    std::vector<equal_edge_cycle> all;
    for (auto& c : chunks) all.insert(all.end(), std::make_move_iterator(c.begin()),
                                      std::make_move_iterator(c.end()));
    std::sort(all.begin(), all.end(), [](const equal_edge_cycle& a, const equal_edge_cycle& b) {
        std::uint64_t ma = *std::max_element(a.vertices.begin(), a.vertices.end());
        std::uint64_t mb = *std::max_element(b.vertices.begin(), b.vertices.end());
        if (ma != mb) return ma < mb;
        return a.vertices < b.vertices;
    });
    return all;
}

std::vector<equal_edge_cycle> find_quartets(s_pool& pool, std::uint64_t bound,
                                            std::optional<std::uint64_t> edge, bool include_one,
                                            unsigned threads) {
    if (bound < 7) throw std::invalid_argument("find_quartets: bound must be >= 7");
    return find_equal_edge_cycles(pool, 4, bound, edge, include_one, threads);
}

}  // namespace ncloop
