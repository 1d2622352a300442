#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ncloop/s_table.hpp"

// Theorem verifiers and conjecture searches: absorbing partners, equal-edge
// chains and cycles, triangle impossibility, twin adjacency, N(t)/N(t+2)
// adjacency, fibers of the dot operation.

namespace ncloop {

// Ordered, pairwise distinct elements whose adjacent dot products all equal
// edge_value. Arithmetic chains additionally carry their common difference.
struct chain {
    std::vector<std::uint64_t> elements;
    std::uint64_t edge_value = 0;
    bool is_arithmetic = false;
    std::optional<std::uint64_t> common_difference;
    bool operator==(const chain&) const = default;
};

// Cyclic sequence of distinct elements with one common edge value, stored in
// canonical form: minimum vertex first, then the direction whose second vertex
// is smaller (kills rotations and reflections).
struct equal_edge_cycle {
    std::vector<std::uint64_t> vertices;
    std::uint64_t edge_value = 0;
    bool operator==(const equal_edge_cycle&) const = default;
};

struct fiber_report {
    std::uint64_t x = 0;
    std::uint64_t bound = 0;
    bool includes_one = false;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;  // a > b, dot(a,b) == x
    std::size_t count() const { return pairs.size(); }
    bool operator==(const fiber_report&) const = default;
};

enum class verified_statement { no_triangle, twin_adjacency, lemma_adjacent, bertrand_bound };

struct verification_report {
    verified_statement statement = verified_statement::no_triangle;
    std::uint64_t bound = 0;  // range covered (t_max for the lemma/bertrand forms)
    std::uint64_t checked = 0;
    std::vector<std::vector<std::uint64_t>> violations;
    bool ok() const { return violations.empty(); }
    bool operator==(const verification_report&) const = default;
};

/// Smallest a in S, s <= a <= limit, with a . s = a (i.e. N(a-s) = a).
std::optional<std::uint64_t> absorbing_partner(s_pool& pool, std::uint64_t s, std::uint64_t limit);

/// Arithmetic progression of n odd primes <= bound, minimal by (first element,
/// common difference); min_start restricts the first element.
std::optional<chain> find_ap_chain(s_pool& pool, std::size_t n, std::uint64_t bound,
                                   std::uint64_t min_start = 0);

/// Lexicographically minimal sequence of n distinct odd primes <= bound whose
/// adjacent dot products are all equal (to `edge`, when given).
std::optional<chain> find_equal_edge_path(s_pool& pool, std::size_t n, std::uint64_t bound,
                                          std::optional<std::uint64_t> edge = std::nullopt);

/// No a < b < c <= bound has a.b = b.c = a.c (expected: zero violations).
verification_report verify_no_equal_triangle(s_pool& pool, std::uint64_t bound,
                                             unsigned threads = 1);

/// For twin primes (a, a+2) up to bound and every x in S below a, a.x and
/// (a+2).x are equal or adjacent in S (expected: zero violations).
verification_report verify_twin_adjacency(s_pool& pool, std::uint64_t bound, unsigned threads = 1);

/// For even t <= t_max, N(t) and N(t+2) are equal or consecutive in S.
verification_report verify_lemma_adjacent(s_pool& pool, std::uint64_t t_max);

/// N(t) < 2t for all integers 2 <= t <= t_max (Bertrand-derived bound).
verification_report verify_bertrand_bound(s_pool& pool, std::uint64_t t_max);

/// All pairs a > b within bound with a . b = x; b = 1 only when include_one.
fiber_report fiber_solutions(s_pool& pool, std::uint64_t x, std::uint64_t bound, bool include_one,
                             unsigned threads = 1);

/// All canonical n-cycles (n >= 3) with a uniform edge value over vertices
/// <= bound; only cycle edges are constrained, chords are free. Sorted by
/// (max vertex, vertex sequence).
std::vector<equal_edge_cycle> find_equal_edge_cycles(s_pool& pool, std::size_t n,
                                                     std::uint64_t bound,
                                                     std::optional<std::uint64_t> edge = std::nullopt,
                                                     bool include_one = true, unsigned threads = 1);

/// find_equal_edge_cycles specialized to quartets (n = 4).
std::vector<equal_edge_cycle> find_quartets(s_pool& pool, std::uint64_t bound,
                                            std::optional<std::uint64_t> edge = std::nullopt,
                                            bool include_one = true, unsigned threads = 1);

/// Canonical form of a cyclic vertex sequence (idempotent; invariant under
/// rotation and reflection).
std::vector<std::uint64_t> canonical_cycle(const std::vector<std::uint64_t>& vertices);

}  // namespace ncloop
