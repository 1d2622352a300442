#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncloop/s_table.hpp"

// The loop operation a . b = N(|a-b|) and exhaustive checks of the four
// abelian-loop axioms (closure, commutativity, identity, self-inverse).

namespace ncloop {

struct axiom_counterexample {
    std::string axiom;  // "closure" | "commutativity" | "identity" | "self_inverse"
    std::uint64_t a = 0, b = 0;
    bool operator==(const axiom_counterexample&) const = default;
    auto tie() const { return std::tie(a, b, axiom); }
};

struct axiom_report {
    std::uint64_t bound = 0;
    bool closure_ok = false;
    bool commutativity_ok = false;
    bool identity_ok = false;
    bool self_inverse_ok = false;
    std::vector<axiom_counterexample> counterexamples;

    bool all_ok() const {
        return closure_ok && commutativity_ok && identity_ok && self_inverse_ok;
    }
    bool operator==(const axiom_report&) const = default;
};

/// a . b over a fixed table. Throws std::invalid_argument if a or b is not in S,
/// std::logic_error if the table is too small to answer.
std::uint64_t dot(const s_table& table, std::uint64_t a, std::uint64_t b);

/// a . b, auto-extending: total for any a, b in S.
std::uint64_t dot(s_pool& pool, std::uint64_t a, std::uint64_t b);

/// Exhaustively verify the four axioms over all pairs of S within [1, bound].
axiom_report check_axioms(s_pool& pool, std::uint64_t bound, unsigned threads = 1);

/// Lexicographically smallest triple of pairwise distinct a, b, c <= bound with
/// (a.b).c != a.(b.c), or nullopt when associativity cannot be broken below bound.
std::optional<std::array<std::uint64_t, 3>> find_nonassociative_witness(s_pool& pool,
                                                                        std::uint64_t bound);

}  // namespace ncloop
