#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

// Core carrier: S = {1} union {odd primes}. The table holds every element of S
// up to a bound in ascending order and answers membership/rank/successor queries.

namespace ncloop {

/// True iff n is 1 or an odd prime (2 is never in S). Trial division, total.
bool is_in_s(std::uint64_t n);

struct gap_witness {
    std::uint64_t prime = 0;
    std::uint64_t preceding_composite_run = 0;  // consecutive non-primes immediately below
    bool operator==(const gap_witness&) const = default;
};

// On-disk cache of sieved segments. One file per segment-aligned block:
//   magic "NCSV" | version u32 LE | base u64 LE | length u64 LE | bitmap
// bit i of the bitmap (LSB-first within each byte) is set iff base+i is prime.
// Purely an optimization; results are identical with or without it.
class segment_cache {
public:
    explicit segment_cache(std::filesystem::path dir);

    bool load(std::uint64_t base, std::uint64_t length, std::vector<std::uint64_t>& bits) const;
    void store(std::uint64_t base, std::uint64_t length, const std::vector<std::uint64_t>& bits) const;

    const std::filesystem::path& dir() const { return dir_; }

    static constexpr std::uint32_t version = 1;

private:
    std::filesystem::path dir_;
    std::filesystem::path file_for(std::uint64_t base, std::uint64_t length) const;
};

class s_table {
public:
    // Block of integers handled per sieve step; correctness does not depend on it.
    static constexpr std::uint64_t segment_size = std::uint64_t{1} << 20;

    /// Complete table of S up to bound (segmented sieve). bound >= 1.
    static s_table sieve_upto(std::uint64_t bound, unsigned threads = 1,
                              const segment_cache* cache = nullptr);

    std::uint64_t bound() const { return bound_; }
    std::span<const std::uint64_t> elements() const { return elems_; }
    std::size_t size() const { return elems_.size(); }
    std::uint64_t element(std::size_t i) const { return elems_[i]; }

    bool contains(std::uint64_t n) const;

    /// Zero-based index of s. Throws std::invalid_argument if s is not in the table.
    std::size_t rank(std::uint64_t s) const;

    /// True iff a and b sit at consecutive ranks (no element of S strictly between).
    bool adjacent(std::uint64_t a, std::uint64_t b) const;

    /// N(x) restricted to this table: smallest element > x, or nullopt if the
    /// answer would lie beyond the sieved range.
    std::optional<std::uint64_t> next_after(std::uint64_t x) const;

    /// Largest element < x, if any.
    std::optional<std::uint64_t> prev_before(std::uint64_t x) const;

    /// Index of the first element > x (== size() if none).
    std::size_t upper_rank(std::uint64_t x) const;

    bool operator==(const s_table&) const = default;

private:
    s_table(std::uint64_t bound, std::vector<std::uint64_t> elems)
        : bound_(bound), elems_(std::move(elems)) {}

    std::uint64_t bound_ = 0;
    std::vector<std::uint64_t> elems_;

    friend class s_pool;
};

// Thread-safe, growable holder of an s_table. Readers take immutable snapshots;
// growth swaps in a complete replacement table, so no reader ever sees a
// partially sieved range.
class s_pool {
public:
    explicit s_pool(std::uint64_t initial_bound = std::uint64_t{1} << 16, unsigned threads = 1);

    void set_threads(unsigned threads);
    void set_cache_dir(const std::filesystem::path& dir);

    std::shared_ptr<const s_table> snapshot() const;

    /// Grow (if needed) so the table covers at least `bound`; returns the table.
    std::shared_ptr<const s_table> ensure(std::uint64_t bound);

    /// N(x): smallest element of S strictly greater than x. Auto-extends the
    /// sieve when x reaches past the current bound (to max(2*bound, 2x+2)).
    std::uint64_t next_in_s(std::uint64_t x);

private:
    mutable std::mutex table_mu_;   // guards table_ pointer reads/swaps
    std::mutex grow_mu_;            // serializes growth; not held while readers snapshot
    std::shared_ptr<const s_table> table_;
    std::optional<segment_cache> cache_;
    unsigned threads_ = 1;
};

/// Smallest prime p <= limit (p in S) preceded by at least min_run consecutive
/// non-primes, together with the exact run length. min_run >= 1.
std::optional<gap_witness> gap_search(s_pool& pool, std::uint64_t min_run, std::uint64_t limit);

}  // namespace ncloop
