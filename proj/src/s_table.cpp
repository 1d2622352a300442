#include "ncloop/s_table.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "ncloop/parallel.hpp"

namespace ncloop {

namespace {

std::uint64_t isqrt_u64(std::uint64_t n) {
    if (n == 0) return 0;
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

// Primes up to `limit` by a plain byte sieve; used for the base primes of the
// segmented sieve, so limit stays around sqrt(bound).
std::vector<std::uint64_t> base_primes_upto(std::uint64_t limit) {
    std::vector<std::uint64_t> primes;
    if (limit < 2) return primes;
    std::vector<std::uint8_t> composite(limit + 1, 0);
    for (std::uint64_t i = 2; i * i <= limit; ++i)
        if (!composite[i])
            for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    for (std::uint64_t i = 2; i <= limit; ++i)
        if (!composite[i]) primes.push_back(i);
    return primes;
}

constexpr std::uint64_t even_bits_clear = 0xAAAAAAAAAAAAAAAAull;  // bits at odd offsets set

inline void clear_bit(std::vector<std::uint64_t>& bits, std::uint64_t i) {
    bits[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
}

inline void set_bit(std::vector<std::uint64_t>& bits, std::uint64_t i) {
    bits[i >> 6] |= std::uint64_t{1} << (i & 63);
}

inline bool test_bit(const std::vector<std::uint64_t>& bits, std::uint64_t i) {
    return (bits[i >> 6] >> (i & 63)) & 1;
}

// Primality bitmap for [base, base+length): bit i <=> base+i prime.
// base must be even (segment bases are multiples of segment_size).
void sieve_segment(std::uint64_t base, std::uint64_t length,
                   std::span<const std::uint64_t> base_primes,
                   std::vector<std::uint64_t>& bits) {
    std::uint64_t words = (length + 63) / 64;
    bits.assign(words, even_bits_clear);
    std::uint64_t end = base + length;  // exclusive

    if (base == 0) {
        clear_bit(bits, 0);
        clear_bit(bits, 1);
        if (length > 2) set_bit(bits, 2);  // the only even prime
    }

    for (std::uint64_t p : base_primes) {
        if (p == 2) continue;  // even composites are already clear
        if (p * p >= end) break;
        std::uint64_t first = std::max(p * p, ((base + p - 1) / p) * p);
        if (first % 2 == 0) first += p;  // only odd multiples need marking
        for (std::uint64_t m = first; m < end; m += 2 * p) clear_bit(bits, m - base);
    }

    // zero the tail beyond `length` so cached bitmaps are canonical
    std::uint64_t spare = words * 64 - length;
    if (spare > 0) bits.back() &= ~std::uint64_t{0} >> spare;
}

// All elements of S in (lo, hi], ascending. Sieves whole aligned segments and
// reads odd entries; even numbers (including 2) never qualify.
std::vector<std::uint64_t> collect_s_range(std::uint64_t lo, std::uint64_t hi, unsigned threads,
                                           const segment_cache* cache) {
    std::vector<std::uint64_t> out;
    if (hi <= lo || hi < 3) return out;

    const std::uint64_t seg = s_table::segment_size;
    std::uint64_t first_seg = lo / seg;
    std::uint64_t last_seg = hi / seg;
    std::size_t nsegs = static_cast<std::size_t>(last_seg - first_seg + 1);
    auto base_primes = base_primes_upto(isqrt_u64(hi));

    auto do_range = [&](std::size_t sb, std::size_t se) {
        std::vector<std::uint64_t> found;
        std::vector<std::uint64_t> bits;
        for (std::size_t s = sb; s < se; ++s) {
            std::uint64_t base = (first_seg + s) * seg;
            if (!(cache && cache->load(base, seg, bits))) {
                sieve_segment(base, seg, base_primes, bits);
                if (cache) cache->store(base, seg, bits);
            }
            std::uint64_t from = std::max(base, lo + 1);
            std::uint64_t to = std::min(base + seg - 1, hi);
            if (from < 3) from = 3;
            if (from % 2 == 0) ++from;
            for (std::uint64_t n = from; n <= to; n += 2)
                if (test_bit(bits, n - base)) found.push_back(n);
        }
        return found;
    };

    auto chunks = run_blocks<std::vector<std::uint64_t>>(nsegs, threads, do_range);
    for (auto& c : chunks) out.insert(out.end(), c.begin(), c.end());
    return out;
}

}  // namespace

bool is_in_s(std::uint64_t n) {
    if (n == 1) return true;
    if (n < 3 || n % 2 == 0) return false;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

// ---------------------------------------------------------------- segment_cache

segment_cache::segment_cache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path segment_cache::file_for(std::uint64_t base, std::uint64_t length) const {
    char name[64];
    std::snprintf(name, sizeof(name), "seg-%llu-%llu.ncsv",
                  static_cast<unsigned long long>(base), static_cast<unsigned long long>(length));
    return dir_ / name;
}

namespace {

void put_u32(std::string& s, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& s, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
std::uint32_t get_u32(const char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}
std::uint64_t get_u64(const char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

}  // namespace

bool segment_cache::load(std::uint64_t base, std::uint64_t length,
                         std::vector<std::uint64_t>& bits) const {
    std::ifstream in(file_for(base, length), std::ios::binary);
    if (!in) return false;
    char header[24];
    if (!in.read(header, sizeof(header))) return false;
    if (std::memcmp(header, "NCSV", 4) != 0) return false;
    if (get_u32(header + 4) != version) return false;
    if (get_u64(header + 8) != base || get_u64(header + 16) != length) return false;

    std::uint64_t nbytes = (length + 7) / 8;
    std::vector<char> raw(nbytes);
    if (!in.read(raw.data(), static_cast<std::streamsize>(nbytes))) return false;

    bits.assign((length + 63) / 64, 0);
    for (std::uint64_t i = 0; i < nbytes; ++i) {
        auto byte = static_cast<std::uint64_t>(static_cast<unsigned char>(raw[i]));
        bits[i / 8] |= byte << (8 * (i % 8));
    }
    return true;
}

void segment_cache::store(std::uint64_t base, std::uint64_t length,
                          const std::vector<std::uint64_t>& bits) const {
    std::string blob;
    std::uint64_t nbytes = (length + 7) / 8;
    blob.reserve(24 + nbytes);
    blob.append("NCSV", 4);
    put_u32(blob, version);
    put_u64(blob, base);
    put_u64(blob, length);
    for (std::uint64_t i = 0; i < nbytes; ++i)
        blob.push_back(static_cast<char>((bits[i / 8] >> (8 * (i % 8))) & 0xff));

    // write-then-rename so concurrent sievers never read a torn file
    auto final_path = file_for(base, length);
    auto tmp = final_path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) return;  // cache failures are silent; the sieve result is already in memory
        out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    }
    std::error_code ec;
    std::filesystem::rename(tmp, final_path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
}

// -------------------------------------------------------------------- s_table

s_table s_table::sieve_upto(std::uint64_t bound, unsigned threads, const segment_cache* cache) {
    if (bound == 0) throw std::invalid_argument("sieve_upto: bound must be >= 1");
    std::vector<std::uint64_t> elems{1};
    if (bound >= 3) {
        auto primes = collect_s_range(2, bound, threads, cache);
        elems.insert(elems.end(), primes.begin(), primes.end());
    }
    return s_table(bound, std::move(elems));
}

bool s_table::contains(std::uint64_t n) const {
    return std::binary_search(elems_.begin(), elems_.end(), n);
}

std::size_t s_table::rank(std::uint64_t s) const {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), s);
    if (it == elems_.end() || *it != s) {
        throw std::invalid_argument("rank: " + std::to_string(s) +
                                    " is not an element of S within bound " + std::to_string(bound_));
    }
    return static_cast<std::size_t>(it - elems_.begin());
}

bool s_table::adjacent(std::uint64_t a, std::uint64_t b) const {
    std::size_t ra = rank(a), rb = rank(b);
    return ra > rb ? ra - rb == 1 : rb - ra == 1;
}

std::size_t s_table::upper_rank(std::uint64_t x) const {
    return static_cast<std::size_t>(std::upper_bound(elems_.begin(), elems_.end(), x) -
                                    elems_.begin());
}

std::optional<std::uint64_t> s_table::next_after(std::uint64_t x) const {
    auto it = std::upper_bound(elems_.begin(), elems_.end(), x);
    if (it == elems_.end()) return std::nullopt;
    return *it;
}

std::optional<std::uint64_t> s_table::prev_before(std::uint64_t x) const {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), x);
    if (it == elems_.begin()) return std::nullopt;
    return *(it - 1);
}

// --------------------------------------------------------------------- s_pool

s_pool::s_pool(std::uint64_t initial_bound, unsigned threads) : threads_(threads ? threads : 1) {
    std::uint64_t b = std::max<std::uint64_t>(initial_bound, 4);  // always hold {1, 3}
    table_ = std::make_shared<const s_table>(s_table::sieve_upto(b, threads_));
}

void s_pool::set_threads(unsigned threads) { threads_ = threads ? threads : 1; }

void s_pool::set_cache_dir(const std::filesystem::path& dir) {
    std::lock_guard lk(grow_mu_);
    cache_.emplace(dir);
}

std::shared_ptr<const s_table> s_pool::snapshot() const {
    std::lock_guard lk(table_mu_);
    return table_;
}

std::shared_ptr<const s_table> s_pool::ensure(std::uint64_t bound) {
    auto cur = snapshot();
    if (cur->bound() >= bound) return cur;

    std::lock_guard grow(grow_mu_);
    cur = snapshot();
    if (cur->bound() >= bound) return cur;  // another thread grew past us

    std::vector<std::uint64_t> elems(cur->elements().begin(), cur->elements().end());
    auto extra = collect_s_range(cur->bound(), bound, threads_, cache_ ? &*cache_ : nullptr);
    elems.insert(elems.end(), extra.begin(), extra.end());
    auto grown = std::shared_ptr<const s_table>(new s_table(bound, std::move(elems)));

    std::lock_guard lk(table_mu_);
    table_ = grown;
    return grown;
}

std::uint64_t s_pool::next_in_s(std::uint64_t x) {
    if (x > (std::numeric_limits<std::uint64_t>::max() - 2) / 2)
        throw std::invalid_argument("next_in_s: argument exceeds supported range");
    for (;;) {
        auto tab = snapshot();
        if (auto v = tab->next_after(x)) return *v;
        // N(x) <= 2x-1 for x >= 2 (Bertrand), so one growth always suffices
        ensure(std::max(2 * tab->bound(), 2 * x + 2));
    }
}

// ----------------------------------------------------------------- gap_search

std::optional<gap_witness> gap_search(s_pool& pool, std::uint64_t min_run, std::uint64_t limit) {
    if (min_run == 0) throw std::invalid_argument("gap_search: min_run must be >= 1");
    auto tab = pool.ensure(std::max<std::uint64_t>(limit, 4));
    auto elems = tab->elements();
    // elems[0] = 1, elems[1] = 3 (when present); runs below 3 stop at the prime 2
    for (std::size_t i = 1; i < elems.size() && elems[i] <= limit; ++i) {
        std::uint64_t p = elems[i];
        std::uint64_t run = p == 3 ? 0 : p - elems[i - 1] - 1;
        if (run >= min_run) return gap_witness{p, run};
    }
    return std::nullopt;
}

}  // namespace ncloop
