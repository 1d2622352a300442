#pragma once

#include <cstddef>
#include <thread>
#include <utility>
#include <vector>

namespace ncloop {

// Split [0, n) into at most `threads` contiguous blocks and run
// fn(block_begin, block_end) for each, returning the per-block results in
// block order. The merge order is fixed by position, so the combined result
// is independent of scheduling and of the thread count.
template <class R, class Fn>
std::vector<R> run_blocks(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = 1;
    std::size_t nblocks = std::min<std::size_t>(threads, n);
    if (nblocks <= 1) {
        std::vector<R> out;
        if (n > 0) out.push_back(fn(std::size_t{0}, n));
        return out;
    }
    std::vector<R> out(nblocks);
    std::vector<std::thread> workers;
    workers.reserve(nblocks);
    std::size_t chunk = n / nblocks, extra = n % nblocks, begin = 0;
    for (std::size_t b = 0; b < nblocks; ++b) {
        std::size_t end = begin + chunk + (b < extra ? 1 : 0);
        workers.emplace_back([&, b, begin, end] { out[b] = fn(begin, end); });
        begin = end;
    }
    for (auto& w : workers) w.join();
    return out;
}

inline unsigned default_thread_count() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

}  // namespace ncloop
