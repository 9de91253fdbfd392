#pragma once

// Deterministic parallel Monte Carlo: work is split into a fixed number of
// blocks, each with its own substream derived from the master seed, so the
// merged result is identical for any thread count.

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace exitweight {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Substream seed for (master seed, stream label, block index).
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t label,
                                    std::uint64_t block) {
    return splitmix64(splitmix64(splitmix64(master) ^ label) ^ block);
}

inline constexpr std::size_t mc_block_count = 64;

inline unsigned default_threads() {
    unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : h;
}

/// Runs fn(block_index, trials_in_block) over mc_block_count blocks,
/// distributing `total` trials as evenly as possible. Blocks are assigned
/// to threads statically; fn must only touch per-block state.
inline void run_blocks(std::uint64_t total, unsigned threads,
                       const std::function<void(std::size_t, std::uint64_t)>& fn) {
    if (threads == 0) threads = 1;
    auto trials_in = [total](std::size_t b) {
        return total / mc_block_count + (b < total % mc_block_count ? 1 : 0);
    };
    if (threads == 1) {
        for (std::size_t b = 0; b < mc_block_count; ++b) fn(b, trials_in(b));
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t b = t; b < mc_block_count; b += threads)
                fn(b, trials_in(b));
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace exitweight
