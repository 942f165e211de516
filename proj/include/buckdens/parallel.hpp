#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

#include "buckdens/core.hpp"

namespace buckdens {

/// Worker count used when a caller passes 0.
inline unsigned default_threads() noexcept {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Splits [begin, end) into contiguous chunks and runs body(lo, hi) on each,
/// one thread per chunk. Small ranges run inline.
template <class Body>
void parallel_for(Natural begin, Natural end, unsigned threads, Body&& body) {
    if (threads == 0) threads = default_threads();
    const Natural n = end > begin ? end - begin : 0;
    constexpr Natural kMinChunk = Natural{1} << 16;
    const Natural chunks = std::min<Natural>(threads, std::max<Natural>(1, n / kMinChunk));
    if (chunks <= 1) {
        if (n > 0) body(begin, end);
        return;
    }
    // Chunk boundaries are multiples of 64 so threads touch disjoint bitset words.
    Natural step = (n + chunks - 1) / chunks;
    step = (step + 63) / 64 * 64;
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(chunks);
    for (Natural c = 0; c < chunks; ++c) {
        const Natural lo = begin + c * step;
        const Natural hi = std::min(end, lo + step);
        if (lo >= hi) break;
        workers.emplace_back([&, c, lo, hi] {
            try {
                body(lo, hi);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace buckdens
