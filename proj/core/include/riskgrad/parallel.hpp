#pragma once

#include <cstddef>
#include <functional>
#include <future>
#include <vector>

namespace riskgrad::parallel {

// Fixed chunk size shared by all reductions and samplers. Results are
// combined in chunk-index order, so the outcome is identical for any
// worker count.
inline constexpr std::size_t kChunk = 1 << 16;

/// Worker bound. 0 = use hardware concurrency. Overridable via the
/// RISKGRAD_THREADS environment variable or set_max_threads().
int max_threads();
void set_max_threads(int n);

/// Runs fn(chunk_index, begin, end) over [0, n) split into kChunk-sized
/// chunks. Chunks may execute concurrently; fn must only write to
/// chunk-local or disjoint state.
void for_each_chunk(std::size_t n,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

/// Deterministic chunked sum: maps each chunk to a partial value and
/// accumulates partials in chunk order regardless of worker count.
template <typename T, typename MapFn>
T chunked_sum(std::size_t n, T zero, MapFn&& map) {
    const std::size_t nchunks = n == 0 ? 0 : (n + kChunk - 1) / kChunk;
    std::vector<T> partial(nchunks, zero);
    for_each_chunk(n, [&](std::size_t c, std::size_t b, std::size_t e) {
        partial[c] = map(b, e);
    });
    T total = zero;
    for (const T& p : partial) total += p;
    return total;
}

} // namespace riskgrad::parallel
