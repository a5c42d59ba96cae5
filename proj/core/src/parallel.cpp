#include "riskgrad/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace riskgrad::parallel {

namespace {

std::atomic<int> g_max_threads{0};

int env_threads() {
    if (const char* v = std::getenv("RISKGRAD_THREADS")) {
        const int n = std::atoi(v);
        if (n > 0) return n;
    }
    return 0;
}

} // namespace

int max_threads() {
    int n = g_max_threads.load();
    if (n <= 0) n = env_threads();
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return n > 0 ? n : 1;
}

void set_max_threads(int n) { g_max_threads.store(n); }

void for_each_chunk(std::size_t n,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t nchunks = (n + kChunk - 1) / kChunk;
    const int workers = std::min<std::size_t>(max_threads(), nchunks);

    if (workers <= 1 || nchunks == 1) {
        for (std::size_t c = 0; c < nchunks; ++c)
            fn(c, c * kChunk, std::min(n, (c + 1) * kChunk));
        return;
    }

    std::atomic<std::size_t> next{0};
    auto drain = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= nchunks) break;
            fn(c, c * kChunk, std::min(n, (c + 1) * kChunk));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(drain);
    drain();
    for (auto& t : pool) t.join();
}

} // namespace riskgrad::parallel
