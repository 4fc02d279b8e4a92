#include "lambdasurf/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace lambdasurf {

int max_threads() {
    static const int cached = [] {
        int n = static_cast<int>(std::thread::hardware_concurrency());
        if (n <= 0) n = 1;
        n = std::min(n, 8);
        if (const char* env = std::getenv("LAMBDA_SURF_THREADS")) {
            char* end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (end != env) n = static_cast<int>(std::max(1L, std::min(v, 64L)));
        }
        return n;
    }();
    return cached;
}

void parallel_blocks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn,
                     std::size_t min_block) {
    if (count == 0) return;
    // Block size depends only on the problem size; threads just pick up blocks.
    const std::size_t block = std::max<std::size_t>(std::max<std::size_t>(1, min_block), count / 64);
    const int workers = max_threads();
    if (workers == 1 || count <= block) {
        for (std::size_t b = 0; b < count; b += block) fn(b, std::min(b + block, count));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(block);
            if (b >= count) return;
            fn(b, std::min(b + block, count));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers) - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

}  // namespace lambdasurf
