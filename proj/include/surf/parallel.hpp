#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace surf {

// Worker cap for internal Monte Carlo fan-out.  Defaults to 1 so every run is
// sequential and deterministic; SURF_THREADS=N opts in to N workers.
inline unsigned thread_budget() {
    const char* env = std::getenv("SURF_THREADS");
    if (!env) return 1;
    long v = std::strtol(env, nullptr, 10);
    if (v < 1) return 1;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return static_cast<unsigned>(v) > 4 * hw ? 4 * hw : static_cast<unsigned>(v);
}

// Runs body(i) for i in [0, count).  Work is split into contiguous chunks, one
// per worker.  body must only touch state indexed by i; results are then
// independent of the worker count.
inline void parallel_for(uint64_t count, const std::function<void(uint64_t)>& body) {
    unsigned workers = thread_budget();
    if (workers <= 1 || count < 2 * workers) {
        for (uint64_t i = 0; i < count; i++) body(i);
        return;
    }
    std::vector<std::thread> pool;
    uint64_t chunk = (count + workers - 1) / workers;
    for (unsigned t = 0; t < workers; t++) {
        uint64_t lo = t * chunk;
        uint64_t hi = lo + chunk < count ? lo + chunk : count;
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (uint64_t i = lo; i < hi; i++) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace surf
