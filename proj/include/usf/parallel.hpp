#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "usf/rng.hpp"

namespace usf {

/// Replicas are grouped into fixed-size batches; batch b draws from stream b.
struct BatchPlan {
    std::uint64_t replicas = 0;
    std::uint64_t batch_size = 4096;
    std::uint64_t batches() const { return (replicas + batch_size - 1) / batch_size; }
};

/// Requested worker count, overridden by USF_LAB_WORKERS; 0 means all cores.
inline unsigned resolve_workers(unsigned requested) {
    if (const char* env = std::getenv("USF_LAB_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) requested = static_cast<unsigned>(v);
    }
    if (requested == 0) requested = std::max(1U, std::thread::hardware_concurrency());
    return requested;
}

/**
 * Runs `plan.replicas` replicas over `workers` threads. Each batch gets a
 * fresh accumulator and RngStream(seed, batch index); batch results are
 * merged in batch order, so the outcome does not depend on the worker count
 * or scheduling. `make_state()` builds per-worker scratch state and
 * `body(state, rng, replica, acc)` runs one replica.
 */
template <class Acc, class MakeState, class Body>
Acc run_batched(const BatchPlan& plan, unsigned workers, std::uint64_t seed, MakeState make_state, Body body) {
    const auto nb = plan.batches();
    std::vector<Acc> partial(nb);
    std::atomic<std::uint64_t> cursor{0};
    auto work = [&]() {
        auto state = make_state();
        while (true) {
            auto b = cursor.fetch_add(1);
            if (b >= nb) break;
            RngStream rng(seed, b);
            auto lo = b * plan.batch_size;
            auto hi = std::min(plan.replicas, lo + plan.batch_size);
            for (auto r = lo; r < hi; ++r) body(state, rng, r, partial[b]);
        }
    };
    workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(nb, 1))));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    Acc total{};
    for (auto& p : partial) total.merge(p);
    return total;
}

}  // namespace usf
