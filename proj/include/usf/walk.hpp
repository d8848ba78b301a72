#pragma once

#include <cstdint>
#include <vector>

#include "usf/rng.hpp"
#include "usf/topology.hpp"

namespace usf {

enum class StepKind : std::uint8_t { Tree, Base };

/// A recorded walk X_0, ..., X_T with the coordinate each transition moved.
struct Trajectory {
    std::vector<ProductVertex> vertices;
    std::vector<StepKind> kinds;  // kinds[t] classifies the step X_t -> X_{t+1}
    bool truncated = false;

    std::size_t length() const { return kinds.size(); }
    const ProductVertex& start() const { return vertices.front(); }
    const ProductVertex& end() const { return vertices.back(); }
    std::uint64_t tree_steps() const;
    std::uint64_t base_steps() const;
};

struct WalkOptions {
    std::uint64_t step_cap = 1'000'000'000ULL;
};

/// Counters kept by the streaming walk in place of the full trajectory.
struct WalkSummary {
    ProductVertex end;
    std::uint64_t steps = 0;
    std::uint64_t tree_steps = 0;
    std::uint64_t base_steps = 0;
    bool truncated = false;
};

/// Draws one uniform neighbor of `v`; `kind` receives the step coordinate.
inline ProductVertex random_step(const Topology& topo, const ProductVertex& v, RngStream& rng, StepKind& kind) {
    auto deg = topo.degree(v);
    auto i = static_cast<std::uint32_t>(rng.below(deg));
    kind = topo.is_tree_step(v, i) ? StepKind::Tree : StepKind::Base;
    return topo.neighbor(v, i);
}

/**
 * Simple random walk from `start` that stops at the first time t >= 1 with
 * stop(X_t, t) true, or after `step_cap` steps with the truncation flag set.
 * `observer(t, X_t, kind)` is invoked after every step t >= 1.
 */
template <class Stop, class Observer>
WalkSummary walk_stream(const Topology& topo, const ProductVertex& start, Stop&& stop, Observer&& observer,
                        RngStream& rng, const WalkOptions& opts = {}) {
    topo.require(start);
    WalkSummary s;
    ProductVertex v = start;
    StepKind kind{};
    while (true) {
        if (s.steps >= opts.step_cap) {
            s.truncated = true;
            break;
        }
        v = random_step(topo, v, rng, kind);
        ++s.steps;
        if (kind == StepKind::Tree)
            ++s.tree_steps;
        else
            ++s.base_steps;
        observer(s.steps, v, kind);
        if (stop(v, s.steps)) break;
    }
    s.end = v;
    return s;
}

template <class Stop>
Trajectory walk_until(const Topology& topo, const ProductVertex& start, Stop&& stop, RngStream& rng,
                      const WalkOptions& opts = {}) {
    Trajectory tr;
    tr.vertices.push_back(start);
    auto s = walk_stream(
        topo, start, stop,
        [&](std::uint64_t, const ProductVertex& v, StepKind kind) {
            tr.vertices.push_back(v);
            tr.kinds.push_back(kind);
        },
        rng, opts);
    tr.truncated = s.truncated;
    return tr;
}

/// Stop predicate for an excursion: the first return to the root bag after
/// the tree coordinate has left it.
class ReturnToRootBag {
public:
    bool operator()(const ProductVertex& v, std::uint64_t) {
        if (v.tree.depth != 0) {
            left_ = true;
            return false;
        }
        return left_;
    }

private:
    bool left_ = false;
};

/// Stop predicate: hitting a fixed vertex.
struct HitVertex {
    ProductVertex target;
    bool operator()(const ProductVertex& v, std::uint64_t) const { return v == target; }
};

/// Tree coordinate of a trajectory; base steps become lazy (stationary) steps.
struct TreeProjection {
    std::vector<TreeNode> nodes;  // Y_0..Y_T
    std::vector<bool> lazy;       // lazy[t] for step t -> t+1

    /// Y with lazy steps removed: a nearest-neighbor walk on the tree.
    std::vector<TreeNode> lazy_removed() const;
    /// time_of[s] is the original time of the s-th lazy-removed position.
    std::vector<std::uint64_t> lazy_removed_times() const;
};

TreeProjection project_tree(const Trajectory& tr);

/// Checks consecutive adjacency and step-kind consistency.
bool is_valid_trajectory(const Topology& topo, const Trajectory& tr);

}  // namespace usf
