#include "usf/reach.hpp"

#include <unordered_set>

namespace usf {

BranchDepth sample_branch_depth(const Topology& topo, const ProductVertex& a, const ProductVertex& b,
                                RngStream& rng, ProductLoopErasure& le, const WalkOptions& opts) {
    le.clear();
    le.push(a);
    auto s = walk_stream(
        topo, a, HitVertex{b}, [&](std::uint64_t, const ProductVertex& v, StepKind) { le.push(v); }, rng, opts);
    BranchDepth out;
    out.truncated = s.truncated;
    out.max_depth = le.max_depth();
    return out;
}

void ReachTally::merge(const ReachTally& o) {
    samples += o.samples;
    truncations += o.truncations;
    if (depth_counts.size() < o.depth_counts.size()) depth_counts.resize(o.depth_counts.size(), 0);
    for (std::size_t d = 0; d < o.depth_counts.size(); ++d) depth_counts[d] += o.depth_counts[d];
}

std::uint64_t ReachTally::reaching(std::uint32_t d) const {
    std::uint64_t s = 0;
    for (std::size_t i = d; i < depth_counts.size(); ++i) s += depth_counts[i];
    return s;
}

ReachTally reach_tally(const Topology& topo, const BatchPlan& plan, unsigned workers, std::uint64_t seed,
                       const WalkOptions& opts) {
    if (topo.base().size() < 2) throw GraphError("first-branch endpoints need a base graph with two vertices");
    const ProductVertex a{topo.root(), 0};
    const ProductVertex b{topo.root(), 1};
    const auto depths = topo.radius() + 1;
    return run_batched<ReachTally>(
        plan, workers, seed, [&] { return ProductLoopErasure(topo); },
        [&](ProductLoopErasure& le, RngStream& rng, std::uint64_t, ReachTally& acc) {
            if (acc.depth_counts.empty()) acc.depth_counts.assign(depths, 0);
            auto s = sample_branch_depth(topo, a, b, rng, le, opts);
            if (s.truncated) {
                ++acc.truncations;
            } else {
                ++acc.samples;
                ++acc.depth_counts[s.max_depth];
            }
        });
}

ReachEstimate reach_probability(const Topology& topo, std::uint32_t offset, const BatchPlan& plan, unsigned workers,
                                std::uint64_t seed, const WalkOptions& opts) {
    if (offset >= topo.radius()) throw GraphError("shell offset must be smaller than the ball radius");
    ReachEstimate e;
    e.tally = reach_tally(topo, plan, workers, seed, opts);
    e.target_depth = topo.radius() - offset;
    e.hits = e.tally.reaching(e.target_depth);
    e.p_hat = e.tally.samples ? static_cast<double>(e.hits) / static_cast<double>(e.tally.samples) : 0.0;
    e.ci = wilson_interval(e.hits, e.tally.samples);
    return e;
}

ExitCurve exit_curve(const ReachTally& tally, std::uint32_t r_min, std::uint32_t r_max) {
    ExitCurve c;
    for (auto r = r_min; r <= r_max; ++r) {
        c.r.push_back(r);
        c.hits.push_back(tally.reaching(r + 1));
        c.samples.push_back(tally.samples);
    }
    if (c.r.size() >= 2) c.fit = log_proportion_fit(c.r, c.hits, c.samples);
    return c;
}

ComponentWitness ray_component_witness(const Topology& topo, std::uint32_t h, std::uint32_t offset, RngStream& rng,
                                       const WalkOptions& opts) {
    if (h >= topo.base().size()) throw GraphError("witness base vertex out of range");
    const std::uint32_t n = topo.radius();
    // o_i is the depth i-1 node on the child-0 ray, which has rank 0.
    auto o = [](std::uint32_t i) { return TreeNode{i - 1, 0}; };
    auto ray_index = [](const TreeNode& t) -> std::uint32_t { return t.rank == 0 ? t.depth + 1 : 0; };
    const std::int64_t shell = static_cast<std::int64_t>(n) - static_cast<std::int64_t>(offset);

    ComponentWitness w;
    std::unordered_set<ProductVertex, ProductVertexHash> tree{{o(1), h}};
    std::uint32_t m = 2;
    while (m <= n + 1) {
        WitnessStage st;
        st.source_index = m;
        const ProductVertex src{o(m), h};
        std::vector<ProductVertex> path;
        if (tree.count(src)) {
            path.push_back(src);
        } else {
            LoopErasure<ProductVertex, ProductVertexHash> le;
            le.push(src);
            auto s = walk_stream(
                topo, src, [&](const ProductVertex& v, std::uint64_t) { return tree.count(v) != 0; },
                [&](std::uint64_t, const ProductVertex& v, StepKind) { le.push(v); }, rng, opts);
            st.truncated = s.truncated;
            path = le.path();
        }
        st.path_length = path.size();
        for (const auto& v : path) st.reached_index = std::max(st.reached_index, ray_index(v.tree));
        for (const auto& v : path)
            if (v.tree == o(st.reached_index)) st.b = v;

        const TreeNode om = o(m);
        auto in_side = [&](const TreeNode& t) {
            return t.depth >= m && topo.ancestor_at(t, om.depth) == om && topo.ancestor_at(t, m).rank != 0;
        };
        std::int64_t last_side = -1;
        for (std::size_t i = 0; i < path.size(); ++i)
            if (in_side(path[i].tree)) {
                st.enters_fresh = true;
                last_side = static_cast<std::int64_t>(i);
                if (static_cast<std::int64_t>(path[i].tree.depth) >= shell) st.touches_shell = true;
            }
        if (last_side >= 0) {
            auto re = static_cast<std::size_t>(last_side) + 1;
            if (re < path.size() && path[re].tree == om && path[re].base != h) {
                st.reenters_new_base = true;
                bool direct = re + 1 < path.size();
                for (auto i = re + 1; i < path.size() && direct; ++i)
                    direct = path[i].tree == o(m - 1) && (i > re + 1 || path[i].base == path[re].base);
                st.returns_directly = direct;
            }
        }
        st.good = st.enters_fresh && st.touches_shell && st.reenters_new_base && st.returns_directly && !st.truncated;
        if (st.good) ++w.good_stages;
        tree.insert(path.begin(), path.end());
        w.stages.push_back(st);
        if (st.truncated) break;
        m = st.reached_index + 1;
    }
    w.component_lower_bound = 1 + w.good_stages;
    return w;
}

}  // namespace usf
