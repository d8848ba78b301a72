#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "usf/topology.hpp"

namespace usf {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

/// Materialized simple undirected graph in CSR form with dense vertex ids.
class FiniteGraph {
public:
    static constexpr std::uint64_t kDefaultCap = 1'000'000;

    /// Vertex i is topo.vertex_at(i); neighbor order follows the topology.
    static FiniteGraph from_topology(const Topology& topo, std::uint64_t cap = kDefaultCap);
    static FiniteGraph from_edges(std::uint32_t n, const std::vector<Edge>& edges);

    std::uint32_t size() const { return static_cast<std::uint32_t>(offsets_.size() - 1); }
    std::span<const std::uint32_t> neighbors(std::uint32_t u) const {
        return {adj_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
    }
    std::uint32_t degree(std::uint32_t u) const { return static_cast<std::uint32_t>(offsets_[u + 1] - offsets_[u]); }
    bool adjacent(std::uint32_t u, std::uint32_t v) const;
    /// Edges (u, v) with u < v, sorted.
    std::vector<Edge> edges() const;
    std::uint64_t edge_count() const { return adj_.size() / 2; }

private:
    std::vector<std::uint64_t> offsets_;
    std::vector<std::uint32_t> adj_;
};

/// Parent-pointer spanning tree; parent[root] = -1.
struct SpanningTree {
    std::uint32_t root = 0;
    std::vector<std::int64_t> parent;

    /// Tree edges (min, max), sorted: a canonical key for the tree.
    std::vector<Edge> edges() const;
};

/// Empty string if `t` is a spanning tree of `g`, otherwise the violation.
std::string validate_spanning_tree(const FiniteGraph& g, const SpanningTree& t);

/// Vertex sequence of the unique tree path from a to b.
std::vector<std::uint32_t> tree_path(const SpanningTree& t, std::uint32_t a, std::uint32_t b);

}  // namespace usf
