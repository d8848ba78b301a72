#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "usf/finite_graph.hpp"
#include "usf/rng.hpp"
#include "usf/walk.hpp"

namespace usf {

/**
 * Wilson's algorithm: walks from each source in `order` that is not yet in
 * the tree, keeping only the last exit from every vertex (which is the loop
 * erasure), until the walk hits the tree. An empty order means 0..V-1.
 */
SpanningTree wilson_ust(const FiniteGraph& g, std::uint32_t root, std::span<const std::uint32_t> order,
                        RngStream& rng);

inline SpanningTree wilson_ust(const FiniteGraph& g, std::uint32_t root, RngStream& rng) {
    return wilson_ust(g, root, {}, rng);
}

/// Exact number of spanning trees via an integer Bareiss determinant of a
/// reduced Laplacian. Limited to 24 vertices.
std::uint64_t spanning_tree_count(const FiniteGraph& g);

/// Calls visit(edges) for every spanning tree (backtracking over edge subsets
/// with a rollback union-find). Returns the number of trees.
std::uint64_t enumerate_spanning_trees(const FiniteGraph& g,
                                       const std::function<void(const std::vector<Edge>&)>& visit);

/// Exact UST law of the tree path from a to b, by enumeration.
std::map<std::vector<std::uint32_t>, double> exhaustive_path_marginal(const FiniteGraph& g, std::uint32_t a,
                                                                      std::uint32_t b);

struct FirstBranch {
    std::vector<ProductVertex> path;
    Trajectory walk;
};

/// Loop erasure of the walk from a stopped at its first visit to b: the UST
/// path between a and b.
FirstBranch first_branch(const Topology& topo, const ProductVertex& a, const ProductVertex& b, RngStream& rng,
                         const WalkOptions& opts = {});

}  // namespace usf
