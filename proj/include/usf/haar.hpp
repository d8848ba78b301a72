#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "usf/finite_graph.hpp"
#include "usf/rng.hpp"
#include "usf/topology.hpp"

namespace usf {

/// log mu(Gamma_x) = -level(x) log(4k) on Py^k x H. Trees are rejected.
double haar_log_weight(const Topology& topo, const TreeNode& t);
double haar_weight(const Topology& topo, const TreeNode& t);

/**
 * log(|Gamma_x y| / |Gamma_y x|) for adjacent x, y, from orbit sizes: on
 * Py^k the stabilizer of an apex moves a base corner within an orbit of 4k
 * while the corner's stabilizer fixes the apex. Cycle and base edges join
 * vertices of one level and give 0; every ratio on T^k x H is 1.
 */
double orbit_log_ratio(const Topology& topo, const ProductVertex& x, const ProductVertex& y);

using LogWeight = std::function<double(const TreeNode&)>;

struct CocycleReport {
    std::uint64_t edges_checked = 0;
    std::uint64_t cycles_checked = 0;  // fundamental cycles of the ball graph
    std::uint64_t quad_cycles_checked = 0;
    std::uint64_t paths_checked = 0;
    double max_edge_error = 0.0;   // |ratio - w(x)/w(y)| relative
    double max_cycle_error = 0.0;  // |product around cycle - 1|
    double max_quad_error = 0.0;
    double max_path_error = 0.0;   // |product o -> v - (4k)^{level v}| relative
    bool ok(double tol = 1e-12) const {
        return max_edge_error <= tol && max_cycle_error <= tol && max_quad_error <= tol && max_path_error <= tol;
    }
};

/// Exhaustive over the materialized ball: every edge ratio against the
/// weight ratio, every fundamental cycle of a BFS tree (which generate all
/// cycles), every C_4 of a quadruple, and every root-to-vertex tree path.
CocycleReport cocycle_check(const Topology& topo, const LogWeight& log_weight,
                            std::uint64_t cap = FiniteGraph::kDefaultCap);

/// Tree degree -> number of tree nodes of the ball with that degree.
std::map<std::uint32_t, std::uint64_t> tree_degree_census(const Topology& topo);

struct WeightedCluster {
    std::uint32_t id = 0;
    std::uint64_t size = 0;
    std::uint32_t min_level = 0;
    std::uint64_t min_level_count = 0;  // |M(C)|
    bool min_level_in_one_quad = true;  // M(C) sits in the bags of one quadruple (or the root bag)
    /// sum_{y in C} (4k)^{min_level - level(y)}: the tilted mass received by a vertex of M(C).
    double tilted_mass = 0.0;
    double log_weight_sum = 0.0;
    double weight_sum = 0.0;
    bool contains_root = false;
    /// The cluster reaches level 0, where the window cuts off the part of
    /// Py^k above the root.
    bool truncated = false;
};

struct ClusterStats {
    std::vector<WeightedCluster> clusters;
    std::uint32_t window_depth = 0;
    /// Mass sent out per vertex in the min-level transport is |M(C(x))|.
    double mean_mass_out = 0.0;
    std::uint64_t max_mass_out = 0;
};

/**
 * Components of the forest restricted to levels <= window_depth. `parent`
 * is indexed by FiniteGraph ids (vertex i = topo.vertex_at(i)); -1 marks a
 * root. Clusters are numbered by their smallest vertex id.
 */
ClusterStats cluster_weight_stats(const Topology& topo, const std::vector<std::int64_t>& parent,
                                  std::uint32_t window_depth);

/// UST of the ball (Wilson, rooted at (o, 0)) cut to levels <= n - offset.
ClusterStats sample_lightness(const Topology& topo, const FiniteGraph& g, std::uint32_t offset, RngStream& rng);

struct LightnessRow {
    std::uint32_t n = 0;
    std::uint64_t samples = 0;
    double root_weight_mean = 0.0;
    std::uint64_t interior_clusters = 0;  // clusters not reaching level 0
    double interior_tilted_mean = 0.0;
    double interior_tilted_max = 0.0;
    std::uint64_t max_min_level_count = 0;
};

LightnessRow summarize_lightness(std::uint32_t n, const std::vector<ClusterStats>& samples);

}  // namespace usf
