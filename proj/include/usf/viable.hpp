#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "usf/rng.hpp"
#include "usf/walk.hpp"

namespace usf {

/**
 * Viable-ray flags for one leaf z, evaluated on the tree projection with
 * lazy steps removed, over [0, tau_o+].
 *
 * Tree balls: side sets E_i / F_i (i = 1..n-1) hold child indices of gamma_i
 * other than the ray child whose edges were crossed before / after tau_z.
 * Pyramid balls: they hold quadruple indices q of gamma_i (i = 1..n) other
 * than the ray quadruple that were visited in each phase, and A_z also
 * requires the three other corners of every ray quadruple to stay unvisited.
 */
struct ViableRayReport {
    bool applicable = false;
    std::string reason;
    bool reached_z = false;
    std::uint64_t tau_z = 0;       // lazy-removed time
    std::uint64_t tau_o_plus = 0;  // lazy-removed time
    std::vector<std::uint32_t> ray_crossings;  // index i-1 for edge (gamma_{i-1}, gamma_i)
    std::vector<std::uint32_t> visits;         // index i: visits to gamma_i in [1, tau_z]
    std::vector<std::vector<std::uint32_t>> E, F;
    std::vector<bool> disjoint;
    bool A = false;
    bool L = false;
    bool B = false;
};

/// Visit cap floor(k/2) + 1 used by L_z.
inline std::uint32_t visit_cap(std::uint32_t k) { return k / 2 + 1; }

/// `walk` is the lazy-removed tree projection starting at the root.
ViableRayReport detect_viable(const Topology& topo, const std::vector<TreeNode>& walk, const TreeNode& z);
ViableRayReport detect_viable(const Topology& topo, const Trajectory& tr, const TreeNode& z);

/// The set Z_n of leaves satisfying B_z, from one scan of the walk that keeps
/// a record per visited vertex. Sorted by rank.
std::vector<TreeNode> extract_viable_leaves(const Topology& topo, const std::vector<TreeNode>& walk);
std::vector<TreeNode> extract_viable_leaves(const Topology& topo, const Trajectory& tr);

/// Closed-form floor sum_{j=0}^{floor(k/2)} (1-2/k)^j (1/k) / (j+2).
double pk_lower_bound_sum(std::uint32_t k);

/// One draw of the single-vertex there/back process at an interior ray
/// vertex of the k-regular tree: true when There, Back and E cap F = {} hold.
bool sample_pk_event(std::uint32_t k, RngStream& rng);

}  // namespace usf
