#pragma once

#include <cstdint>
#include <vector>

#include "usf/bag_avoidance.hpp"
#include "usf/indices.hpp"

namespace usf {

/**
 * Avoid_i report along a ray gamma_0..gamma_r for a walk from a to b.
 * sizes[i] = |LERW_{kappa_i} cap (gamma_i x H)|, a bag is good when this is
 * at least k^size_exponent, and avoid[i] says that LERW_{kappa_i} misses
 * every vertex the walk visits during [phi_i, psi_i].
 */
struct AvoidReport {
    LastEntranceIndices indices;
    std::vector<std::uint64_t> sizes;
    std::vector<bool> good_bag;
    std::vector<bool> avoid;
    std::uint32_t good_bags = 0;
    bool all_avoid = false;
};

AvoidReport detect_avoid(const Topology& topo, const Trajectory& tr, const std::vector<TreeNode>& ray,
                         const Thresholds& th = {});

/// Union-bound envelope 2k (1 - 1/(2k))^(r-1) for P(all Avoid_i).
double avoid_envelope(std::uint32_t k, std::uint32_t r);

}  // namespace usf
