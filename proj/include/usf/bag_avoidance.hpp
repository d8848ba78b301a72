#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "usf/indices.hpp"
#include "usf/viable.hpp"

namespace usf {

/// Proof thresholds exposed as configuration.
struct Thresholds {
    std::uint32_t shell_offset = 7;   // c: shell S_{n-c}, index range 1..n-c-1
    double visit_factor = 10.0;       // D in the visit cap D*k
    double gap_exponent = 5.0;        // base-step gap k^5
    double size_exponent = 3.0;       // bag-restricted LERW size k^3
};

/**
 * Bag-avoidance report for a there-and-back trajectory and a leaf z.
 * A_i are the times in [0, alpha_i] spent in gamma_i x H and B_i those in
 * [beta_i, tau_o+]; H(.) are the base vertices visited at those times.
 * Index vectors have length n + 1; entry 0 is unused.
 */
struct BagAvoidanceReport {
    bool applicable = false;
    std::string reason;
    ViableRayReport viable;
    RayIndices indices;
    std::vector<std::uint64_t> size_A, size_B;
    std::vector<std::vector<std::uint32_t>> H_A, H_B;
    std::vector<bool> disjoint;
    std::uint32_t terminal_base = 0;  // X_{tau_o+} = (o, terminal_base)
    bool C = false;
    /// Good_i / Prep_i for i = 1..n-c (index i); defined when n - c >= 1.
    bool chain_defined = false;
    std::vector<bool> good, prep;
};

BagAvoidanceReport detect_bag_avoidance(const Topology& topo, const Trajectory& tr, const TreeNode& z,
                                        const Thresholds& th = {});

}  // namespace usf
