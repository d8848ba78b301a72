#pragma once

#include <cstdint>
#include <vector>

#include "usf/loop_erasure.hpp"
#include "usf/parallel.hpp"
#include "usf/stats.hpp"
#include "usf/walk.hpp"

namespace usf {

struct BranchDepth {
    std::uint32_t max_depth = 0;
    bool truncated = false;
};

/// Deepest tree level on the first branch between a and b. `le` is scratch
/// space reused across calls.
BranchDepth sample_branch_depth(const Topology& topo, const ProductVertex& a, const ProductVertex& b,
                                RngStream& rng, ProductLoopErasure& le, const WalkOptions& opts = {});

/// Counts over first-branch samples; depth_counts[d] = samples whose branch
/// reaches depth d but not d + 1. Truncated samples are only counted in
/// `truncations`.
struct ReachTally {
    std::uint64_t samples = 0;
    std::uint64_t truncations = 0;
    std::vector<std::uint64_t> depth_counts;

    void merge(const ReachTally& o);
    /// Completed samples whose branch reaches depth >= d.
    std::uint64_t reaching(std::uint32_t d) const;
};

/// Samples branches between a = (o, 0) and b = (o, 1).
ReachTally reach_tally(const Topology& topo, const BatchPlan& plan, unsigned workers, std::uint64_t seed,
                       const WalkOptions& opts = {});

struct ReachEstimate {
    ReachTally tally;
    std::uint32_t target_depth = 0;
    std::uint64_t hits = 0;
    double p_hat = 0.0;
    Interval ci;
};

/// P(first branch intersects S_{n-c} x H) with a Wilson score interval.
ReachEstimate reach_probability(const Topology& topo, std::uint32_t offset, const BatchPlan& plan, unsigned workers,
                                std::uint64_t seed, const WalkOptions& opts = {});

/// Exit statistic P(branch leaves T_r x H) = P(max depth > r) for each r.
struct ExitCurve {
    std::vector<double> r;
    std::vector<std::uint64_t> hits;
    std::vector<std::uint64_t> samples;
    LineFit fit;
};

ExitCurve exit_curve(const ReachTally& tally, std::uint32_t r_min, std::uint32_t r_max);

/// One stage of the multi-source ray procedure.
struct WitnessStage {
    std::uint32_t source_index = 0;  // m: the stage walks from a_m = (o_m, h)
    std::uint32_t reached_index = 0; // j: largest ray index whose bag the path touches
    ProductVertex b;                 // last path vertex in the bag of o_j
    std::uint64_t path_length = 0;
    bool enters_fresh = false;
    bool touches_shell = false;
    bool reenters_new_base = false;
    bool returns_directly = false;
    bool good = false;
    bool truncated = false;
};

/**
 * Sources a_i = (o_i, h) sit on the ray o_1 = root, o_2, ..., o_{n+1} along
 * child 0. Stage paths are loop erasures of walks stopped on hitting the
 * union of the earlier paths (Wilson's algorithm), starting with the path
 * from a_2 to a_1, then from a_{j+1} where j is the last reached index.
 */
struct ComponentWitness {
    std::vector<WitnessStage> stages;
    std::uint32_t good_stages = 0;
    /// Lower bound 1 + #good on the number of components in the window.
    std::uint32_t component_lower_bound = 1;
};

ComponentWitness ray_component_witness(const Topology& topo, std::uint32_t h, std::uint32_t offset, RngStream& rng,
                                       const WalkOptions& opts = {});

}  // namespace usf
