#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "usf/walk.hpp"

namespace usf {

inline constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

/**
 * Stopping indices of a there-and-back trajectory along a ray
 * o = gamma_0, ..., gamma_n = z.
 *
 * alpha[i] is the last time before tau_z in the bag gamma_i x H and beta[i]
 * the first time after tau_z in it, with alpha[n] = beta[n] = tau_z and
 * beta[0] = tau_o+. The *_tree / *_base arrays count the tree and base steps
 * taken strictly before the corresponding time. Every bag along the ray is a
 * cut set, so all entries are defined once the shape is conforming.
 */
struct RayIndices {
    std::uint64_t tau_z = 0;
    std::uint64_t tau_o_plus = 0;
    std::vector<std::uint64_t> alpha, beta;
    std::vector<std::uint64_t> alpha_tree, alpha_base, beta_tree, beta_base;
};

/// RayIndices or the reason the trajectory does not have the required shape.
struct RayIndicesResult {
    bool applicable = false;
    std::string reason;
    RayIndices indices;

    explicit operator bool() const { return applicable; }
};

/// tau_o+ is the first return to the root bag after the tree coordinate left it.
RayIndicesResult ray_indices(const Trajectory& tr, const std::vector<TreeNode>& ray);

/// First return time to the root bag after leaving it, or kNever.
std::uint64_t root_bag_return_time(const Trajectory& tr);

/**
 * Last-entrance indices along a ray gamma_0, ..., gamma_r for a walk from a
 * to b. An entrance into a bag at time t means X_t is in the bag and either
 * t = 0 or X_{t-1} is not. beta_r is the last entrance into gamma_r x H
 * (kNever if none); beta[i] is the last entrance into gamma_i x H before
 * beta_r and kappa[i] the first exit after it. phi[i] is the first entrance
 * into gamma_i x H after beta_r and psi[i] the first later time in a bag
 * gamma_{i-1} or gamma_{i+1}, capped at the end of the trajectory (so
 * psi[i] = phi[i] only when phi[i] is the final time). Arrays
 * are indexed i = 0..r-1 and hold kNever where undefined.
 */
struct LastEntranceIndices {
    bool reached = false;
    std::uint64_t beta_r = kNever;
    std::vector<std::uint64_t> beta, kappa, phi, psi;
};

LastEntranceIndices last_entrance_indices(const Trajectory& tr, const std::vector<TreeNode>& ray);

}  // namespace usf
