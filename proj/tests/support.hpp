#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "usf/topology.hpp"
#include "usf/walk.hpp"

namespace usf::test {

inline std::string fixture(const std::string& name) { return std::string(USF_FIXTURE_DIR) + "/" + name; }

/// Builds a trajectory from a vertex list, classifying each step by which
/// coordinate changed.
inline Trajectory make_trajectory(const std::vector<ProductVertex>& vs) {
    Trajectory tr;
    tr.vertices = vs;
    for (std::size_t t = 0; t + 1 < vs.size(); ++t)
        tr.kinds.push_back(vs[t].tree == vs[t + 1].tree ? StepKind::Base : StepKind::Tree);
    return tr;
}

/// Lifts a tree walk into the bag of base vertex h.
inline Trajectory lift(const std::vector<TreeNode>& nodes, std::uint32_t h = 0) {
    std::vector<ProductVertex> vs;
    for (const auto& t : nodes) vs.push_back({t, h});
    return make_trajectory(vs);
}

/// Tree node reached from the root by the given child indices.
inline TreeNode node(const Topology& topo, std::initializer_list<std::uint32_t> path) {
    std::vector<std::uint32_t> p(path);
    return topo.from_path(p);
}

/// |x - mean| <= z * se with a small absolute slack for se == 0.
inline bool within_sigma(double x, double mean, double se, double z = 3.0) {
    return std::abs(x - mean) <= z * se + 1e-12;
}

}  // namespace usf::test
