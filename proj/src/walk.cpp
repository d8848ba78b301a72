#include "usf/walk.hpp"

#include <algorithm>

namespace usf {

std::uint64_t Trajectory::tree_steps() const {
    return static_cast<std::uint64_t>(std::count(kinds.begin(), kinds.end(), StepKind::Tree));
}

std::uint64_t Trajectory::base_steps() const {
    return static_cast<std::uint64_t>(std::count(kinds.begin(), kinds.end(), StepKind::Base));
}

TreeProjection project_tree(const Trajectory& tr) {
    TreeProjection p;
    p.nodes.reserve(tr.vertices.size());
    for (const auto& v : tr.vertices) p.nodes.push_back(v.tree);
    p.lazy.reserve(tr.kinds.size());
    for (auto k : tr.kinds) p.lazy.push_back(k == StepKind::Base);
    return p;
}

std::vector<TreeNode> TreeProjection::lazy_removed() const {
    std::vector<TreeNode> out;
    if (nodes.empty()) return out;
    out.push_back(nodes[0]);
    for (std::size_t t = 0; t < lazy.size(); ++t)
        if (!lazy[t]) out.push_back(nodes[t + 1]);
    return out;
}

std::vector<std::uint64_t> TreeProjection::lazy_removed_times() const {
    std::vector<std::uint64_t> out;
    if (nodes.empty()) return out;
    out.push_back(0);
    for (std::size_t t = 0; t < lazy.size(); ++t)
        if (!lazy[t]) out.push_back(t + 1);
    return out;
}

bool is_valid_trajectory(const Topology& topo, const Trajectory& tr) {
    if (tr.vertices.empty() || tr.kinds.size() + 1 != tr.vertices.size()) return false;
    for (std::size_t t = 0; t < tr.kinds.size(); ++t) {
        const auto& a = tr.vertices[t];
        const auto& b = tr.vertices[t + 1];
        if (!topo.contains(a) || !topo.contains(b) || !topo.adjacent(a, b)) return false;
        bool tree_move = a.base == b.base;
        if (tree_move != (tr.kinds[t] == StepKind::Tree)) return false;
    }
    return true;
}

}  // namespace usf
