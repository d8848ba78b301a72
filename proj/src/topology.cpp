#include "usf/topology.hpp"

#include <algorithm>
#include <limits>

#include "usf/int128.hpp"

namespace usf {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a == kSaturated || b == kSaturated) return kSaturated;
    u128 p = static_cast<u128>(a) * b;
    return p >= kSaturated ? kSaturated : static_cast<std::uint64_t>(p);
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    if (a == kSaturated || b == kSaturated) return kSaturated;
    return a > kSaturated - b ? kSaturated : a + b;
}

}  // namespace

const char* to_string(TreeKind kind) { return kind == TreeKind::Tree ? "tree" : "pyramid"; }

Topology Topology::build(TreeKind kind, std::uint32_t k, std::uint32_t n, BaseGraph base) {
    if (k < 3) throw GraphError("tree degree k must be at least 3");
    return Topology(kind, k, n, std::move(base));
}

Topology::Topology(TreeKind kind, std::uint32_t k, std::uint32_t n, BaseGraph base)
    : kind_(kind), k_(k), n_(n), base_(std::move(base)) {
    level_size_.resize(n_ + 1);
    level_offset_.resize(n_ + 1);
    level_size_[0] = 1;
    for (std::uint32_t d = 1; d <= n_; ++d) level_size_[d] = saturating_mul(level_size_[d - 1], branching(d - 1));
    if (level_size_[n_] == kSaturated)
        throw GraphError("ball of radius " + std::to_string(n_) + " is too large to address with 64-bit ranks");
    std::uint64_t total = 0;
    for (std::uint32_t d = 0; d <= n_; ++d) {
        level_offset_[d] = total;
        total = saturating_add(total, level_size_[d]);
    }
    if (total != kSaturated) {
        tree_count_ = total;
        auto v = saturating_mul(total, base_.size());
        if (v != kSaturated) vertex_count_ = v;
    }
}

std::optional<std::uint64_t> Topology::level_size(std::uint32_t depth) const {
    if (depth > n_) return 0;
    return level_size_[depth];
}

std::vector<TreeNode> Topology::tree_neighbors(const TreeNode& t) const {
    std::vector<TreeNode> out;
    auto deg = tree_degree(t);
    out.reserve(deg);
    for (std::uint32_t i = 0; i < deg; ++i) out.push_back(tree_neighbor(t, i));
    return out;
}

std::vector<ProductVertex> Topology::neighbors(const ProductVertex& v) const {
    require(v);
    std::vector<ProductVertex> out;
    auto deg = degree(v);
    out.reserve(deg);
    for (std::uint32_t i = 0; i < deg; ++i) out.push_back(neighbor(v, i));
    return out;
}

bool Topology::tree_adjacent(const TreeNode& a, const TreeNode& b) const {
    if (a.depth == b.depth + 1) return parent(a) == b;
    if (b.depth == a.depth + 1) return parent(b) == a;
    if (kind_ == TreeKind::Pyramid && a.depth == b.depth && a.depth > 0 && a != b) {
        if (parent(a) != parent(b) || quad_of(a) != quad_of(b)) return false;
        auto diff = (corner_of(a) + 4 - corner_of(b)) & 3U;
        return diff == 1 || diff == 3;
    }
    return false;
}

bool Topology::adjacent(const ProductVertex& a, const ProductVertex& b) const {
    if (a.base == b.base) return tree_adjacent(a.tree, b.tree);
    return a.tree == b.tree && base_.adjacent(a.base, b.base);
}

bool Topology::contains(const TreeNode& t) const {
    return t.depth <= n_ && t.rank < level_size_[t.depth];
}

void Topology::require(const ProductVertex& v) const {
    if (!contains(v))
        throw GraphError("vertex (" + coord_string(v.tree) + ", " + std::to_string(v.base) + ") lies outside " +
                         describe());
}

TreeNode Topology::ancestor_at(const TreeNode& t, std::uint32_t depth) const {
    TreeNode a = t;
    while (a.depth > depth) a = parent(a);
    return a;
}

bool Topology::in_subtree(const TreeNode& t, const TreeNode& ancestor) const {
    if (t.depth < ancestor.depth) return false;
    return ancestor_at(t, ancestor.depth) == ancestor;
}

std::vector<TreeNode> Topology::ray_to(const TreeNode& leaf) const {
    if (!contains(leaf)) throw GraphError("ray target lies outside the ball");
    if (leaf.depth != n_) throw GraphError("ray target must be a leaf at depth " + std::to_string(n_));
    std::vector<TreeNode> ray(n_ + 1);
    TreeNode t = leaf;
    for (std::uint32_t d = n_;; --d) {
        ray[d] = t;
        if (d == 0) break;
        t = parent(t);
    }
    return ray;
}

std::vector<std::uint32_t> Topology::path(const TreeNode& t) const {
    std::vector<std::uint32_t> p(t.depth);
    TreeNode cur = t;
    while (cur.depth > 0) {
        p[cur.depth - 1] = child_index(cur);
        cur = parent(cur);
    }
    return p;
}

TreeNode Topology::from_path(std::span<const std::uint32_t> p) const {
    if (p.size() > n_) throw GraphError("path longer than the ball radius");
    TreeNode t = root();
    for (auto c : p) {
        if (c >= branching(t.depth)) throw GraphError("child index out of range in path");
        t = child(t, c);
    }
    return t;
}

std::string Topology::coord_string(const TreeNode& t) const {
    std::string s = "o";
    if (t.depth > n_) return s + "?";
    for (auto c : path(t)) {
        s += '.';
        if (kind_ == TreeKind::Pyramid)
            s += std::to_string(c / 4) + ":" + std::to_string(c % 4);
        else
            s += std::to_string(c);
    }
    return s;
}

TreeNode Topology::tree_node_at(std::uint64_t index) const {
    auto it = std::upper_bound(level_offset_.begin(), level_offset_.end(), index);
    auto depth = static_cast<std::uint32_t>(std::distance(level_offset_.begin(), it) - 1);
    TreeNode t{depth, index - level_offset_[depth]};
    if (!contains(t)) throw GraphError("tree index out of range");
    return t;
}

ProductVertex Topology::vertex_at(std::uint64_t key) const {
    return {tree_node_at(key / base_.size()), static_cast<std::uint32_t>(key % base_.size())};
}

std::string Topology::describe() const {
    return std::string(kind_ == TreeKind::Tree ? "T" : "Py") + "_" + std::to_string(n_) + "(k=" +
           std::to_string(k_) + ") x " + base_.label();
}

std::uint64_t VertexIndex::id(const ProductVertex& v) {
    auto [it, inserted] = ids_.try_emplace(v, order_.size());
    if (inserted) order_.push_back(v);
    return it->second;
}

std::optional<std::uint64_t> VertexIndex::find(const ProductVertex& v) const {
    auto it = ids_.find(v);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

}  // namespace usf
