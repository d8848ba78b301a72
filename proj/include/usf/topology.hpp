#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "usf/base_graph.hpp"

namespace usf {

enum class TreeKind { Tree, Pyramid };

const char* to_string(TreeKind kind);

/**
 * A vertex of a tree ball or pyramid ball, identified by its path from the
 * root. The path is stored as a mixed-radix integer: `rank` is the position
 * of the vertex inside its level, so child `c` of a node with rank `r` whose
 * level has branching `b` has rank `r * b + c`.
 */
struct TreeNode {
    std::uint32_t depth = 0;
    std::uint64_t rank = 0;

    friend auto operator<=>(const TreeNode&, const TreeNode&) = default;
};

/// A vertex (t, h) of the direct product with the base graph.
struct ProductVertex {
    TreeNode tree;
    std::uint32_t base = 0;

    friend auto operator<=>(const ProductVertex&, const ProductVertex&) = default;
};

struct TreeNodeHash {
    std::size_t operator()(const TreeNode& t) const noexcept {
        std::uint64_t x = t.rank * 0x9E3779B97F4A7C15ULL ^ (static_cast<std::uint64_t>(t.depth) << 56);
        x ^= x >> 31;
        return static_cast<std::size_t>(x * 0xBF58476D1CE4E5B9ULL);
    }
};

struct ProductVertexHash {
    std::size_t operator()(const ProductVertex& v) const noexcept {
        std::uint64_t x = TreeNodeHash{}(v.tree) ^ (static_cast<std::uint64_t>(v.base) * 0x94D049BB133111EBULL);
        x ^= x >> 29;
        return static_cast<std::size_t>(x);
    }
};

/**
 * Implicit, immutable graph topology: a tree ball T_n of the k-regular tree or
 * a depth-n downward cone of the pyramid graph Py^k, times a base graph H.
 *
 * No vertex storage is allocated; every query is answered arithmetically
 * from coordinates. Neighbor order is fixed: tree-steps first (parent, then
 * for pyramids the two cycle corners, then children in index order), then
 * base-steps in ascending base-vertex order.
 *
 * Pyramid children are numbered `4 * quad + corner`; corners j and j +- 1
 * (mod 4) of the same quad are joined by cycle edges.
 */
class Topology {
public:
    /// Requires k >= 3. Radius n = 0 is accepted and gives a single bag.
    static Topology build(TreeKind kind, std::uint32_t k, std::uint32_t n, BaseGraph base);

    TreeKind kind() const { return kind_; }
    std::uint32_t k() const { return k_; }
    std::uint32_t radius() const { return n_; }
    const BaseGraph& base() const { return base_; }

    /// Number of children of a node at the given depth (0 on the boundary).
    std::uint32_t branching(std::uint32_t depth) const {
        if (depth >= n_) return 0;
        if (kind_ == TreeKind::Pyramid) return 4 * k_;
        return depth == 0 ? k_ : k_ - 1;
    }

    std::uint32_t tree_degree(const TreeNode& t) const {
        std::uint32_t up = t.depth == 0 ? 0 : (kind_ == TreeKind::Pyramid ? 3 : 1);
        return up + branching(t.depth);
    }
    std::uint32_t degree(const ProductVertex& v) const { return tree_degree(v.tree) + base_.degree(); }

    TreeNode root() const { return {}; }
    TreeNode parent(const TreeNode& t) const {
        return {t.depth - 1, t.rank / branching(t.depth - 1)};
    }
    TreeNode child(const TreeNode& t, std::uint32_t index) const {
        return {t.depth + 1, t.rank * branching(t.depth) + index};
    }
    /// Index of `t` among its parent's children.
    std::uint32_t child_index(const TreeNode& t) const {
        return static_cast<std::uint32_t>(t.rank % branching(t.depth - 1));
    }

    /// i-th tree neighbor, i < tree_degree(t).
    TreeNode tree_neighbor(const TreeNode& t, std::uint32_t i) const {
        if (t.depth > 0) {
            if (i == 0) return parent(t);
            if (kind_ == TreeKind::Pyramid) {
                if (i <= 2) {
                    std::uint32_t c = child_index(t);
                    std::uint32_t corner = c & 3U;
                    std::uint32_t other = i == 1 ? (corner + 3) & 3U : (corner + 1) & 3U;
                    return {t.depth, t.rank - corner + other};
                }
                return child(t, i - 3);
            }
            return child(t, i - 1);
        }
        return child(t, i);
    }

    /// i-th neighbor, i < degree(v).
    ProductVertex neighbor(const ProductVertex& v, std::uint32_t i) const {
        std::uint32_t td = tree_degree(v.tree);
        if (i < td) return {tree_neighbor(v.tree, i), v.base};
        return {v.tree, base_.neighbor(v.base, i - td)};
    }
    bool is_tree_step(const ProductVertex& v, std::uint32_t i) const { return i < tree_degree(v.tree); }

    std::vector<ProductVertex> neighbors(const ProductVertex& v) const;
    std::vector<TreeNode> tree_neighbors(const TreeNode& t) const;
    bool adjacent(const ProductVertex& a, const ProductVertex& b) const;
    bool tree_adjacent(const TreeNode& a, const TreeNode& b) const;

    bool contains(const TreeNode& t) const;
    bool contains(const ProductVertex& v) const { return contains(v.tree) && v.base < base_.size(); }
    /// Throws GraphError when `v` lies outside the ball.
    void require(const ProductVertex& v) const;

    /// Pyramid level or tree depth.
    std::uint32_t level(const TreeNode& t) const { return t.depth; }
    bool is_leaf(const TreeNode& t) const { return t.depth == n_; }

    /// Geodesic o = gamma_0, ..., gamma_n = z. Requires depth(z) = n.
    std::vector<TreeNode> ray_to(const TreeNode& leaf) const;
    /// True when `t` equals `ancestor` or lies below it.
    bool in_subtree(const TreeNode& t, const TreeNode& ancestor) const;
    /// The ancestor of `t` at the given depth (depth <= t.depth).
    TreeNode ancestor_at(const TreeNode& t, std::uint32_t depth) const;

    std::vector<std::uint32_t> path(const TreeNode& t) const;
    TreeNode from_path(std::span<const std::uint32_t> path) const;
    /// Human-readable coordinate: `o`, `o.2.0`, pyramids as `o.1:3.0:2`.
    std::string coord_string(const TreeNode& t) const;

    std::uint32_t quad_of(const TreeNode& t) const { return child_index(t) / 4; }
    std::uint32_t corner_of(const TreeNode& t) const { return child_index(t) & 3U; }

    /// Vertices at the given depth; nullopt when not representable in 64 bits.
    std::optional<std::uint64_t> level_size(std::uint32_t depth) const;
    std::optional<std::uint64_t> tree_node_count() const { return tree_count_; }
    std::optional<std::uint64_t> vertex_count() const { return vertex_count_; }

    /// Dense breadth-first index of a tree node / product vertex. Requires the
    /// ball size to be representable (vertex_count() has a value).
    std::uint64_t tree_index(const TreeNode& t) const { return level_offset_[t.depth] + t.rank; }
    std::uint64_t vertex_key(const ProductVertex& v) const {
        return tree_index(v.tree) * base_.size() + v.base;
    }
    TreeNode tree_node_at(std::uint64_t index) const;
    ProductVertex vertex_at(std::uint64_t key) const;

    std::string describe() const;

private:
    Topology(TreeKind kind, std::uint32_t k, std::uint32_t n, BaseGraph base);

    TreeKind kind_;
    std::uint32_t k_;
    std::uint32_t n_;
    BaseGraph base_;
    std::vector<std::uint64_t> level_size_;  // saturates at UINT64_MAX
    std::vector<std::uint64_t> level_offset_;
    std::optional<std::uint64_t> tree_count_;
    std::optional<std::uint64_t> vertex_count_;
};

/**
 * Lazily populated map from product vertices to dense ids, assigned in
 * first-touch order. Ids are reproducible for an identical query sequence.
 * Not synchronized: every worker owns its own table.
 */
class VertexIndex {
public:
    std::uint64_t id(const ProductVertex& v);
    std::optional<std::uint64_t> find(const ProductVertex& v) const;
    const ProductVertex& vertex(std::uint64_t id) const { return order_.at(id); }
    std::size_t size() const { return order_.size(); }

private:
    std::unordered_map<ProductVertex, std::uint64_t, ProductVertexHash> ids_;
    std::vector<ProductVertex> order_;
};

}  // namespace usf
