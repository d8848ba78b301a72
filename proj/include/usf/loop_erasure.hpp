#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "usf/topology.hpp"

namespace usf {

/**
 * Chronological loop erasure maintained online. Each pushed vertex is either
 * appended, or, if it already lies on the current path, the path is cut back
 * to that occurrence. A position map gives O(1) revisit detection, so the
 * amortized cost per step is constant.
 */
template <class T, class Hash = std::hash<T>>
class LoopErasure {
public:
    void push(const T& v) {
        auto [it, inserted] = pos_.try_emplace(v, path_.size());
        if (inserted) {
            path_.push_back(v);
            return;
        }
        truncate(it->second + 1);
    }

    const std::vector<T>& path() const { return path_; }
    std::size_t size() const { return path_.size(); }
    bool contains(const T& v) const { return pos_.count(v) != 0; }
    void clear() {
        path_.clear();
        pos_.clear();
    }

private:
    void truncate(std::size_t keep) {
        while (path_.size() > keep) {
            pos_.erase(path_.back());
            path_.pop_back();
        }
    }

    std::vector<T> path_;
    std::unordered_map<T, std::size_t, Hash> pos_;
};

/**
 * Batch loop erasure by the last-exit decomposition: from the current vertex
 * jump past its last visit. It produces the same path as the chronological
 * erasure and serves as an independent implementation of it.
 */
template <class T, class Hash = std::hash<T>>
std::vector<T> loop_erase(const std::vector<T>& walk) {
    std::vector<T> out;
    if (walk.empty()) return out;
    std::unordered_map<T, std::size_t, Hash> last;
    for (std::size_t t = 0; t < walk.size(); ++t) last[walk[t]] = t;
    std::size_t t = 0;
    while (true) {
        out.push_back(walk[t]);
        t = last[walk[t]];
        if (t + 1 >= walk.size()) break;
        ++t;
    }
    return out;
}

/**
 * Loop erasure specialized to product vertices. Positions live in a dense
 * array when the ball is small enough to index, otherwise in a hash map.
 * Per-bag path counts |LERW cap ({t} x H)| are kept incrementally on request.
 */
class ProductLoopErasure {
public:
    static constexpr std::uint64_t kDenseLimit = 1ULL << 22;

    explicit ProductLoopErasure(const Topology& topo, bool track_bags = false);

    void push(const ProductVertex& v);
    const std::vector<ProductVertex>& path() const { return path_; }
    std::size_t size() const { return path_.size(); }
    bool contains(const ProductVertex& v) const;
    /// Number of path vertices in the bag {t} x H (requires track_bags).
    std::uint64_t bag_count(const TreeNode& t) const;
    /// Deepest tree level currently on the path.
    std::uint32_t max_depth() const;
    void clear();

private:
    static constexpr std::uint32_t kAbsent = 0xFFFFFFFFU;

    std::uint32_t position(const ProductVertex& v) const;
    void set_position(const ProductVertex& v, std::uint32_t p);
    void truncate(std::size_t keep);

    const Topology* topo_;
    bool dense_;
    bool track_bags_;
    std::vector<std::uint32_t> dense_pos_;
    std::unordered_map<ProductVertex, std::uint32_t, ProductVertexHash> sparse_pos_;
    std::unordered_map<TreeNode, std::uint64_t, TreeNodeHash> bags_;
    std::vector<ProductVertex> path_;
};

}  // namespace usf
