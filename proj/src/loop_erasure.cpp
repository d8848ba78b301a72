#include "usf/loop_erasure.hpp"

#include <algorithm>

namespace usf {

ProductLoopErasure::ProductLoopErasure(const Topology& topo, bool track_bags)
    : topo_(&topo), track_bags_(track_bags) {
    auto count = topo.vertex_count();
    dense_ = count && *count <= kDenseLimit;
    if (dense_) dense_pos_.assign(*count, kAbsent);
}

std::uint32_t ProductLoopErasure::position(const ProductVertex& v) const {
    if (dense_) return dense_pos_[topo_->vertex_key(v)];
    auto it = sparse_pos_.find(v);
    return it == sparse_pos_.end() ? kAbsent : it->second;
}

void ProductLoopErasure::set_position(const ProductVertex& v, std::uint32_t p) {
    if (dense_) {
        dense_pos_[topo_->vertex_key(v)] = p;
    } else if (p == kAbsent) {
        sparse_pos_.erase(v);
    } else {
        sparse_pos_[v] = p;
    }
}

bool ProductLoopErasure::contains(const ProductVertex& v) const { return position(v) != kAbsent; }

void ProductLoopErasure::push(const ProductVertex& v) {
    auto p = position(v);
    if (p == kAbsent) {
        set_position(v, static_cast<std::uint32_t>(path_.size()));
        path_.push_back(v);
        if (track_bags_) ++bags_[v.tree];
        return;
    }
    truncate(p + 1);
}

void ProductLoopErasure::truncate(std::size_t keep) {
    while (path_.size() > keep) {
        const auto& v = path_.back();
        set_position(v, kAbsent);
        if (track_bags_) {
            auto it = bags_.find(v.tree);
            if (--it->second == 0) bags_.erase(it);
        }
        path_.pop_back();
    }
}

std::uint64_t ProductLoopErasure::bag_count(const TreeNode& t) const {
    auto it = bags_.find(t);
    return it == bags_.end() ? 0 : it->second;
}

std::uint32_t ProductLoopErasure::max_depth() const {
    std::uint32_t d = 0;
    for (const auto& v : path_) d = std::max(d, v.tree.depth);
    return d;
}

void ProductLoopErasure::clear() { truncate(0); }

}  // namespace usf
