#include "usf/finite_graph.hpp"

#include <algorithm>
#include <string>

namespace usf {

FiniteGraph FiniteGraph::from_topology(const Topology& topo, std::uint64_t cap) {
    auto count = topo.vertex_count();
    if (!count || *count > cap)
        throw GraphError(topo.describe() + " exceeds the materialization cap of " + std::to_string(cap) +
                         " vertices");
    FiniteGraph g;
    g.offsets_.reserve(*count + 1);
    g.offsets_.push_back(0);
    for (std::uint64_t i = 0; i < *count; ++i) {
        auto v = topo.vertex_at(i);
        auto deg = topo.degree(v);
        for (std::uint32_t j = 0; j < deg; ++j) g.adj_.push_back(static_cast<std::uint32_t>(topo.vertex_key(topo.neighbor(v, j))));
        g.offsets_.push_back(g.adj_.size());
    }
    return g;
}

FiniteGraph FiniteGraph::from_edges(std::uint32_t n, const std::vector<Edge>& edges) {
    std::vector<std::vector<std::uint32_t>> lists(n);
    for (auto [u, v] : edges) {
        if (u >= n || v >= n || u == v) throw GraphError("invalid edge in finite graph");
        lists[u].push_back(v);
        lists[v].push_back(u);
    }
    FiniteGraph g;
    g.offsets_.push_back(0);
    for (auto& l : lists) {
        std::sort(l.begin(), l.end());
        if (std::adjacent_find(l.begin(), l.end()) != l.end()) throw GraphError("repeated edge in finite graph");
        g.adj_.insert(g.adj_.end(), l.begin(), l.end());
        g.offsets_.push_back(g.adj_.size());
    }
    return g;
}

bool FiniteGraph::adjacent(std::uint32_t u, std::uint32_t v) const {
    auto n = neighbors(u);
    return std::find(n.begin(), n.end(), v) != n.end();
}

std::vector<Edge> FiniteGraph::edges() const {
    std::vector<Edge> out;
    for (std::uint32_t u = 0; u < size(); ++u)
        for (auto v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Edge> SpanningTree::edges() const {
    std::vector<Edge> out;
    for (std::size_t v = 0; v < parent.size(); ++v) {
        if (parent[v] < 0) continue;
        auto p = static_cast<std::uint32_t>(parent[v]);
        auto u = static_cast<std::uint32_t>(v);
        out.emplace_back(std::min(u, p), std::max(u, p));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string validate_spanning_tree(const FiniteGraph& g, const SpanningTree& t) {
    auto n = g.size();
    if (t.parent.size() != n) return "parent array has wrong length";
    if (t.root >= n || t.parent[t.root] != -1) return "root is not marked with parent -1";
    std::size_t edges = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (v == t.root) continue;
        auto p = t.parent[v];
        if (p < 0 || p >= static_cast<std::int64_t>(n)) return "vertex " + std::to_string(v) + " has no parent";
        if (!g.adjacent(v, static_cast<std::uint32_t>(p)))
            return "edge " + std::to_string(v) + "-" + std::to_string(p) + " is not in the graph";
        ++edges;
    }
    if (edges + 1 != n) return "edge count is not vertex count minus one";
    // Every vertex must reach the root; with n-1 edges that also rules out cycles.
    std::vector<std::uint8_t> state(n, 0);  // 0 unknown, 1 on stack, 2 reaches root
    state[t.root] = 2;
    std::vector<std::uint32_t> stack;
    for (std::uint32_t v = 0; v < n; ++v) {
        std::uint32_t u = v;
        while (state[u] == 0) {
            state[u] = 1;
            stack.push_back(u);
            u = static_cast<std::uint32_t>(t.parent[u]);
        }
        if (state[u] == 1) return "parent pointers contain a cycle";
        for (auto w : stack) state[w] = 2;
        stack.clear();
    }
    return {};
}

std::vector<std::uint32_t> tree_path(const SpanningTree& t, std::uint32_t a, std::uint32_t b) {
    auto to_root = [&](std::uint32_t v) {
        std::vector<std::uint32_t> chain{v};
        while (t.parent[chain.back()] >= 0) chain.push_back(static_cast<std::uint32_t>(t.parent[chain.back()]));
        return chain;
    };
    auto ca = to_root(a);
    auto cb = to_root(b);
    while (ca.size() > 1 && cb.size() > 1 && ca[ca.size() - 2] == cb[cb.size() - 2]) {
        ca.pop_back();
        cb.pop_back();
    }
    // ca.back() == cb.back() is the meeting vertex.
    std::vector<std::uint32_t> path(ca.begin(), ca.end());
    for (auto it = cb.rbegin() + 1; it != cb.rend(); ++it) path.push_back(*it);
    return path;
}

}  // namespace usf
