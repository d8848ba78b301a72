#include "usf/wilson.hpp"

#include <algorithm>
#include <numeric>

#include "usf/loop_erasure.hpp"

namespace usf {

SpanningTree wilson_ust(const FiniteGraph& g, std::uint32_t root, std::span<const std::uint32_t> order,
                        RngStream& rng) {
    const auto n = g.size();
    if (root >= n) throw GraphError("Wilson root out of range");
    std::vector<std::uint32_t> default_order;
    if (order.empty()) {
        default_order.resize(n);
        std::iota(default_order.begin(), default_order.end(), 0U);
        order = default_order;
    }
    std::vector<bool> in_tree(n, false);
    std::vector<std::int64_t> next(n, -1);
    in_tree[root] = true;
    for (auto source : order) {
        std::uint32_t u = source;
        while (!in_tree[u]) {
            auto nb = g.neighbors(u);
            if (nb.empty()) throw GraphError("graph is disconnected");
            auto w = nb[rng.below(nb.size())];
            next[u] = w;
            u = w;
        }
        for (u = source; !in_tree[u]; u = static_cast<std::uint32_t>(next[u])) in_tree[u] = true;
    }
    for (std::uint32_t v = 0; v < n; ++v)
        if (!in_tree[v]) throw GraphError("source order does not cover every vertex");
    SpanningTree t;
    t.root = root;
    t.parent = std::move(next);
    t.parent[root] = -1;
    return t;
}

std::uint64_t spanning_tree_count(const FiniteGraph& g) {
    const auto n = g.size();
    if (n > 24) throw GraphError("matrix-tree count limited to 24 vertices");
    if (n <= 1) return 1;
    const auto m = n - 1;
    std::vector<std::vector<i128>> a(m, std::vector<i128>(m, 0));
    for (std::uint32_t u = 0; u < m; ++u) {
        a[u][u] = g.degree(u);
        for (auto v : g.neighbors(u))
            if (v < m) a[u][v] -= 1;
    }
    // Fraction-free Gaussian elimination; every intermediate is an integer minor.
    i128 prev = 1;
    int sign = 1;
    for (std::uint32_t k = 0; k < m; ++k) {
        if (a[k][k] == 0) {
            std::uint32_t r = k + 1;
            while (r < m && a[r][k] == 0) ++r;
            if (r == m) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (std::uint32_t i = k + 1; i < m; ++i) {
            for (std::uint32_t j = k + 1; j < m; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    i128 det = sign * a[m - 1][m - 1];
    if (det < 0 || det > static_cast<i128>(UINT64_MAX)) throw GraphError("spanning tree count overflow");
    return static_cast<std::uint64_t>(det);
}

namespace {

class RollbackUnionFind {
public:
    explicit RollbackUnionFind(std::uint32_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), 0U);
    }
    std::uint32_t find(std::uint32_t x) const {
        while (parent_[x] != x) x = parent_[x];
        return x;
    }
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        history_.push_back({b, rank_[a] == rank_[b]});
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }
    void undo() {
        auto [b, bumped] = history_.back();
        history_.pop_back();
        auto a = parent_[b];
        parent_[b] = b;
        if (bumped) --rank_[a];
    }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> rank_;
    std::vector<std::pair<std::uint32_t, bool>> history_;
};

}  // namespace

std::uint64_t enumerate_spanning_trees(const FiniteGraph& g,
                                       const std::function<void(const std::vector<Edge>&)>& visit) {
    const auto n = g.size();
    auto edges = g.edges();
    const std::size_t need = n == 0 ? 0 : n - 1;
    RollbackUnionFind uf(n);
    std::vector<Edge> chosen;
    std::uint64_t count = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (chosen.size() == need) {
            ++count;
            visit(chosen);
            return;
        }
        if (edges.size() - i < need - chosen.size()) return;
        auto [u, v] = edges[i];
        if (uf.unite(u, v)) {
            chosen.push_back(edges[i]);
            rec(i + 1);
            chosen.pop_back();
            uf.undo();
        }
        rec(i + 1);
    };
    rec(0);
    return count;
}

std::map<std::vector<std::uint32_t>, double> exhaustive_path_marginal(const FiniteGraph& g, std::uint32_t a,
                                                                      std::uint32_t b) {
    std::map<std::vector<std::uint32_t>, std::uint64_t> counts;
    auto total = enumerate_spanning_trees(g, [&](const std::vector<Edge>& edges) {
        // Root the tree at a by BFS over its edges, then read the path to b.
        std::vector<std::vector<std::uint32_t>> adj(g.size());
        for (auto [u, v] : edges) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        std::vector<std::int64_t> parent(g.size(), -2);
        std::vector<std::uint32_t> queue{a};
        parent[a] = -1;
        for (std::size_t q = 0; q < queue.size(); ++q)
            for (auto w : adj[queue[q]])
                if (parent[w] == -2) {
                    parent[w] = queue[q];
                    queue.push_back(w);
                }
        std::vector<std::uint32_t> path;
        for (std::int64_t v = b; v >= 0; v = parent[v]) path.push_back(static_cast<std::uint32_t>(v));
        std::reverse(path.begin(), path.end());
        ++counts[path];
    });
    std::map<std::vector<std::uint32_t>, double> law;
    for (auto& [p, c] : counts) law[p] = static_cast<double>(c) / static_cast<double>(total);
    return law;
}

FirstBranch first_branch(const Topology& topo, const ProductVertex& a, const ProductVertex& b, RngStream& rng,
                         const WalkOptions& opts) {
    topo.require(a);
    topo.require(b);
    if (a == b) throw GraphError("first_branch endpoints must differ");
    FirstBranch fb;
    fb.walk = walk_until(topo, a, HitVertex{b}, rng, opts);
    LoopErasure<ProductVertex, ProductVertexHash> le;
    for (const auto& v : fb.walk.vertices) le.push(v);
    fb.path = le.path();
    return fb;
}

}  // namespace usf
