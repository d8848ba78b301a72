#include "usf/haar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "usf/wilson.hpp"

namespace usf {

namespace {

double log4k(const Topology& topo) { return std::log(4.0 * topo.k()); }

void require_pyramid(const Topology& topo) {
    if (topo.kind() != TreeKind::Pyramid) throw GraphError("Haar weights are defined on pyramid topologies only");
}

double rel_error(double log_diff) { return std::abs(std::expm1(log_diff)); }

struct Dsu {
    std::vector<std::uint32_t> up;
    explicit Dsu(std::size_t n) : up(n) { std::iota(up.begin(), up.end(), 0U); }
    std::uint32_t find(std::uint32_t x) {
        while (up[x] != x) x = up[x] = up[up[x]];
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) up[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

double haar_log_weight(const Topology& topo, const TreeNode& t) {
    require_pyramid(topo);
    return -static_cast<double>(t.depth) * log4k(topo);
}

double haar_weight(const Topology& topo, const TreeNode& t) { return std::exp(haar_log_weight(topo, t)); }

double orbit_log_ratio(const Topology& topo, const ProductVertex& x, const ProductVertex& y) {
    if (!topo.adjacent(x, y)) throw GraphError("orbit ratio needs adjacent vertices");
    if (topo.kind() == TreeKind::Tree || x.base != y.base) return 0.0;
    if (y.tree.depth == x.tree.depth + 1) return log4k(topo);
    if (x.tree.depth == y.tree.depth + 1) return -log4k(topo);
    return 0.0;
}

CocycleReport cocycle_check(const Topology& topo, const LogWeight& log_weight, std::uint64_t cap) {
    const auto g = FiniteGraph::from_topology(topo, cap);
    auto vx = [&](std::uint32_t i) { return topo.vertex_at(i); };
    CocycleReport rep;

    for (const auto& [u, v] : g.edges()) {
        const auto xu = vx(u), xv = vx(v);
        const double r = orbit_log_ratio(topo, xu, xv);
        rep.max_edge_error = std::max(rep.max_edge_error, rel_error(r - (log_weight(xu.tree) - log_weight(xv.tree))));
        ++rep.edges_checked;
    }

    // Potentials along a BFS tree; each non-tree edge closes one fundamental cycle.
    std::vector<double> phi(g.size(), 0.0);
    std::vector<std::int64_t> via(g.size(), -2);
    std::queue<std::uint32_t> q;
    via[0] = -1;
    q.push(0);
    while (!q.empty()) {
        auto u = q.front();
        q.pop();
        for (auto v : g.neighbors(u))
            if (via[v] == -2) {
                via[v] = u;
                phi[v] = phi[u] + orbit_log_ratio(topo, vx(u), vx(v));
                q.push(v);
            }
    }
    for (const auto& [u, v] : g.edges()) {
        if (via[v] == static_cast<std::int64_t>(u) || via[u] == static_cast<std::int64_t>(v)) continue;
        const double s = phi[u] + orbit_log_ratio(topo, vx(u), vx(v)) - phi[v];
        rep.max_cycle_error = std::max(rep.max_cycle_error, rel_error(s));
        ++rep.cycles_checked;
    }

    const auto nodes = *topo.tree_node_count();
    if (topo.kind() == TreeKind::Pyramid) {
        for (std::uint64_t idx = 1; idx < nodes; ++idx) {
            const auto t = topo.tree_node_at(idx);
            if (topo.corner_of(t) != 0) continue;
            for (std::uint32_t h = 0; h < topo.base().size(); ++h) {
                double s = 0.0;
                for (std::uint32_t c = 0; c < 4; ++c) {
                    ProductVertex a{{t.depth, t.rank + c}, h}, b{{t.depth, t.rank + (c + 1) % 4}, h};
                    s += orbit_log_ratio(topo, a, b);
                }
                rep.max_quad_error = std::max(rep.max_quad_error, rel_error(s));
                ++rep.quad_cycles_checked;
            }
        }
    }

    const double w0 = log_weight(topo.root());
    for (std::uint64_t idx = 0; idx < nodes; ++idx) {
        const auto t = topo.tree_node_at(idx);
        double s = 0.0;
        for (auto cur = t; cur.depth > 0; cur = topo.parent(cur))
            s += orbit_log_ratio(topo, {topo.parent(cur), 0}, {cur, 0});
        rep.max_path_error = std::max(rep.max_path_error, rel_error(s - (w0 - log_weight(t))));
        ++rep.paths_checked;
    }
    return rep;
}

std::map<std::uint32_t, std::uint64_t> tree_degree_census(const Topology& topo) {
    std::map<std::uint32_t, std::uint64_t> census;
    const auto nodes = topo.tree_node_count();
    if (!nodes) throw GraphError("ball too large to enumerate");
    for (std::uint64_t idx = 0; idx < *nodes; ++idx) ++census[topo.tree_degree(topo.tree_node_at(idx))];
    return census;
}

ClusterStats cluster_weight_stats(const Topology& topo, const std::vector<std::int64_t>& parent,
                                  std::uint32_t window_depth) {
    require_pyramid(topo);
    const auto total = topo.vertex_count();
    if (!total || parent.size() != *total) throw GraphError("forest size does not match the ball");
    const std::uint32_t hs = topo.base().size();
    // Levels are contiguous in id order, so the window is an id prefix.
    std::uint64_t limit = 0;
    for (std::uint32_t d = 0; d <= std::min(window_depth, topo.radius()); ++d) limit += *topo.level_size(d) * hs;

    Dsu dsu(limit);
    for (std::uint32_t i = 0; i < limit; ++i)
        if (parent[i] >= 0 && static_cast<std::uint64_t>(parent[i]) < limit)
            dsu.unite(i, static_cast<std::uint32_t>(parent[i]));

    std::vector<std::int64_t> slot(limit, -1);
    ClusterStats st;
    st.window_depth = window_depth;
    std::vector<std::uint64_t> quad_key;
    for (std::uint32_t i = 0; i < limit; ++i) {
        const auto r = dsu.find(i);
        const auto v = topo.vertex_at(i);
        if (slot[r] < 0) {
            // The representative is the smallest id, which has the smallest level.
            slot[r] = static_cast<std::int64_t>(st.clusters.size());
            WeightedCluster c;
            c.id = r;
            c.min_level = v.tree.depth;
            st.clusters.push_back(c);
            quad_key.push_back(v.tree.rank / 4);
        }
        auto& c = st.clusters[slot[r]];
        ++c.size;
        c.tilted_mass += std::pow(4.0 * topo.k(), static_cast<double>(c.min_level) - v.tree.depth);
        if (v.tree.depth == c.min_level) {
            ++c.min_level_count;
            if (c.min_level > 0 && v.tree.rank / 4 != quad_key[slot[r]]) c.min_level_in_one_quad = false;
        }
        if (i == 0) c.contains_root = true;
    }
    std::uint64_t mass = 0;
    for (auto& c : st.clusters) {
        c.log_weight_sum = -static_cast<double>(c.min_level) * log4k(topo) + std::log(c.tilted_mass);
        c.weight_sum = std::exp(c.log_weight_sum);
        c.truncated = c.min_level == 0;
        mass += c.size * c.min_level_count;
        st.max_mass_out = std::max(st.max_mass_out, c.min_level_count);
    }
    st.mean_mass_out = limit ? static_cast<double>(mass) / static_cast<double>(limit) : 0.0;
    return st;
}

ClusterStats sample_lightness(const Topology& topo, const FiniteGraph& g, std::uint32_t offset, RngStream& rng) {
    if (offset > topo.radius()) throw GraphError("window offset exceeds the ball radius");
    auto tree = wilson_ust(g, 0, rng);
    return cluster_weight_stats(topo, tree.parent, topo.radius() - offset);
}

LightnessRow summarize_lightness(std::uint32_t n, const std::vector<ClusterStats>& samples) {
    LightnessRow row;
    row.n = n;
    row.samples = samples.size();
    double root_sum = 0.0, tilted_sum = 0.0;
    for (const auto& s : samples)
        for (const auto& c : s.clusters) {
            if (c.contains_root) root_sum += c.weight_sum;
            row.max_min_level_count = std::max(row.max_min_level_count, c.min_level_count);
            if (c.truncated) continue;
            ++row.interior_clusters;
            tilted_sum += c.tilted_mass;
            row.interior_tilted_max = std::max(row.interior_tilted_max, c.tilted_mass);
        }
    if (row.samples) row.root_weight_mean = root_sum / static_cast<double>(row.samples);
    if (row.interior_clusters) row.interior_tilted_mean = tilted_sum / static_cast<double>(row.interior_clusters);
    return row;
}

}  // namespace usf
