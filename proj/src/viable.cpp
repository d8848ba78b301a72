#include "usf/viable.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace usf {

namespace {

std::uint64_t first_root_return(const std::vector<TreeNode>& walk) {
    for (std::uint64_t t = 1; t < walk.size(); ++t)
        if (walk[t].depth == 0) return t;
    return walk.size();
}

void sort_unique(std::vector<std::uint32_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool intersects(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return true;
        if (a[i] < b[j])
            ++i;
        else
            ++j;
    }
    return false;
}

void require_leaf(const Topology& topo, const TreeNode& z) {
    if (!topo.contains(z) || !topo.is_leaf(z)) throw GraphError("viable-ray target must be a leaf of the ball");
}

}  // namespace

ViableRayReport detect_viable(const Topology& topo, const std::vector<TreeNode>& walk, const TreeNode& z) {
    require_leaf(topo, z);
    ViableRayReport rep;
    if (walk.empty() || walk[0] != topo.root()) {
        rep.reason = "walk does not start at the root";
        return rep;
    }
    const auto tau_o = first_root_return(walk);
    if (tau_o == walk.size()) {
        rep.reason = "walk never returns to the root";
        return rep;
    }
    rep.applicable = true;
    rep.tau_o_plus = tau_o;
    const auto ray = topo.ray_to(z);
    const std::uint32_t n = topo.radius();
    const bool pyramid = topo.kind() == TreeKind::Pyramid;
    auto on_ray = [&](const TreeNode& v) { return v.depth <= n && ray[v.depth] == v; };

    rep.tau_z = tau_o;
    for (std::uint64_t t = 0; t <= tau_o; ++t)
        if (walk[t] == z) {
            rep.tau_z = t;
            rep.reached_z = true;
            break;
        }

    rep.ray_crossings.assign(n, 0);
    rep.visits.assign(n + 1, 0);
    rep.E.assign(n + 1, {});
    rep.F.assign(n + 1, {});
    std::vector<bool> other_corner(n + 1, false);

    for (std::uint64_t t = 1; t <= rep.tau_z; ++t)
        if (on_ray(walk[t])) ++rep.visits[walk[t].depth];

    for (std::uint64_t t = 0; t < tau_o; ++t) {
        const auto& a = walk[t];
        const auto& b = walk[t + 1];
        if (a.depth == b.depth) continue;  // cycle edge; handled by the corner scan
        const auto& child = a.depth > b.depth ? a : b;
        const auto& par = a.depth > b.depth ? b : a;
        if (on_ray(child)) {
            ++rep.ray_crossings[child.depth - 1];
            continue;
        }
        if (!pyramid && par.depth >= 1 && par.depth < n && on_ray(par)) {
            auto& side = t < rep.tau_z ? rep.E[par.depth] : rep.F[par.depth];
            side.push_back(topo.child_index(child));
        }
    }
    if (pyramid) {
        for (std::uint64_t t = 0; t <= tau_o; ++t) {
            const auto& v = walk[t];
            if (v.depth == 0 || on_ray(v)) continue;
            auto par = topo.parent(v);
            if (!on_ray(par)) continue;
            auto i = par.depth;
            if (topo.quad_of(v) == topo.quad_of(ray[i + 1])) {
                other_corner[i + 1] = true;
            } else if (i >= 1) {
                auto& side = t < rep.tau_z ? rep.E[i] : rep.F[i];
                side.push_back(topo.quad_of(v));
            }
        }
    }

    rep.A = rep.reached_z;
    for (std::uint32_t i = 1; i <= n; ++i)
        if (rep.ray_crossings[i - 1] != 2 || other_corner[i]) rep.A = false;
    rep.L = rep.reached_z;
    for (std::uint32_t i = 1; i <= n; ++i)
        if (rep.visits[i] > visit_cap(topo.k())) rep.L = false;
    rep.disjoint.assign(n + 1, true);
    const std::uint32_t last = pyramid ? n : (n == 0 ? 0 : n - 1);
    bool all_disjoint = true;
    for (std::uint32_t i = 1; i <= last; ++i) {
        sort_unique(rep.E[i]);
        sort_unique(rep.F[i]);
        rep.disjoint[i] = !intersects(rep.E[i], rep.F[i]);
        all_disjoint = all_disjoint && rep.disjoint[i];
    }
    rep.B = rep.A && rep.L && all_disjoint;
    return rep;
}

ViableRayReport detect_viable(const Topology& topo, const Trajectory& tr, const TreeNode& z) {
    return detect_viable(topo, project_tree(tr).lazy_removed(), z);
}

namespace {

struct NodeRecord {
    std::uint64_t first = 0;
    std::uint64_t last = 0;
    std::uint64_t visits = 0;          // visits at times >= 1 so far
    std::uint64_t parent_visits = 0;   // parent's visit count when first entered
    std::uint32_t parent_crossings = 0;
};

}  // namespace

std::vector<TreeNode> extract_viable_leaves(const Topology& topo, const std::vector<TreeNode>& walk) {
    std::vector<TreeNode> out;
    if (walk.empty() || walk[0] != topo.root()) throw GraphError("walk does not start at the root");
    const auto tau_o = first_root_return(walk);
    if (tau_o == walk.size()) return out;
    const std::uint32_t n = topo.radius();
    if (n == 0) return out;
    const bool pyramid = topo.kind() == TreeKind::Pyramid;

    std::unordered_map<TreeNode, NodeRecord, TreeNodeHash> rec;
    rec[walk[0]] = NodeRecord{};
    for (std::uint64_t t = 1; t <= tau_o; ++t) {
        const auto& v = walk[t];
        auto it = rec.find(v);
        if (it == rec.end()) {
            NodeRecord r;
            r.first = t;
            if (v.depth > 0) {
                auto p = rec.find(topo.parent(v));
                r.parent_visits = p == rec.end() ? 0 : p->second.visits;
            }
            it = rec.emplace(v, r).first;
        }
        it->second.last = t;
        ++it->second.visits;
        const auto& u = walk[t - 1];
        if (u.depth != v.depth) ++rec[u.depth > v.depth ? u : v].parent_crossings;
    }

    std::unordered_map<TreeNode, std::vector<TreeNode>, TreeNodeHash> children;
    for (const auto& [v, r] : rec)
        if (v.depth > 0) children[topo.parent(v)].push_back(v);

    auto lookup = [&](const TreeNode& v) -> const NodeRecord* {
        auto it = rec.find(v);
        return it == rec.end() ? nullptr : &it->second;
    };
    const auto cap = visit_cap(topo.k());

    for (const auto& [z, zr] : rec) {
        if (z.depth != n) continue;
        const auto ray = topo.ray_to(z);
        const auto tau_z = zr.first;
        bool ok = true;
        for (std::uint32_t i = 1; i <= n && ok; ++i) {
            const auto* r = lookup(ray[i]);
            ok = r && r->parent_crossings == 2;
            if (ok && pyramid) {
                auto c = topo.corner_of(ray[i]);
                for (std::uint32_t d = 1; d < 4 && ok; ++d)
                    ok = lookup({ray[i].depth, ray[i].rank - c + ((c + d) & 3U)}) == nullptr;
            }
        }
        for (std::uint32_t i = 1; i < n && ok; ++i) ok = lookup(ray[i + 1])->parent_visits <= cap;
        const std::uint32_t last = pyramid ? n : n - 1;
        for (std::uint32_t i = 1; i <= last && ok; ++i) {
            auto ch = children.find(ray[i]);
            if (ch == children.end()) continue;
            if (!pyramid) {
                for (const auto& c : ch->second) {
                    if (c == ray[i + 1]) continue;
                    const auto& cr = rec.at(c);
                    if (cr.first < tau_z && cr.last > tau_z) ok = false;
                }
            } else {
                std::unordered_map<std::uint32_t, std::pair<std::uint64_t, std::uint64_t>> quads;
                for (const auto& c : ch->second) {
                    auto q = topo.quad_of(c);
                    if (i < n && q == topo.quad_of(ray[i + 1])) continue;
                    const auto& cr = rec.at(c);
                    auto [qit, fresh] = quads.try_emplace(q, cr.first, cr.last);
                    if (!fresh) {
                        qit->second.first = std::min(qit->second.first, cr.first);
                        qit->second.second = std::max(qit->second.second, cr.last);
                    }
                }
                for (const auto& [q, span] : quads)
                    if (span.first < tau_z && span.second > tau_z) ok = false;
            }
        }
        if (ok) out.push_back(z);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<TreeNode> extract_viable_leaves(const Topology& topo, const Trajectory& tr) {
    return extract_viable_leaves(topo, project_tree(tr).lazy_removed());
}

double pk_lower_bound_sum(std::uint32_t k) {
    if (k < 3) throw GraphError("p_k needs k >= 3");
    double s = 0.0;
    const double q = 1.0 - 2.0 / k;
    for (std::uint32_t j = 0; j <= k / 2; ++j) s += std::pow(q, j) / k / (j + 2.0);
    return s;
}

bool sample_pk_event(std::uint32_t k, RngStream& rng) {
    // Neighbor 0 is gamma_{i-1}, neighbor 1 is gamma_{i+1}, the rest are side edges.
    std::vector<bool> used(k, false);
    std::uint32_t excursions = 0;
    while (true) {
        auto u = rng.below(k);
        if (u == 0) return false;
        if (u == 1) break;
        used[u] = true;
        if (++excursions > k / 2) return false;
    }
    while (true) {
        auto u = rng.below(k);
        if (u == 0) return true;
        if (u == 1 || used[u]) return false;
    }
}

}  // namespace usf
