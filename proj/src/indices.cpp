#include "usf/indices.hpp"

namespace usf {

namespace {

RayIndicesResult not_applicable(std::string reason) {
    RayIndicesResult r;
    r.reason = std::move(reason);
    return r;
}

}  // namespace

std::uint64_t root_bag_return_time(const Trajectory& tr) {
    bool left = false;
    for (std::size_t t = 0; t < tr.vertices.size(); ++t) {
        if (tr.vertices[t].tree.depth != 0)
            left = true;
        else if (left)
            return t;
    }
    return kNever;
}

RayIndicesResult ray_indices(const Trajectory& tr, const std::vector<TreeNode>& ray) {
    if (ray.empty() || tr.vertices.empty()) return not_applicable("empty input");
    const auto n = ray.size() - 1;
    const auto& X = tr.vertices;
    if (X[0].tree != ray[0]) return not_applicable("trajectory does not start in the root bag");
    if (n == 0) return not_applicable("ray has no edges");

    std::uint64_t tau_o = root_bag_return_time(tr);
    if (tau_o == kNever) return not_applicable("trajectory never returns to the root bag");
    std::uint64_t tau_z = kNever;
    for (std::uint64_t t = 0; t <= tau_o; ++t)
        if (X[t].tree == ray[n]) {
            tau_z = t;
            break;
        }
    if (tau_z == kNever) return not_applicable("trajectory does not reach z before returning");

    RayIndicesResult res;
    res.applicable = true;
    auto& R = res.indices;
    R.tau_z = tau_z;
    R.tau_o_plus = tau_o;
    R.alpha.assign(n + 1, kNever);
    R.beta.assign(n + 1, kNever);
    R.alpha[n] = R.beta[n] = tau_z;
    R.beta[0] = tau_o;

    // Depth identifies the ray index of a ray vertex.
    for (std::uint64_t t = 0; t < tau_z; ++t) {
        const auto& y = X[t].tree;
        if (y.depth < n && y == ray[y.depth]) R.alpha[y.depth] = t;
    }
    for (std::uint64_t t = tau_o; t > tau_z; --t) {
        const auto& y = X[t].tree;
        if (y.depth < n && y == ray[y.depth]) R.beta[y.depth] = t;
    }
    R.beta[0] = tau_o;

    std::vector<std::uint64_t> tree_before(tau_o + 1, 0), base_before(tau_o + 1, 0);
    for (std::uint64_t t = 0; t < tau_o; ++t) {
        tree_before[t + 1] = tree_before[t] + (tr.kinds[t] == StepKind::Tree ? 1 : 0);
        base_before[t + 1] = base_before[t] + (tr.kinds[t] == StepKind::Base ? 1 : 0);
    }
    auto fill = [&](const std::vector<std::uint64_t>& times, std::vector<std::uint64_t>& tc,
                    std::vector<std::uint64_t>& bc) {
        tc.resize(times.size());
        bc.resize(times.size());
        for (std::size_t i = 0; i < times.size(); ++i) {
            tc[i] = tree_before[times[i]];
            bc[i] = base_before[times[i]];
        }
    };
    fill(R.alpha, R.alpha_tree, R.alpha_base);
    fill(R.beta, R.beta_tree, R.beta_base);
    return res;
}

LastEntranceIndices last_entrance_indices(const Trajectory& tr, const std::vector<TreeNode>& ray) {
    LastEntranceIndices L;
    if (ray.empty()) return L;
    const auto r = ray.size() - 1;
    const auto& X = tr.vertices;
    const auto T = X.size();
    auto ray_index = [&](const TreeNode& y) -> std::size_t {
        return (y.depth <= r && y == ray[y.depth]) ? y.depth : kNever;
    };
    auto entrance = [&](std::size_t t) { return t == 0 || X[t - 1].tree != X[t].tree; };

    for (std::size_t t = 0; t < T; ++t)
        if (ray_index(X[t].tree) == r && entrance(t)) L.beta_r = t;
    L.beta.assign(r, kNever);
    L.kappa.assign(r, kNever);
    L.phi.assign(r, kNever);
    L.psi.assign(r, kNever);
    if (L.beta_r == kNever) return L;
    L.reached = true;

    for (std::size_t t = 0; t < L.beta_r; ++t) {
        auto i = ray_index(X[t].tree);
        if (i < r && entrance(t)) L.beta[i] = t;
    }
    for (std::size_t i = 0; i < r; ++i) {
        if (L.beta[i] == kNever) continue;
        for (std::size_t t = L.beta[i] + 1; t <= L.beta_r; ++t)
            if (X[t].tree != ray[i]) {
                L.kappa[i] = t;
                break;
            }
    }
    for (std::size_t t = L.beta_r + 1; t < T; ++t) {
        auto i = ray_index(X[t].tree);
        if (i < r && L.phi[i] == kNever && entrance(t)) L.phi[i] = t;
    }
    for (std::size_t i = 0; i < r; ++i) {
        if (L.phi[i] == kNever) continue;
        L.psi[i] = T - 1;
        for (std::size_t t = L.phi[i] + 1; t < T; ++t) {
            auto j = ray_index(X[t].tree);
            if (j != kNever && (j + 1 == i || j == i + 1)) {
                L.psi[i] = t;
                break;
            }
        }
    }
    return L;
}

}  // namespace usf
