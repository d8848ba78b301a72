#include "usf/avoid.hpp"

#include <cmath>
#include <unordered_set>

#include "usf/loop_erasure.hpp"

namespace usf {

AvoidReport detect_avoid(const Topology& topo, const Trajectory& tr, const std::vector<TreeNode>& ray,
                         const Thresholds& th) {
    AvoidReport rep;
    rep.indices = last_entrance_indices(tr, ray);
    const auto r = ray.empty() ? 0 : ray.size() - 1;
    rep.sizes.assign(r, 0);
    rep.good_bag.assign(r, false);
    rep.avoid.assign(r, false);
    if (!rep.indices.reached) return rep;

    const auto& L = rep.indices;
    const double threshold = std::pow(static_cast<double>(topo.k()), th.size_exponent);
    std::vector<std::unordered_set<ProductVertex, ProductVertexHash>> snapshot(r);

    ProductLoopErasure le(topo, true);
    std::size_t next = 0;  // kappa_i increases with i
    for (std::size_t t = 0; t < tr.vertices.size() && next < r; ++t) {
        le.push(tr.vertices[t]);
        while (next < r && L.kappa[next] == t) {
            rep.sizes[next] = le.bag_count(ray[next]);
            snapshot[next].insert(le.path().begin(), le.path().end());
            ++next;
        }
    }

    rep.all_avoid = true;
    for (std::size_t i = 0; i < r; ++i) {
        rep.good_bag[i] = static_cast<double>(rep.sizes[i]) >= threshold;
        if (rep.good_bag[i]) ++rep.good_bags;
        bool hit = false;
        if (L.phi[i] != kNever)
            for (std::uint64_t t = L.phi[i]; t <= L.psi[i] && !hit; ++t) hit = snapshot[i].count(tr.vertices[t]) != 0;
        rep.avoid[i] = !hit;
        rep.all_avoid = rep.all_avoid && rep.avoid[i];
    }
    return rep;
}

double avoid_envelope(std::uint32_t k, std::uint32_t r) {
    const double kk = k;
    return 2.0 * kk * std::pow(1.0 - 1.0 / (2.0 * kk), static_cast<double>(r) - 1.0);
}

}  // namespace usf
