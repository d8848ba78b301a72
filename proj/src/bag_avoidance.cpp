#include "usf/bag_avoidance.hpp"

#include <algorithm>
#include <cmath>

namespace usf {

namespace {

bool disjoint_sorted(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    return both.empty();
}

}  // namespace

BagAvoidanceReport detect_bag_avoidance(const Topology& topo, const Trajectory& tr, const TreeNode& z,
                                        const Thresholds& th) {
    BagAvoidanceReport rep;
    auto ri = ray_indices(tr, topo.ray_to(z));
    if (!ri) {
        rep.reason = ri.reason;
        return rep;
    }
    rep.applicable = true;
    rep.indices = ri.indices;
    const auto& R = rep.indices;
    // The viable-ray flags only concern the excursion up to tau_o+.
    Trajectory head;
    head.vertices.assign(tr.vertices.begin(), tr.vertices.begin() + static_cast<std::ptrdiff_t>(R.tau_o_plus) + 1);
    head.kinds.assign(tr.kinds.begin(), tr.kinds.begin() + static_cast<std::ptrdiff_t>(R.tau_o_plus));
    rep.viable = detect_viable(topo, head, z);

    const std::uint32_t n = topo.radius();
    const auto ray = topo.ray_to(z);
    rep.size_A.assign(n + 1, 0);
    rep.size_B.assign(n + 1, 0);
    rep.H_A.assign(n + 1, {});
    rep.H_B.assign(n + 1, {});
    rep.disjoint.assign(n + 1, true);
    for (std::uint32_t i = 1; i <= n; ++i) {
        for (std::uint64_t t = 0; t <= R.alpha[i]; ++t)
            if (tr.vertices[t].tree == ray[i]) {
                ++rep.size_A[i];
                rep.H_A[i].push_back(tr.vertices[t].base);
            }
        for (std::uint64_t t = R.beta[i]; t <= R.tau_o_plus; ++t)
            if (tr.vertices[t].tree == ray[i]) {
                ++rep.size_B[i];
                rep.H_B[i].push_back(tr.vertices[t].base);
            }
        for (auto* s : {&rep.H_A[i], &rep.H_B[i]}) {
            std::sort(s->begin(), s->end());
            s->erase(std::unique(s->begin(), s->end()), s->end());
        }
        rep.disjoint[i] = disjoint_sorted(rep.H_A[i], rep.H_B[i]);
    }
    rep.terminal_base = tr.vertices[R.tau_o_plus].base;

    const auto c = th.shell_offset;
    rep.C = rep.viable.B;
    for (std::uint32_t i = 1; i + c + 1 <= n; ++i) rep.C = rep.C && rep.disjoint[i];

    if (n >= c + 1) {
        const std::uint32_t top = n - c;
        const double k = topo.k();
        const double cap = th.visit_factor * k;
        const double gap = std::pow(k, th.gap_exponent);
        rep.chain_defined = true;
        rep.good.assign(top + 1, false);
        rep.prep.assign(top + 1, false);
        bool g = true;
        for (std::uint32_t i = 1; i + 1 <= top; ++i) g = g && static_cast<double>(rep.size_A[i]) < cap;
        rep.good[top] = g;
        for (std::uint32_t i = top; i >= 2; --i) {
            auto dh = static_cast<double>(R.beta_base[i - 1]) - static_cast<double>(R.beta_base[i]);
            rep.prep[i - 1] = rep.good[i] && dh > gap;
            rep.good[i - 1] = rep.prep[i - 1] && rep.disjoint[i - 1];
        }
    }
    return rep;
}

}  // namespace usf
