#include "usf/heat_kernel.hpp"

#include <algorithm>
#include <cmath>

namespace usf {

namespace {

void walk_step(const BaseGraph& h, const std::vector<double>& in, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    const double w = 1.0 / h.degree();
    for (std::uint32_t x = 0; x < h.size(); ++x) {
        if (in[x] == 0.0) continue;
        for (auto y : h.neighbors(x)) out[y] += in[x] * w;
    }
}

}  // namespace

std::vector<double> step_distribution(const BaseGraph& h, std::uint64_t t, std::uint32_t x) {
    if (x >= h.size()) throw GraphError("base vertex out of range");
    if (h.degree() == 0 && t > 0) throw GraphError("walk on an edgeless base graph");
    std::vector<double> mu(h.size(), 0.0), next(h.size());
    mu[x] = 1.0;
    for (std::uint64_t s = 0; s < t; ++s) {
        walk_step(h, mu, next);
        mu.swap(next);
    }
    return mu;
}

const char* to_string(KernelVariant v) { return v == KernelVariant::Simple ? "simple" : "two-step"; }

KernelVariant parse_kernel_variant(const std::string& s) {
    if (s == "simple") return KernelVariant::Simple;
    if (s == "two-step") return KernelVariant::TwoStep;
    throw GraphError("unknown kernel variant '" + s + "' (expected simple or two-step)");
}

KernelProfile kernel_profile(const BaseGraph& h, std::uint64_t t_max, KernelVariant variant) {
    if (h.degree() == 0) throw GraphError("walk on an edgeless base graph");
    const std::uint32_t m = h.size();
    const double uniform = 1.0 / m;
    const int steps = variant == KernelVariant::TwoStep ? 2 : 1;
    KernelProfile prof;
    prof.variant = variant;
    prof.sup_p.assign(t_max + 1, 0.0);
    prof.sup_gap.assign(t_max + 1, 0.0);

    // rows[x] = p_t(x, .); all rows advance together so symmetry is checkable.
    std::vector<std::vector<double>> rows(m, std::vector<double>(m, 0.0));
    for (std::uint32_t x = 0; x < m; ++x) rows[x][x] = 1.0;
    std::vector<double> scratch(m);
    for (std::uint64_t t = 0; t <= t_max; ++t) {
        if (t > 0)
            for (auto& row : rows)
                for (int s = 0; s < steps; ++s) {
                    walk_step(h, row, scratch);
                    row.swap(scratch);
                }
        double sup = 0.0, gap = 0.0;
        for (std::uint32_t x = 0; x < m; ++x) {
            double sum = 0.0;
            for (std::uint32_t y = 0; y < m; ++y) {
                const double p = rows[x][y];
                sum += p;
                sup = std::max(sup, p);
                gap = std::max(gap, std::abs(p - uniform));
                if (y > x) prof.max_asymmetry = std::max(prof.max_asymmetry, std::abs(p - rows[y][x]));
            }
            prof.max_row_error = std::max(prof.max_row_error, std::abs(sum - 1.0));
        }
        prof.sup_p[t] = sup;
        prof.sup_gap[t] = gap;
    }
    return prof;
}

KernelCheckRow kernel_check(const BaseGraph& h, std::uint32_t k, double multiple) {
    KernelCheckRow row;
    row.k = k;
    row.base = h.label();
    row.base_size = h.size();
    row.t = static_cast<std::uint64_t>(std::pow(k, 5));
    row.scale = std::pow(static_cast<double>(k), -2.5);
    row.size_ok = h.size() > std::pow(static_cast<double>(k), 2.5);
    // Base graphs are vertex-transitive, so the row of vertex 0 carries the sup.
    double sup = 0.0;
    for (std::uint32_t x = 0; x < h.size(); ++x) {
        auto mu = step_distribution(h, row.t, x);
        sup = std::max(sup, *std::max_element(mu.begin(), mu.end()));
        if (h.kind() != BaseKind::Custom) break;
    }
    row.sup_p = sup;
    row.ratio = sup / row.scale;
    row.within = row.ratio <= multiple;
    return row;
}

}  // namespace usf
