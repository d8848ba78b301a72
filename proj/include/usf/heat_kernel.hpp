#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "usf/base_graph.hpp"

namespace usf {

/// P^t(x, .) for simple random walk on a regular base graph.
std::vector<double> step_distribution(const BaseGraph& h, std::uint64_t t, std::uint32_t x);

enum class KernelVariant { Simple, TwoStep };
const char* to_string(KernelVariant v);
KernelVariant parse_kernel_variant(const std::string& s);

/// sup_{x,y} p_t(x,y) and sup_{x,y} |p_t(x,y) - 1/|H|| for t = 0..t_max.
/// In the two-step variant one time unit is two walk steps.
struct KernelProfile {
    KernelVariant variant = KernelVariant::Simple;
    std::vector<double> sup_p;
    std::vector<double> sup_gap;
    double max_row_error = 0.0;   // max |sum_y p_t(x,y) - 1|
    double max_asymmetry = 0.0;   // max |p_t(x,y) - p_t(y,x)|
};

KernelProfile kernel_profile(const BaseGraph& h, std::uint64_t t_max, KernelVariant variant = KernelVariant::Simple);

/// sup p_t at t = k^5 against k^{-5/2}; a report row, not an assertion.
struct KernelCheckRow {
    std::uint32_t k = 0;
    std::string base;
    std::uint32_t base_size = 0;
    std::uint64_t t = 0;
    double sup_p = 0.0;
    double scale = 0.0;  // k^{-5/2}
    double ratio = 0.0;  // sup_p / scale
    bool size_ok = false;  // |H| > k^{5/2}
    bool within = false;   // ratio <= multiple
};

KernelCheckRow kernel_check(const BaseGraph& h, std::uint32_t k, double multiple);

}  // namespace usf
