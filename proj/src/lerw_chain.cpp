#include "usf/lerw_chain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "usf/base_graph.hpp"
#include "usf/stats.hpp"

namespace usf {

using Big = boost::multiprecision::cpp_bin_float_50;

const char* to_string(ChainVariant v) { return v == ChainVariant::Lazy ? "lazy" : "loopless"; }

ChainVariant parse_chain_variant(const std::string& s) {
    if (s == "lazy") return ChainVariant::Lazy;
    if (s == "loopless") return ChainVariant::Loopless;
    throw GraphError("unknown chain variant '" + s + "' (expected lazy or loopless)");
}

void ChainSpec::validate() const {
    if (n < 2) throw GraphError("chain needs n >= 2");
}

double transition(const ChainSpec& spec, std::uint32_t i, std::uint32_t j) {
    spec.validate();
    const std::uint32_t n = spec.n;
    if (i < 1 || i > n || j < 1 || j > n) throw GraphError("chain state out of range");
    if (spec.variant == ChainVariant::Lazy) {
        if (j <= i) return 1.0 / n;
        return j == i + 1 ? static_cast<double>(n - i) / n : 0.0;
    }
    if (j + 1 <= i) return 1.0 / (n - 1);
    return j == i + 1 ? static_cast<double>(n - i) / (n - 1) : 0.0;
}

Eigen::MatrixXd transition_matrix(const ChainSpec& spec) {
    spec.validate();
    if (spec.n > kDenseChainLimit) throw GraphError("dense chain operations are capped at n = 2000");
    Eigen::MatrixXd p(spec.n, spec.n);
    for (std::uint32_t i = 1; i <= spec.n; ++i)
        for (std::uint32_t j = 1; j <= spec.n; ++j) p(i - 1, j - 1) = transition(spec, i, j);
    return p;
}

Stationary stationary(const ChainSpec& spec) {
    const auto p = transition_matrix(spec);
    const Eigen::Index n = p.rows();
    // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
    Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(n, n);
    a.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::VectorXd x = a.partialPivLu().solve(rhs);

    Stationary s;
    s.pi.assign(x.data(), x.data() + n);
    // Far states carry mass near 1e-80, where LU round-off can dip below zero.
    for (auto& v : s.pi) {
        if (v < -1e-14) throw std::runtime_error("stationary solve produced a negative probability");
        v = std::max(v, 0.0);
    }
    s.recursion = stationary_recursion<double>(spec.n);
    auto next = chain_step(spec, s.pi);
    for (Eigen::Index i = 0; i < n; ++i) {
        s.residual = std::max(s.residual, std::abs(next[i] - s.pi[i]));
        s.discrepancy = std::max(s.discrepancy, std::abs(s.recursion[i] - s.pi[i]));
    }
    if (s.residual > 1e-10) throw std::runtime_error("stationary solve residual above 1e-10");
    if (s.discrepancy > 1e-10) throw std::runtime_error("stationary solve disagrees with the recursion");
    return s;
}

std::vector<double> distribution_at(const ChainSpec& spec, std::uint64_t t, std::uint32_t start) {
    spec.validate();
    if (start < 1 || start > spec.n) throw GraphError("chain start out of range");
    std::vector<double> mu(spec.n, 0.0);
    mu[start - 1] = 1.0;
    for (std::uint64_t s = 0; s < t; ++s) mu = chain_step(spec, mu);
    return mu;
}

std::vector<double> tv_curve(const ChainSpec& spec, std::uint32_t t_max) {
    spec.validate();
    const std::uint32_t n = spec.n;
    // Both variants share the stationary law.
    const auto pi = stationary_recursion<Big>(n);
    std::vector<double> worst(t_max + 1, 0.0);
    for (std::uint32_t start = 1; start <= n; ++start) {
        std::vector<Big> mu(n, Big(0));
        mu[start - 1] = 1;
        for (std::uint32_t t = 0; t <= t_max; ++t) {
            if (t > 0) mu = chain_step(spec, mu);
            Big d(0);
            for (std::uint32_t i = 0; i < n; ++i) d += abs(mu[i] - pi[i]);
            worst[t] = std::max(worst[t], static_cast<double>(d / 2));
        }
    }
    return worst;
}

double tv_bound(std::uint32_t n, std::uint64_t t) {
    const double td = static_cast<double>(t);
    return std::exp(-td * td / (2.0 * n));
}

void CouplingTail::merge(const CouplingTail& o) {
    n = o.n ? o.n : n;
    i = o.i ? o.i : i;
    j = o.j ? o.j : j;
    samples += o.samples;
    if (exceed.size() < o.exceed.size()) exceed.resize(o.exceed.size(), 0);
    for (std::size_t t = 0; t < o.exceed.size(); ++t) exceed[t] += o.exceed[t];
    max_tau = std::max(max_tau, o.max_tau);
}

double CouplingTail::tail(std::uint32_t t) const {
    return samples ? static_cast<double>(exceed.at(t)) / static_cast<double>(samples) : 0.0;
}

CouplingTail coupling_tail(std::uint32_t n, std::uint32_t i, std::uint32_t j, std::uint32_t t_max,
                           const BatchPlan& plan, unsigned workers, std::uint64_t seed) {
    if (n < 2 || i < 1 || j < i || j > n) throw GraphError("coupling needs 1 <= i <= j <= n");
    return run_batched<CouplingTail>(
        plan, workers, seed, [] { return 0; },
        [&](int, RngStream& rng, std::uint64_t, CouplingTail& acc) {
            if (acc.exceed.empty()) {
                acc.n = n;
                acc.i = i;
                acc.j = j;
                acc.exceed.assign(t_max + 1, 0);
            }
            std::uint64_t lo = i, hi = j, tau = 0;
            while (lo != hi) {
                const std::uint64_t u = rng.below(n) + 1;
                lo = u <= lo ? u : lo + 1;
                hi = u <= hi ? u : hi + 1;
                if (lo > hi) throw std::logic_error("monotone coupling order violated");
                ++tau;
            }
            ++acc.samples;
            acc.max_tau = std::max(acc.max_tau, tau);
            for (std::uint64_t t = 0; t < tau && t <= t_max; ++t) ++acc.exceed[t];
        });
}

double fitted_decay_rate(const std::vector<double>& tv, std::uint32_t t_from, double floor) {
    std::vector<double> x, y, w;
    for (std::uint32_t t = t_from; t < tv.size(); ++t) {
        if (tv[t] <= floor) break;
        x.push_back(t);
        y.push_back(std::log(tv[t]));
        w.push_back(1.0);
    }
    if (x.size() < 2) return 0.0;
    return -weighted_line_fit(x, y, w).slope;
}

}  // namespace usf
