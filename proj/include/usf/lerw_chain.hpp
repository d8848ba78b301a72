#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "usf/parallel.hpp"

namespace usf {

/**
 * Length of the loop erasure of a walk on the complete graph K_n. The lazy
 * variant is the walk that may stay put (n choices per step), the loopless
 * variant is simple random walk (n - 1 choices). States are 1..n; vectors
 * below store state i at index i - 1.
 */
enum class ChainVariant { Lazy, Loopless };

const char* to_string(ChainVariant v);
ChainVariant parse_chain_variant(const std::string& s);

struct ChainSpec {
    std::uint32_t n = 2;
    ChainVariant variant = ChainVariant::Lazy;

    void validate() const;
};

/// Largest n accepted by the dense operations.
inline constexpr std::uint32_t kDenseChainLimit = 2000;

double transition(const ChainSpec& spec, std::uint32_t i, std::uint32_t j);
Eigen::MatrixXd transition_matrix(const ChainSpec& spec);

/// One step mu -> mu P in O(n).
template <class Real>
std::vector<Real> chain_step(const ChainSpec& spec, const std::vector<Real>& mu) {
    const std::uint32_t n = spec.n;
    const bool lazy = spec.variant == ChainVariant::Lazy;
    const Real denom = lazy ? Real(n) : Real(n - 1);
    std::vector<Real> out(n, Real(0));
    // Jumps down land on j <= i (lazy) or j <= i - 1 (loopless) uniformly.
    Real suffix(0);
    for (std::uint32_t s = n; s >= 1; --s) {
        if (lazy) suffix += mu[s - 1];
        out[s - 1] = suffix / denom;
        if (!lazy) suffix += mu[s - 1];
    }
    for (std::uint32_t s = 2; s <= n; ++s) out[s - 1] += mu[s - 2] * Real(n - (s - 1)) / denom;
    return out;
}

/// Stationary law by the forward recursion
/// pi(i+1) = ((n-i) pi(i) + sum_{j>i} pi(j)) / n, pi(1) = 1/n.
template <class Real>
std::vector<Real> stationary_recursion(std::uint32_t n) {
    std::vector<Real> pi(n);
    pi[0] = Real(1) / Real(n);
    Real tail = Real(1) - pi[0];
    for (std::uint32_t i = 1; i < n; ++i) {
        pi[i] = (Real(n - i) * pi[i - 1] + tail) / Real(n);
        tail -= pi[i];
    }
    return pi;
}

struct Stationary {
    std::vector<double> pi;
    std::vector<double> recursion;
    double residual = 0.0;     // max |pi P - pi|
    double discrepancy = 0.0;  // max |pi - recursion|
};

/// Dense solve of pi P = pi for the given variant, cross-checked against the
/// recursion. Throws if the residual or the discrepancy exceeds 1e-10.
Stationary stationary(const ChainSpec& spec);

std::vector<double> distribution_at(const ChainSpec& spec, std::uint64_t t, std::uint32_t start);

/// Worst-start TV distance to stationarity for t = 0..t_max, computed in
/// 50-digit arithmetic so tiny distances are exact.
std::vector<double> tv_curve(const ChainSpec& spec, std::uint32_t t_max);

/// exp(-t^2 / (2n)).
double tv_bound(std::uint32_t n, std::uint64_t t);

struct CouplingTail {
    std::uint32_t n = 0, i = 0, j = 0;
    std::uint64_t samples = 0;
    std::vector<std::uint64_t> exceed;  // exceed[t] = #replicas with tau > t
    std::uint64_t max_tau = 0;

    void merge(const CouplingTail& o);
    double tail(std::uint32_t t) const;
};

/**
 * Runs two lazy chains from i <= j with a shared uniform U in {1..n}: each
 * jumps to U when U <= its state, else moves up. tau is the first time they
 * agree. Throws if the order L <= L~ ever fails.
 */
CouplingTail coupling_tail(std::uint32_t n, std::uint32_t i, std::uint32_t j, std::uint32_t t_max,
                           const BatchPlan& plan, unsigned workers, std::uint64_t seed);

/// Slope of log TV against t over the points with tv > floor (rate = -slope).
double fitted_decay_rate(const std::vector<double>& tv, std::uint32_t t_from, double floor = 1e-300);

}  // namespace usf
