#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "usf/parallel.hpp"
#include "usf/stats.hpp"
#include "usf/topology.hpp"

namespace usf {

using Json = nlohmann::json;

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(const std::string& bytes);

/// 16 hex digits of fnv1a64 over the compact dump of `config` (object keys
/// are sorted, so the hash does not depend on insertion order).
std::string run_id_of(const Json& config);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

/// Writes RFC-4180 CSV: fields holding a comma, quote or line break are
/// quoted with inner quotes doubled; lines end in CRLF-free "\n".
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    template <class... Fields>
    void row(const Fields&... fields) {
        std::vector<std::string> cells{cell(fields)...};
        write(cells);
    }
    void write(const std::vector<std::string>& cells);
    static std::string quote(const std::string& field);

private:
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    static std::string cell(bool b) { return b ? "1" : "0"; }
    static std::string cell(double x) { return format_double(x); }
    template <class Int>
    static std::string cell(Int i) requires std::is_integral_v<Int> {
        return std::to_string(i);
    }

    std::ofstream out_;
};

struct RunManifest {
    std::string run_id;
    Json config;
    double wall_seconds = 0.0;
    std::uint64_t replicas = 0;
    std::uint64_t truncations = 0;
    unsigned workers = 1;
    /// One entry per batch: {"seed", "stream", "replicas"}.
    Json batches = Json::array();
    Json results = Json::object();

    Json to_json() const;
    void write(const std::string& path) const;
};

/// Batch seeds and stream ids of a plan, for the manifest.
Json batch_records(const BatchPlan& plan, std::uint64_t seed);

/// Derives an independent master seed for a labelled sub-experiment.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& label);

struct PkEstimate {
    std::uint32_t k = 0;
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;
    double p_hat = 0.0;
    Interval ci;
    double lower_bound_sum = 0.0;
};

PkEstimate estimate_pk(std::uint32_t k, const BatchPlan& plan, unsigned workers, std::uint64_t seed);

/// P(B_z) for the child-0 leaf of the tree ball T_n(k), from root excursions,
/// against the product prediction (1/k) p_k^{n-1} from an independent p_k
/// estimate.
struct FactorizationCheck {
    std::uint32_t k = 0, n = 0;
    std::uint64_t excursions = 0;
    std::uint64_t hits = 0;
    std::uint64_t truncations = 0;
    double p_b = 0.0, se_b = 0.0;
    PkEstimate pk;
    double predicted = 0.0, se_predicted = 0.0;
    double z_score = 0.0;
};

FactorizationCheck factorization_check(std::uint32_t k, std::uint32_t n, const BatchPlan& excursions,
                                       const BatchPlan& pk_plan, unsigned workers, std::uint64_t seed);

/// One (H, k) cell of the disconnection scan: the reach-probability curve
/// over n with a trend label, or a skip reason.
struct DiscoCell {
    std::string base;
    std::uint32_t k = 0;
    bool skipped = false;
    std::string reason;
    std::vector<std::uint32_t> n;
    std::vector<std::uint64_t> hits, samples, truncations;
    LineFit fit;
    Trend trend = Trend::Flat;
};

struct DiscoOptions {
    std::vector<std::string> bases;
    std::uint32_t k_min = 3, k_max = 3;
    std::uint32_t n_min = 2, n_max = 6;
    std::uint32_t offset = 1;
    std::uint64_t samples = 10000;
    std::uint64_t max_vertices = 1ULL << 22;
    std::uint64_t step_cap = 100'000'000;
    std::uint64_t batch_size = 4096;
};

std::vector<DiscoCell> disco_scan(const DiscoOptions& opts, unsigned workers, std::uint64_t seed);

/// Trend label of a p_hat(n) curve (least squares on log p_hat, 2 sigma band).
Trend classify_curve(const std::vector<double>& n, const std::vector<std::uint64_t>& hits,
                     const std::vector<std::uint64_t>& samples, LineFit* fit = nullptr);

}  // namespace usf
