#include "usf/experiments.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>

#include "usf/reach.hpp"
#include "usf/viable.hpp"

namespace usf {

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string run_id_of(const Json& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
    return buf;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
    write(header);
}

std::string CsvWriter::quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string q = "\"";
    for (char c : field) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

void CsvWriter::write(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << quote(cells[i]);
    out_ << '\n';
    if (!out_) throw std::runtime_error("CSV write failed");
}

Json RunManifest::to_json() const {
    return Json{{"run_id", run_id},
                {"config", config},
                {"version", USF_LAB_VERSION},
                {"wall_clock_seconds", wall_seconds},
                {"replicas", replicas},
                {"truncations", truncations},
                {"workers", workers},
                {"batches", batches},
                {"results", results}};
}

void RunManifest::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << to_json().dump(2) << '\n';
}

Json batch_records(const BatchPlan& plan, std::uint64_t seed) {
    Json arr = Json::array();
    for (std::uint64_t b = 0; b < plan.batches(); ++b) {
        const auto lo = b * plan.batch_size;
        const auto hi = std::min(plan.replicas, lo + plan.batch_size);
        arr.push_back({{"seed", seed}, {"stream", b}, {"replicas", hi - lo}});
    }
    return arr;
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& label) {
    return fnv1a64(std::to_string(seed) + "/" + label);
}

namespace {

struct Count {
    std::uint64_t samples = 0, hits = 0, truncations = 0;
    void merge(const Count& o) {
        samples += o.samples;
        hits += o.hits;
        truncations += o.truncations;
    }
};

}  // namespace

PkEstimate estimate_pk(std::uint32_t k, const BatchPlan& plan, unsigned workers, std::uint64_t seed) {
    if (k < 3) throw GraphError("p_k needs k >= 3");
    auto c = run_batched<Count>(plan, workers, seed, [] { return 0; },
                                [&](int, RngStream& rng, std::uint64_t, Count& acc) {
                                    ++acc.samples;
                                    if (sample_pk_event(k, rng)) ++acc.hits;
                                });
    PkEstimate e;
    e.k = k;
    e.samples = c.samples;
    e.hits = c.hits;
    e.p_hat = c.samples ? static_cast<double>(c.hits) / static_cast<double>(c.samples) : 0.0;
    e.ci = wilson_interval(c.hits, c.samples);
    e.lower_bound_sum = pk_lower_bound_sum(k);
    return e;
}

FactorizationCheck factorization_check(std::uint32_t k, std::uint32_t n, const BatchPlan& excursions,
                                       const BatchPlan& pk_plan, unsigned workers, std::uint64_t seed) {
    // K_1 as the base leaves the bare tree walk.
    const auto topo = Topology::build(TreeKind::Tree, k, n, BaseGraph::complete(1));
    const TreeNode z{n, 0};
    const ProductVertex o{topo.root(), 0};
    auto c = run_batched<Count>(excursions, workers, derive_seed(seed, "excursions"), [] { return 0; },
                                [&](int, RngStream& rng, std::uint64_t, Count& acc) {
                                    auto tr = walk_until(topo, o, ReturnToRootBag{}, rng);
                                    if (tr.truncated) {
                                        ++acc.truncations;
                                        return;
                                    }
                                    ++acc.samples;
                                    if (detect_viable(topo, tr, z).B) ++acc.hits;
                                });
    FactorizationCheck f;
    f.k = k;
    f.n = n;
    f.excursions = c.samples;
    f.hits = c.hits;
    f.truncations = c.truncations;
    f.p_b = c.samples ? static_cast<double>(c.hits) / static_cast<double>(c.samples) : 0.0;
    f.se_b = binomial_se(f.p_b, c.samples);
    f.pk = estimate_pk(k, pk_plan, workers, derive_seed(seed, "pk"));
    const double p = f.pk.p_hat, m = n - 1.0;
    f.predicted = std::pow(p, m) / k;
    // Delta method for (1/k) p^{n-1}.
    f.se_predicted = m * std::pow(p, m - 1.0) / k * binomial_se(p, f.pk.samples);
    const double se = std::hypot(f.se_b, f.se_predicted);
    f.z_score = se > 0 ? (f.p_b - f.predicted) / se : 0.0;
    return f;
}

Trend classify_curve(const std::vector<double>& n, const std::vector<std::uint64_t>& hits,
                     const std::vector<std::uint64_t>& samples, LineFit* fit) {
    auto f = log_proportion_fit(n, hits, samples);
    if (fit) *fit = f;
    return classify_trend(f);
}

std::vector<DiscoCell> disco_scan(const DiscoOptions& opts, unsigned workers, std::uint64_t seed) {
    std::vector<DiscoCell> cells;
    for (const auto& spec : opts.bases) {
        for (auto k = opts.k_min; k <= opts.k_max; ++k) {
            DiscoCell cell;
            cell.k = k;
            cell.base = spec;
            std::optional<BaseGraph> parsed;
            try {
                parsed = parse_base_spec(spec);
            } catch (const GraphError& e) {
                cell.skipped = true;
                cell.reason = std::string("invalid_base: ") + e.what();
                cells.push_back(std::move(cell));
                continue;
            }
            try {
                const auto& base = *parsed;
                cell.base = base.label();
                if (base.size() < 2) throw GraphError("base_too_small");
                if (k < 3) throw GraphError("degree_too_small");
                for (auto n = std::max(opts.n_min, opts.offset + 1); n <= opts.n_max; ++n) {
                    auto topo = Topology::build(TreeKind::Tree, k, n, base);
                    auto vc = topo.vertex_count();
                    if (!vc || *vc > opts.max_vertices) break;
                    WalkOptions wo;
                    wo.step_cap = opts.step_cap;
                    const auto label = cell.base + "/k=" + std::to_string(k) + "/n=" + std::to_string(n);
                    auto est = reach_probability(topo, opts.offset, {opts.samples, opts.batch_size}, workers,
                                                 derive_seed(seed, label), wo);
                    cell.n.push_back(n);
                    cell.hits.push_back(est.hits);
                    cell.samples.push_back(est.tally.samples);
                    cell.truncations.push_back(est.tally.truncations);
                }
                if (cell.n.size() < 2) throw GraphError("too_few_feasible_radii");
                std::vector<double> x(cell.n.begin(), cell.n.end());
                cell.trend = classify_curve(x, cell.hits, cell.samples, &cell.fit);
            } catch (const GraphError& e) {
                cell.skipped = true;
                cell.reason = e.what();
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

}  // namespace usf
