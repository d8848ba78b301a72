// usf-lab: experiment runner. Every subcommand writes its CSV files and a
// JSON manifest into --out; the run_id in both is a hash of the resolved
// configuration (worker count and output directory excluded, since neither
// changes the statistics).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "usf/experiments.hpp"
#include "usf/haar.hpp"
#include "usf/heat_kernel.hpp"
#include "usf/lerw_chain.hpp"
#include "usf/reach.hpp"
#include "usf/wilson.hpp"

namespace fs = std::filesystem;
using namespace usf;

namespace {

struct Common {
    std::string out = ".";
    unsigned workers = 0;
};

TreeKind parse_tree_kind(const std::string& s) {
    if (s == "tree") return TreeKind::Tree;
    if (s == "pyramid") return TreeKind::Pyramid;
    throw GraphError("unknown tree kind '" + s + "' (expected tree or pyramid)");
}

class Run {
public:
    Run(std::string command, Json config, const Common& common)
        : command_(std::move(command)), common_(common), start_(std::chrono::steady_clock::now()) {
        config["command"] = command_;
        manifest_.config = std::move(config);
        manifest_.run_id = run_id_of(manifest_.config);
        manifest_.workers = resolve_workers(common.workers);
        fs::create_directories(common.out);
    }

    const std::string& id() const { return manifest_.run_id; }
    unsigned workers() const { return manifest_.workers; }
    std::string path(const std::string& file) const { return (fs::path(common_.out) / file).string(); }
    RunManifest& manifest() { return manifest_; }

    void add_plan(const BatchPlan& plan, std::uint64_t seed) {
        for (auto& b : batch_records(plan, seed)) manifest_.batches.push_back(b);
    }

    void finish() {
        manifest_.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        manifest_.write(path(command_ + ".manifest.json"));
        std::cout << manifest_.run_id << '\n';
    }

private:
    std::string command_;
    Common common_;
    std::chrono::steady_clock::time_point start_;
    RunManifest manifest_;
};

struct ProductArgs {
    std::string tree = "tree";
    std::uint32_t k = 3;
    std::uint32_t n = 4;
    std::string base = "path2";

    void add(CLI::App* app) {
        app->add_option("--tree", tree, "tree or pyramid")->capture_default_str();
        app->add_option("--k", k, "tree degree parameter")->capture_default_str();
        app->add_option("--n", n, "ball radius")->capture_default_str();
        app->add_option("--base", base, "path2 | cycle:<l> | complete:<m> | custom:<file>")->capture_default_str();
    }
    Json json() const { return {{"tree", tree}, {"k", k}, {"n", n}, {"base", base}}; }
    Topology build() const { return Topology::build(parse_tree_kind(tree), k, n, parse_base_spec(base)); }
};

struct SamplingArgs {
    std::uint64_t samples = 10000;
    std::uint64_t seed = 1;
    std::uint64_t batch_size = 4096;
    std::uint64_t step_cap = 1'000'000'000;

    void add(CLI::App* app, bool with_cap = true) {
        app->add_option("--samples", samples, "replica count")->capture_default_str();
        app->add_option("--seed", seed, "master seed")->capture_default_str();
        app->add_option("--batch-size", batch_size, "replicas per RNG stream")->capture_default_str();
        if (with_cap) app->add_option("--step-cap", step_cap, "walk truncation length")->capture_default_str();
    }
    Json json() const {
        return {{"samples", samples}, {"seed", seed}, {"batch-size", batch_size}, {"step-cap", step_cap}};
    }
    BatchPlan plan() const {
        if (batch_size == 0) throw GraphError("batch-size must be positive");
        return {samples, batch_size};
    }
    WalkOptions walk() const { return {step_cap}; }
};

Json merged(Json a, const Json& b) {
    a.update(b);
    return a;
}

// ---------------------------------------------------------------- commands

void cmd_ust_sample(const ProductArgs& p, std::uint64_t seed, const Common& c) {
    Run run("ust-sample", merged(p.json(), {{"seed", seed}}), c);
    auto topo = p.build();
    auto g = FiniteGraph::from_topology(topo);
    RngStream rng(seed, 0);
    auto tree = wilson_ust(g, 0, rng);
    CsvWriter csv(run.path("ust.csv"), {"vertex_id", "parent_id", "tree_coord", "base_index"});
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        auto v = topo.vertex_at(i);
        csv.row(i, tree.parent[i], topo.coord_string(v.tree), v.base);
    }
    run.manifest().replicas = 1;
    run.manifest().batches.push_back({{"seed", seed}, {"stream", 0}, {"replicas", 1}});
    run.manifest().results = {{"vertices", g.size()}, {"edges", g.edge_count()}};
    run.finish();
}

struct BranchRow {
    std::uint64_t length = 0;
    std::uint32_t depth = 0;
    bool truncated = false;
};

struct BranchRows {
    std::vector<BranchRow> rows;
    void merge(const BranchRows& o) { rows.insert(rows.end(), o.rows.begin(), o.rows.end()); }
};

void cmd_first_branch(const ProductArgs& p, const SamplingArgs& s, const Common& c) {
    Run run("first-branch", merged(p.json(), s.json()), c);
    auto topo = p.build();
    if (topo.base().size() < 2) throw GraphError("first-branch needs a base graph with two vertices");
    const ProductVertex a{topo.root(), 0}, b{topo.root(), 1};
    auto res = run_batched<BranchRows>(
        s.plan(), run.workers(), s.seed, [&] { return ProductLoopErasure(topo); },
        [&](ProductLoopErasure& le, RngStream& rng, std::uint64_t, BranchRows& acc) {
            auto d = sample_branch_depth(topo, a, b, rng, le, s.walk());
            acc.rows.push_back({le.size(), d.max_depth, d.truncated});
        });
    CsvWriter csv(run.path("first_branch.csv"), {"run_id", "sample", "path_length", "max_depth", "truncated"});
    std::uint64_t trunc = 0;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const auto& r = res.rows[i];
        trunc += r.truncated;
        csv.row(run.id(), i, r.length, r.depth, r.truncated);
    }
    run.add_plan(s.plan(), s.seed);
    run.manifest().replicas = res.rows.size();
    run.manifest().truncations = trunc;
    run.finish();
}

void cmd_reach_prob(const ProductArgs& p, const SamplingArgs& s, std::uint32_t offset, std::uint32_t r_min,
                    std::uint32_t r_max, const Common& c) {
    Json cfg = merged(p.json(), s.json());
    cfg["offset"] = offset;
    cfg["exit-r-min"] = r_min;
    cfg["exit-r-max"] = r_max;
    Run run("reach-prob", cfg, c);
    auto topo = p.build();
    if (r_max > 0 && (r_min > r_max || r_max >= p.n)) throw GraphError("exit radii must satisfy r-min <= r-max < n");
    auto est = reach_probability(topo, offset, s.plan(), run.workers(), s.seed, s.walk());
    CsvWriter csv(run.path("reach_prob.csv"), {"run_id", "k", "base_kind", "base_size", "n", "offset", "samples",
                                               "hits", "truncations", "p_hat", "ci_lo", "ci_hi", "seed"});
    csv.row(run.id(), p.k, to_string(topo.base().kind()), topo.base().size(), p.n, offset, est.tally.samples,
            est.hits, est.tally.truncations, est.p_hat, est.ci.lo, est.ci.hi, s.seed);
    if (r_max > 0) {
        auto curve = exit_curve(est.tally, r_min, r_max);
        CsvWriter ec(run.path("exit_curve.csv"),
                     {"run_id", "r", "hits", "samples", "p_hat", "fit_slope", "fit_slope_se", "trend"});
        for (std::size_t i = 0; i < curve.r.size(); ++i)
            ec.row(run.id(), static_cast<std::uint32_t>(curve.r[i]), curve.hits[i], curve.samples[i],
                   curve.samples[i] ? static_cast<double>(curve.hits[i]) / curve.samples[i] : 0.0, curve.fit.slope,
                   curve.fit.slope_se, std::string(to_string(classify_trend(curve.fit))));
    }
    run.add_plan(s.plan(), s.seed);
    run.manifest().replicas = est.tally.samples + est.tally.truncations;
    run.manifest().truncations = est.tally.truncations;
    run.manifest().results = {{"p_hat", est.p_hat}, {"hits", est.hits}, {"target_depth", est.target_depth}};
    run.finish();
}

struct WitnessRows {
    std::vector<ComponentWitness> rows;
    void merge(const WitnessRows& o) { rows.insert(rows.end(), o.rows.begin(), o.rows.end()); }
};

void cmd_components(const ProductArgs& p, const SamplingArgs& s, std::uint32_t offset, std::uint32_t h,
                    const Common& c) {
    Json cfg = merged(p.json(), s.json());
    cfg["offset"] = offset;
    cfg["base-vertex"] = h;
    Run run("components", cfg, c);
    auto topo = p.build();
    auto res = run_batched<WitnessRows>(s.plan(), run.workers(), s.seed, [] { return 0; },
                                        [&](int, RngStream& rng, std::uint64_t, WitnessRows& acc) {
                                            acc.rows.push_back(ray_component_witness(topo, h, offset, rng, s.walk()));
                                        });
    CsvWriter csv(run.path("components.csv"),
                  {"run_id", "sample", "stage", "source_index", "reached_index", "path_length", "enters_fresh",
                   "touches_shell", "reenters_new_base", "returns_directly", "good", "truncated"});
    double bound_sum = 0.0;
    std::uint64_t trunc = 0;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const auto& w = res.rows[i];
        bound_sum += w.component_lower_bound;
        for (std::size_t j = 0; j < w.stages.size(); ++j) {
            const auto& st = w.stages[j];
            trunc += st.truncated;
            csv.row(run.id(), i, j, st.source_index, st.reached_index, st.path_length, st.enters_fresh,
                    st.touches_shell, st.reenters_new_base, st.returns_directly, st.good, st.truncated);
        }
    }
    run.add_plan(s.plan(), s.seed);
    run.manifest().replicas = res.rows.size();
    run.manifest().truncations = trunc;
    run.manifest().results = {{"mean_component_lower_bound", res.rows.empty() ? 0.0 : bound_sum / res.rows.size()}};
    run.finish();
}

void cmd_pk(const std::vector<std::uint32_t>& ks, const SamplingArgs& s, std::uint32_t factor_n,
            std::uint64_t excursions, const Common& c) {
    Json cfg = s.json();
    cfg.erase("step-cap");
    cfg["k"] = ks;
    cfg["factorization-n"] = factor_n;
    cfg["excursions"] = excursions;
    Run run("pk-estimate", cfg, c);
    CsvWriter csv(run.path("pk.csv"), {"k", "N", "p_hat", "ci_lo", "ci_hi", "lower_bound_sum", "seed"});
    std::unique_ptr<CsvWriter> fcsv;
    if (factor_n > 0)
        fcsv = std::make_unique<CsvWriter>(
            run.path("factorization.csv"),
            std::vector<std::string>{"run_id", "k", "n", "excursions", "hits", "p_b", "se_b", "p_k", "predicted",
                                     "se_predicted", "z_score"});
    Json results = Json::array();
    for (auto k : ks) {
        const auto seed = derive_seed(s.seed, "k=" + std::to_string(k));
        auto e = estimate_pk(k, s.plan(), run.workers(), seed);
        run.add_plan(s.plan(), seed);
        csv.row(k, e.samples, e.p_hat, e.ci.lo, e.ci.hi, e.lower_bound_sum, s.seed);
        Json r = {{"k", k}, {"p_hat", e.p_hat}, {"k_p_over_log_k", k * e.p_hat / std::log(k)}};
        if (fcsv) {
            BatchPlan ex{excursions, s.batch_size};
            auto f = factorization_check(k, factor_n, ex, s.plan(), run.workers(), seed);
            fcsv->row(run.id(), k, factor_n, f.excursions, f.hits, f.p_b, f.se_b, f.pk.p_hat, f.predicted,
                      f.se_predicted, f.z_score);
            run.manifest().truncations += f.truncations;
            run.manifest().replicas += f.excursions + f.pk.samples;
            r["z_score"] = f.z_score;
        }
        run.manifest().replicas += e.samples;
        results.push_back(r);
    }
    run.manifest().results = results;
    run.finish();
}

void cmd_lerw_chain(std::uint32_t n, const std::string& variant, std::uint32_t tmax, std::uint64_t coupling,
                    std::uint32_t ci, std::uint32_t cj, std::uint64_t seed, std::uint64_t batch, const Common& c) {
    Json cfg = {{"n", n}, {"variant", variant}, {"tmax", tmax}, {"coupling-samples", coupling},
                {"i", ci}, {"j", cj}, {"seed", seed}, {"batch-size", batch}};
    Run run("lerw-chain", cfg, c);
    ChainSpec spec{n, parse_chain_variant(variant)};
    spec.validate();
    if (tmax < 1) throw GraphError("tmax must be at least 1");
    auto st = stationary(spec);
    CsvWriter sc(run.path("stationary.csv"), {"n", "variant", "i", "pi", "bound_i_over_n"});
    for (std::uint32_t i = 1; i <= n; ++i)
        sc.row(n, variant, i, st.pi[i - 1], static_cast<double>(i) / n);
    auto tv = tv_curve(spec, tmax);
    CsvWriter tc(run.path("tv_curve.csv"), {"n", "variant", "t", "tv", "bound"});
    for (std::uint32_t t = 1; t <= tmax; ++t) tc.row(n, variant, t, tv[t], tv_bound(n, t));
    Json results = {{"residual", st.residual}, {"recursion_discrepancy", st.discrepancy},
                    {"fitted_decay_rate", fitted_decay_rate(tv, 1)}};
    if (coupling > 0) {
        if (spec.variant != ChainVariant::Lazy) throw GraphError("the coupling runs on the lazy chain");
        BatchPlan plan{coupling, batch};
        auto ct = coupling_tail(n, ci, cj, tmax, plan, run.workers(), seed);
        CsvWriter cc(run.path("coupling.csv"), {"run_id", "n", "i", "j", "t", "tail", "se", "bound"});
        for (std::uint32_t t = 1; t <= tmax; ++t) {
            const double p = ct.tail(t);
            cc.row(run.id(), n, ci, cj, t, p, binomial_se(p, ct.samples), tv_bound(n, t));
        }
        run.add_plan(plan, seed);
        run.manifest().replicas = ct.samples;
        results["coupling_max_tau"] = ct.max_tau;
    }
    run.manifest().results = results;
    run.finish();
}

void cmd_heat_kernel(const std::vector<std::string>& bases, std::uint64_t tmax, const std::string& variant,
                     std::uint32_t check_k_min, std::uint32_t check_k_max, double multiple, const Common& c) {
    Json cfg = {{"base", bases}, {"tmax", tmax}, {"variant", variant}, {"check-k-min", check_k_min},
                {"check-k-max", check_k_max}, {"check-multiple", multiple}};
    Run run("heat-kernel", cfg, c);
    const auto kv = parse_kernel_variant(variant);
    CsvWriter kc(run.path("kernel.csv"), {"base_kind", "base_size", "t", "sup_p", "sup_gap"});
    std::unique_ptr<CsvWriter> chk;
    if (check_k_max > 0)
        chk = std::make_unique<CsvWriter>(run.path("kernel_check.csv"),
                                          std::vector<std::string>{"run_id", "k", "base", "base_size", "t", "sup_p",
                                                                   "k_pow_minus_2_5", "ratio", "size_ok", "within"});
    Json results = Json::array();
    for (const auto& spec : bases) {
        auto h = parse_base_spec(spec);
        auto prof = kernel_profile(h, tmax, kv);
        for (std::uint64_t t = 0; t <= tmax; ++t)
            kc.row(std::string(to_string(h.kind())), h.size(), t, prof.sup_p[t], prof.sup_gap[t]);
        results.push_back({{"base", h.label()},
                           {"max_row_error", prof.max_row_error},
                           {"max_asymmetry", prof.max_asymmetry}});
        if (chk)
            for (auto k = check_k_min; k <= check_k_max; ++k) {
                auto row = kernel_check(h, k, multiple);
                chk->row(run.id(), k, row.base, row.base_size, row.t, row.sup_p, row.scale, row.ratio, row.size_ok,
                         row.within);
            }
    }
    run.manifest().results = results;
    run.finish();
}

void cmd_lightness(std::uint32_t k, std::uint32_t n_min, std::uint32_t n_max, const std::string& base,
                   std::uint32_t offset, std::uint64_t samples, std::uint64_t seed, const Common& c) {
    Json cfg = {{"k", k}, {"n-min", n_min}, {"n-max", n_max}, {"base", base},
                {"offset", offset}, {"samples", samples}, {"seed", seed}};
    Run run("lightness", cfg, c);
    auto h = parse_base_spec(base);
    CsvWriter lc(run.path("lightness.csv"),
                 {"run_id", "n", "k", "base_size", "component_id", "weight_sum", "min_level", "size", "truncated"});
    CsvWriter tc(run.path("lightness_trend.csv"),
                 {"run_id", "n", "samples", "root_weight_mean", "interior_clusters", "interior_tilted_mean",
                  "interior_tilted_max", "max_min_level_count"});
    for (auto n = n_min; n <= n_max; ++n) {
        auto topo = Topology::build(TreeKind::Pyramid, k, n, h);
        auto g = FiniteGraph::from_topology(topo);
        const auto nseed = derive_seed(seed, "n=" + std::to_string(n));
        std::vector<ClusterStats> all;
        for (std::uint64_t sidx = 0; sidx < samples; ++sidx) {
            RngStream rng(nseed, sidx);
            auto st = sample_lightness(topo, g, offset, rng);
            for (const auto& cl : st.clusters)
                lc.row(run.id(), n, k, h.size(), cl.id, cl.weight_sum, cl.min_level, cl.size, cl.truncated);
            all.push_back(std::move(st));
        }
        auto row = summarize_lightness(n, all);
        tc.row(run.id(), n, row.samples, row.root_weight_mean, row.interior_clusters, row.interior_tilted_mean,
               row.interior_tilted_max, row.max_min_level_count);
        run.add_plan({samples, 1}, nseed);
        run.manifest().replicas += samples;
    }
    run.finish();
}

void cmd_disco(const DiscoOptions& o, std::uint64_t seed, const Common& c) {
    Json cfg = {{"base", o.bases}, {"k-min", o.k_min}, {"k-max", o.k_max}, {"n-min", o.n_min},
                {"n-max", o.n_max}, {"offset", o.offset}, {"samples", o.samples},
                {"max-vertices", o.max_vertices}, {"step-cap", o.step_cap}, {"batch-size", o.batch_size},
                {"seed", seed}};
    Run run("disco-scan", cfg, c);
    auto cells = disco_scan(o, run.workers(), seed);
    CsvWriter dc(run.path("disco.csv"), {"run_id", "base", "k", "n", "samples", "hits", "truncations", "p_hat",
                                         "fit_slope", "fit_slope_se", "trend", "status", "reason"});
    Json results = Json::array();
    for (const auto& cell : cells) {
        if (cell.skipped) {
            dc.row(run.id(), cell.base, cell.k, "", "", "", "", "", "", "", "", "skipped", cell.reason);
            results.push_back({{"base", cell.base}, {"k", cell.k}, {"skipped", cell.reason}});
            continue;
        }
        for (std::size_t i = 0; i < cell.n.size(); ++i) {
            const double p = cell.samples[i] ? static_cast<double>(cell.hits[i]) / cell.samples[i] : 0.0;
            dc.row(run.id(), cell.base, cell.k, cell.n[i], cell.samples[i], cell.hits[i], cell.truncations[i], p,
                   cell.fit.slope, cell.fit.slope_se, std::string(to_string(cell.trend)), "ok", "");
            run.manifest().replicas += cell.samples[i] + cell.truncations[i];
            run.manifest().truncations += cell.truncations[i];
        }
        results.push_back({{"base", cell.base}, {"k", cell.k}, {"trend", to_string(cell.trend)}});
    }
    run.manifest().results = results;
    run.finish();
}

// ------------------------------------------------------------------ driver

void print_error(const std::string& type, const std::string& message) {
    std::cerr << Json{{"error", {{"type", type}, {"message", message}}}}.dump() << '\n';
}

/// Expands `--config file.json` into flags placed before the command-line
/// ones, so explicit scalar flags win; list flags (--base, --k) accumulate.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] != "--config") continue;
        std::ifstream in(args[i + 1]);
        if (!in) throw std::runtime_error("cannot read config " + args[i + 1]);
        Json cfg = Json::parse(in);
        if (!cfg.is_object()) throw std::runtime_error("config must be a JSON object");
        std::vector<std::string> injected;
        for (auto& [key, value] : cfg.items()) {
            if (key == "command") continue;
            auto emit = [&](const Json& v) {
                injected.push_back("--" + key);
                injected.push_back(v.is_string() ? v.get<std::string>() : v.dump());
            };
            if (value.is_array())
                for (const auto& v : value) emit(v);
            else
                emit(value);
        }
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        // Insert right after the subcommand name, which precedes --config.
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(1, args.size())),
                    injected.begin(), injected.end());
        break;
    }
    std::reverse(args.begin(), args.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uniform spanning forest experiments on tree and pyramid products"};
    app.set_version_flag("--version", std::string(USF_LAB_VERSION));
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", common.out, "output directory")->capture_default_str();
        sub->add_option("--workers", common.workers, "worker threads (0 = all cores)")->capture_default_str();
        sub->add_option("--config", "JSON config; explicit flags override it");
    };

    ProductArgs prod;
    SamplingArgs samp;
    std::uint32_t offset = 1, h = 0, r_min = 0, r_max = 0;

    auto* ust = app.add_subcommand("ust-sample", "UST of a product ball by Wilson's algorithm");
    prod.add(ust);
    ust->add_option("--seed", samp.seed)->capture_default_str();
    add_common(ust);

    auto* fb = app.add_subcommand("first-branch", "first-branch samples between (o,0) and (o,1)");
    prod.add(fb);
    samp.add(fb);
    add_common(fb);

    auto* reach = app.add_subcommand("reach-prob", "probability that the first branch reaches the shell");
    prod.add(reach);
    samp.add(reach);
    reach->add_option("--offset", offset, "shell offset c; target depth n - c")->capture_default_str();
    reach->add_option("--exit-r-min", r_min, "exit curve from this radius")->capture_default_str();
    reach->add_option("--exit-r-max", r_max, "exit curve up to this radius (0 = off)")->capture_default_str();
    add_common(reach);

    auto* comp = app.add_subcommand("components", "multi-source ray witness of separate components");
    prod.add(comp);
    samp.add(comp);
    comp->add_option("--offset", offset)->capture_default_str();
    comp->add_option("--base-vertex", h, "base coordinate of the sources")->capture_default_str();
    add_common(comp);

    std::vector<std::uint32_t> pk_ks{10};
    std::uint32_t factor_n = 0;
    std::uint64_t excursions = 1'000'000;
    auto* pk = app.add_subcommand("pk-estimate", "single-vertex viable-ray probability p_k");
    pk->add_option("--k", pk_ks, "tree degree (repeatable)")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    samp.add(pk, false);
    pk->add_option("--factorization-n", factor_n, "also compare P(B_z) on T_n with (1/k) p_k^(n-1)")
        ->capture_default_str();
    pk->add_option("--excursions", excursions, "root excursions for the factorization check")->capture_default_str();
    add_common(pk);

    std::uint32_t chain_n = 100, tmax = 60, ci = 1, cj = 0;
    std::string variant = "lazy";
    std::uint64_t coupling = 0;
    auto* chain = app.add_subcommand("lerw-chain", "loop-erased length chain on the complete graph");
    chain->add_option("--n", chain_n)->capture_default_str();
    chain->add_option("--variant", variant, "lazy or loopless")->capture_default_str();
    chain->add_option("--tmax", tmax)->capture_default_str();
    chain->add_option("--coupling-samples", coupling, "coupling replicas (0 = off)")->capture_default_str();
    chain->add_option("--i", ci, "lower coupling start")->capture_default_str();
    chain->add_option("--j", cj, "upper coupling start (0 = n)")->capture_default_str();
    chain->add_option("--seed", samp.seed)->capture_default_str();
    chain->add_option("--batch-size", samp.batch_size)->capture_default_str();
    add_common(chain);

    std::vector<std::string> kernel_bases{"complete:4"};
    std::uint64_t kernel_tmax = 50;
    std::string kernel_variant = "simple";
    std::uint32_t check_k_min = 3, check_k_max = 0;
    double check_multiple = 10.0;
    auto* hk = app.add_subcommand("heat-kernel", "exact heat-kernel profiles of base graphs");
    hk->add_option("--base", kernel_bases, "base graph (repeatable)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    hk->add_option("--tmax", kernel_tmax)->capture_default_str();
    hk->add_option("--variant", kernel_variant, "simple or two-step")->capture_default_str();
    hk->add_option("--check-k-min", check_k_min)->capture_default_str();
    hk->add_option("--check-k-max", check_k_max, "k^5 check table up to this k (0 = off)")->capture_default_str();
    hk->add_option("--check-multiple", check_multiple)->capture_default_str();
    add_common(hk);

    std::uint32_t light_k = 3, n_min = 2, n_max = 4;
    std::string light_base = "cycle:4";
    std::uint64_t light_samples = 20;
    auto* light = app.add_subcommand("lightness", "Haar-weight cluster statistics on pyramid balls");
    light->add_option("--k", light_k)->capture_default_str();
    light->add_option("--n-min", n_min)->capture_default_str();
    light->add_option("--n-max", n_max)->capture_default_str();
    light->add_option("--base", light_base)->capture_default_str();
    light->add_option("--offset", offset, "window is levels <= n - offset")->capture_default_str();
    light->add_option("--samples", light_samples)->capture_default_str();
    light->add_option("--seed", samp.seed)->capture_default_str();
    add_common(light);

    DiscoOptions disco;
    disco.bases = {"path2", "complete:16"};
    auto* dsc = app.add_subcommand("disco-scan", "reach-probability trends over n for each (H, k)");
    dsc->add_option("--base", disco.bases)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    dsc->add_option("--k-min", disco.k_min)->capture_default_str();
    dsc->add_option("--k-max", disco.k_max)->capture_default_str();
    dsc->add_option("--n-min", disco.n_min)->capture_default_str();
    dsc->add_option("--n-max", disco.n_max)->capture_default_str();
    dsc->add_option("--offset", disco.offset)->capture_default_str();
    dsc->add_option("--samples", disco.samples)->capture_default_str();
    dsc->add_option("--max-vertices", disco.max_vertices)->capture_default_str();
    dsc->add_option("--step-cap", disco.step_cap)->capture_default_str();
    dsc->add_option("--batch-size", disco.batch_size)->capture_default_str();
    dsc->add_option("--seed", samp.seed)->capture_default_str();
    add_common(dsc);

    try {
        auto args = expand_config(argc, argv);
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("invalid_arguments", e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error("invalid_config", e.what());
        return 2;
    }

    try {
        if (*ust) cmd_ust_sample(prod, samp.seed, common);
        if (*fb) cmd_first_branch(prod, samp, common);
        if (*reach) cmd_reach_prob(prod, samp, offset, r_min, r_max, common);
        if (*comp) cmd_components(prod, samp, offset, h, common);
        if (*pk) cmd_pk(pk_ks, samp, factor_n, excursions, common);
        if (*chain) cmd_lerw_chain(chain_n, variant, tmax, coupling, ci, cj ? cj : chain_n, samp.seed,
                                   samp.batch_size, common);
        if (*hk) cmd_heat_kernel(kernel_bases, kernel_tmax, kernel_variant, check_k_min, check_k_max, check_multiple,
                                 common);
        if (*light) cmd_lightness(light_k, n_min, n_max, light_base, offset, light_samples, samp.seed, common);
        if (*dsc) cmd_disco(disco, samp.seed, common);
    } catch (const GraphError& e) {
        print_error("invalid_config", e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error("runtime_error", e.what());
        return 1;
    }
    return 0;
}
