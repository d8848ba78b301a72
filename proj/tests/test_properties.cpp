#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "support.hpp"
#include "usf/avoid.hpp"
#include "usf/bag_avoidance.hpp"
#include "usf/experiments.hpp"
#include "usf/lerw_chain.hpp"
#include "usf/reach.hpp"
#include "usf/viable.hpp"
#include "usf/wilson.hpp"

using namespace usf;

namespace {

bool is_subsequence(const std::vector<ProductVertex>& sub, const std::vector<ProductVertex>& seq) {
    std::size_t j = 0;
    for (const auto& v : seq)
        if (j < sub.size() && v == sub[j]) ++j;
    return j == sub.size();
}

// A walk of random length on a random small product.
Trajectory random_walk(const Topology& topo, RngStream& rng) {
    const auto len = 1 + rng.below(400);
    return walk_until(topo, {topo.root(), 0}, [&](const ProductVertex&, std::uint64_t t) { return t >= len; }, rng);
}

}  // namespace

TEST_CASE("loop erasure is idempotent and yields a simple subsequence") {
    const std::vector<Topology> topos{
        Topology::build(TreeKind::Tree, 3, 3, BaseGraph::cycle(3)),
        Topology::build(TreeKind::Pyramid, 3, 2, BaseGraph::path2()),
        Topology::build(TreeKind::Tree, 5, 2, BaseGraph::complete(4)),
    };
    RngStream rng(1001, 0);
    for (int rep = 0; rep < 10000; ++rep) {
        const auto& topo = topos[rep % topos.size()];
        auto tr = random_walk(topo, rng);
        auto le = loop_erase<ProductVertex, ProductVertexHash>(tr.vertices);
        CHECK(loop_erase<ProductVertex, ProductVertexHash>(le) == le);
        CHECK(is_subsequence(le, tr.vertices));
        CHECK(le.front() == tr.vertices.front());
        CHECK(le.back() == tr.vertices.back());
        CHECK(std::set<ProductVertex>(le.begin(), le.end()).size() == le.size());
        for (std::size_t i = 0; i + 1 < le.size(); ++i) CHECK(topo.adjacent(le[i], le[i + 1]));
    }
}

TEST_CASE("tree edges are crossed an even number of times on every excursion") {
    for (const auto& topo : {Topology::build(TreeKind::Tree, 3, 4, BaseGraph::path2()),
                             Topology::build(TreeKind::Tree, 5, 3, BaseGraph::cycle(5)),
                             Topology::build(TreeKind::Tree, 4, 3, BaseGraph::complete(6))}) {
        CAPTURE(topo.describe());
        RngStream rng(7, topo.k());
        for (int rep = 0; rep < 2000; ++rep) {
            auto tr = walk_until(topo, {topo.root(), 0}, ReturnToRootBag{}, rng);
            REQUIRE_FALSE(tr.truncated);
            CHECK(is_valid_trajectory(topo, tr));
            std::map<std::pair<TreeNode, TreeNode>, std::uint64_t> crossings;
            for (std::size_t t = 0; t < tr.length(); ++t) {
                auto x = tr.vertices[t].tree, y = tr.vertices[t + 1].tree;
                if (x != y) ++crossings[std::minmax(x, y)];
            }
            for (const auto& [edge, count] : crossings) CHECK(count % 2 == 0);
        }
    }
}

TEST_CASE("degrees and symmetry at random vertices of large balls") {
    RngStream rng(3, 3);
    for (const auto& topo : {Topology::build(TreeKind::Tree, 5, 12, BaseGraph::cycle(6)),
                             Topology::build(TreeKind::Pyramid, 4, 8, BaseGraph::complete(3))}) {
        CAPTURE(topo.describe());
        const auto nodes = *topo.tree_node_count();
        for (int rep = 0; rep < 3000; ++rep) {
            const auto t = topo.tree_node_at(rep < 50 ? static_cast<std::uint64_t>(rep) : rng.below(nodes));
            const ProductVertex v{t, static_cast<std::uint32_t>(rng.below(topo.base().size()))};
            std::uint32_t expected = 0;
            if (topo.kind() == TreeKind::Tree)
                expected = t.depth == 0 ? topo.k() : (topo.is_leaf(t) ? 1 : topo.k());
            else
                expected = t.depth == 0 ? 4 * topo.k() : (topo.is_leaf(t) ? 3 : 4 * topo.k() + 3);
            CHECK(topo.tree_degree(t) == expected);
            auto nb = topo.neighbors(v);
            CHECK(nb.size() == expected + topo.base().degree());
            for (const auto& w : nb) {
                CHECK(topo.contains(w));
                auto back = topo.neighbors(w);
                CHECK(std::find(back.begin(), back.end(), v) != back.end());
            }
            if (topo.is_leaf(t)) {
                auto ray = topo.ray_to(t);
                CHECK(ray.size() == topo.radius() + 1);
                for (std::size_t i = 0; i + 1 < ray.size(); ++i) CHECK(topo.parent(ray[i + 1]) == ray[i]);
            }
        }
    }
}

TEST_CASE("Wilson output is a spanning tree on every sample") {
    for (const auto& topo : {Topology::build(TreeKind::Tree, 3, 3, BaseGraph::cycle(4)),
                             Topology::build(TreeKind::Pyramid, 3, 2, BaseGraph::path2())}) {
        auto g = FiniteGraph::from_topology(topo);
        RngStream rng(5, 5);
        for (int rep = 0; rep < 100; ++rep) {
            const auto root = static_cast<std::uint32_t>(rng.below(g.size()));
            auto t = wilson_ust(g, root, rng);
            CHECK(t.root == root);
            CHECK(validate_spanning_tree(g, t).empty());
        }
    }
}

TEST_CASE("detectors are pure functions of the stored trajectory") {
    auto tree = Topology::build(TreeKind::Tree, 3, 3, BaseGraph::cycle(3));
    auto py = Topology::build(TreeKind::Pyramid, 3, 2, BaseGraph::path2());
    Thresholds th;
    th.shell_offset = 1;
    for (const auto* topo : {&tree, &py}) {
        CAPTURE(topo->describe());
        const auto z = topo->tree_node_at(*topo->tree_node_count() - 1);
        const auto ray = topo->ray_to(z);
        RngStream rng(19, 0);
        std::uint64_t c_total = 0, b_total = 0;
        std::vector<std::uint64_t> c_by_h(topo->base().size(), 0);
        for (int rep = 0; rep < 4000; ++rep) {
            auto tr = walk_until(*topo, {topo->root(), 0}, ReturnToRootBag{}, rng);
            const Trajectory copy = tr;

            auto v1 = detect_viable(*topo, tr, z), v2 = detect_viable(*topo, copy, z);
            CHECK(v1.applicable == v2.applicable);
            CHECK(v1.A == v2.A);
            CHECK(v1.L == v2.L);
            CHECK(v1.B == v2.B);
            CHECK(v1.E == v2.E);
            CHECK(v1.F == v2.F);
            CHECK(extract_viable_leaves(*topo, tr) == extract_viable_leaves(*topo, copy));

            auto b1 = detect_bag_avoidance(*topo, tr, z, th), b2 = detect_bag_avoidance(*topo, copy, z, th);
            CHECK(b1.C == b2.C);
            CHECK(b1.size_A == b2.size_A);
            CHECK(b1.size_B == b2.size_B);
            CHECK(b1.good == b2.good);
            CHECK(b1.prep == b2.prep);
            if (b1.applicable) {
                b_total += b1.viable.B;
                if (b1.C) {
                    CHECK(b1.viable.B);
                    ++c_total;
                    ++c_by_h[b1.terminal_base];
                }
            }

            auto a1 = detect_avoid(*topo, tr, ray, th), a2 = detect_avoid(*topo, copy, ray, th);
            CHECK(a1.sizes == a2.sizes);
            CHECK(a1.avoid == a2.avoid);
            CHECK(a1.all_avoid == a2.all_avoid);
        }
        CHECK(b_total >= c_total);
        std::uint64_t s = 0;
        for (auto c : c_by_h) s += c;
        CHECK(s == c_total);
    }
}

TEST_CASE("statistics do not depend on the worker count") {
    auto topo = Topology::build(TreeKind::Tree, 3, 4, BaseGraph::cycle(3));
    const BatchPlan plan{3000, 97};
    auto r1 = reach_tally(topo, plan, 1, 21), r4 = reach_tally(topo, plan, 4, 21);
    CHECK(r1.samples == r4.samples);
    CHECK(r1.truncations == r4.truncations);
    CHECK(r1.depth_counts == r4.depth_counts);
    CHECK(reach_tally(topo, plan, 3, 22).depth_counts != r1.depth_counts);

    auto p1 = estimate_pk(6, {20000, 1000}, 1, 8), p4 = estimate_pk(6, {20000, 1000}, 4, 8);
    CHECK(p1.hits == p4.hits);

    auto c1 = coupling_tail(50, 1, 50, 30, {5000, 300}, 1, 4), c4 = coupling_tail(50, 1, 50, 30, {5000, 300}, 4, 4);
    CHECK(c1.exceed == c4.exceed);
    CHECK(c1.max_tau == c4.max_tau);

    auto f1 = factorization_check(4, 2, {5000, 512}, {5000, 512}, 1, 2);
    auto f4 = factorization_check(4, 2, {5000, 512}, {5000, 512}, 4, 2);
    CHECK(f1.hits == f4.hits);
    CHECK(f1.pk.hits == f4.pk.hits);
}

TEST_CASE("stationary bound for every n up to 500") {
    for (std::uint32_t n = 2; n <= 500; ++n) {
        for (auto v : {ChainVariant::Lazy, ChainVariant::Loopless}) {
            auto s = stationary({n, v});
            bool ok = true;
            for (std::uint32_t i = 0; i < n; ++i) ok &= s.pi[i] <= (i + 1.0) / n + 1e-12;
            CHECK_MESSAGE(ok, "n = " << n);
        }
    }
}
