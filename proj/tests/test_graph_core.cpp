#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <queue>
#include <set>

#include "support.hpp"
#include "usf/finite_graph.hpp"
#include "usf/topology.hpp"

using namespace usf;
using usf::test::node;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
    std::string path = std::string(USF_TEST_TMP) + "/" + name;
    std::ofstream(path) << body;
    return path;
}

std::set<ProductVertex> neighbor_set(const Topology& topo, const ProductVertex& v) {
    auto ns = topo.neighbors(v);
    return {ns.begin(), ns.end()};
}

}  // namespace

TEST_CASE("base graph kinds") {
    auto p = BaseGraph::path2();
    CHECK(p.size() == 2);
    CHECK(p.degree() == 1);
    auto c = parse_base_spec("cycle:4");
    CHECK(c.degree() == 2);
    auto n0 = c.neighbors(0);
    CHECK(std::vector<std::uint32_t>(n0.begin(), n0.end()) == std::vector<std::uint32_t>{1, 3});
    auto k = parse_base_spec("complete:5");
    CHECK(k.size() == 5);
    CHECK(k.degree() == 4);
    CHECK(c.label() == "cycle:4");

    CHECK_THROWS_AS(parse_base_spec("cycle:2"), GraphError);
    CHECK_THROWS_AS(parse_base_spec("cycle:x"), GraphError);
    CHECK_THROWS_AS(parse_base_spec("torus:3"), GraphError);
}

TEST_CASE("custom base graphs are validated") {
    auto pet = parse_base_spec("custom:" + usf::test::fixture("petersen.edges"));
    CHECK(pet.size() == 10);
    CHECK(pet.degree() == 3);
    CHECK(pet.kind() == BaseKind::Custom);

    auto irregular = write_temp("irregular.edges", "0 1\n1 2\n");
    CHECK_THROWS_AS(parse_base_spec("custom:" + irregular), GraphError);
    auto split = write_temp("split.edges", "0 1\n2 3\n");
    CHECK_THROWS_AS(parse_base_spec("custom:" + split), GraphError);
    auto bad = write_temp("bad.edges", "0 1\n1\n");
    CHECK_THROWS_AS(parse_base_spec("custom:" + bad), GraphError);
}

TEST_CASE("product degrees") {
    auto t = Topology::build(TreeKind::Tree, 3, 2, BaseGraph::path2());
    CHECK(t.degree({t.root(), 0}) == 4);

    auto c4 = Topology::build(TreeKind::Tree, 3, 2, BaseGraph::cycle(4));
    CHECK(c4.degree({node(c4, {0, 1}), 0}) == 3);

    auto py = Topology::build(TreeKind::Pyramid, 3, 3, BaseGraph::complete(4));
    auto interior = node(py, {5, 2});
    CHECK(py.tree_degree(interior) == 15);
    CHECK(py.degree({interior, 1}) == 18);
    // Count incident edges of the materialized ball directly.
    auto g = FiniteGraph::from_topology(py);
    CHECK(g.degree(static_cast<std::uint32_t>(py.vertex_key({interior, 1}))) == 18);
}

TEST_CASE("neighbor lists put tree steps first") {
    auto t = Topology::build(TreeKind::Tree, 3, 2, BaseGraph::path2());
    auto ns = t.neighbors({t.root(), 0});
    REQUIRE(ns.size() == 4);
    for (int i = 0; i < 3; ++i) CHECK(ns[i].base == 0);
    CHECK(ns[3] == ProductVertex{t.root(), 1});

    auto py = Topology::build(TreeKind::Pyramid, 3, 3, BaseGraph::path2());
    auto corner = node(py, {6});  // quadruple 1, corner 2
    auto tn = py.tree_neighbors(corner);
    REQUIRE(tn.size() == 15);
    CHECK(tn[0] == py.root());
    CHECK(tn[1] == node(py, {5}));
    CHECK(tn[2] == node(py, {7}));
    for (int i = 3; i < 15; ++i) CHECK(py.parent(tn[i]) == corner);
}

TEST_CASE("queries outside the ball are rejected") {
    auto t = Topology::build(TreeKind::Tree, 3, 2, BaseGraph::path2());
    CHECK_THROWS_AS(t.neighbors({TreeNode{3, 0}, 0}), GraphError);
    CHECK_THROWS_AS(t.neighbors({t.root(), 2}), GraphError);
    CHECK_THROWS_AS(t.ray_to(node(t, {1})), GraphError);
    CHECK_THROWS_AS(Topology::build(TreeKind::Tree, 2, 2, BaseGraph::path2()), GraphError);
}

TEST_CASE("rays") {
    auto t = Topology::build(TreeKind::Tree, 3, 2, BaseGraph::path2());
    auto z = node(t, {2, 0});
    auto ray = t.ray_to(z);
    REQUIRE(ray.size() == 3);
    CHECK(ray[0] == t.root());
    CHECK(ray[1] == node(t, {2}));
    CHECK(ray[2] == z);
    CHECK(t.coord_string(z) == "o.2.0");

    auto py = Topology::build(TreeKind::Pyramid, 3, 2, BaseGraph::path2());
    auto leaf = node(py, {4 * 1 + 3, 4 * 0 + 2});
    auto pray = py.ray_to(leaf);
    REQUIRE(pray.size() == 3);
    CHECK(py.coord_string(leaf) == "o.1:3.0:2");
    CHECK(pray[1] == node(py, {7}));
    CHECK(py.parent(leaf) == pray[1]);

    auto t0 = Topology::build(TreeKind::Tree, 3, 0, BaseGraph::path2());
    CHECK(t0.ray_to(t0.root()) == std::vector<TreeNode>{t0.root()});
}

TEST_CASE("levels") {
    auto py = Topology::build(TreeKind::Pyramid, 3, 3, BaseGraph::path2());
    CHECK(py.level(py.root()) == 0);
    auto leaf = node(py, {1, 2, 3});
    CHECK(py.level(leaf) == 3);
    auto c0 = node(py, {4, 8});
    for (std::uint32_t c = 0; c < 4; ++c) CHECK(py.level(TreeNode{c0.depth, c0.rank + c}) == 2);
}

TEST_CASE("exhaustive degree census and neighbor symmetry for small balls") {
    struct Case {
        TreeKind kind;
        std::uint32_t k, n;
        std::string base;
    };
    for (const auto& c : {Case{TreeKind::Tree, 3, 3, "cycle:4"}, Case{TreeKind::Tree, 4, 2, "complete:3"},
                          Case{TreeKind::Pyramid, 3, 2, "path2"}, Case{TreeKind::Pyramid, 3, 2, "cycle:3"}}) {
        CAPTURE(c.base);
        auto topo = Topology::build(c.kind, c.k, c.n, parse_base_spec(c.base));
        const std::uint32_t d = topo.base().degree();
        const bool py = c.kind == TreeKind::Pyramid;
        for (std::uint64_t key = 0; key < *topo.vertex_count(); ++key) {
            auto v = topo.vertex_at(key);
            CHECK(topo.vertex_key(v) == key);
            std::uint32_t expect;
            if (v.tree.depth == 0)
                expect = py ? 4 * c.k : c.k;
            else if (v.tree.depth == c.n)
                expect = py ? 3 : 1;
            else
                expect = py ? 4 * c.k + 3 : c.k;
            CHECK(topo.degree(v) == expect + d);
            auto ns = topo.neighbors(v);
            CHECK(ns.size() == topo.degree(v));
            CHECK(std::set<ProductVertex>(ns.begin(), ns.end()).size() == ns.size());
            for (const auto& u : ns) {
                CHECK(neighbor_set(topo, u).count(v) == 1);
                CHECK(topo.adjacent(u, v));
            }
        }
    }
}

TEST_CASE("rays are the unique geodesics found by breadth-first search") {
    for (auto kind : {TreeKind::Tree, TreeKind::Pyramid}) {
        auto topo = Topology::build(kind, 3, 3, BaseGraph::path2());
        const auto count = *topo.tree_node_count();
        std::vector<std::uint32_t> dist(count, UINT32_MAX);
        std::vector<std::uint64_t> paths(count, 0);  // number of shortest paths
        std::queue<TreeNode> q;
        dist[0] = 0;
        paths[0] = 1;
        q.push(topo.root());
        while (!q.empty()) {
            auto t = q.front();
            q.pop();
            for (auto u : topo.tree_neighbors(t)) {
                auto iu = topo.tree_index(u), it = topo.tree_index(t);
                if (dist[iu] == UINT32_MAX) {
                    dist[iu] = dist[it] + 1;
                    q.push(u);
                }
                if (dist[iu] == dist[it] + 1) paths[iu] += paths[it];
            }
        }
        for (std::uint64_t i = 0; i < count; ++i) {
            auto z = topo.tree_node_at(i);
            if (!topo.is_leaf(z)) continue;
            auto ray = topo.ray_to(z);
            CHECK(dist[i] == 3);
            CHECK(paths[i] == 1);
            for (std::size_t j = 0; j + 1 < ray.size(); ++j) {
                CHECK(topo.tree_adjacent(ray[j], ray[j + 1]));
                CHECK(ray[j + 1].depth == ray[j].depth + 1);
            }
        }
    }
}

TEST_CASE("vertex index assigns ids in first-touch order") {
    auto topo = Topology::build(TreeKind::Tree, 3, 2, BaseGraph::path2());
    auto run = [&] {
        VertexIndex idx;
        std::vector<std::uint64_t> ids;
        for (auto v : topo.neighbors({node(topo, {1}), 1})) ids.push_back(idx.id(v));
        ids.push_back(idx.id({node(topo, {1}), 1}));
        ids.push_back(idx.id({topo.root(), 1}));
        return ids;
    };
    auto a = run();
    CHECK(a == run());
    CHECK(a[0] == 0);
    CHECK(a.back() == 0);  // the root was the first neighbor touched
}

TEST_CASE("materialized balls") {
    auto topo = Topology::build(TreeKind::Tree, 3, 2, BaseGraph::cycle(5));
    auto g = FiniteGraph::from_topology(topo);
    const std::uint64_t nodes = 1 + 3 + 6;
    CHECK(g.size() == nodes * 5);
    CHECK(g.edge_count() == (nodes - 1) * 5 + nodes * 5);

    auto py = Topology::build(TreeKind::Pyramid, 3, 2, BaseGraph::path2());
    auto gp = FiniteGraph::from_topology(py);
    const std::uint64_t pn = 1 + 12 + 144;
    // Tree edges, one C_4 per quadruple, base edges.
    CHECK(gp.edge_count() == (pn - 1) * 2 + (pn - 1) * 2 + pn);
    CHECK_THROWS_AS(FiniteGraph::from_topology(py, 10), GraphError);
}
