#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "support.hpp"
#include "usf/avoid.hpp"
#include "usf/bag_avoidance.hpp"
#include "usf/experiments.hpp"
#include "usf/loop_erasure.hpp"
#include "usf/reach.hpp"
#include "usf/viable.hpp"
#include "usf/wilson.hpp"

using namespace usf;
using usf::test::lift;
using usf::test::make_trajectory;
using usf::test::node;
using usf::test::within_sigma;

namespace {

/// p_k in closed form: j side excursions (probability ((k-2)/k)^j / k of
/// reaching gamma_{i+1} after exactly j of them) with D_j distinct side edges
/// among j uniform draws, after which the back phase succeeds w.p. 1/(D_j+2).
double exact_pk(std::uint32_t k) {
    const std::uint32_t m = k - 2;
    std::vector<double> occ(m + 1, 0.0);  // law of D_j
    occ[0] = 1.0;
    double total = 0.0, reach = 1.0 / k;
    for (std::uint32_t j = 0; j <= k / 2; ++j) {
        double e = 0.0;
        for (std::uint32_t d = 0; d <= m; ++d) e += occ[d] / (d + 2.0);
        total += reach * e;
        reach *= static_cast<double>(m) / k;
        std::vector<double> next(m + 1, 0.0);
        for (std::uint32_t d = 0; d <= m; ++d) {
            if (d < m) next[d + 1] += occ[d] * (m - d) / m;
            next[d] += occ[d] * d / m;
        }
        occ = next;
    }
    return total;
}

std::vector<TreeNode> all_leaves(const Topology& topo) {
    std::vector<TreeNode> out;
    for (std::uint64_t r = 0; r < *topo.level_size(topo.radius()); ++r) out.push_back({topo.radius(), r});
    return out;
}

Thresholds offset(std::uint32_t c) {
    Thresholds th;
    th.shell_offset = c;
    return th;
}

}  // namespace

TEST_CASE("viable ray fixtures on a tree") {
    auto topo = Topology::build(TreeKind::Tree, 3, 3, BaseGraph::path2());
    const auto o = topo.root(), z = node(topo, {0, 0, 0});
    const auto ray = topo.ray_to(z);
    const auto g1 = ray[1], g2 = ray[2], s = node(topo, {0, 1}), s2 = node(topo, {1});

    SUBCASE("straight out and back") {
        auto rep = detect_viable(topo, lift({o, g1, g2, z, g2, g1, o}), z);
        REQUIRE(rep.applicable);
        CHECK(rep.A);
        CHECK(rep.L);
        CHECK(rep.B);
        CHECK(rep.ray_crossings == std::vector<std::uint32_t>{2, 2, 2});
    }
    SUBCASE("a ray edge crossed four times") {
        auto rep = detect_viable(topo, lift({o, g1, g2, g1, g2, z, g2, g1, o}), z);
        REQUIRE(rep.applicable);
        CHECK(rep.ray_crossings[1] == 4);
        CHECK_FALSE(rep.A);
        CHECK_FALSE(rep.B);
    }
    SUBCASE("the same side edge in both phases") {
        auto rep = detect_viable(topo, lift({o, g1, s, g1, g2, z, g2, g1, s, g1, o}), z);
        REQUIRE(rep.applicable);
        CHECK(rep.A);
        CHECK(rep.L);
        CHECK(rep.E[1] == std::vector<std::uint32_t>{1});
        CHECK(rep.F[1] == std::vector<std::uint32_t>{1});
        CHECK_FALSE(rep.disjoint[1]);
        CHECK_FALSE(rep.B);
    }
    SUBCASE("side edges used on one side only") {
        auto rep = detect_viable(topo, lift({o, g1, s, g1, g2, z, g2, g1, o, s2, o}), z);
        REQUIRE(rep.applicable);
        // Returning to o ends the excursion before the visit to s2.
        CHECK(rep.tau_o_plus == 8);
        CHECK(rep.B);
    }
    SUBCASE("too many visits before tau_z") {
        // Visit cap floor(3/2)+1 = 2.
        auto rep = detect_viable(topo, lift({o, g1, s, g1, s, g1, g2, z, g2, g1, o}), z);
        REQUIRE(rep.applicable);
        CHECK(rep.visits[1] == 3);
        CHECK_FALSE(rep.L);
        CHECK_FALSE(rep.B);
    }
    SUBCASE("base steps are lazy") {
        auto tr = make_trajectory({{o, 0}, {o, 1}, {g1, 1}, {g1, 0}, {g1, 1}, {g2, 1}, {z, 1}, {g2, 1}, {g1, 1},
                                   {o, 1}});
        auto rep = detect_viable(topo, tr, z);
        REQUIRE(rep.applicable);
        CHECK(rep.visits[1] == 1);
        CHECK(rep.B);
    }
    SUBCASE("never reaching z") {
        auto rep = detect_viable(topo, lift({o, s2, o}), z);
        CHECK_FALSE(rep.reached_z);
        CHECK_FALSE(rep.B);
    }
}

TEST_CASE("viable ray fixtures on a pyramid") {
    auto topo = Topology::build(TreeKind::Pyramid, 3, 2, BaseGraph::path2());
    const auto o = topo.root(), g1 = node(topo, {0}), z = node(topo, {0, 0});
    const auto corner = node(topo, {1});       // same quadruple as g1
    const auto q1 = node(topo, {0, 4}), q2 = node(topo, {0, 8});  // quadruples 1 and 2 below g1

    CHECK(detect_viable(topo, lift({o, g1, z, g1, o}), z).B);

    auto lateral = detect_viable(topo, lift({o, g1, corner, g1, z, g1, o}), z);
    REQUIRE(lateral.applicable);
    CHECK_FALSE(lateral.A);

    auto shared = detect_viable(topo, lift({o, g1, q1, g1, z, g1, q1, g1, o}), z);
    REQUIRE(shared.applicable);
    CHECK(shared.E[1] == std::vector<std::uint32_t>{1});
    CHECK(shared.F[1] == std::vector<std::uint32_t>{1});
    CHECK_FALSE(shared.B);

    auto separate = detect_viable(topo, lift({o, g1, q1, g1, z, g1, q2, g1, o}), z);
    REQUIRE(separate.applicable);
    CHECK(separate.E[1] == std::vector<std::uint32_t>{1});
    CHECK(separate.F[1] == std::vector<std::uint32_t>{2});
    CHECK(separate.B);

    // A corner visited inside a side quadruple does not touch the ray quadruple.
    auto q1b = node(topo, {0, 5});
    CHECK(detect_viable(topo, lift({o, g1, q1, q1b, q1, g1, z, g1, o}), z).B);
}

TEST_CASE("single-scan extraction matches per-leaf detection") {
    struct Case {
        TreeKind kind;
        std::uint32_t k, n;
    };
    for (auto c : {Case{TreeKind::Tree, 3, 2}, Case{TreeKind::Tree, 3, 3}, Case{TreeKind::Tree, 3, 4},
                   Case{TreeKind::Tree, 5, 3}, Case{TreeKind::Pyramid, 3, 2}}) {
        auto topo = Topology::build(c.kind, c.k, c.n, BaseGraph::complete(1));
        auto leaves = all_leaves(topo);
        RngStream rng(c.k * 100 + c.n, c.kind == TreeKind::Pyramid);
        std::uint64_t nonempty = 0;
        for (int rep = 0; rep < 400; ++rep) {
            auto tr = walk_until(topo, {topo.root(), 0}, ReturnToRootBag{}, rng);
            auto z = extract_viable_leaves(topo, tr);
            std::vector<TreeNode> oracle;
            for (const auto& leaf : leaves)
                if (detect_viable(topo, tr, leaf).B) oracle.push_back(leaf);
            REQUIRE(z == oracle);
            nonempty += !z.empty();
        }
        CHECK(nonempty > 0);
    }
    auto topo = Topology::build(TreeKind::Tree, 3, 2, BaseGraph::path2());
    CHECK(extract_viable_leaves(topo, lift({topo.root(), node(topo, {1}), topo.root()})).empty());
}

TEST_CASE("mean number of viable leaves") {
    // E|Z_n| = ((k-1) p_k)^(n-1): growing for k = 30, shrinking for k = 3.
    for (std::uint32_t k : {3U, 30U}) {
        std::vector<double> means;
        for (std::uint32_t n = 2; n <= 4; ++n) {
            auto topo = Topology::build(TreeKind::Tree, k, n, BaseGraph::complete(1));
            RngStream rng(k, n);
            const int N = 4000;
            double s = 0, s2 = 0;
            for (int rep = 0; rep < N; ++rep) {
                auto tr = walk_until(topo, {topo.root(), 0}, ReturnToRootBag{}, rng);
                double z = static_cast<double>(extract_viable_leaves(topo, tr).size());
                s += z;
                s2 += z * z;
            }
            const double mean = s / N, se = std::sqrt((s2 / N - mean * mean) / N);
            const double expected = std::pow((k - 1) * exact_pk(k), n - 1.0);
            CAPTURE(k);
            CAPTURE(n);
            CHECK(within_sigma(mean, expected, se, 4.0));
            means.push_back(mean);
        }
        const double sign = k == 30 ? 1.0 : -1.0;
        CHECK(sign * (means[1] - means[0]) > 0.0);
        CHECK(sign * (means[2] - means[1]) > 0.0);
    }
}

TEST_CASE("p_k lower bound and exact value") {
    CHECK(pk_lower_bound_sum(10) == doctest::Approx(0.1144145).epsilon(1e-6));
    CHECK(exact_pk(3) == doctest::Approx(11.0 / 54));
    for (std::uint32_t k : {3U, 6U, 10U, 20U}) {
        CAPTURE(k);
        CHECK(exact_pk(k) >= pk_lower_bound_sum(k));
        auto est = estimate_pk(k, {200000, 4096}, 1, 900 + k);
        CHECK(within_sigma(est.p_hat, exact_pk(k), binomial_se(exact_pk(k), est.samples), 4.0));
        CHECK(est.p_hat + 3 * binomial_se(est.p_hat, est.samples) >= est.lower_bound_sum);
    }
    CHECK_THROWS_AS(pk_lower_bound_sum(2), GraphError);
}

TEST_CASE("factorization of the viable-ray probability") {
    SUBCASE("n = 1 is a forced first step") {
        auto f = factorization_check(5, 1, {100000, 4096}, {1000, 4096}, 1, 3);
        CHECK(f.predicted == doctest::Approx(0.2));
        CHECK(within_sigma(f.p_b, 0.2, binomial_se(0.2, f.excursions)));
    }
    SUBCASE("against the exact p_k") {
        for (auto [k, n] : {std::pair<std::uint32_t, std::uint32_t>{4, 2}, {10, 2}, {6, 3}}) {
            CAPTURE(k);
            CAPTURE(n);
            auto f = factorization_check(k, n, {200000, 4096}, {200000, 4096}, 1, 17);
            CHECK(f.truncations == 0);
            const double exact = std::pow(exact_pk(k), n - 1.0) / k;
            CHECK(within_sigma(f.p_b, exact, binomial_se(exact, f.excursions), 4.0));
            CHECK(std::abs(f.z_score) < 4.0);
        }
    }
}

TEST_CASE("bag avoidance fixtures") {
    auto topo = Topology::build(TreeKind::Tree, 3, 2, BaseGraph::path2());
    const auto o = topo.root(), g1 = node(topo, {0}), z = node(topo, {0, 0});

    auto same = detect_bag_avoidance(topo, lift({o, g1, z, g1, o}, 0), z, offset(0));
    REQUIRE(same.applicable);
    CHECK(same.viable.B);
    CHECK(same.H_A[1] == std::vector<std::uint32_t>{0});
    CHECK(same.H_B[1] == std::vector<std::uint32_t>{0});
    CHECK_FALSE(same.C);

    auto swap = make_trajectory({{o, 0}, {g1, 0}, {z, 0}, {z, 1}, {g1, 1}, {o, 1}});
    auto rep = detect_bag_avoidance(topo, swap, z, offset(0));
    REQUIRE(rep.applicable);
    CHECK(rep.H_A[1] == std::vector<std::uint32_t>{0});
    CHECK(rep.H_B[1] == std::vector<std::uint32_t>{1});
    CHECK(rep.C);
    CHECK(rep.terminal_base == 1);
    CHECK(rep.size_A[1] == 1);
    CHECK(rep.size_B[1] == 1);

    // With the default shell offset the index range is empty and C = B.
    CHECK(detect_bag_avoidance(topo, lift({o, g1, z, g1, o}, 0), z).C);

    auto bad = detect_bag_avoidance(topo, lift({o, g1, o}), z);
    CHECK_FALSE(bad.applicable);
    CHECK_FALSE(bad.reason.empty());
}

TEST_CASE("bag avoidance on a pyramid") {
    auto topo = Topology::build(TreeKind::Pyramid, 3, 2, BaseGraph::cycle(4));
    const auto o = topo.root(), g1 = node(topo, {0}), z = node(topo, {0, 0}), q1 = node(topo, {0, 4});
    auto tr = make_trajectory({{o, 0}, {g1, 0}, {q1, 0}, {g1, 0}, {g1, 1}, {z, 1}, {z, 2}, {g1, 2}, {o, 2}});
    auto rep = detect_bag_avoidance(topo, tr, z, offset(0));
    REQUIRE(rep.applicable);
    CHECK(rep.viable.E[1] == std::vector<std::uint32_t>{1});
    CHECK(rep.viable.F[1].empty());
    CHECK(rep.H_A[1] == std::vector<std::uint32_t>{0, 1});
    CHECK(rep.H_B[1] == std::vector<std::uint32_t>{2});
    CHECK(rep.viable.B);
    CHECK(rep.C);
    CHECK(rep.terminal_base == 2);
}

TEST_CASE("bag avoidance invariants on sampled excursions") {
    auto topo = Topology::build(TreeKind::Tree, 3, 3, BaseGraph::cycle(4));
    const auto z = node(topo, {0, 0, 0});
    const auto th = offset(1);
    RngStream rng(61, 0);
    std::uint64_t c_total = 0, b_total = 0;
    std::vector<std::uint64_t> c_by_h(4, 0);
    for (int rep = 0; rep < 20000; ++rep) {
        auto tr = walk_until(topo, {topo.root(), 0}, ReturnToRootBag{}, rng);
        auto r = detect_bag_avoidance(topo, tr, z, th);
        if (!r.applicable) continue;
        if (r.C) {
            CHECK(r.viable.B);
            ++c_total;
            ++c_by_h[r.terminal_base];
        }
        b_total += r.viable.B;
        auto again = detect_bag_avoidance(topo, tr, z, th);
        CHECK(again.C == r.C);
        CHECK(again.H_A == r.H_A);
        CHECK(again.H_B == r.H_B);
    }
    CHECK(c_total > 0);
    CHECK(b_total >= c_total);
    CHECK(c_by_h[0] + c_by_h[1] + c_by_h[2] + c_by_h[3] == c_total);
}

TEST_CASE("good and prep chain") {
    auto topo = Topology::build(TreeKind::Tree, 3, 3, BaseGraph::path2());
    const auto o = topo.root(), z = node(topo, {0, 0, 0});
    auto ray = topo.ray_to(z);
    Thresholds th;
    th.shell_offset = 1;
    th.gap_exponent = 0.0;  // gap threshold 1
    // Two base steps in gamma_2 x H between beta_2 and beta_1.
    auto tr = make_trajectory({{o, 0}, {ray[1], 0}, {ray[2], 0}, {z, 0}, {ray[2], 0}, {ray[2], 1}, {ray[2], 0},
                               {ray[1], 0}, {o, 0}});
    auto rep = detect_bag_avoidance(topo, tr, z, th);
    REQUIRE(rep.applicable);
    REQUIRE(rep.chain_defined);
    CHECK(rep.good[2]);
    CHECK(rep.prep[1]);
    // H_A(1) = H_B(1) = {0}.
    CHECK_FALSE(rep.disjoint[1]);
    CHECK_FALSE(rep.good[1]);

    th.gap_exponent = 5.0;
    auto strict = detect_bag_avoidance(topo, tr, z, th);
    CHECK_FALSE(strict.prep[1]);
}

TEST_CASE("reach probability on T_1 against enumeration") {
    for (const char* base : {"path2", "cycle:3"}) {
        CAPTURE(base);
        auto topo = Topology::build(TreeKind::Tree, 3, 1, parse_base_spec(base));
        auto g = FiniteGraph::from_topology(topo);
        auto law = exhaustive_path_marginal(g, 0, 1);
        double stays = 0.0;
        for (const auto& [p, q] : law) {
            bool in_bag = true;
            for (auto v : p) in_bag &= topo.vertex_at(v).tree.depth == 0;
            if (in_bag) stays += q;
        }
        auto est = reach_probability(topo, 0, {100000, 4096}, 1, 5);
        CHECK(est.target_depth == 1);
        CHECK(est.tally.truncations == 0);
        CHECK(within_sigma(est.p_hat, 1.0 - stays, binomial_se(1.0 - stays, est.tally.samples)));
        CHECK(est.ci.lo <= est.p_hat);
        CHECK(est.ci.hi >= est.p_hat);
    }
    auto topo = Topology::build(TreeKind::Tree, 3, 2, BaseGraph::path2());
    CHECK_THROWS_AS(reach_probability(topo, 2, {10, 10}, 1, 1), GraphError);
}

TEST_CASE("reach probability decreases with the radius on path2") {
    std::vector<double> x;
    std::vector<std::uint64_t> hits, samples;
    for (std::uint32_t n = 4; n <= 9; ++n) {
        auto topo = Topology::build(TreeKind::Tree, 3, n, BaseGraph::path2());
        auto est = reach_probability(topo, 1, {20000, 4096}, 1, 100 + n);
        CHECK(est.tally.truncations == 0);
        x.push_back(n);
        hits.push_back(est.hits);
        samples.push_back(est.tally.samples);
    }
    LineFit fit;
    CHECK(classify_curve(x, hits, samples, &fit) == Trend::Decaying);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) CHECK(hits[i + 1] <= hits[i] + 3 * std::sqrt(hits[i] + 1.0));
}

TEST_CASE("exit curve decays with a complete base") {
    auto topo = Topology::build(TreeKind::Tree, 3, 6, BaseGraph::complete(16));
    auto tally = reach_tally(topo, {5000, 1024}, 1, 77);
    auto curve = exit_curve(tally, 2, 5);
    REQUIRE(curve.r.size() == 4);
    for (std::size_t i = 0; i + 1 < curve.hits.size(); ++i) CHECK(curve.hits[i + 1] <= curve.hits[i]);
    CHECK(curve.fit.slope + 2 * curve.fit.slope_se < 0.0);
    CHECK(tally.reaching(0) == tally.samples);
}

TEST_CASE("avoid report") {
    auto topo = Topology::build(TreeKind::Tree, 3, 1, BaseGraph::complete(8));
    const auto o = topo.root(), g1 = node(topo, {0});
    const std::vector<TreeNode> ray{o, g1};

    SUBCASE("never reaching the bag is vacuous") {
        auto rep = detect_avoid(topo, make_trajectory({{o, 0}, {o, 3}, {o, 1}}), ray);
        CHECK_FALSE(rep.indices.reached);
        CHECK_FALSE(rep.all_avoid);
        CHECK(rep.avoid == std::vector<bool>{false});
        CHECK(rep.good_bags == 0);
    }
    SUBCASE("hand fixture") {
        // Loops in the o bag, up to g1, back down at another base vertex.
        auto tr = make_trajectory({{o, 0}, {o, 2}, {o, 3}, {o, 2}, {o, 4}, {g1, 4}, {g1, 5}, {o, 5}, {o, 1}});
        auto rep = detect_avoid(topo, tr, ray);
        REQUIRE(rep.indices.reached);
        CHECK(rep.indices.beta_r == 5);
        CHECK(rep.indices.kappa[0] == 5);
        // LERW_5 = (o,0),(o,2),(o,4),(g1,4): three vertices in the o bag.
        CHECK(rep.sizes[0] == 3);
        CHECK(rep.indices.phi[0] == 7);
        CHECK(rep.avoid[0]);
    }
    SUBCASE("sizes match batch erasure restricted to the bag") {
        RngStream rng(9, 0);
        const ProductVertex a{o, 0}, b{o, 1};
        int reached = 0;
        for (int rep = 0; rep < 2000; ++rep) {
            auto tr = walk_until(topo, a, HitVertex{b}, rng);
            auto r = detect_avoid(topo, tr, ray);
            if (!r.indices.reached) continue;
            ++reached;
            const auto kappa = r.indices.kappa[0];
            std::vector<ProductVertex> prefix(tr.vertices.begin(), tr.vertices.begin() + static_cast<std::ptrdiff_t>(kappa) + 1);
            auto path = loop_erase<ProductVertex, ProductVertexHash>(prefix);
            std::uint64_t in_bag = 0;
            for (const auto& v : path) in_bag += v.tree == o;
            CHECK(r.sizes[0] == in_bag);
            std::set<ProductVertex> erased(path.begin(), path.end());
            bool hit = false;
            for (auto t = r.indices.phi[0]; r.indices.phi[0] != kNever && t <= r.indices.psi[0]; ++t)
                hit |= erased.count(tr.vertices[t]) != 0;
            CHECK(r.avoid[0] == !hit);
        }
        CHECK(reached > 100);
    }
}

TEST_CASE("avoid probability stays below the union envelope") {
    CHECK(avoid_envelope(3, 1) == doctest::Approx(6.0));
    CHECK(avoid_envelope(4, 3) == doctest::Approx(8.0 * (7.0 / 8) * (7.0 / 8)));
    auto topo = Topology::build(TreeKind::Tree, 3, 4, BaseGraph::complete(4));
    auto z = node(topo, {0, 0, 0, 0});
    auto full = topo.ray_to(z);
    for (std::uint32_t r = 1; r <= 3; ++r) {
        std::vector<TreeNode> ray(full.begin(), full.begin() + r + 1);
        RngStream rng(r, 7);
        std::uint64_t hits = 0;
        const std::uint64_t N = 3000;
        for (std::uint64_t i = 0; i < N; ++i) {
            auto tr = walk_until(topo, {topo.root(), 0}, HitVertex{{topo.root(), 1}}, rng);
            hits += detect_avoid(topo, tr, ray).all_avoid;
        }
        CHECK(static_cast<double>(hits) / N <= avoid_envelope(3, r));
    }
}
