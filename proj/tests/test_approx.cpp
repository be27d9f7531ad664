#include <catch2/catch.hpp>

#include "treeord/approx.hpp"

#include "generators.hpp"

#include <random>

using namespace treeord;

namespace {

SegmentTree unit_edge() {
    return SegmentTree::make({{-1, Rat(0), false, "r"}, {0, Rat(1), false, "a"}});
}

SegmentTree y_tree() {
    return SegmentTree::make({{-1, Rat(0), false, "r"},
                              {0, Rat(1), false, "b"},
                              {1, Rat(1), false, "l1"},
                              {1, Rat(2), false, "l2"}});
}

std::map<PointS, Rat> arc_stage_grading(const SegmentTree& x, const FiniteSubtree& t) {
    GradingS arc = arc_length_grading(x);
    Rat total(1);
    for (std::size_t i = 0; i < x.size(); ++i)
        if (static_cast<int>(i) != x.root())
            total += x.node(static_cast<int>(i)).len;
    std::map<PointS, Rat> f;
    for (const PointS& p : t.points) f[p] = evaluate_grading(x, arc, p) / total;
    return f;
}

}  // namespace

TEST_CASE("branch decomposition of a single edge") {
    SegmentTree x = unit_edge();
    BranchDecomposition d = branch_decomposition(x);
    REQUIRE(d.charts.size() == 1);
    CHECK(d.charts[0].includes_lo);  // the whole branch including the root
    CHECK(d.charts[0].top_closed);
    CHECK(d.charts[0].total == Rat(1));
    CHECK(chart_value(x, d.charts[0], root_point(x)) == Rat(0));
    CHECK(chart_value(x, d.charts[0], vertex_point(x, 1)) == Rat(1));
}

TEST_CASE("branch decomposition of the Y tree") {
    SegmentTree y = y_tree();
    BranchDecomposition d = branch_decomposition(y);
    REQUIRE(d.charts.size() == 2);
    CHECK(d.charts[0].includes_lo);
    CHECK(d.charts[0].records == std::vector<int>{1, 2});
    CHECK_FALSE(d.charts[1].includes_lo);  // half-open: strictly above the branch vertex
    CHECK(d.charts[1].records == std::vector<int>{3});
    CHECK(d.charts[1].lo_vertex == 1);
    CHECK_FALSE(chart_preimage(y, d.charts[1], Rat(0)).has_value());
}

TEST_CASE("branch decomposition of a single vertex") {
    SegmentTree single = SegmentTree::make({{-1, Rat(0), false, "r"}});
    BranchDecomposition d = branch_decomposition(single);
    REQUIRE(d.charts.size() == 1);
    CHECK(d.charts[0].singleton);  // chart is the singleton {1}
    CHECK(chart_value(single, d.charts[0], root_point(single)) == Rat(1));
}

TEST_CASE("remainders partition the tree") {
    std::mt19937_64 rng(701);
    for (int round = 0; round < 50; ++round) {
        SegmentTree x = gen::random_segtree(rng, 10);
        BranchDecomposition d = branch_decomposition(x);
        std::set<int> seen;
        for (const auto& c : d.charts)
            for (int r : c.records) CHECK(seen.insert(r).second);
        std::size_t expected = x.size() - 1;
        CHECK(seen.size() == expected);
        // sampled points land in exactly one chart
        for (int k = 0; k < 8; ++k) {
            PointS p = gen::random_point_s(rng, x);
            std::size_t hits = 0;
            for (const auto& c : d.charts)
                if (chart_value(x, c, p)) ++hits;
            CHECK(hits == (p == root_point(x) && x.size() > 1 ? 1 : 1));
        }
    }
}

TEST_CASE("approximating subtrees of a single edge") {
    SegmentTree x = unit_edge();
    BranchDecomposition d = branch_decomposition(x);
    FiniteSubtree t0 = subtree_Tn(d, 0);
    CHECK(t0.points == std::vector<PointS>{root_point(x)});
    FiniteSubtree t2 = subtree_Tn(d, 2);
    CHECK(t2.points == std::vector<PointS>{root_point(x), PointS{1, Rat(1, 2)}, vertex_point(x, 1)});
}

TEST_CASE("subtrees are cumulative and well-stratified") {
    std::mt19937_64 rng(709);
    for (int round = 0; round < 40; ++round) {
        SegmentTree x = gen::random_segtree(rng, 8);
        BranchDecomposition d = branch_decomposition(x);
        FiniteSubtree prev;
        for (std::size_t n = 0; n <= 8; ++n) {
            FiniteSubtree cur = subtree_Tn(d, n);  // throws if any down-set is unordered
            for (const PointS& p : prev.points)
                CHECK(std::count(cur.points.begin(), cur.points.end(), p) == 1);
            prev = cur;
        }
    }
}

TEST_CASE("density witnesses on the unit edge") {
    SegmentTree x = unit_edge();
    BranchDecomposition d = branch_decomposition(x);
    auto res = check_density(d, 2, {{PointS{1, Rat(1, 4)}, PointS{1, Rat(3, 4)}}});
    REQUIRE(res[0].has_value());
    CHECK(res[0]->stage == 2);
    CHECK(res[0]->witness == PointS{1, Rat(1, 2)});
}

TEST_CASE("pairs bracketing a branch top find early witnesses") {
    SegmentTree y = y_tree();
    BranchDecomposition d = branch_decomposition(y);
    // l2's top enters at stage 1 (chart value 1); the pair brackets it
    auto res = check_density(d, 3, {{PointS{3, Rat(1, 2)}, PointS{3, Rat(9, 5)}}});
    REQUIRE(res[0].has_value());
    CHECK(res[0]->stage <= 3);
}

TEST_CASE("density rejects non-comparable pairs") {
    SegmentTree y = y_tree();
    BranchDecomposition d = branch_decomposition(y);
    PointS p{2, Rat(1, 2)};
    CHECK_THROWS_AS(check_density(d, 2, {{p, p}}), domain_error);
    CHECK_THROWS_AS(check_density(d, 2, {{p, PointS{3, Rat(1, 2)}}}), domain_error);
}

TEST_CASE("density succeeds by the breakpoint cover stage on random trees") {
    std::mt19937_64 rng(719);
    for (int round = 0; round < 30; ++round) {
        SegmentTree x = gen::random_segtree(rng, 10, true, /*small_lengths=*/true);
        BranchDecomposition d = branch_decomposition(x);
        std::size_t budget = breakpoint_cover_stage(d) + 3;
        auto pairs = gen::density_pairs(rng, x, d, 50);
        if (pairs.empty()) continue;  // single vertex
        auto res = check_density(d, budget, pairs);
        for (const auto& w : res) CHECK(w.has_value());
    }
}

TEST_CASE("combining a root-only stage") {
    SegmentTree x = unit_edge();
    FiniteSubtree t0;
    t0.points = {root_point(x)};
    std::map<PointS, Rat> f0{{root_point(x), Rat(0)}};
    GradingS g = combine_gradings(x, {{t0, f0}});
    CHECK(evaluate_grading(x, g, root_point(x)) == Rat(0));
    validate_grading(x, g, GradingCheck::weak);
    CHECK(evaluate_grading(x, g, PointS{1, Rat(1, 2)}) == Rat(0));  // sup extension is flat
}

TEST_CASE("combined grading grows across a witness") {
    SegmentTree x = unit_edge();
    BranchDecomposition d = branch_decomposition(x);
    std::vector<std::pair<FiniteSubtree, std::map<PointS, Rat>>> stages;
    for (std::size_t n = 0; n <= 2; ++n) {
        FiniteSubtree tn = subtree_Tn(d, n);
        stages.push_back({tn, arc_stage_grading(x, tn)});
    }
    GradingS g = combine_gradings(x, stages,
                                  {{PointS{1, Rat(1, 4)}, PointS{1, Rat(3, 4)}}});
    CHECK(evaluate_grading(x, g, PointS{1, Rat(1, 4)}) <
          evaluate_grading(x, g, PointS{1, Rat(3, 4)}));
}

TEST_CASE("combine rejects out-of-range and non-monotone stages") {
    SegmentTree x = unit_edge();
    BranchDecomposition d = branch_decomposition(x);
    FiniteSubtree t2 = subtree_Tn(d, 2);
    auto good = arc_stage_grading(x, t2);
    auto bad_range = good;
    bad_range[vertex_point(x, 1)] = Rat(2);
    CHECK_THROWS_AS(combine_gradings(x, {{t2, bad_range}}), domain_error);
    auto bad_mono = good;
    bad_mono[vertex_point(x, 1)] = Rat(0);
    bad_mono[root_point(x)] = Rat(1, 2);
    CHECK_THROWS_AS(combine_gradings(x, {{t2, bad_mono}}), domain_error);
}

TEST_CASE("combined gradings are strict on witnessed pairs of random trees") {
    std::mt19937_64 rng(727);
    for (int round = 0; round < 10; ++round) {
        SegmentTree x = gen::random_segtree(rng, 7, true, /*small_lengths=*/true);
        BranchDecomposition d = branch_decomposition(x);
        std::size_t budget = breakpoint_cover_stage(d) + 3;
        auto pairs = gen::density_pairs(rng, x, d, 12);
        if (pairs.empty()) continue;
        std::vector<std::pair<FiniteSubtree, std::map<PointS, Rat>>> stages;
        for (std::size_t n = 0; n <= budget; ++n) {
            FiniteSubtree tn = subtree_Tn(d, n);
            stages.push_back({tn, arc_stage_grading(x, tn)});
        }
        combine_gradings(x, stages, pairs);  // throws if strictness fails on a witnessed pair
    }
}

TEST_CASE("branching injection on the Y tree") {
    SegmentTree y = y_tree();
    FiniteSubtree t;
    t.points = {root_point(y), vertex_point(y, 1), vertex_point(y, 2), vertex_point(y, 3)};
    auto s = branching_injection(y, t);
    REQUIRE(s.size() == 1);
    CHECK(s.at(vertex_point(y, 1)) == vertex_point(y, 1));
}

TEST_CASE("branching injection on a chain is empty") {
    SegmentTree c = SegmentTree::make({{-1, Rat(0), false, "r"},
                                       {0, Rat(1), false, "a"},
                                       {1, Rat(1), false, "b"}});
    FiniteSubtree t;
    t.points = {root_point(c), vertex_point(c, 1), vertex_point(c, 2)};
    CHECK(branching_injection(c, t).empty());
}

TEST_CASE("branching injection lands on the vertex between deep successors") {
    SegmentTree y = y_tree();
    FiniteSubtree t;  // subtree points: root plus one deep point per arm
    t.points = {root_point(y), PointS{2, Rat(1, 2)}, PointS{3, Rat(3, 2)}};
    auto s = branching_injection(y, t);
    REQUIRE(s.size() == 1);
    CHECK(s.at(root_point(y)) == vertex_point(y, 1));
}

TEST_CASE("branching injection rejects rootless point sets") {
    SegmentTree y = y_tree();
    FiniteSubtree t;
    t.points = {vertex_point(y, 2), vertex_point(y, 3)};
    CHECK_THROWS_AS(branching_injection(y, t), domain_error);
}

TEST_CASE("branching injection is injective on approximating subtrees") {
    std::mt19937_64 rng(733);
    for (int round = 0; round < 40; ++round) {
        SegmentTree x = gen::random_segtree(rng, 10);
        BranchDecomposition d = branch_decomposition(x);
        FiniteSubtree t = subtree_Tn(d, 4 + rng() % 5);
        auto s = branching_injection(x, t);  // throws on any collision
        for (const auto& [p, q] : s) CHECK(leq_s(x, p, q));
    }
}
