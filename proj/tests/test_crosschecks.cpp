// Cross-module consistency properties: independent routes to the same
// answer must agree exactly.

#include <catch2/catch.hpp>

#include "treeord/io.hpp"

#include "generators.hpp"

#include <random>

using namespace treeord;

TEST_CASE("order agrees with meets on both presentations") {
    std::mt19937_64 rng(2003);
    for (int round = 0; round < 80; ++round) {
        OrdinalTree t = gen::random_wstree(rng, 12);
        for (int k = 0; k < 15; ++k) {
            PointW a = gen::random_point_w(rng, t);
            PointW b = gen::random_point_w(rng, t);
            CHECK(leq_w(t, a, b) == (meet_w(t, a, b) == a));
        }
        SegmentTree x = gen::random_segtree(rng, 12);
        for (int k = 0; k < 15; ++k) {
            PointS a = gen::random_point_s(rng, x);
            PointS b = gen::random_point_s(rng, x);
            CHECK(leq_s(x, a, b) == (meet_s(x, a, b) == a));
        }
    }
}

namespace {

// split a random edge by inserting a chain vertex; the presented order is
// unchanged
OrdinalTree split_random_edge(std::mt19937_64& rng, const OrdinalTree& t) {
    std::vector<int> candidates;
    for (std::size_t v = 0; v < t.size(); ++v) {
        const auto& nd = t.node(static_cast<int>(v));
        if (nd.parent >= 0 && (nd.len.omega || nd.len.n >= 2)) candidates.push_back(static_cast<int>(v));
    }
    if (candidates.empty()) return t;
    int v = candidates[rng() % candidates.size()];
    auto nodes = t.nodes();
    const auto& nd = t.node(v);
    OrdinalTree::Node mid;
    mid.parent = nd.parent;
    mid.name = "split" + std::to_string(rng() % 100000) + nd.name;
    if (nd.len.omega) {
        // a finite prefix absorbs into the infinite remainder
        mid.len = EdgeLen::finite(1 + rng() % 3);
        nodes[static_cast<std::size_t>(v)].len = EdgeLen::inf();
    } else {
        std::uint64_t a = 1 + rng() % (nd.len.n - 1);
        mid.len = EdgeLen::finite(a);
        nodes[static_cast<std::size_t>(v)].len = EdgeLen::finite(nd.len.n - a);
    }
    nodes.push_back(mid);
    nodes[static_cast<std::size_t>(v)].parent = static_cast<int>(nodes.size() - 1);
    return OrdinalTree::make(std::move(nodes));
}

}  // namespace

TEST_CASE("isomorphism is invariant under presentation splits") {
    std::mt19937_64 rng(2011);
    for (int round = 0; round < 150; ++round) {
        OrdinalTree t = gen::random_wstree(rng, 12);
        OrdinalTree s = t;
        for (int k = 0; k < 4; ++k) s = split_random_edge(rng, s);
        CHECK(iso_check(t, s));
    }
}

TEST_CASE("growing a finite edge breaks isomorphism") {
    std::mt19937_64 rng(2017);
    for (int round = 0; round < 100; ++round) {
        OrdinalTree t = gen::random_wstree(rng, 10, /*with_omega=*/false);
        if (t.size() < 2) continue;
        auto nodes = t.nodes();
        std::size_t v = 1 + rng() % (nodes.size() - 1);
        while (nodes[v].parent < 0) v = 1 + rng() % (nodes.size() - 1);
        nodes[v].len = EdgeLen::finite(nodes[v].len.n + 1);
        OrdinalTree s = OrdinalTree::make(std::move(nodes));
        CHECK_FALSE(iso_check(t, s));  // one more point in a finite order
    }
}

namespace {

PointS map_by_names(const SegmentTree& before, const SegmentTree& after, const PointS& p) {
    if (is_vertex(before, p)) {
        int v = after.find(before.node(p.node).name);
        REQUIRE(v >= 0);
        return v == after.root() ? root_point(after) : vertex_point(after, v);
    }
    std::string top = before.node(p.node).name;
    std::string bottom = before.node(before.node(p.node).parent).name;
    int t = after.find(top), b = after.find(bottom);
    REQUIRE((t >= 0 && b >= 0));
    if (after.node(t).parent == b) return PointS{t, p.t};
    REQUIRE(after.node(b).parent == t);
    return PointS{b, after.node(b).len - p.t};
}

}  // namespace

TEST_CASE("the railroad metric is invariant under rerooting") {
    std::mt19937_64 rng(2027);
    for (int round = 0; round < 40; ++round) {
        SegmentTree x = gen::random_segtree(rng, 9, /*allow_open=*/false);
        GradingS ell = arc_length_grading(x);
        int pivot = static_cast<int>(rng() % x.size());
        PointS rho = pivot == x.root() ? root_point(x) : vertex_point(x, pivot);
        SegmentTree r = reroot(x, rho);
        GradingS ell_r = arc_length_grading(r);
        std::vector<PointS> sample;
        for (std::size_t i = 0; i < x.size(); ++i) {
            int rec = static_cast<int>(i);
            sample.push_back(rec == x.root() ? root_point(x) : vertex_point(x, rec));
            if (rec != x.root()) sample.push_back(PointS{rec, x.node(rec).len / 3});
        }
        for (const PointS& p : sample)
            for (const PointS& q : sample)
                CHECK(railroad_distance(x, ell, p, q) ==
                      railroad_distance(r, ell_r, map_by_names(x, r, p), map_by_names(x, r, q)));
    }
}

TEST_CASE("arc length through the road embedding equals the rank") {
    std::mt19937_64 rng(2029);
    for (int round = 0; round < 60; ++round) {
        OrdinalTree t = gen::random_wstree(rng, 12, /*with_omega=*/false);
        RoadResult r = road(t);
        GradingS ell = arc_length_grading(r.space);
        for (const PointW& p : full_point_set(t)) {
            Ordinal rk = rank(t, p);
            REQUIRE(rk.terms.size() <= 1);
            Rat expected = rk.is_zero() ? Rat(0) : Rat(static_cast<Int>(rk.terms[0].second));
            CHECK(evaluate_grading(r.space, ell, r.embed(t, p)) == expected);
        }
    }
}

TEST_CASE("continuization over a single edge matches the unit-chart routine") {
    std::mt19937_64 rng(2039);
    for (int round = 0; round < 60; ++round) {
        JumpFunction f = gen::random_jump_function(rng, 4);
        Rat len = gen::random_small_rat(rng) + 1;
        SegmentTree x = SegmentTree::make({{-1, Rat(0), false, "r"}, {0, len, false, "a"}});
        GradingS g;
        g.vertex_values[0] = f.start - gen::random_small_rat(rng);  // jump at the bottom allowed
        g.vertex_values[1] = f.end_val;
        GradingS::EdgeFn fn;
        fn.start = f.start;
        for (const auto& b : f.breaks) fn.breaks.push_back({b.t * len, b.left, b.val});
        fn.end_left = f.end_left;
        g.edge_fns[1] = fn;
        GradingS h = full_continuization(x, g);
        JumpFunction hu = continuize(f, g.vertex_values.at(0));
        for (int k = 1; k <= 12; ++k) {
            Rat t(static_cast<Int>(k), 12);
            CHECK(evaluate_grading(x, h, PointS{1, t * len}) == evaluate_jump_function(hu, t));
        }
    }
}
