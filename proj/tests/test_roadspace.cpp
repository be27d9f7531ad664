#include <catch2/catch.hpp>

#include "treeord/roadspace.hpp"

#include "generators.hpp"

#include <random>

using namespace treeord;

TEST_CASE("road of a single vertex") {
    OrdinalTree t = OrdinalTree::make({{-1, EdgeLen{}, "r"}});
    RoadResult r = road(t);
    CHECK(r.space.size() == 1);
    CHECK(r.embed(t, PointW{0, 0}) == root_point(r.space));
}

TEST_CASE("road of a finite chain") {
    OrdinalTree t = OrdinalTree::make({{-1, EdgeLen{}, "r"}, {0, EdgeLen::finite(2), "a"}});
    RoadResult r = road(t);
    REQUIRE(r.space.size() == 2);
    CHECK(r.space.node(1).len == Rat(2));
    CHECK_FALSE(r.space.node(1).open);
    CHECK(r.embed(t, PointW{1, 1}) == PointS{1, Rat(1)});
    CHECK(r.embed(t, PointW{1, 0}) == vertex_point(r.space, 1));
}

TEST_CASE("road of an omega chain") {
    OrdinalTree t = OrdinalTree::make({{-1, EdgeLen{}, "r"}, {0, EdgeLen::inf(), "a"}});
    RoadResult r = road(t);
    REQUIRE(r.space.size() == 2);
    CHECK(r.space.node(1).len == Rat(1));
    CHECK(r.embed(t, PointW{1, 1}) == PointS{1, Rat(1, 2)});
    CHECK(r.embed(t, PointW{1, 3}) == PointS{1, Rat(7, 8)});
    CHECK(r.embed(t, PointW{1, 0}) == vertex_point(r.space, 1));
}

TEST_CASE("road spaces validate and embeddings preserve order and meets") {
    std::mt19937_64 rng(607);
    for (int round = 0; round < 120; ++round) {
        OrdinalTree t = gen::random_wstree(rng, 14);
        RoadResult r = road(t);
        CHECK(SegmentTree::diagnose(r.space.nodes()).empty());
        for (int k = 0; k < 12; ++k) {
            PointW p = gen::random_point_w(rng, t);
            PointW q = gen::random_point_w(rng, t);
            PointS ep = r.embed(t, p), eq = r.embed(t, q);
            CHECK(leq_w(t, p, q) == leq_s(r.space, ep, eq));
            CHECK(r.embed(t, meet_w(t, p, q)) == meet_s(r.space, ep, eq));
        }
    }
}

TEST_CASE("restricting arc length to the embedded tree") {
    OrdinalTree fin = OrdinalTree::make({{-1, EdgeLen{}, "r"}, {0, EdgeLen::finite(2), "a"}});
    RoadResult r1 = road(fin);
    GradingW g1 = restrict_grading(fin, r1, arc_length_grading(r1.space),
                                   {PointW{0, 0}, PointW{1, 1}, PointW{1, 0}});
    CHECK(g1.at(PointW{1, 1}) == Rat(1));
    CHECK(g1.at(PointW{1, 0}) == Rat(2));

    OrdinalTree om = OrdinalTree::make({{-1, EdgeLen{}, "r"}, {0, EdgeLen::inf(), "a"}});
    RoadResult r2 = road(om);
    GradingW g2 = restrict_grading(om, r2, arc_length_grading(r2.space),
                                   {PointW{0, 0}, PointW{1, 1}, PointW{1, 2}, PointW{1, 0}});
    CHECK(g2.at(PointW{1, 1}) == Rat(1, 2));
    CHECK(g2.at(PointW{1, 2}) == Rat(3, 4));
    CHECK(g2.at(PointW{1, 0}) == Rat(1));
}

TEST_CASE("restriction rejects a non-grading") {
    OrdinalTree t = OrdinalTree::make({{-1, EdgeLen{}, "r"}, {0, EdgeLen::finite(2), "a"}});
    RoadResult r = road(t);
    GradingS bad = arc_length_grading(r.space);
    bad.vertex_values[1] = Rat(0);  // top no higher than the root
    CHECK_THROWS_AS(restrict_grading(t, r, bad), domain_error);
}

TEST_CASE("restriction of a continuous grading is strictly monotone") {
    std::mt19937_64 rng(613);
    for (int round = 0; round < 60; ++round) {
        OrdinalTree t = gen::random_wstree(rng, 12);
        RoadResult r = road(t);
        auto carrier = gen::sampled_carrier(rng, t);
        GradingW g = restrict_grading(t, r, arc_length_grading(r.space), carrier);
        require_monotone_w(t, g);  // redundant with the op's own check; kept explicit
    }
}
