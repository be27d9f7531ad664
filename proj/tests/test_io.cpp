#include <catch2/catch.hpp>

#include "treeord/io.hpp"

#include "generators.hpp"

#include <random>

using namespace treeord;

TEST_CASE("wstree parsing") {
    OrdinalTree t = io::parse_wstree("wstree\nnode a parent=-\nnode b parent=a edgelen=w\n");
    REQUIRE(t.size() == 2);
    CHECK(t.node(1).len.omega);
    CHECK(rank(t, PointW{1, 0}) == Ordinal::omega());
}

TEST_CASE("segtree parsing") {
    SegmentTree x =
        io::parse_segtree("segtree\nnode a parent=-\nnode b parent=a len=3/2 top=closed\n");
    REQUIRE(x.size() == 2);
    CHECK(x.node(1).len == Rat(3, 2));
}

TEST_CASE("unknown parent is a parse error with its line") {
    try {
        io::parse_segtree("segtree\nnode b parent=a len=1 top=closed\n");
        FAIL("expected parse error");
    } catch (const parse_error& e) {
        CHECK(e.line_number == 2);
    }
}

TEST_CASE("blank lines and comments are skipped") {
    OrdinalTree t = io::parse_wstree("wstree\n\n# comment\nnode a parent=-\n");
    CHECK(t.size() == 1);
}

namespace {

bool same_wstree(const OrdinalTree& a, const OrdinalTree& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        int j = b.find(a.node(static_cast<int>(i)).name);
        if (j < 0) return false;
        const auto& na = a.node(static_cast<int>(i));
        const auto& nb = b.node(j);
        if ((na.parent < 0) != (nb.parent < 0)) return false;
        if (na.parent >= 0) {
            if (a.node(na.parent).name != b.node(nb.parent).name) return false;
            if (!(na.len == nb.len)) return false;
        }
    }
    return true;
}

bool same_segtree(const SegmentTree& a, const SegmentTree& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        int j = b.find(a.node(static_cast<int>(i)).name);
        if (j < 0) return false;
        const auto& na = a.node(static_cast<int>(i));
        const auto& nb = b.node(j);
        if ((na.parent < 0) != (nb.parent < 0)) return false;
        if (na.open != nb.open) return false;
        if (na.parent >= 0) {
            if (a.node(na.parent).name != b.node(nb.parent).name) return false;
            if (na.len != nb.len) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("wstree round trips") {
    std::mt19937_64 rng(901);
    for (int round = 0; round < 150; ++round) {
        OrdinalTree t = gen::random_wstree(rng, 15);
        std::string text = io::serialize(t);
        OrdinalTree back = io::parse_wstree(text);
        CHECK(same_wstree(t, back));
        CHECK(io::serialize(back) == text);  // byte-stable
    }
}

TEST_CASE("segtree round trips") {
    std::mt19937_64 rng(907);
    for (int round = 0; round < 150; ++round) {
        SegmentTree x = gen::random_segtree(rng, 15);
        std::string text = io::serialize(x);
        SegmentTree back = io::parse_segtree(text);
        CHECK(same_segtree(x, back));
        CHECK(io::serialize(back) == text);
    }
}

TEST_CASE("point grading round trips") {
    std::mt19937_64 rng(911);
    for (int round = 0; round < 100; ++round) {
        OrdinalTree t = gen::random_wstree(rng, 10);
        GradingW g = gen::random_grading_w(rng, t, gen::sampled_carrier(rng, t));
        std::string text = io::serialize(t, g);
        GradingW back = io::parse_grading_w(text, t);
        CHECK(back.values == g.values);
        CHECK(io::serialize(t, back) == text);
    }
}

TEST_CASE("segment grading round trips") {
    std::mt19937_64 rng(919);
    for (int round = 0; round < 100; ++round) {
        SegmentTree x = gen::random_segtree(rng, 10);
        GradingS g = arc_length_grading(x);
        std::string text = io::serialize(x, g);
        GradingS back = io::parse_grading_s(text, x);
        CHECK(back.vertex_values == g.vertex_values);
        REQUIRE(back.edge_fns.size() == g.edge_fns.size());
        for (const auto& [rec, fn] : g.edge_fns) {
            CHECK(back.edge_fns.at(rec).start == fn.start);
            CHECK(back.edge_fns.at(rec).end_left == fn.end_left);
        }
        CHECK(io::serialize(x, back) == text);
    }
}

TEST_CASE("jump function round trips") {
    std::mt19937_64 rng(929);
    for (int round = 0; round < 100; ++round) {
        JumpFunction f = gen::random_jump_function(rng);
        std::string text = io::serialize(f);
        JumpFunction back = io::parse_jump_function(text);
        CHECK(back.start == f.start);
        CHECK(back.end_left == f.end_left);
        CHECK(back.end_val == f.end_val);
        REQUIRE(back.breaks.size() == f.breaks.size());
        for (std::size_t i = 0; i < f.breaks.size(); ++i) {
            CHECK(back.breaks[i].t == f.breaks[i].t);
            CHECK(back.breaks[i].left == f.breaks[i].left);
            CHECK(back.breaks[i].val == f.breaks[i].val);
        }
        CHECK(io::serialize(back) == text);
    }
}

TEST_CASE("family round trips") {
    std::mt19937_64 rng(937);
    for (int round = 0; round < 100; ++round) {
        auto fam = gen::random_family(rng, 8, 5, 9);
        std::string text = io::serialize(fam);
        auto back = io::parse_family(text);
        CHECK(back == fam);
        CHECK(io::serialize(back) == text);
    }
}

TEST_CASE("cover serialization round trips") {
    std::mt19937_64 rng(941);
    for (int round = 0; round < 60; ++round) {
        OrdinalTree t = gen::random_wstree(rng, 8);
        GradingW g = gen::random_grading_w(rng, t, gen::sampled_carrier(rng, t));
        AntichainCover c = cover_from_qgrading(t, g);
        std::string text = io::serialize_cover(t, c);
        AntichainCover back = io::parse_cover(text, t);
        REQUIRE(back.classes.size() == c.classes.size());
        for (std::size_t i = 0; i < c.classes.size(); ++i) {
            auto lhs = c.classes[i];
            auto rhs = back.classes[i];
            std::sort(lhs.begin(), lhs.end());
            std::sort(rhs.begin(), rhs.end());
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("point syntax") {
    OrdinalTree t = io::parse_wstree("wstree\nnode a parent=-\nnode b parent=a edgelen=5\n");
    CHECK(io::parse_point_w(t, "b@3") == PointW{1, 3});
    CHECK(io::parse_point_w(t, "a") == PointW{0, 0});
    CHECK_THROWS_AS(io::parse_point_w(t, "b@7"), domain_error);
    SegmentTree x = io::parse_segtree("segtree\nnode a parent=-\nnode b parent=a len=2 top=closed\n");
    CHECK(io::parse_point_s(x, "b@1/2") == PointS{1, Rat(1, 2)});
    CHECK(io::parse_point_s(x, "b@2") == vertex_point(x, 1));
    CHECK_THROWS_AS(io::parse_point_s(x, "b@5/2"), domain_error);
}

TEST_CASE("dot export") {
    OrdinalTree t = io::parse_wstree("wstree\nnode a parent=-\nnode b parent=a edgelen=2\n");
    std::string dot = io::emit_dot(t);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("\"a\" -> \"b\"") != std::string::npos);
    CHECK(dot.find("label=\"2\"") != std::string::npos);
    CHECK(io::emit_dot(OrdinalTree()) == "digraph tree {\n}\n");

    SegmentTree y = SegmentTree::make({{-1, Rat(0), false, "r"},
                                       {0, Rat(1), false, "b"},
                                       {1, Rat(1), false, "l1"},
                                       {1, Rat(2), false, "l2"}});
    GradingS g = arc_length_grading(y);
    std::string sdot = io::emit_dot(y, &g);
    CHECK(sdot.find("doublecircle") != std::string::npos);  // branching vertex highlighted
    CHECK(sdot.find("b = 1") != std::string::npos);         // grading label
}
