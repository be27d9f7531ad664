#pragma once

// Gradings of segment trees as piecewise data, the railroad-track metric,
// metric-axiom checking, and the removal of jump discontinuities from a
// monotone grading.

#include "treeord/segtree.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace treeord {

// Piecewise description of a grading along each edge: the limit at the
// bottom, interior breakpoints carrying a left limit and a value (the
// function restarts affinely from the value), and the limit at the top.
// Vertex values are stored separately; jumps are the gaps left <-> val and
// the gaps against the incident vertex values.
struct GradingS {
    struct Break {
        Rat t, left, val;
    };
    struct EdgeFn {
        Rat start;
        std::vector<Break> breaks;
        Rat end_left;
    };
    std::map<int, Rat> vertex_values;  // vertex record id (root included)
    std::map<int, EdgeFn> edge_fns;    // non-root record id
};

enum class GradingCheck { weak, strict, continuous };

inline void validate_grading(const SegmentTree& x, const GradingS& g, GradingCheck level) {
    auto fail = [&](const std::string& msg) { throw domain_error("grading rejected: " + msg); };
    for (std::size_t i = 0; i < x.size(); ++i) {
        int rec = static_cast<int>(i);
        if (x.is_vertex_record(rec) && !g.vertex_values.count(rec))
            fail("no value at vertex '" + x.node(rec).name + "'");
        if (rec != x.root() && !g.edge_fns.count(rec))
            fail("no description along edge '" + x.node(rec).name + "'");
    }
    for (const auto& [rec, fn] : g.edge_fns) {
        if (rec == x.root() || rec >= static_cast<int>(x.size()))
            fail("edge description for an unknown record");
        const auto& nd = x.node(rec);
        const std::string where = "edge '" + nd.name + "'";
        Rat prev_t(0);
        for (std::size_t k = 0; k < fn.breaks.size(); ++k) {
            const auto& b = fn.breaks[k];
            if (b.t <= (k ? prev_t : Rat(0)) || b.t >= nd.len)
                fail("breakpoints of " + where + " not strictly inside the edge");
            prev_t = b.t;
            if (b.val < b.left) fail("downward jump on " + where);
        }
        Rat bottom = g.vertex_values.at(nd.parent);
        if (fn.start < bottom) fail(where + " starts below its bottom vertex");
        Rat run = fn.start;
        bool strict = level != GradingCheck::weak;
        for (const auto& b : fn.breaks) {
            if (strict ? !(b.left > run) : !(b.left >= run)) fail(where + " is not monotone");
            if (level == GradingCheck::continuous && b.val != b.left)
                fail(where + " has a jump at t=" + rat_str(b.t));
            run = b.val;
        }
        if (strict ? !(fn.end_left > run) : !(fn.end_left >= run)) fail(where + " is not monotone");
        if (level == GradingCheck::continuous && fn.start != bottom)
            fail(where + " detaches from its bottom vertex");
        if (!nd.open) {
            Rat top = g.vertex_values.at(rec);
            if (top < fn.end_left) fail(where + " overshoots its top vertex");
            if (level == GradingCheck::continuous && top != fn.end_left)
                fail(where + " has a jump at its top vertex");
        }
    }
}

inline Rat evaluate_grading(const SegmentTree& x, const GradingS& g, const PointS& p) {
    require_point(x, p);
    if (is_vertex(x, p)) return g.vertex_values.at(p.node);
    const auto& fn = g.edge_fns.at(p.node);
    Rat len = x.node(p.node).len;
    Rat prev_t(0), prev_v = fn.start;
    for (const auto& b : fn.breaks) {
        if (p.t == b.t) return b.val;
        if (p.t < b.t) return prev_v + (b.left - prev_v) * (p.t - prev_t) / (b.t - prev_t);
        prev_t = b.t;
        prev_v = b.val;
    }
    return prev_v + (fn.end_left - prev_v) * (p.t - prev_t) / (len - prev_t);
}

// ell(p) = arc length from the root; continuous by construction.
inline GradingS arc_length_grading(const SegmentTree& x) {
    GradingS g;
    g.vertex_values[x.root()] = Rat(0);
    // records in depth order so parents are graded first
    std::vector<int> order;
    std::vector<int> stack{x.root()};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (auto it = x.children(v).rbegin(); it != x.children(v).rend(); ++it) stack.push_back(*it);
    }
    std::map<int, Rat> at;  // arc length at each vertex record
    at[x.root()] = Rat(0);
    for (int v : order) {
        if (v == x.root()) continue;
        Rat base = at.at(x.node(v).parent);
        GradingS::EdgeFn fn;
        fn.start = base;
        fn.end_left = base + x.node(v).len;
        g.edge_fns[v] = fn;
        if (!x.node(v).open) {
            at[v] = fn.end_left;
            g.vertex_values[v] = fn.end_left;
        }
    }
    return g;
}

// d(x,y) = ell(x) + ell(y) - 2*ell(x ^ y); callers that loop should validate
// once and use railroad_distance directly.
inline Rat railroad_distance(const SegmentTree& x, const GradingS& g, const PointS& p,
                             const PointS& q) {
    return evaluate_grading(x, g, p) + evaluate_grading(x, g, q) -
           2 * evaluate_grading(x, g, meet_s(x, p, q));
}

inline Rat railroad_metric(const SegmentTree& x, const GradingS& g, const PointS& p,
                           const PointS& q) {
    validate_grading(x, g, GradingCheck::continuous);
    return railroad_distance(x, g, p, q);
}

struct MetricReport {
    std::size_t pairs = 0, triples = 0, quads = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

// Verifies positivity, identity of indiscernibles, symmetry, the triangle
// inequality and the four-point condition on every pair, triple and
// quadruple of the sample. Comparisons run on a common-denominator integer
// matrix, which preserves them exactly.
inline MetricReport check_metric(const SegmentTree& x,
                                 const std::function<Rat(const PointS&, const PointS&)>& dist,
                                 std::vector<PointS> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    MetricReport report;
    const std::size_t n = pts.size();
    std::vector<std::vector<Rat>> d(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i][j] = dist(pts[i], pts[j]);
    auto name = [&](std::size_t i) { return point_str(x, pts[i]); };
    Int common(1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) common = lcm(common, rat_den(d[i][j]));
    std::vector<std::vector<Int>> m(n, std::vector<Int>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m[i][j] = rat_num(d[i][j]) * (common / rat_den(d[i][j]));
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i][i] != 0) report.failures.push_back("d(" + name(i) + ", " + name(i) + ") != 0");
        for (std::size_t j = i + 1; j < n; ++j) {
            ++report.pairs;
            if (m[i][j] != m[j][i])
                report.failures.push_back("asymmetric at (" + name(i) + ", " + name(j) + ")");
            if (m[i][j] <= 0)
                report.failures.push_back("non-positive distance at (" + name(i) + ", " + name(j) + ")");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                ++report.triples;
                if (m[i][j] > m[i][k] + m[k][j])
                    report.failures.push_back("triangle fails at (" + name(i) + ", " + name(j) +
                                              ") via " + name(k));
            }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                for (std::size_t l = k + 1; l < n; ++l) {
                    ++report.quads;
                    Int a = m[i][j] + m[k][l];
                    Int b = m[i][k] + m[j][l];
                    Int c = m[i][l] + m[j][k];
                    Int ab = a > b ? a : b, ac = a > c ? a : c, bc = b > c ? b : c;
                    if (a > bc || b > ac || c > ab)
                        report.failures.push_back("four-point fails at (" + name(i) + ", " + name(j) +
                                                  ", " + name(k) + ", " + name(l) + ")");
                }
    return report;
}

// vertices plus an evenly spaced interior grid on every edge
inline std::vector<PointS> grid_points(const SegmentTree& x, std::size_t per_edge = 3) {
    std::vector<PointS> pts;
    for (std::size_t i = 0; i < x.size(); ++i) {
        int rec = static_cast<int>(i);
        if (x.is_vertex_record(rec)) pts.push_back(vertex_point(x, rec));
        if (rec == x.root()) continue;
        for (std::size_t k = 1; k <= per_edge; ++k)
            pts.push_back(PointS{rec, x.node(rec).len * Rat(static_cast<Int>(k), static_cast<Int>(per_edge + 1))});
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

// --- jump removal on a unit chart ------------------------------------------

// Monotone function on (0,1] with finitely many breakpoints. Between
// breakpoints the function is affine and strictly increasing; at breakpoint
// t it restarts from val >= left. end_left/end_val describe t = 1.
struct JumpFunction {
    Rat start;
    std::vector<GradingS::Break> breaks;  // 0 < t < 1
    Rat end_left;
    Rat end_val;
};

inline void validate_jump_function(const JumpFunction& f) {
    auto fail = [](const std::string& m) { throw domain_error("malformed jump function: " + m); };
    Rat prev_t(0), run = f.start;
    for (std::size_t i = 0; i < f.breaks.size(); ++i) {
        const auto& b = f.breaks[i];
        if (b.t <= (i ? prev_t : Rat(0)) || b.t >= 1) fail("breakpoints must be strictly inside (0,1)");
        if (b.val < b.left) fail("downward jump at t=" + rat_str(b.t));
        if (!(b.left > run)) fail("not strictly monotone before t=" + rat_str(b.t));
        prev_t = b.t;
        run = b.val;
    }
    if (!(f.end_left > run)) fail("not strictly monotone at the top");
    if (f.end_val < f.end_left) fail("downward jump at t=1");
}

// breakpoints with a strictly positive jump, t = 1 included
inline std::vector<std::pair<Rat, Rat>> jump_list(const JumpFunction& f) {
    std::vector<std::pair<Rat, Rat>> out;
    for (const auto& b : f.breaks)
        if (b.val > b.left) out.push_back({b.t, b.val - b.left});
    if (f.end_val > f.end_left) out.push_back({Rat(1), f.end_val - f.end_left});
    return out;
}

inline Rat evaluate_jump_function(const JumpFunction& f, const Rat& t) {
    if (t <= 0 || t > 1) throw domain_error("jump function argument outside (0,1]");
    if (t == 1) return f.end_val;
    Rat prev_t(0), prev_v = f.start;
    for (const auto& b : f.breaks) {
        if (t == b.t) return b.val;
        if (t < b.t) return prev_v + (b.left - prev_v) * (t - prev_t) / (b.t - prev_t);
        prev_t = b.t;
        prev_v = b.val;
    }
    return prev_v + (f.end_left - prev_v) * (t - prev_t) / (Rat(1) - prev_t);
}

// Removes every jump: each breakpoint value drops by the accumulated jumps
// below it and regains an affine share (t - y)/(1 - y) of each jump at y,
// which keeps the function strictly monotone and continuous; the result is
// then shifted so its infimum over (0,1] equals target_inf. The pre-shift
// output never exceeds the input.
inline JumpFunction continuize(const JumpFunction& f, const Rat& target_inf) {
    validate_jump_function(f);
    std::vector<std::pair<Rat, Rat>> jumps;  // interior jumps only; t=1 never contributes
    for (const auto& b : f.breaks)
        if (b.val > b.left) jumps.push_back({b.t, b.val - b.left});
    auto h_at = [&](const Rat& t, const Rat& left_limit) {
        Rat v = left_limit;
        for (const auto& [y, j] : jumps)
            if (y < t) v += (-1 + (t - y) / (Rat(1) - y)) * j;
        return v;
    };
    Rat shift = target_inf - f.start;
    JumpFunction out;
    out.start = f.start + shift;
    for (const auto& b : f.breaks) {
        Rat h = h_at(b.t, b.left) + shift;
        out.breaks.push_back({b.t, h, h});
    }
    out.end_left = f.end_left + shift;  // h(1) collapses the interior jump terms
    out.end_val = out.end_left;
    validate_jump_function(out);
    return out;
}

// Applies continuize along every edge in depth-first order, each edge
// rejoining continuously at the value its bottom vertex has already
// received. Vertex values at closed tops become the new limit from below.
inline GradingS full_continuization(const SegmentTree& x, const GradingS& f) {
    validate_grading(x, f, GradingCheck::strict);
    GradingS out;
    out.vertex_values[x.root()] = f.vertex_values.at(x.root());
    std::vector<int> stack{x.root()};
    std::vector<int> order;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (auto it = x.children(v).rbegin(); it != x.children(v).rend(); ++it) stack.push_back(*it);
    }
    for (int rec : order) {
        if (rec == x.root()) continue;
        const auto& nd = x.node(rec);
        const auto& fn = f.edge_fns.at(rec);
        JumpFunction jf;
        jf.start = fn.start;
        for (const auto& b : fn.breaks) jf.breaks.push_back({b.t / nd.len, b.left, b.val});
        jf.end_left = fn.end_left;
        jf.end_val = nd.open ? fn.end_left : f.vertex_values.at(rec);
        JumpFunction h = continuize(jf, out.vertex_values.at(nd.parent));
        GradingS::EdgeFn hfn;
        hfn.start = h.start;
        for (const auto& b : h.breaks) hfn.breaks.push_back({b.t * nd.len, b.left, b.val});
        hfn.end_left = h.end_left;
        out.edge_fns[rec] = hfn;
        if (!nd.open) out.vertex_values[rec] = h.end_val;
    }
    validate_grading(x, out, GradingCheck::continuous);
    return out;
}

}  // namespace treeord
