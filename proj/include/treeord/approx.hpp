#pragma once

// Branch decomposition of a segment tree, the increasing sequence of finite
// approximating subtrees drawn from a fixed rational enumeration, density
// witnesses, the combination of subtree gradings, and the branching-node
// injection.

#include "treeord/metric.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace treeord {

// One branch remainder F with its affine chart onto a subinterval of [0,1].
// The chart walks the records bottom-up; point at arc position s above the
// lower boundary maps to s / total. `lo_vertex` is the vertex at the lower
// boundary (included in F only for the first branch).
struct BranchChart {
    std::vector<int> records;  // bottom-up run of records forming F
    int lo_vertex = -1;        // vertex record below the run (the attach point)
    bool includes_lo = false;  // true only for the first branch (the root)
    bool top_closed = false;   // whether the top end of the run is attained
    Rat total = 0;             // arc length of the run
    bool singleton = false;    // F = { root }, chart = {1}
};

struct BranchDecomposition {
    const SegmentTree* tree = nullptr;
    std::vector<BranchChart> charts;
};

namespace detail {

inline Rat chart_total(const SegmentTree& x, const std::vector<int>& records) {
    Rat s(0);
    for (int r : records) s += x.node(r).len;
    return s;
}

}  // namespace detail

// Branches in depth-first order (children by record index); each remainder
// is the final segment above the deepest vertex already covered.
inline BranchDecomposition branch_decomposition(const SegmentTree& x) {
    BranchDecomposition d;
    d.tree = &x;
    if (x.empty()) return d;
    if (x.size() == 1) {
        BranchChart c;
        c.lo_vertex = x.root();
        c.includes_lo = true;
        c.singleton = true;
        d.charts.push_back(c);
        return d;
    }
    // leaf records in DFS order
    std::vector<int> leaves;
    std::vector<int> stack{x.root()};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (v != x.root() && (x.node(v).open || x.children(v).empty())) leaves.push_back(v);
        for (auto it = x.children(v).rbegin(); it != x.children(v).rend(); ++it) stack.push_back(*it);
    }
    std::vector<bool> covered(x.size(), false);  // records already in earlier branches
    bool first = true;
    for (int leaf : leaves) {
        std::vector<int> run;
        int v = leaf;
        while (v != x.root() && !covered[static_cast<std::size_t>(v)]) {
            run.push_back(v);
            covered[static_cast<std::size_t>(v)] = true;
            v = x.node(v).parent;
        }
        std::reverse(run.begin(), run.end());
        BranchChart c;
        c.records = run;
        c.lo_vertex = v;
        c.includes_lo = first;
        c.top_closed = !x.node(leaf).open;
        c.total = detail::chart_total(x, run);
        d.charts.push_back(c);
        first = false;
    }
    return d;
}

// chart value of a point of F (the lower boundary vertex maps to 0)
inline std::optional<Rat> chart_value(const SegmentTree& x, const BranchChart& c, const PointS& p) {
    if (c.singleton) {
        if (p == root_point(x)) return Rat(1);
        return std::nullopt;
    }
    if (c.includes_lo && is_vertex(x, p) && p.node == c.lo_vertex) return Rat(0);
    Rat base(0);
    for (int r : c.records) {
        if (p.node == r && !is_vertex(x, p)) return (base + p.t) / c.total;
        base += x.node(r).len;
        if (p.node == r && is_vertex(x, p)) return base / c.total;
    }
    return std::nullopt;
}

// preimage of a chart value, when it lies in the chart interval
inline std::optional<PointS> chart_preimage(const SegmentTree& x, const BranchChart& c, const Rat& q) {
    if (c.singleton) {
        if (q == 1) return root_point(x);
        return std::nullopt;
    }
    if (q < 0 || q > 1) return std::nullopt;
    if (q == 0) {
        if (!c.includes_lo) return std::nullopt;
        return c.lo_vertex == x.root() ? root_point(x) : vertex_point(x, c.lo_vertex);
    }
    if (q == 1 && !c.top_closed) return std::nullopt;
    Rat s = q * c.total;
    Rat base(0);
    for (int r : c.records) {
        Rat len = x.node(r).len;
        if (s <= base + len) {
            Rat t = s - base;
            if (t == len && x.node(r).open) return std::nullopt;  // unattained top
            return PointS{r, t};
        }
        base += len;
    }
    return std::nullopt;
}

struct FiniteSubtree {
    std::vector<PointS> points;  // sorted, unique
};

// T_n: the root together with the chart preimages of the first n+1 values of
// the fixed enumeration of Q cap [0,1]. Verified well-stratified: finitely
// many points with linearly ordered down-sets.
inline FiniteSubtree subtree_Tn(const BranchDecomposition& d, std::size_t n) {
    const SegmentTree& x = *d.tree;
    std::set<PointS> pts;
    pts.insert(root_point(x));
    for (std::size_t i = 0; i <= n; ++i) {
        Rat q = unit_rational(i);
        for (const auto& c : d.charts)
            if (auto p = chart_preimage(x, c, q)) pts.insert(*p);
    }
    FiniteSubtree t;
    t.points.assign(pts.begin(), pts.end());
    // within a down-set any two members must be comparable
    const std::size_t k = t.points.size();
    std::vector<std::vector<char>> le(k, std::vector<char>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            le[i][j] = leq_s(x, t.points[i], t.points[j]) ? 1 : 0;
    for (std::size_t p = 0; p < k; ++p) {
        std::vector<std::size_t> below;
        for (std::size_t i = 0; i < k; ++i)
            if (le[i][p]) below.push_back(i);
        for (std::size_t a = 0; a < below.size(); ++a)
            for (std::size_t b = a + 1; b < below.size(); ++b)
                if (!le[below[a]][below[b]] && !le[below[b]][below[a]])
                    throw domain_error("approximating subtree has an unordered down-set");
    }
    return t;
}

struct DensityWitness {
    std::size_t stage;
    PointS witness;
};

// For each strictly comparable pair, the least stage n <= max_stage whose
// subtree contains a point strictly between.
inline std::vector<std::optional<DensityWitness>> check_density(
    const BranchDecomposition& d, std::size_t max_stage,
    const std::vector<std::pair<PointS, PointS>>& pairs) {
    const SegmentTree& x = *d.tree;
    for (const auto& [p, q] : pairs)
        if (!(leq_s(x, p, q) && !(p == q)))
            throw domain_error("density pair is not strictly comparable: " + point_str(x, p) +
                               " vs " + point_str(x, q));
    std::vector<std::optional<DensityWitness>> out(pairs.size());
    for (std::size_t stage = 0; stage <= max_stage; ++stage) {
        Rat q = unit_rational(stage);
        std::vector<PointS> zs;
        for (const auto& c : d.charts)
            if (auto z = chart_preimage(x, c, q)) zs.push_back(*z);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (out[i]) continue;
            for (const PointS& z : zs) {
                if (z == pairs[i].first || z == pairs[i].second) continue;
                if (leq_s(x, pairs[i].first, z) && leq_s(x, z, pairs[i].second)) {
                    out[i] = DensityWitness{stage, z};
                    break;
                }
            }
        }
    }
    return out;
}

// least enumeration index whose prefix contains every chart value of a
// vertex or run boundary; density witnesses spanning a vertex appear by
// this stage
inline std::size_t breakpoint_cover_stage(const BranchDecomposition& d) {
    const SegmentTree& x = *d.tree;
    std::size_t stage = 2;  // 0, 1 and 1/2 are always enumerated first
    for (const auto& c : d.charts) {
        if (c.singleton) continue;
        Rat base(0);
        for (int r : c.records) {
            base += x.node(r).len;
            Rat q = base / c.total;
            if (auto idx = unit_rational_index(q))
                if (*idx > stage) stage = *idx;
        }
    }
    return stage;
}

// f_hat(p) = max f_n over subtree points below p, combined across stages as
// sum f_hat_n / 2^n. The result is weakly monotone piecewise data; strict
// growth holds across any pair separated by a subtree point and is verified
// on the supplied pairs.
inline GradingS combine_gradings(const SegmentTree& x,
                                 const std::vector<std::pair<FiniteSubtree, std::map<PointS, Rat>>>& stages,
                                 const std::vector<std::pair<PointS, PointS>>& verify_pairs = {}) {
    for (std::size_t n = 0; n < stages.size(); ++n) {
        const auto& [tn, fn] = stages[n];
        if (!std::count(tn.points.begin(), tn.points.end(), root_point(x)))
            throw domain_error("stage " + std::to_string(n) + " subtree lacks the root");
        for (const PointS& p : tn.points) {
            auto it = fn.find(p);
            if (it == fn.end())
                throw domain_error("stage " + std::to_string(n) + " grading misses " + point_str(x, p));
            if (it->second < 0 || it->second >= 1)
                throw domain_error("stage " + std::to_string(n) + " grading leaves [0,1) at " +
                                   point_str(x, p));
        }
        std::vector<const std::pair<const PointS, Rat>*> rows;
        for (const auto& kv : fn) rows.push_back(&kv);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < rows.size(); ++j) {
                if (i == j || !leq_s(x, rows[i]->first, rows[j]->first)) continue;
                if (rows[i]->first == rows[j]->first) continue;
                if (!(rows[i]->second < rows[j]->second))
                    throw domain_error("stage " + std::to_string(n) + " grading not monotone at " +
                                       point_str(x, rows[i]->first) + " < " +
                                       point_str(x, rows[j]->first));
            }
    }

    // best value below-or-at each vertex, per stage
    std::vector<int> order{};
    std::vector<int> stack{x.root()};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (auto it = x.children(v).rbegin(); it != x.children(v).rend(); ++it) stack.push_back(*it);
    }

    const std::size_t ns = stages.size();
    std::vector<std::map<int, Rat>> best(ns);          // per vertex record
    std::vector<std::map<int, std::vector<std::pair<Rat, Rat>>>> on_edge(ns);  // t -> value
    for (std::size_t n = 0; n < ns; ++n) {
        const auto& [tn, fn] = stages[n];
        for (const PointS& p : tn.points)
            if (!is_vertex(x, p)) on_edge[n][p.node].push_back({p.t, fn.at(p)});
        for (auto& [rec, lst] : on_edge[n]) std::sort(lst.begin(), lst.end());
        for (int v : order) {
            Rat carry = v == x.root() ? fn.at(root_point(x)) : best[n].at(x.node(v).parent);
            if (v != x.root()) {
                for (const auto& [t, val] : on_edge[n][v]) carry = std::max(carry, val);
                if (!x.node(v).open) {
                    PointS vp = vertex_point(x, v);
                    auto it = fn.find(vp);
                    if (it != fn.end()) carry = std::max(carry, it->second);
                }
            }
            best[n][v] = carry;
        }
    }

    auto weight = [](std::size_t n) {
        Rat w(1);
        for (std::size_t i = 0; i < n; ++i) w /= 2;
        return w;
    };

    GradingS g;
    for (int v : order) {
        if (!x.is_vertex_record(v) && v != x.root()) continue;
        Rat sum(0);
        for (std::size_t n = 0; n < ns; ++n) sum += best[n].at(v) * weight(n);
        g.vertex_values[v] = sum;
    }
    for (int rec : order) {
        if (rec == x.root()) continue;
        // merge the step positions of all stages on this edge
        std::set<Rat> cuts;
        for (std::size_t n = 0; n < ns; ++n)
            for (const auto& [t, val] : on_edge[n][rec]) cuts.insert(t);
        GradingS::EdgeFn fn;
        auto value_at = [&](const Rat& t, bool at_point) {
            // sum over stages of the best value at parameter t (or just below)
            Rat sum(0);
            for (std::size_t n = 0; n < ns; ++n) {
                Rat carry = best[n].at(x.node(rec).parent);
                for (const auto& [tt, val] : on_edge[n][rec])
                    if (tt < t || (at_point && tt == t)) carry = std::max(carry, val);
                sum += carry * weight(n);
            }
            return sum;
        };
        fn.start = value_at(Rat(0), true);
        for (const Rat& t : cuts) {
            if (t >= x.node(rec).len) continue;
            fn.breaks.push_back({t, value_at(t, false), value_at(t, true)});
        }
        fn.end_left = value_at(x.node(rec).len, false);
        g.edge_fns[rec] = fn;
    }
    validate_grading(x, g, GradingCheck::weak);

    for (const auto& [p, q] : verify_pairs) {
        if (!(evaluate_grading(x, g, p) < evaluate_grading(x, g, q)))
            throw domain_error("combined grading not strict between " + point_str(x, p) + " and " +
                               point_str(x, q));
    }
    return g;
}

// s(p) = meet of the immediate successors of p within the finite subtree,
// defined on its branching points; injective for any subtree of a segment
// tree.
inline std::map<PointS, PointS> branching_injection(const SegmentTree& x,
                                                    const FiniteSubtree& t) {
    // the subtree must have a unique minimum
    if (t.points.empty()) return {};
    std::size_t minima = 0;
    for (const PointS& p : t.points) {
        bool minimal = true;
        for (const PointS& q : t.points)
            if (!(q == p) && leq_s(x, q, p)) {
                minimal = false;
                break;
            }
        if (minimal) ++minima;
    }
    if (minima != 1) throw domain_error("point set is not a rooted subtree");

    std::map<PointS, PointS> s;
    for (const PointS& p : t.points) {
        // immediate successors of p in the subtree
        std::vector<PointS> above;
        for (const PointS& q : t.points)
            if (!(q == p) && leq_s(x, p, q)) above.push_back(q);
        std::vector<PointS> succs;
        for (const PointS& q : above) {
            bool immediate = true;
            for (const PointS& r : above)
                if (!(r == q) && leq_s(x, r, q)) {
                    immediate = false;
                    break;
                }
            if (immediate) succs.push_back(q);
        }
        if (succs.size() < 2) continue;
        PointS m = succs.front();
        for (std::size_t i = 1; i < succs.size(); ++i) m = meet_s(x, m, succs[i]);
        s[p] = m;
    }
    for (auto it = s.begin(); it != s.end(); ++it)
        for (auto jt = std::next(it); jt != s.end(); ++jt)
            if (it->second == jt->second)
                throw domain_error("branching injection collided; subtree is malformed");
    return s;
}

}  // namespace treeord
