#pragma once

// Finite presentations of branchwise-real tree orders. Every record is an
// edge of positive rational length hanging below its parent vertex; a closed
// record attains its top, and that top vertex is the record itself. An open
// record has no top point and admits no descendants, which keeps meets
// total. Points are vertices or interior edge parameters.

#include "treeord/rational.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace treeord {

class SegmentTree {
public:
    struct Node {
        int parent = -1;  // -1 for the root record
        Rat len = 0;      // edge length, > 0 for non-root records
        bool open = false;
        std::string name;
    };

    SegmentTree() = default;

    static std::vector<std::string> diagnose(const std::vector<Node>& nodes) {
        std::vector<std::string> out;
        int root = -1;
        std::set<std::string> names;
        std::vector<int> child_count(nodes.size(), 0);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const Node& nd = nodes[i];
            if (!names.insert(nd.name).second) out.push_back("duplicate name '" + nd.name + "'");
            if (nd.parent < 0) {
                if (root >= 0)
                    out.push_back("multiple roots: '" + nodes[static_cast<std::size_t>(root)].name +
                                  "' and '" + nd.name + "'");
                root = static_cast<int>(i);
                if (nd.open) out.push_back("root '" + nd.name + "' cannot be open");
            } else {
                if (nd.parent >= static_cast<int>(nodes.size())) {
                    out.push_back("dangling parent link at '" + nd.name + "'");
                    continue;
                }
                if (nd.len <= 0)
                    out.push_back("edge '" + nd.name + "' has non-positive length " + rat_str(nd.len));
                ++child_count[static_cast<std::size_t>(nd.parent)];
            }
        }
        if (!nodes.empty() && root < 0) out.push_back("no root");
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].open && child_count[i] > 0)
                out.push_back("open-top edge '" + nodes[i].name + "' has a child");
            if (nodes[i].parent >= 0 && nodes[i].parent < static_cast<int>(nodes.size()) &&
                nodes[static_cast<std::size_t>(nodes[i].parent)].parent >= 0) {
                // cycle detection below covers the rest
            }
        }
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            int v = static_cast<int>(i);
            std::size_t steps = 0;
            while (v >= 0 && v < static_cast<int>(nodes.size())) {
                v = nodes[static_cast<std::size_t>(v)].parent;
                if (++steps > nodes.size()) {
                    out.push_back("cycle through '" + nodes[i].name + "'");
                    break;
                }
            }
        }
        return out;
    }

    static SegmentTree make(std::vector<Node> nodes) {
        auto diag = diagnose(nodes);
        if (!diag.empty()) throw domain_error("invalid segment tree: " + diag.front());
        SegmentTree t;
        t.nodes_ = std::move(nodes);
        t.children_.assign(t.nodes_.size(), {});
        for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
            if (t.nodes_[i].parent < 0)
                t.root_ = static_cast<int>(i);
            else
                t.children_[static_cast<std::size_t>(t.nodes_[i].parent)].push_back(static_cast<int>(i));
        }
        return t;
    }

    bool empty() const { return nodes_.empty(); }
    std::size_t size() const { return nodes_.size(); }
    const Node& node(int v) const { return nodes_.at(static_cast<std::size_t>(v)); }
    const std::vector<Node>& nodes() const { return nodes_; }
    int root() const { return root_; }
    const std::vector<int>& children(int v) const { return children_.at(static_cast<std::size_t>(v)); }

    int find(const std::string& name) const {
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (nodes_[i].name == name) return static_cast<int>(i);
        return -1;
    }

    bool is_vertex_record(int v) const { return v == root_ || !node(v).open; }

    // number of vertex points (root plus closed records)
    std::size_t vertex_count() const {
        std::size_t n = 0;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (static_cast<int>(i) == root_ || !nodes_[i].open) ++n;
        return n;
    }

private:
    std::vector<Node> nodes_;
    std::vector<std::vector<int>> children_;
    int root_ = -1;
};

// A point: the root (t == 0 on the root record), the top vertex of a closed
// record (t == len) or an interior parameter 0 < t < len of any record.
struct PointS {
    int node = -1;
    Rat t = 0;

    bool operator==(const PointS& o) const { return node == o.node && t == o.t; }
    bool operator<(const PointS& o) const { return node != o.node ? node < o.node : t < o.t; }
};

inline PointS root_point(const SegmentTree& x) { return PointS{x.root(), Rat(0)}; }

inline PointS vertex_point(const SegmentTree& x, int record) {
    if (record == x.root()) return root_point(x);
    if (x.node(record).open) throw domain_error("open edge '" + x.node(record).name + "' has no top vertex");
    return PointS{record, x.node(record).len};
}

inline bool is_vertex(const SegmentTree& x, const PointS& p) {
    return (p.node == x.root() && p.t == 0) || (p.node != x.root() && p.t == x.node(p.node).len);
}

inline void require_point(const SegmentTree& x, const PointS& p) {
    if (p.node < 0 || p.node >= static_cast<int>(x.size())) throw domain_error("point on unknown record");
    const auto& nd = x.node(p.node);
    if (p.node == x.root()) {
        if (p.t != 0) throw domain_error("root point must have parameter 0");
        return;
    }
    if (p.t <= 0 || p.t > nd.len)
        throw domain_error("parameter " + rat_str(p.t) + " out of range on edge '" + nd.name + "'");
    if (p.t == nd.len && nd.open)
        throw domain_error("top of open edge '" + nd.name + "' is not attained");
}

inline std::string point_str(const SegmentTree& x, const PointS& p) {
    if (is_vertex(x, p)) return x.node(p.node).name;
    return x.node(p.node).name + "@" + rat_str(p.t);
}

namespace detail {

// Root path as (record, portion): nullopt marks a fully traversed record,
// a value marks the final partial parameter.
inline std::vector<std::pair<int, std::optional<Rat>>> path_s(const SegmentTree& x, const PointS& p) {
    std::vector<std::pair<int, std::optional<Rat>>> path;
    int v = p.node;
    if (v == x.root()) return path;
    if (p.t == x.node(v).len) {
        path.push_back({v, std::nullopt});
    } else {
        path.push_back({v, p.t});
    }
    v = x.node(v).parent;
    while (v >= 0 && v != x.root()) {
        path.push_back({v, std::nullopt});
        v = x.node(v).parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace detail

inline PointS meet_s(const SegmentTree& x, const PointS& a, const PointS& b) {
    require_point(x, a);
    require_point(x, b);
    auto pa = detail::path_s(x, a);
    auto pb = detail::path_s(x, b);
    PointS last = root_point(x);
    for (std::size_t i = 0; i < pa.size() && i < pb.size(); ++i) {
        if (pa[i].first != pb[i].first) break;
        if (!pa[i].second && !pb[i].second) {
            last = vertex_point(x, pa[i].first);
            continue;
        }
        Rat ta = pa[i].second ? *pa[i].second : x.node(pa[i].first).len;
        Rat tb = pb[i].second ? *pb[i].second : x.node(pb[i].first).len;
        return PointS{pa[i].first, ta < tb ? ta : tb};
    }
    return last;
}

inline bool leq_s(const SegmentTree& x, const PointS& a, const PointS& b) {
    if (a.node == b.node) return a.t <= b.t;
    if (a.node == x.root()) return true;  // the root lies below everything
    // otherwise a <= b exactly when a's record is fully traversed by b's
    // root path, i.e. a.node is a proper ancestor record of b.node
    int cur = x.node(b.node).parent;
    while (cur >= 0) {
        if (cur == a.node) return true;
        cur = x.node(cur).parent;
    }
    return false;
}

// Number of upward directions at a point.
inline std::size_t degree(const SegmentTree& x, const PointS& p) {
    require_point(x, p);
    if (!is_vertex(x, p)) return 1;
    return x.children(p.node).size();
}

inline std::vector<PointS> branching_nodes_s(const SegmentTree& x) {
    std::vector<PointS> out;
    for (std::size_t v = 0; v < x.size(); ++v)
        if (x.is_vertex_record(static_cast<int>(v)) && x.children(static_cast<int>(v)).size() >= 2)
            out.push_back(vertex_point(x, static_cast<int>(v)));
    return out;
}

// Maximal upwards-closed subsets isomorphic to a non-trivial real interval:
// one per leaf edge run, bounded below by the last branching vertex (or by
// the root, which is included exactly when the whole tree is the twig).
struct Twig {
    int boundary;            // record id of the boundary vertex
    bool includes_boundary;  // true only for a branchless tree over a degree-<=1 root
    int leaf;                // topmost record of the run
};

inline std::vector<Twig> twigs(const SegmentTree& x) {
    std::vector<Twig> out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        int rec = static_cast<int>(i);
        if (rec == x.root()) continue;
        bool leaf = x.node(rec).open || x.children(rec).empty();
        if (!leaf) continue;
        int cur = rec;
        while (true) {
            int b = x.node(cur).parent;
            if (b == x.root()) {
                out.push_back(Twig{b, x.children(b).size() == 1, rec});
                break;
            }
            if (x.children(b).size() == 1) {
                cur = b;
                continue;
            }
            out.push_back(Twig{b, false, rec});
            break;
        }
    }
    return out;
}

inline std::pair<std::size_t, std::size_t> wispiness(const SegmentTree& x) {
    return {branching_nodes_s(x).size(), twigs(x).size()};
}

// Maximum antichain cardinality: the number of maximal directions.
inline std::size_t width(const SegmentTree& x) {
    if (x.empty()) return 0;
    std::size_t leaves = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        int rec = static_cast<int>(i);
        if (rec == x.root()) continue;
        if (x.node(rec).open || x.children(rec).empty()) ++leaves;
    }
    return leaves == 0 ? 1 : leaves;
}

// Cut-point order of the same point set with root p, re-presented. Splitting
// at an interior parameter introduces a fresh vertex there.
inline SegmentTree reroot(const SegmentTree& x, const PointS& p0) {
    require_point(x, p0);
    std::vector<SegmentTree::Node> nodes = x.nodes();
    auto fresh_name = [&](std::string base) {
        auto taken = [&](const std::string& s) {
            for (const auto& nd : nodes)
                if (nd.name == s) return true;
            return false;
        };
        std::string name = base + "'";
        while (taken(name)) name += "'";
        return name;
    };
    int pivot;  // vertex record at which we reroot
    if (is_vertex(x, p0)) {
        pivot = p0.node;
    } else {
        // split the host record at the interior parameter
        const auto& e = nodes[static_cast<std::size_t>(p0.node)];
        SegmentTree::Node mid;
        mid.parent = e.parent;
        mid.len = p0.t;
        mid.open = false;
        mid.name = fresh_name(e.name);
        nodes.push_back(mid);
        pivot = static_cast<int>(nodes.size() - 1);
        nodes[static_cast<std::size_t>(p0.node)].parent = pivot;
        nodes[static_cast<std::size_t>(p0.node)].len = e.len - p0.t;
    }
    // reverse the records along the path pivot -> old root
    std::vector<int> path;  // vertices w0 = pivot, w1, ..., wk = old root
    int v = pivot;
    while (v >= 0) {
        path.push_back(v);
        v = nodes[static_cast<std::size_t>(v)].parent;
    }
    std::vector<SegmentTree::Node> result = nodes;
    result[static_cast<std::size_t>(pivot)].parent = -1;
    result[static_cast<std::size_t>(pivot)].len = 0;
    result[static_cast<std::size_t>(pivot)].open = false;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        int lower = path[i], upper = path[i + 1];
        result[static_cast<std::size_t>(upper)].parent = lower;
        result[static_cast<std::size_t>(upper)].len = nodes[static_cast<std::size_t>(lower)].len;
        result[static_cast<std::size_t>(upper)].open = false;
    }
    return SegmentTree::make(std::move(result));
}

// --- convex sub-presentations ---------------------------------------------

struct SubInterval {
    Rat lo, hi;
    bool lo_in = false, hi_in = false;
};

// A set of vertex points plus parameter intervals on edges. Vertex
// membership is expressed only through `vertices`; interval bounds with an
// included endpoint must stay strictly inside the edge.
struct SubPresentation {
    std::set<int> vertices;  // record ids of included vertex points
    std::map<int, std::vector<SubInterval>> intervals;
};

namespace detail {

inline void check_subpresentation(const SegmentTree& x, const SubPresentation& s) {
    for (int v : s.vertices) {
        if (v < 0 || v >= static_cast<int>(x.size()))
            throw domain_error("sub-presentation names an unknown vertex record");
        if (!x.is_vertex_record(v))
            throw domain_error("open edge '" + x.node(v).name + "' has no vertex to include");
    }
    for (const auto& [rec, ivs] : s.intervals) {
        if (rec < 0 || rec >= static_cast<int>(x.size()) || rec == x.root())
            throw domain_error("sub-presentation interval on an unknown or root record");
        Rat len = x.node(rec).len;
        for (const auto& iv : ivs) {
            if (iv.lo < 0 || iv.hi > len || iv.lo > iv.hi)
                throw domain_error("malformed interval on edge '" + x.node(rec).name + "'");
            if (iv.lo_in && iv.lo <= 0) throw domain_error("included endpoint at edge bottom; list the vertex instead");
            if (iv.hi_in && iv.hi >= len)
                throw domain_error("included endpoint at edge top; list the vertex instead");
            if (iv.lo == iv.hi && !(iv.lo_in && iv.hi_in))
                throw domain_error("degenerate open interval on edge '" + x.node(rec).name + "'");
        }
    }
}

// merged, sorted interval list per record
inline std::vector<SubInterval> merged_intervals(const SubPresentation& s, int rec) {
    auto it = s.intervals.find(rec);
    if (it == s.intervals.end()) return {};
    std::vector<SubInterval> ivs = it->second;
    std::sort(ivs.begin(), ivs.end(), [](const SubInterval& a, const SubInterval& b) {
        return a.lo != b.lo ? a.lo < b.lo : (a.lo_in && !b.lo_in);
    });
    std::vector<SubInterval> out;
    for (const auto& iv : ivs) {
        if (!out.empty()) {
            SubInterval& last = out.back();
            bool touches = iv.lo < last.hi || (iv.lo == last.hi && (iv.lo_in || last.hi_in));
            if (touches) {
                if (iv.hi > last.hi || (iv.hi == last.hi && iv.hi_in)) {
                    last.hi = iv.hi;
                    last.hi_in = iv.hi_in;
                }
                continue;
            }
        }
        out.push_back(iv);
    }
    return out;
}

// does the merged list cover [lo, hi] with the given endpoint inclusions?
inline bool covers(const std::vector<SubInterval>& ivs, const Rat& lo, bool lo_in, const Rat& hi,
                   bool hi_in) {
    if (lo > hi || (lo == hi && !(lo_in && hi_in))) return true;  // empty requirement
    for (const auto& iv : ivs) {
        bool left_ok = iv.lo < lo || (iv.lo == lo && (iv.lo_in || !lo_in));
        bool right_ok = iv.hi > hi || (iv.hi == hi && (iv.hi_in || !hi_in));
        if (left_ok && right_ok) return true;
    }
    return false;
}

struct PathPiece {
    int rec;
    Rat lo, hi;
    bool lo_in, hi_in;
};

// interior segments and intermediate vertices of the closed path [lo, hi],
// endpoints included; vertices are reported via `verts`, interior endpoints
// via segment inclusion flags
inline void ascending_arc(const SegmentTree& x, const PointS& lo, const PointS& hi,
                          std::vector<PathPiece>& segs, std::set<int>& verts) {
    if (is_vertex(x, lo)) verts.insert(lo.node);
    if (is_vertex(x, hi)) verts.insert(hi.node);
    if (lo == hi) {
        if (!is_vertex(x, lo)) segs.push_back(PathPiece{lo.node, lo.t, lo.t, true, true});
        return;
    }
    int cur_rec = hi.node;
    Rat cur_t = hi.t;
    bool top_in = !is_vertex(x, hi);  // vertex tops are recorded in verts instead
    while (true) {
        if (lo.node == cur_rec && !is_vertex(x, lo) && lo.node != x.root()) {
            segs.push_back(PathPiece{cur_rec, lo.t, cur_t, true, top_in});
            return;
        }
        segs.push_back(PathPiece{cur_rec, Rat(0), cur_t, false, top_in});
        int parent = x.node(cur_rec).parent;
        if (parent < 0) throw domain_error("arc endpoints not comparable");
        verts.insert(parent);
        PointS pv = parent == x.root() ? root_point(x) : vertex_point(x, parent);
        if (pv == lo) return;
        if (parent == x.root()) throw domain_error("arc endpoints not comparable");
        cur_rec = parent;
        cur_t = x.node(parent).len;
        top_in = false;
    }
}

}  // namespace detail

// True iff the order path between any two points of the sub-presentation
// stays inside it; exact, decided on the finitely many breakpoints.
inline bool is_convex(const SegmentTree& x, const SubPresentation& s,
                      std::string* witness = nullptr) {
    detail::check_subpresentation(x, s);
    // candidate points: included vertices, interval midpoints, included endpoints
    std::vector<PointS> cands;
    for (int v : s.vertices) cands.push_back(v == x.root() ? root_point(x) : vertex_point(x, v));
    for (const auto& [rec, ivs] : s.intervals) {
        for (const auto& iv : ivs) {
            if (iv.lo_in) cands.push_back(PointS{rec, iv.lo});
            if (iv.hi_in) cands.push_back(PointS{rec, iv.hi});
            Rat mid = (iv.lo + iv.hi) / 2;
            if (mid > 0 && mid < x.node(rec).len && (mid != iv.lo || iv.lo_in))
                cands.push_back(PointS{rec, mid});
        }
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    auto vertex_in = [&](int rec) { return s.vertices.count(rec) > 0; };
    auto segment_covered = [&](const detail::PathPiece& seg) {
        auto merged = detail::merged_intervals(s, seg.rec);
        return detail::covers(merged, seg.lo, seg.lo_in, seg.hi, seg.hi_in);
    };

    for (std::size_t i = 0; i < cands.size(); ++i) {
        for (std::size_t j = i + 1; j < cands.size(); ++j) {
            PointS m = meet_s(x, cands[i], cands[j]);
            std::vector<detail::PathPiece> segs;
            std::set<int> verts;
            detail::ascending_arc(x, m, cands[i], segs, verts);
            detail::ascending_arc(x, m, cands[j], segs, verts);
            for (int v : verts) {
                if (!vertex_in(v)) {
                    if (witness)
                        *witness = "path from " + point_str(x, cands[i]) + " to " +
                                   point_str(x, cands[j]) + " leaves the set at vertex '" +
                                   x.node(v).name + "'";
                    return false;
                }
            }
            for (const auto& seg : segs) {
                if (!segment_covered(seg)) {
                    if (witness)
                        *witness = "path from " + point_str(x, cands[i]) + " to " +
                                   point_str(x, cands[j]) + " leaves the set on edge '" +
                                   x.node(seg.rec).name + "'";
                    return false;
                }
            }
        }
    }
    return true;
}

}  // namespace treeord
