#pragma once

// Compressed finite presentations of well-stratified trees. Edges carry a
// length in N+ or the symbol omega; an edge of finite length n presents a
// chain of n successor points ending in its top vertex, while an omega edge
// presents an infinite successor chain whose top vertex sits at a limit
// rank. Interior points are addressed as (edge, offset).

#include "treeord/ordinal.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace treeord {

struct EdgeLen {
    bool omega = false;
    std::uint64_t n = 0;  // >= 1 when finite

    static EdgeLen finite(std::uint64_t k) { return EdgeLen{false, k}; }
    static EdgeLen inf() { return EdgeLen{true, 0}; }
    bool operator==(const EdgeLen& o) const { return omega == o.omega && (omega || n == o.n); }

    Ordinal as_ordinal() const { return omega ? Ordinal::omega() : Ordinal::nat(n); }
    std::string str() const { return omega ? "w" : std::to_string(n); }
};

class OrdinalTree {
public:
    struct Node {
        int parent = -1;   // -1 for the root
        EdgeLen len;       // meaningful only for non-root nodes
        std::string name;
    };

    OrdinalTree() = default;

    // Throws on multiple roots, cycles, bad lengths or duplicate names.
    static OrdinalTree make(std::vector<Node> nodes) {
        OrdinalTree t;
        t.nodes_ = std::move(nodes);
        t.check();
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

    bool has_omega_edge() const {
        for (const auto& nd : nodes_)
            if (nd.parent >= 0 && nd.len.omega) return true;
        return false;
    }

private:
    void check() {
        root_ = -1;
        children_.assign(nodes_.size(), {});
        std::set<std::string> names;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const Node& nd = nodes_[i];
            if (!names.insert(nd.name).second)
                throw domain_error("duplicate node name '" + nd.name + "'");
            if (nd.parent < 0) {
                if (root_ >= 0)
                    throw domain_error("multiple roots: '" + nodes_[root_].name + "' and '" + nd.name + "'");
                root_ = static_cast<int>(i);
            } else {
                if (nd.parent >= static_cast<int>(nodes_.size()))
                    throw domain_error("dangling parent link at '" + nd.name + "'");
                if (!nd.len.omega && nd.len.n == 0)
                    throw domain_error("zero edge length at '" + nd.name + "'");
                children_[static_cast<std::size_t>(nd.parent)].push_back(static_cast<int>(i));
            }
        }
        if (!nodes_.empty() && root_ < 0) throw domain_error("tree has no root");
        // acyclicity: walk up from every node, counting steps
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            int v = static_cast<int>(i);
            std::size_t steps = 0;
            while (v >= 0) {
                v = nodes_[static_cast<std::size_t>(v)].parent;
                if (++steps > nodes_.size())
                    throw domain_error("cycle through node '" + nodes_[i].name + "'");
            }
        }
    }

    std::vector<Node> nodes_;
    std::vector<std::vector<int>> children_;
    int root_ = -1;
};

// A point of the presented tree: the vertex itself (off == 0) or the
// interior point of the vertex's in-edge at the given offset above the
// parent. Finite edges of length n admit offsets 1..n-1; omega edges admit
// every positive offset.
struct PointW {
    int node = -1;
    std::uint64_t off = 0;

    bool operator==(const PointW& o) const { return node == o.node && off == o.off; }
    bool operator<(const PointW& o) const {
        return node != o.node ? node < o.node : off < o.off;
    }
};

inline std::string point_str(const OrdinalTree& t, const PointW& p) {
    std::string s = t.node(p.node).name;
    if (p.off > 0) s += "@" + std::to_string(p.off);
    return s;
}

inline void require_point(const OrdinalTree& t, const PointW& p) {
    if (p.node < 0 || p.node >= static_cast<int>(t.size()))
        throw domain_error("point refers to unknown node");
    if (p.off == 0) return;
    const auto& nd = t.node(p.node);
    if (nd.parent < 0) throw domain_error("root has no in-edge offsets");
    if (!nd.len.omega && p.off >= nd.len.n)
        throw domain_error("offset " + std::to_string(p.off) + " out of range on edge '" + nd.name + "'");
}

inline Ordinal rank(const OrdinalTree& t, const PointW& p) {
    require_point(t, p);
    // collect full edge lengths root -> anchor, then the final offset
    std::vector<Ordinal> parts;
    int v = p.node;
    if (p.off > 0) {
        parts.push_back(Ordinal::nat(p.off));
        v = t.node(v).parent;
    }
    while (v >= 0 && t.node(v).parent >= 0) {
        parts.push_back(t.node(v).len.as_ordinal());
        v = t.node(v).parent;
    }
    Ordinal r = Ordinal::zero();
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) r = ord_add(r, *it);
    return r;
}

namespace detail {

// Root path of a point as (edge node, portion); portion is nullopt for a
// fully traversed edge and the offset for the final partial edge.
inline std::vector<std::pair<int, std::optional<std::uint64_t>>> path_w(const OrdinalTree& t,
                                                                        const PointW& p) {
    std::vector<std::pair<int, std::optional<std::uint64_t>>> path;
    int v = p.node;
    if (p.off > 0) {
        path.push_back({v, p.off});
        v = t.node(v).parent;
    }
    while (v >= 0 && t.node(v).parent >= 0) {
        path.push_back({v, std::nullopt});
        v = t.node(v).parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace detail

inline PointW meet_w(const OrdinalTree& t, const PointW& a, const PointW& b) {
    require_point(t, a);
    require_point(t, b);
    auto pa = detail::path_w(t, a);
    auto pb = detail::path_w(t, b);
    PointW last{t.root(), 0};
    for (std::size_t i = 0; i < pa.size() && i < pb.size(); ++i) {
        if (pa[i].first != pb[i].first) break;
        if (!pa[i].second && !pb[i].second) {
            last = PointW{pa[i].first, 0};
            continue;
        }
        // both points sit on (or pass through) this edge; take the lower portion
        std::uint64_t oa = pa[i].second ? *pa[i].second : ~0ull;
        std::uint64_t ob = pb[i].second ? *pb[i].second : ~0ull;
        std::uint64_t o = std::min(oa, ob);
        if (o == ~0ull) continue;  // unreachable, both full handled above
        return PointW{pa[i].first, o};
    }
    return last;
}

inline bool leq_w(const OrdinalTree& t, const PointW& a, const PointW& b) {
    if (a.node == b.node) {
        if (a.off == b.off) return true;
        // offset 0 marks the top vertex of the edge, above every interior offset
        if (a.off == 0) return false;
        if (b.off == 0) return true;
        return a.off <= b.off;
    }
    if (a.off == 0 && t.node(a.node).parent < 0) return true;  // root
    // a lies below b exactly when b's root path fully traverses a's record
    int cur = t.node(b.node).parent;
    while (cur >= 0) {
        if (cur == a.node) return true;
        cur = t.node(cur).parent;
    }
    return false;
}

// Vertices with at least two children; branching points are always vertices
// in this presentation.
inline std::vector<PointW> branching_nodes_w(const OrdinalTree& t) {
    std::vector<PointW> out;
    for (std::size_t v = 0; v < t.size(); ++v)
        if (t.children(static_cast<int>(v)).size() >= 2) out.push_back(PointW{static_cast<int>(v), 0});
    return out;
}

// Every point of the presented tree; requires all edge lengths finite.
inline std::vector<PointW> full_point_set(const OrdinalTree& t) {
    std::vector<PointW> pts;
    for (std::size_t v = 0; v < t.size(); ++v) {
        const auto& nd = t.node(static_cast<int>(v));
        if (nd.parent >= 0) {
            if (nd.len.omega)
                throw domain_error("point set of '" + nd.name + "' is infinite (omega edge)");
            for (std::uint64_t k = 1; k < nd.len.n; ++k) pts.push_back(PointW{static_cast<int>(v), k});
        }
        pts.push_back(PointW{static_cast<int>(v), 0});
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

// Insert a new node directly below the root and directly below every vertex
// of limit rank (the tops of omega edges). Fresh nodes reuse the name of the
// node above with a "^" prefix.
inline OrdinalTree pad(const OrdinalTree& t) {
    if (t.empty()) return t;
    std::vector<OrdinalTree::Node> nodes = t.nodes();
    auto fresh_name = [&](const std::string& base) {
        std::string name = "^" + base;
        auto taken = [&](const std::string& s) {
            for (const auto& nd : nodes)
                if (nd.name == s) return true;
            return false;
        };
        while (taken(name)) name = "^" + name;
        return name;
    };
    // below every omega-edge top: u --w--> m --1--> v
    std::size_t original = nodes.size();
    for (std::size_t v = 0; v < original; ++v) {
        if (nodes[v].parent < 0 || !nodes[v].len.omega) continue;
        OrdinalTree::Node mid;
        mid.parent = nodes[v].parent;
        mid.len = EdgeLen::inf();
        mid.name = fresh_name(nodes[v].name);
        nodes.push_back(mid);
        nodes[v].parent = static_cast<int>(nodes.size() - 1);
        nodes[v].len = EdgeLen::finite(1);
    }
    // below the root
    int old_root = -1;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].parent < 0) old_root = static_cast<int>(i);
    OrdinalTree::Node nr;
    nr.parent = -1;
    nr.name = fresh_name(nodes[static_cast<std::size_t>(old_root)].name);
    nodes.push_back(nr);
    nodes[static_cast<std::size_t>(old_root)].parent = static_cast<int>(nodes.size() - 1);
    nodes[static_cast<std::size_t>(old_root)].len = EdgeLen::finite(1);
    return OrdinalTree::make(std::move(nodes));
}

// Suborder of the points with successor rank, re-compressed. The removed
// points are the root and every omega-edge top. Each removed vertex must
// have exactly one child, otherwise the suborder is not presentable as an
// OrdinalTree (it loses its root or its meets) and we reject it.
inline OrdinalTree succ_subtree(const OrdinalTree& t) {
    if (t.size() <= 1) return OrdinalTree();
    std::vector<bool> removed(t.size(), false);
    removed[static_cast<std::size_t>(t.root())] = true;
    for (std::size_t v = 0; v < t.size(); ++v)
        if (t.node(static_cast<int>(v)).parent >= 0 && t.node(static_cast<int>(v)).len.omega)
            removed[v] = true;

    for (std::size_t v = 0; v < t.size(); ++v) {
        if (!removed[v]) continue;
        bool is_root = static_cast<int>(v) == t.root();
        std::size_t kids = t.children(static_cast<int>(v)).size();
        if (kids == 0)
            throw domain_error("successor suborder not presentable: '" + t.node(static_cast<int>(v)).name +
                               "' tops an infinite chain with nothing above");
        if (kids >= 2)
            throw domain_error(is_root ? "successor suborder not presentable: the root has several "
                                         "children, so the suborder has no minimum"
                                       : "successor suborder not presentable: limit point '" +
                                             t.node(static_cast<int>(v)).name + "' has several children");
    }

    std::vector<OrdinalTree::Node> out;
    // image of each kept input vertex, and the anchor replacing each removed one
    std::vector<int> image(t.size(), -1);

    // order vertices deepest-first so anchors above are ready when needed
    std::vector<int> order;
    std::vector<int> depth(t.size(), 0);
    for (std::size_t v = 0; v < t.size(); ++v) {
        int u = static_cast<int>(v), d = 0;
        while (t.node(u).parent >= 0) {
            u = t.node(u).parent;
            ++d;
        }
        depth[v] = d;
        order.push_back(static_cast<int>(v));
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) { return depth[a] > depth[b]; });

    auto add_node = [&](const std::string& name) {
        OrdinalTree::Node nd;
        nd.name = name;
        out.push_back(nd);
        return static_cast<int>(out.size() - 1);
    };
    for (int v : order)
        if (!removed[static_cast<std::size_t>(v)]) image[static_cast<std::size_t>(v)] = add_node(t.node(v).name);

    // for each removed vertex, the output vertex standing for the least
    // point above it, plus the residual edge up to its child's image
    for (int v : order) {
        if (!removed[static_cast<std::size_t>(v)]) continue;
        int c = t.children(v).front();
        EdgeLen L = t.node(c).len;
        bool child_removed = removed[static_cast<std::size_t>(c)];
        if (!child_removed && !L.omega && L.n == 1) {
            image[static_cast<std::size_t>(v)] = image[static_cast<std::size_t>(c)];
        } else {
            int f = add_node("." + t.node(v).name);
            image[static_cast<std::size_t>(v)] = f;
            int target = image[static_cast<std::size_t>(c)];
            out[static_cast<std::size_t>(target)].parent = f;
            out[static_cast<std::size_t>(target)].len =
                L.omega ? EdgeLen::inf() : EdgeLen::finite(L.n - 1);
        }
    }
    // edges between kept vertices, and omega edges into removed tops
    for (std::size_t v = 0; v < t.size(); ++v) {
        int parent = t.node(static_cast<int>(v)).parent;
        if (parent < 0 || removed[static_cast<std::size_t>(parent)]) continue;
        int lower = image[static_cast<std::size_t>(parent)];
        int upper = image[static_cast<std::size_t>(v)];
        if (removed[v]) {
            // upper is the anchor above v; the omega edge keeps its length
            out[static_cast<std::size_t>(upper)].parent = lower;
            out[static_cast<std::size_t>(upper)].len = EdgeLen::inf();
        } else {
            out[static_cast<std::size_t>(upper)].parent = lower;
            out[static_cast<std::size_t>(upper)].len = t.node(static_cast<int>(v)).len;
        }
    }
    return OrdinalTree::make(std::move(out));
}

namespace detail {

// Canonical form under order isomorphism: a non-root vertex with exactly one
// child and a finite in-edge is an anonymous chain point, so the two edges
// merge (finite+finite adds, finite followed by omega collapses to omega).
// Vertices whose in-edge is omega stay put.
inline std::string canon_w(const OrdinalTree& t, int v, const std::vector<std::vector<int>>& kids) {
    std::vector<std::string> parts;
    for (int c : kids[static_cast<std::size_t>(v)]) {
        // walk through mergeable chain vertices
        EdgeLen len = t.node(c).len;
        int cur = c;
        while (kids[static_cast<std::size_t>(cur)].size() == 1 && !len.omega) {
            int next = kids[static_cast<std::size_t>(cur)].front();
            EdgeLen nl = t.node(next).len;
            len = nl.omega ? EdgeLen::inf() : EdgeLen::finite(len.n + nl.n);
            cur = next;
        }
        parts.push_back(len.str() + canon_w(t, cur, kids));
    }
    std::sort(parts.begin(), parts.end());
    std::string s = "[";
    for (const auto& p : parts) s += p;
    return s + "]";
}

}  // namespace detail

inline std::string canonical_form(const OrdinalTree& t) {
    if (t.empty()) return "[]";
    std::vector<std::vector<int>> kids(t.size());
    for (std::size_t v = 0; v < t.size(); ++v)
        if (t.node(static_cast<int>(v)).parent >= 0)
            kids[static_cast<std::size_t>(t.node(static_cast<int>(v)).parent)].push_back(static_cast<int>(v));
    return detail::canon_w(t, t.root(), kids);
}

// Root-preserving order isomorphism of presented trees.
inline bool iso_check(const OrdinalTree& a, const OrdinalTree& b) {
    if (a.empty() || b.empty()) return a.empty() == b.empty();
    return canonical_form(a) == canonical_form(b);
}

}  // namespace treeord
