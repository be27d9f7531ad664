#pragma once

// The road construction: a well-stratified tree presented as an
// OrdinalTree becomes a segment tree in which each finite edge of length n
// turns into a closed segment of length n, and each omega edge into a
// closed unit segment whose interior chain accumulates at the top. The
// canonical embedding sends offsets to edge parameters.

#include "treeord/grading.hpp"
#include "treeord/metric.hpp"

#include <map>

namespace treeord {

struct RoadResult {
    SegmentTree space;
    // record of the road edge presenting each tree edge, indexed by the
    // OrdinalTree node id; vertices map to the same index
    std::map<int, int> edge_of;

    PointS embed(const OrdinalTree& t, const PointW& p) const {
        require_point(t, p);
        int rec = edge_of.at(p.node);
        if (p.off == 0) {
            if (t.node(p.node).parent < 0) return PointS{rec, Rat(0)};
            return PointS{rec, space.node(rec).len};
        }
        const EdgeLen& len = t.node(p.node).len;
        if (!len.omega) return PointS{rec, Rat(static_cast<Int>(p.off))};
        // offset k sits at 1 - 2^(-k) on the unit segment
        Int pw(1);
        pw <<= static_cast<unsigned>(p.off);
        return PointS{rec, Rat(1) - Rat(1, pw)};
    }
};

inline RoadResult road(const OrdinalTree& t) {
    RoadResult r;
    std::vector<SegmentTree::Node> nodes;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& nd = t.node(static_cast<int>(i));
        SegmentTree::Node sn;
        sn.parent = nd.parent;
        sn.name = nd.name;
        sn.open = false;
        if (nd.parent >= 0) sn.len = nd.len.omega ? Rat(1) : Rat(static_cast<Int>(nd.len.n));
        nodes.push_back(sn);
        r.edge_of[static_cast<int>(i)] = static_cast<int>(i);
    }
    r.space = SegmentTree::make(std::move(nodes));
    return r;
}

// Restriction of a grading of the road space to the embedded tree: the
// composition with the canonical embedding, evaluated on the carrier.
inline GradingW restrict_grading(const OrdinalTree& t, const RoadResult& r, const GradingS& ell,
                                 const std::vector<PointW>& carrier) {
    validate_grading(r.space, ell, GradingCheck::strict);
    GradingW g;
    for (const PointW& p : carrier) g.values[p] = evaluate_grading(r.space, ell, r.embed(t, p));
    require_monotone_w(t, g);
    return g;
}

inline GradingW restrict_grading(const OrdinalTree& t, const RoadResult& r, const GradingS& ell) {
    std::vector<PointW> vertices;
    for (std::size_t i = 0; i < t.size(); ++i) vertices.push_back(PointW{static_cast<int>(i), 0});
    return restrict_grading(t, r, ell, vertices);
}

}  // namespace treeord
