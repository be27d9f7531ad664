#pragma once

// Conversions between antichain covers and rational gradings on
// well-stratified trees: fibre decomposition of a Q-grading, the 1/n^2 sum
// grading of a cover, interval selection for successor points, rank
// pullbacks, and the extension of a branching-node cover to a grading of
// the whole carrier.

#include "treeord/wstree.hpp"

#include <map>
#include <set>
#include <vector>

namespace treeord {

// Indexed family of point sets; class n is classes[n-1].
struct AntichainCover {
    std::vector<std::vector<PointW>> classes;

    std::set<PointW> carrier() const {
        std::set<PointW> s;
        for (const auto& c : classes) s.insert(c.begin(), c.end());
        return s;
    }
};

// Strictly monotone point map with an explicit finite carrier.
struct GradingW {
    std::map<PointW, Rat> values;

    const Rat& at(const PointW& p) const {
        auto it = values.find(p);
        if (it == values.end()) throw domain_error("point outside grading carrier");
        return it->second;
    }
};

inline void require_monotone_w(const OrdinalTree& t, const GradingW& g) {
    for (auto it = g.values.begin(); it != g.values.end(); ++it) {
        for (auto jt = std::next(it); jt != g.values.end(); ++jt) {
            if (leq_w(t, it->first, jt->first)) {
                if (!(it->second < jt->second))
                    throw domain_error("grading not strictly monotone at " + point_str(t, it->first) +
                                       " < " + point_str(t, jt->first));
            } else if (leq_w(t, jt->first, it->first)) {
                if (!(jt->second < it->second))
                    throw domain_error("grading not strictly monotone at " + point_str(t, jt->first) +
                                       " < " + point_str(t, it->first));
            }
        }
    }
}

inline void require_antichain_classes(const OrdinalTree& t, const AntichainCover& c) {
    for (std::size_t n = 0; n < c.classes.size(); ++n) {
        const auto& cls = c.classes[n];
        for (std::size_t i = 0; i < cls.size(); ++i)
            for (std::size_t j = i + 1; j < cls.size(); ++j)
                if (leq_w(t, cls[i], cls[j]) || leq_w(t, cls[j], cls[i]))
                    throw domain_error("class " + std::to_string(n + 1) + " is not an antichain: " +
                                       point_str(t, cls[i]) + " and " + point_str(t, cls[j]) +
                                       " are comparable");
    }
}

// Fibres of a Q-grading, one class per value in ascending order.
inline AntichainCover cover_from_qgrading(const OrdinalTree& t, const GradingW& g) {
    require_monotone_w(t, g);
    std::map<Rat, std::vector<PointW>> fibres;
    for (const auto& [p, v] : g.values) fibres[v].push_back(p);
    AntichainCover cover;
    for (auto& [v, pts] : fibres) {
        std::sort(pts.begin(), pts.end());
        cover.classes.push_back(std::move(pts));
    }
    require_antichain_classes(t, cover);
    return cover;
}

// f(x) = sum of 1/n^2 over the classes with a member below or equal to x.
inline GradingW rgrading_from_cover(const OrdinalTree& t, const AntichainCover& c) {
    require_antichain_classes(t, c);
    GradingW g;
    for (const PointW& x : c.carrier()) {
        Rat sum(0);
        for (std::size_t n = 0; n < c.classes.size(); ++n) {
            bool hit = false;
            for (const PointW& y : c.classes[n])
                if (leq_w(t, y, x)) {
                    hit = true;
                    break;
                }
            if (hit) sum += Rat(1, static_cast<Int>((n + 1) * (n + 1)));
        }
        g.values[x] = sum;
    }
    return g;
}

// The immediate predecessor of a successor-rank point.
inline PointW immediate_predecessor(const OrdinalTree& t, const PointW& p) {
    if (p.off > 1) return PointW{p.node, p.off - 1};
    if (p.off == 1) return PointW{t.node(p.node).parent, 0};
    const auto& nd = t.node(p.node);
    if (nd.parent < 0) throw domain_error("root has no predecessor");
    if (nd.len.omega) throw domain_error("'" + nd.name + "' sits at a limit rank");
    if (nd.len.n == 1) return PointW{nd.parent, 0};
    return PointW{p.node, nd.len.n - 1};
}

// From an R-grading of the full (finite) point set, a Q-grading of the
// successor-rank points: each point x with immediate predecessor y receives
// the minimal-denominator rational in (f(y), f(x)].
inline GradingW succ_qgrading_from_r(const OrdinalTree& t, const GradingW& f) {
    auto all = full_point_set(t);
    for (const PointW& p : all)
        if (!f.values.count(p))
            throw domain_error("grading does not cover point " + point_str(t, p));
    require_monotone_w(t, f);
    GradingW g;
    for (const PointW& x : all) {
        if (x.off == 0 && t.node(x.node).parent < 0) continue;  // root has rank 0
        PointW y = immediate_predecessor(t, x);
        g.values[x] = min_den_in_interval(f.at(y), f.at(x));
    }
    return g;
}

// Rank pulled back through the rational embedding of the sorted distinct
// ranks of the carrier.
inline GradingW rank_qgrading(const OrdinalTree& t, const std::vector<PointW>& carrier) {
    std::vector<Ordinal> ranks;
    std::vector<Ordinal> per_point;
    per_point.reserve(carrier.size());
    for (const PointW& p : carrier) {
        Ordinal r = rank(t, p);
        per_point.push_back(r);
        bool seen = false;
        for (const auto& q : ranks)
            if (q == r) {
                seen = true;
                break;
            }
        if (!seen) ranks.push_back(r);
    }
    std::sort(ranks.begin(), ranks.end(), ord_less);
    std::vector<Rat> images = embed_q(ranks);
    GradingW g;
    for (std::size_t i = 0; i < carrier.size(); ++i) {
        for (std::size_t j = 0; j < ranks.size(); ++j)
            if (ranks[j] == per_point[i]) {
                g.values[carrier[i]] = images[j];
                break;
            }
    }
    return g;
}

inline GradingW rank_qgrading(const OrdinalTree& t) { return rank_qgrading(t, full_point_set(t)); }

// Extension of a branching-node cover to a grading of the whole carrier.
// Branching nodes are graded by f0(x) = sum of 1/2^n over classes with a
// member below or equal to x; each maximal chain of non-branching points
// sharing a branching down-set is fitted into the open gap below its least
// branching upper bound, or above the overall supremum of f0 when there is
// none.
inline GradingW extend_branch_grading(const OrdinalTree& t, const AntichainCover& c,
                                      const std::vector<PointW>& carrier) {
    std::vector<PointW> branching = branching_nodes_w(t);
    std::set<PointW> branch_set(branching.begin(), branching.end());
    if (c.carrier() != branch_set)
        throw domain_error("cover must consist of exactly the branching nodes");
    require_antichain_classes(t, c);

    std::map<PointW, Rat> f0;
    for (const PointW& x : branching) {
        Rat sum(0);
        for (std::size_t n = 0; n < c.classes.size(); ++n) {
            for (const PointW& y : c.classes[n])
                if (leq_w(t, y, x)) {
                    Rat term(1);
                    for (std::size_t k = 0; k <= n; ++k) term /= 2;
                    sum += term;
                    break;
                }
        }
        f0[x] = sum;
    }
    Rat sup_f0(0);
    for (const auto& [p, v] : f0)
        if (v > sup_f0) sup_f0 = v;

    GradingW out;
    for (const auto& [p, v] : f0) out.values[p] = v;

    // group the non-branching carrier points by their branching down-set,
    // then split each group into comparability classes (chains)
    std::vector<PointW> plain;
    for (const PointW& p : carrier)
        if (!branch_set.count(p)) plain.push_back(p);
    std::sort(plain.begin(), plain.end());
    plain.erase(std::unique(plain.begin(), plain.end()), plain.end());

    auto branch_key = [&](const PointW& p) {
        std::vector<bool> key(branching.size(), false);
        for (std::size_t i = 0; i < branching.size(); ++i)
            if (leq_w(t, branching[i], p)) key[i] = true;
        return key;
    };

    std::map<std::vector<bool>, std::vector<PointW>> groups;
    for (const PointW& p : plain) groups[branch_key(p)].push_back(p);

    for (auto& [key, pts] : groups) {
        // comparability components within a key group are chains
        std::vector<int> comp(pts.size(), -1);
        int ncomp = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (comp[i] >= 0) continue;
            comp[i] = ncomp;
            for (std::size_t j = 0; j < pts.size(); ++j)
                if (comp[j] < 0 && (leq_w(t, pts[i], pts[j]) || leq_w(t, pts[j], pts[i])))
                    comp[j] = ncomp;
            ++ncomp;
        }
        for (int cc = 0; cc < ncomp; ++cc) {
            std::vector<PointW> chain;
            for (std::size_t i = 0; i < pts.size(); ++i)
                if (comp[i] == cc) chain.push_back(pts[i]);
            std::sort(chain.begin(), chain.end(), [&](const PointW& a, const PointW& b) {
                return !(a == b) && leq_w(t, a, b);
            });
            // least branching vertex strictly above the chain, if any
            PointW top = chain.back();
            int v;
            if (top.off > 0)
                v = top.node;  // the edge's top vertex lies strictly above
            else if (t.children(top.node).size() == 1)
                v = t.children(top.node).front();
            else
                v = -1;  // leaf vertex, nothing above
            std::optional<PointW> bound;
            while (v >= 0) {
                if (t.children(v).size() >= 2) {
                    bound = PointW{v, 0};
                    break;
                }
                if (t.children(v).size() == 0) break;
                v = t.children(v).front();
            }

            std::vector<Ordinal> chain_ranks;
            for (const PointW& p : chain) chain_ranks.push_back(rank(t, p));
            std::vector<Rat> images = embed_q(chain_ranks);  // ascending ranks -> 0,1,2,...

            if (bound) {
                Rat hi = f0.at(*bound);
                Rat lo(0);
                // deepest branching vertex strictly below the bound
                int u = t.node(bound->node).parent;
                while (u >= 0) {
                    if (t.children(u).size() >= 2) {
                        lo = f0.at(PointW{u, 0});
                        break;
                    }
                    u = t.node(u).parent;
                }
                Rat m(static_cast<Int>(chain.size()));
                for (std::size_t i = 0; i < chain.size(); ++i)
                    out.values[chain[i]] = lo + (hi - lo) * (images[i] + 1) / (m + 1);
            } else {
                for (std::size_t i = 0; i < chain.size(); ++i)
                    out.values[chain[i]] = sup_f0 + 1 + images[i];
            }
        }
    }
    require_monotone_w(t, out);
    return out;
}

inline GradingW extend_branch_grading(const OrdinalTree& t, const AntichainCover& c) {
    return extend_branch_grading(t, c, full_point_set(t));
}

}  // namespace treeord
