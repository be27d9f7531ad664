#pragma once

// Text formats and DOT export. Every document starts with a header line
// naming its kind ("wstree", "segtree", "grading", "family"); serialization
// is canonical (parent before child, children sorted by name), so parsing
// and reserializing any document is byte-stable.

#include "treeord/approx.hpp"
#include "treeord/diag.hpp"
#include "treeord/grading.hpp"
#include "treeord/metric.hpp"
#include "treeord/roadspace.hpp"

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace treeord {
namespace io {

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

// logical lines with 1-based numbers, blank and '#' lines skipped
inline std::vector<std::pair<std::size_t, std::string>> logical_lines(const std::string& text) {
    std::vector<std::pair<std::size_t, std::string>> out;
    std::size_t lineno = 0, pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start != std::string::npos && line[start] != '#')
            out.push_back({lineno, line});
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    return out;
}

inline std::string expect_kv(const std::string& tok, const std::string& key, std::size_t line) {
    if (tok.size() <= key.size() + 1 || tok.compare(0, key.size(), key) != 0 || tok[key.size()] != '=')
        throw parse_error("expected '" + key + "=...', found '" + tok + "'", line);
    return tok.substr(key.size() + 1);
}

}  // namespace detail

inline std::string document_kind(const std::string& text) {
    auto lines = detail::logical_lines(text);
    if (lines.empty()) throw parse_error("empty document", 1);
    auto toks = detail::split_ws(lines.front().second);
    if (toks.size() != 1) throw parse_error("expected a lone header line", lines.front().first);
    return toks.front();
}

// --- wstree ------------------------------------------------------------

inline OrdinalTree parse_wstree(const std::string& text) {
    auto lines = detail::logical_lines(text);
    if (lines.empty() || detail::split_ws(lines[0].second) != std::vector<std::string>{"wstree"})
        throw parse_error("expected header 'wstree'", lines.empty() ? 1 : lines[0].first);
    std::vector<OrdinalTree::Node> nodes;
    std::map<std::string, int> index;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto [lineno, line] = lines[i];
        auto toks = detail::split_ws(line);
        if (toks.empty() || toks[0] != "node")
            throw parse_error("expected 'node <name> parent=... [edgelen=...]'", lineno);
        if (toks.size() < 3) throw parse_error("truncated node line", lineno);
        OrdinalTree::Node nd;
        nd.name = toks[1];
        if (index.count(nd.name)) throw parse_error("duplicate node '" + nd.name + "'", lineno);
        std::string parent = detail::expect_kv(toks[2], "parent", lineno);
        if (parent == "-") {
            if (toks.size() != 3) throw parse_error("root line takes no edge length", lineno);
        } else {
            auto it = index.find(parent);
            if (it == index.end()) throw parse_error("unknown parent '" + parent + "'", lineno);
            nd.parent = it->second;
            if (toks.size() != 4) throw parse_error("expected edgelen=... after parent", lineno);
            std::string len = detail::expect_kv(toks[3], "edgelen", lineno);
            if (len == "w") {
                nd.len = EdgeLen::inf();
            } else {
                try {
                    nd.len = EdgeLen::finite(std::stoull(len));
                } catch (...) {
                    throw parse_error("bad edge length '" + len + "'", lineno);
                }
                if (nd.len.n == 0) throw parse_error("edge length must be positive", lineno);
            }
        }
        index[nd.name] = static_cast<int>(nodes.size());
        nodes.push_back(nd);
    }
    try {
        return OrdinalTree::make(std::move(nodes));
    } catch (const domain_error& e) {
        throw parse_error(e.what());
    }
}

namespace detail {

inline void preorder_names(int root, const std::vector<std::vector<int>>& kids,
                           const std::vector<std::string>& names, std::vector<int>& out) {
    std::vector<int> stack{root};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        out.push_back(v);
        std::vector<int> cs = kids[static_cast<std::size_t>(v)];
        std::sort(cs.begin(), cs.end(), [&](int a, int b) {
            return names[static_cast<std::size_t>(a)] > names[static_cast<std::size_t>(b)];
        });
        for (int c : cs) stack.push_back(c);
    }
}

}  // namespace detail

inline std::string serialize(const OrdinalTree& t) {
    std::string out = "wstree\n";
    if (t.empty()) return out;
    std::vector<std::vector<int>> kids(t.size());
    std::vector<std::string> names(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        names[i] = t.node(static_cast<int>(i)).name;
        if (t.node(static_cast<int>(i)).parent >= 0)
            kids[static_cast<std::size_t>(t.node(static_cast<int>(i)).parent)].push_back(static_cast<int>(i));
    }
    std::vector<int> order;
    detail::preorder_names(t.root(), kids, names, order);
    for (int v : order) {
        const auto& nd = t.node(v);
        out += "node " + nd.name + " parent=";
        out += nd.parent < 0 ? "-" : t.node(nd.parent).name;
        if (nd.parent >= 0) out += " edgelen=" + nd.len.str();
        out += "\n";
    }
    return out;
}

// --- segtree -----------------------------------------------------------

inline std::vector<SegmentTree::Node> parse_segtree_raw(const std::string& text) {
    auto lines = detail::logical_lines(text);
    if (lines.empty() || detail::split_ws(lines[0].second) != std::vector<std::string>{"segtree"})
        throw parse_error("expected header 'segtree'", lines.empty() ? 1 : lines[0].first);
    std::vector<SegmentTree::Node> nodes;
    std::map<std::string, int> index;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto [lineno, line] = lines[i];
        auto toks = detail::split_ws(line);
        if (toks.empty() || toks[0] != "node")
            throw parse_error("expected 'node <name> parent=... [len=... top=...]'", lineno);
        if (toks.size() < 3) throw parse_error("truncated node line", lineno);
        SegmentTree::Node nd;
        nd.name = toks[1];
        if (index.count(nd.name)) throw parse_error("duplicate node '" + nd.name + "'", lineno);
        std::string parent = detail::expect_kv(toks[2], "parent", lineno);
        if (parent == "-") {
            if (toks.size() != 3) throw parse_error("root line takes no length", lineno);
        } else {
            auto it = index.find(parent);
            if (it == index.end()) throw parse_error("unknown parent '" + parent + "'", lineno);
            nd.parent = it->second;
            if (toks.size() != 5) throw parse_error("expected len=... top=...", lineno);
            try {
                nd.len = parse_rat(detail::expect_kv(toks[3], "len", lineno));
            } catch (const parse_error& e) {
                throw parse_error(e.what(), lineno);
            }
            std::string top = detail::expect_kv(toks[4], "top", lineno);
            if (top == "open")
                nd.open = true;
            else if (top != "closed")
                throw parse_error("top must be 'open' or 'closed'", lineno);
        }
        index[nd.name] = static_cast<int>(nodes.size());
        nodes.push_back(nd);
    }
    return nodes;
}

inline SegmentTree parse_segtree(const std::string& text) {
    return SegmentTree::make(parse_segtree_raw(text));
}

inline std::string serialize(const SegmentTree& x) {
    std::string out = "segtree\n";
    if (x.empty()) return out;
    std::vector<std::vector<int>> kids(x.size());
    std::vector<std::string> names(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        names[i] = x.node(static_cast<int>(i)).name;
        if (x.node(static_cast<int>(i)).parent >= 0)
            kids[static_cast<std::size_t>(x.node(static_cast<int>(i)).parent)].push_back(static_cast<int>(i));
    }
    std::vector<int> order;
    detail::preorder_names(x.root(), kids, names, order);
    for (int v : order) {
        const auto& nd = x.node(v);
        out += "node " + nd.name + " parent=";
        out += nd.parent < 0 ? "-" : x.node(nd.parent).name;
        if (nd.parent >= 0)
            out += " len=" + rat_str(nd.len) + " top=" + (nd.open ? std::string("open") : "closed");
        out += "\n";
    }
    return out;
}

// --- points ------------------------------------------------------------

inline PointW parse_point_w(const OrdinalTree& t, const std::string& text) {
    std::size_t at = text.find('@');
    std::string name = text.substr(0, at);
    int v = t.find(name);
    if (v < 0) throw domain_error("unknown node '" + name + "'");
    PointW p{v, 0};
    if (at != std::string::npos) {
        try {
            p.off = std::stoull(text.substr(at + 1));
        } catch (...) {
            throw domain_error("bad offset in point '" + text + "'");
        }
        if (p.off == 0) throw domain_error("offset must be positive in '" + text + "'");
    }
    require_point(t, p);
    return p;
}

inline PointS parse_point_s(const SegmentTree& x, const std::string& text) {
    std::size_t at = text.find('@');
    std::string name = text.substr(0, at);
    int v = x.find(name);
    if (v < 0) throw domain_error("unknown node '" + name + "'");
    PointS p;
    if (at == std::string::npos) {
        p = v == x.root() ? root_point(x) : vertex_point(x, v);
    } else {
        p = PointS{v, parse_rat(text.substr(at + 1))};
        if (v != x.root() && p.t == x.node(v).len && !x.node(v).open) p = vertex_point(x, v);
    }
    require_point(x, p);
    return p;
}

// --- gradings ----------------------------------------------------------

inline GradingW parse_grading_w(const std::string& text, const OrdinalTree& t) {
    auto lines = detail::logical_lines(text);
    if (lines.empty() || detail::split_ws(lines[0].second) != std::vector<std::string>{"grading"})
        throw parse_error("expected header 'grading'", lines.empty() ? 1 : lines[0].first);
    GradingW g;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto [lineno, line] = lines[i];
        auto toks = detail::split_ws(line);
        if (toks.size() != 3 || toks[0] != "p")
            throw parse_error("expected 'p <point> <value>'", lineno);
        try {
            g.values[parse_point_w(t, toks[1])] = parse_rat(toks[2]);
        } catch (const std::runtime_error& e) {
            throw parse_error(e.what(), lineno);
        }
    }
    return g;
}

inline std::string serialize(const OrdinalTree& t, const GradingW& g) {
    std::vector<std::pair<std::string, Rat>> rows;
    for (const auto& [p, v] : g.values) rows.push_back({point_str(t, p), v});
    std::sort(rows.begin(), rows.end());
    std::string out = "grading\n";
    for (const auto& [p, v] : rows) out += "p " + p + " " + rat_str(v) + "\n";
    return out;
}

inline GradingS parse_grading_s(const std::string& text, const SegmentTree& x) {
    auto lines = detail::logical_lines(text);
    if (lines.empty() || detail::split_ws(lines[0].second) != std::vector<std::string>{"grading"})
        throw parse_error("expected header 'grading'", lines.empty() ? 1 : lines[0].first);
    GradingS g;
    auto edge_of = [&](const std::string& name, std::size_t lineno) {
        int v = x.find(name);
        if (v < 0 || v == x.root()) throw parse_error("unknown edge '" + name + "'", lineno);
        return v;
    };
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto [lineno, line] = lines[i];
        auto toks = detail::split_ws(line);
        try {
            if (toks.size() == 3 && toks[0] == "v") {
                int v = x.find(toks[1]);
                if (v < 0 || !x.is_vertex_record(v))
                    throw parse_error("unknown vertex '" + toks[1] + "'", lineno);
                g.vertex_values[v] = parse_rat(toks[2]);
            } else if (toks.size() >= 4 && toks[0] == "e" && toks[2] == "start") {
                g.edge_fns[edge_of(toks[1], lineno)].start = parse_rat(toks[3]);
            } else if (toks.size() >= 4 && toks[0] == "e" && toks[2] == "end") {
                g.edge_fns[edge_of(toks[1], lineno)].end_left = parse_rat(toks[3]);
            } else if (toks.size() == 6 && toks[0] == "e" && toks[2] == "break") {
                GradingS::Break b;
                b.t = parse_rat(toks[3]);
                b.left = parse_rat(detail::expect_kv(toks[4], "left", lineno));
                b.val = parse_rat(detail::expect_kv(toks[5], "val", lineno));
                g.edge_fns[edge_of(toks[1], lineno)].breaks.push_back(b);
            } else {
                throw parse_error("expected 'v ...', 'e ... start/break/end ...'", lineno);
            }
        } catch (const parse_error&) {
            throw;
        } catch (const std::runtime_error& e) {
            throw parse_error(e.what(), lineno);
        }
    }
    for (auto& [rec, fn] : g.edge_fns)
        std::sort(fn.breaks.begin(), fn.breaks.end(),
                  [](const GradingS::Break& a, const GradingS::Break& b) { return a.t < b.t; });
    return g;
}

inline std::string serialize(const SegmentTree& x, const GradingS& g) {
    std::string out = "grading\n";
    std::vector<std::pair<std::string, Rat>> vrows;
    for (const auto& [v, val] : g.vertex_values) vrows.push_back({x.node(v).name, val});
    std::sort(vrows.begin(), vrows.end());
    for (const auto& [n, val] : vrows) out += "v " + n + " " + rat_str(val) + "\n";
    std::vector<std::pair<std::string, const GradingS::EdgeFn*>> erows;
    for (const auto& [rec, fn] : g.edge_fns) erows.push_back({x.node(rec).name, &fn});
    std::sort(erows.begin(), erows.end());
    for (const auto& [n, fn] : erows) {
        out += "e " + n + " start " + rat_str(fn->start) + "\n";
        for (const auto& b : fn->breaks)
            out += "e " + n + " break " + rat_str(b.t) + " left=" + rat_str(b.left) +
                   " val=" + rat_str(b.val) + "\n";
        out += "e " + n + " end " + rat_str(fn->end_left) + "\n";
    }
    return out;
}

inline JumpFunction parse_jump_function(const std::string& text) {
    auto lines = detail::logical_lines(text);
    if (lines.empty() || detail::split_ws(lines[0].second) != std::vector<std::string>{"grading"})
        throw parse_error("expected header 'grading'", lines.empty() ? 1 : lines[0].first);
    JumpFunction f;
    bool saw_start = false, saw_end = false;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto [lineno, line] = lines[i];
        auto toks = detail::split_ws(line);
        try {
            if (toks.size() == 3 && toks[0] == "j" && toks[1] == "start") {
                f.start = parse_rat(toks[2]);
                saw_start = true;
            } else if (toks.size() == 4 && toks[0] == "j" && toks[1] == "end") {
                f.end_left = parse_rat(detail::expect_kv(toks[2], "left", lineno));
                f.end_val = parse_rat(detail::expect_kv(toks[3], "val", lineno));
                saw_end = true;
            } else if (toks.size() == 5 && toks[0] == "j" && toks[1] == "break") {
                GradingS::Break b;
                b.t = parse_rat(toks[2]);
                b.left = parse_rat(detail::expect_kv(toks[3], "left", lineno));
                b.val = parse_rat(detail::expect_kv(toks[4], "val", lineno));
                f.breaks.push_back(b);
            } else {
                throw parse_error("expected 'j start/break/end ...'", lineno);
            }
        } catch (const parse_error&) {
            throw;
        } catch (const std::runtime_error& e) {
            throw parse_error(e.what(), lineno);
        }
    }
    if (!saw_start || !saw_end) throw parse_error("jump function needs 'j start' and 'j end' lines");
    std::sort(f.breaks.begin(), f.breaks.end(),
              [](const GradingS::Break& a, const GradingS::Break& b) { return a.t < b.t; });
    return f;
}

inline std::string serialize(const JumpFunction& f) {
    std::string out = "grading\n";
    out += "j start " + rat_str(f.start) + "\n";
    for (const auto& b : f.breaks)
        out += "j break " + rat_str(b.t) + " left=" + rat_str(b.left) + " val=" + rat_str(b.val) + "\n";
    out += "j end left=" + rat_str(f.end_left) + " val=" + rat_str(f.end_val) + "\n";
    return out;
}

// --- antichain families --------------------------------------------------

inline std::vector<std::vector<InjWord>> parse_family(const std::string& text) {
    auto lines = detail::logical_lines(text);
    if (lines.empty() || detail::split_ws(lines[0].second) != std::vector<std::string>{"family"})
        throw parse_error("expected header 'family'", lines.empty() ? 1 : lines[0].first);
    std::vector<std::vector<InjWord>> fam;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto [lineno, line] = lines[i];
        std::vector<InjWord> antichain;
        auto toks = detail::split_ws(line);
        if (toks == std::vector<std::string>{"-"}) {  // explicitly empty antichain
            fam.push_back(antichain);
            continue;
        }
        for (const std::string& tok : toks) {
            if (tok.size() < 2 || tok.front() != '(' || tok.back() != ')')
                throw parse_error("expected word '(a,b,...)', found '" + tok + "'", lineno);
            InjWord w;
            std::string body = tok.substr(1, tok.size() - 2);
            std::size_t pos = 0;
            while (pos < body.size()) {
                std::size_t comma = body.find(',', pos);
                std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
                try {
                    w.push_back(static_cast<std::uint32_t>(std::stoul(item)));
                } catch (...) {
                    throw parse_error("bad natural '" + item + "' in word", lineno);
                }
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            antichain.push_back(w);
        }
        fam.push_back(antichain);
    }
    return fam;
}

inline std::string serialize(const std::vector<std::vector<InjWord>>& fam) {
    std::string out = "family\n";
    for (const auto& antichain : fam) {
        if (antichain.empty()) {
            out += "-\n";
            continue;
        }
        for (std::size_t i = 0; i < antichain.size(); ++i) {
            if (i) out += " ";
            out += word_str(antichain[i]);
        }
        out += "\n";
    }
    return out;
}

// --- covers (as class-index gradings) ------------------------------------

inline std::string serialize_cover(const OrdinalTree& t, const AntichainCover& c) {
    GradingW g;
    for (std::size_t n = 0; n < c.classes.size(); ++n)
        for (const PointW& p : c.classes[n]) g.values[p] = Rat(static_cast<Int>(n + 1));
    return serialize(t, g);
}

inline AntichainCover parse_cover(const std::string& text, const OrdinalTree& t) {
    GradingW g = parse_grading_w(text, t);
    AntichainCover c;
    for (const auto& [p, v] : g.values) {
        if (rat_den(v) != 1 || rat_num(v) < 1)
            throw parse_error("class index must be a positive natural at point " + point_str(t, p));
        std::size_t n = static_cast<std::size_t>(rat_num(v).convert_to<unsigned long long>());
        if (c.classes.size() < n) c.classes.resize(n);
        c.classes[n - 1].push_back(p);
    }
    return c;
}

// --- DOT export ----------------------------------------------------------

inline std::string emit_dot(const OrdinalTree& t, const GradingW* grading = nullptr) {
    std::string out = "digraph tree {\n";
    if (!t.empty()) {
        std::vector<std::vector<int>> kids(t.size());
        std::vector<std::string> names(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            names[i] = t.node(static_cast<int>(i)).name;
            if (t.node(static_cast<int>(i)).parent >= 0)
                kids[static_cast<std::size_t>(t.node(static_cast<int>(i)).parent)]
                    .push_back(static_cast<int>(i));
        }
        std::vector<int> order;
        detail::preorder_names(t.root(), kids, names, order);
        for (int v : order) {
            std::string label = t.node(v).name;
            if (grading) {
                auto it = grading->values.find(PointW{v, 0});
                if (it != grading->values.end()) label += " = " + rat_str(it->second);
            }
            out += "  \"" + t.node(v).name + "\" [label=\"" + label + "\"";
            if (kids[static_cast<std::size_t>(v)].size() >= 2) out += " shape=doublecircle";
            out += "];\n";
        }
        for (int v : order)
            if (t.node(v).parent >= 0)
                out += "  \"" + t.node(t.node(v).parent).name + "\" -> \"" + t.node(v).name +
                       "\" [label=\"" + t.node(v).len.str() + "\"];\n";
    }
    return out + "}\n";
}

inline std::string emit_dot(const SegmentTree& x, const GradingS* grading = nullptr) {
    std::string out = "digraph tree {\n";
    if (!x.empty()) {
        std::vector<std::vector<int>> kids(x.size());
        std::vector<std::string> names(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            names[i] = x.node(static_cast<int>(i)).name;
            if (x.node(static_cast<int>(i)).parent >= 0)
                kids[static_cast<std::size_t>(x.node(static_cast<int>(i)).parent)]
                    .push_back(static_cast<int>(i));
        }
        std::vector<int> order;
        detail::preorder_names(x.root(), kids, names, order);
        for (int v : order) {
            std::string label = x.node(v).name;
            if (grading && x.is_vertex_record(v)) {
                auto it = grading->vertex_values.find(v);
                if (it != grading->vertex_values.end()) label += " = " + rat_str(it->second);
            }
            out += "  \"" + x.node(v).name + "\" [label=\"" + label + "\"";
            if (x.node(v).open) out += " style=dashed";
            if (x.is_vertex_record(v) && x.children(v).size() >= 2) out += " shape=doublecircle";
            out += "];\n";
        }
        for (int v : order)
            if (x.node(v).parent >= 0)
                out += "  \"" + x.node(x.node(v).parent).name + "\" -> \"" + x.node(v).name +
                       "\" [label=\"" + rat_str(x.node(v).len) + "\"];\n";
    }
    return out + "}\n";
}

}  // namespace io
}  // namespace treeord
