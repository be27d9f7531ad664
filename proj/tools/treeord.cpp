// Command-line front end: reads documents in the text formats of
// treeord/io.hpp, runs one operation, writes the result to standard output.
// Exit codes: 0 on success, 1 on domain errors, 2 on parse errors.

#include <CLI11.hpp>

#include "treeord/io.hpp"

#include <fstream>
#include <iostream>
#include <algorithm>
#include <random>
#include <sstream>

using namespace treeord;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw domain_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SubPresentation parse_subpresentation(const SegmentTree& x, const std::vector<std::string>& tokens) {
    SubPresentation s;
    for (const std::string& tok : tokens) {
        std::size_t at = tok.find('@');
        if (at == std::string::npos) {
            int v = x.find(tok);
            if (v < 0) throw domain_error("unknown vertex '" + tok + "'");
            s.vertices.insert(v);
            continue;
        }
        // name@[lo:hi] with '[' / '(' and ']' / ')' closure marks
        std::string name = tok.substr(0, at);
        std::string body = tok.substr(at + 1);
        int rec = x.find(name);
        if (rec < 0) throw domain_error("unknown edge '" + name + "'");
        if (body.size() < 4 || (body.front() != '[' && body.front() != '(') ||
            (body.back() != ']' && body.back() != ')'))
            throw domain_error("interval must look like e@[lo:hi], got '" + tok + "'");
        std::size_t colon = body.find(':');
        if (colon == std::string::npos) throw domain_error("missing ':' in interval '" + tok + "'");
        SubInterval iv;
        iv.lo_in = body.front() == '[';
        iv.hi_in = body.back() == ']';
        iv.lo = parse_rat(body.substr(1, colon - 1));
        iv.hi = parse_rat(body.substr(colon + 1, body.size() - colon - 2));
        s.intervals[rec].push_back(iv);
    }
    return s;
}

// strictly monotone into [0,1): arc length over (1 + total height)
std::map<PointS, Rat> auto_stage_grading(const SegmentTree& x, const GradingS& arc,
                                          const FiniteSubtree& t) {
    Rat total(0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        int rec = static_cast<int>(i);
        if (rec == x.root()) continue;
        Rat top = evaluate_grading(x, arc, PointS{rec, x.node(rec).len});
        if (top > total) total = top;
    }
    std::map<PointS, Rat> f;
    for (const PointS& p : t.points) f[p] = evaluate_grading(x, arc, p) / (total + 1);
    return f;
}

int run(int argc, char** argv) {
    CLI::App app{"finitely presented tree orders: constructions, gradings, metrics"};
    app.require_subcommand(1);

    std::string input, other, grading_path, cover_path, root_tok, target_tok;
    std::uint64_t stage_n = 0;
    std::uint64_t seed = 0;
    std::size_t per_edge = 3;
    std::vector<std::string> args;

    auto add_common = [&](CLI::App* cmd, bool with_args = false) {
        cmd->add_option("--input", input, "input document")->required();
        if (with_args) cmd->add_option("args", args, "positional arguments");
        return cmd;
    };

    auto* c_rank = add_common(app.add_subcommand("rank", "ordinal rank of a point"), true);
    auto* c_pad = add_common(app.add_subcommand("pad", "insert points below the root and below limit tops"));
    auto* c_succ = add_common(app.add_subcommand("succ", "suborder of successor-rank points"));
    auto* c_iso = add_common(app.add_subcommand("iso", "root-preserving order isomorphism"));
    c_iso->add_option("--other", other, "second tree")->required();
    auto* c_meet = add_common(app.add_subcommand("meet", "greatest common lower bound"), true);
    auto* c_graderank = add_common(app.add_subcommand("grade-rank", "rank pulled into the rationals"), true);
    auto* c_cover = add_common(app.add_subcommand("cover", "fibre classes of a rational grading"));
    c_cover->add_option("--grading", grading_path, "grading document")->required();
    auto* c_rgrade = add_common(app.add_subcommand("rgrade", "grading from an antichain cover"));
    c_rgrade->add_option("--cover", cover_path, "cover document")->required();
    auto* c_qsucc = add_common(app.add_subcommand("qgrade-succ", "rational grading of the successor points"));
    c_qsucc->add_option("--grading", grading_path, "grading document")->required();
    auto* c_extend = add_common(app.add_subcommand("extend-branch", "grading from a branching-node cover"), true);
    c_extend->add_option("--cover", cover_path, "cover document")->required();
    auto* c_road = add_common(app.add_subcommand("road", "segment tree of a well-stratified tree"));
    auto* c_arclen = add_common(app.add_subcommand("arclen", "arc-length grading"));
    auto* c_metric = add_common(app.add_subcommand("metric", "railroad-track distance of two points"), true);
    c_metric->add_option("--grading", grading_path, "grading document");
    std::size_t sample_count = 0;
    auto* c_checkm = add_common(app.add_subcommand("check-metric", "metric axioms on a point grid"));
    c_checkm->add_option("--grading", grading_path, "grading document");
    c_checkm->add_option("--seed", seed, "seed for grid subsampling");
    c_checkm->add_option("--sample", sample_count, "subsample the grid to this many points");
    c_checkm->add_option("--per-edge", per_edge, "interior grid points per edge");
    auto* c_cont = add_common(app.add_subcommand("continuize", "remove jump discontinuities"));
    c_cont->add_option("--target", target_tok, "infimum after shifting (unit-chart input)");
    c_cont->add_option("--grading", grading_path, "grading to continuize over a segment tree");
    auto* c_decomp = add_common(app.add_subcommand("decompose", "branch decomposition with charts"));
    auto* c_subtree = add_common(app.add_subcommand("subtree", "approximating subtree at a stage"));
    c_subtree->add_option("--n", stage_n, "stage")->required();
    auto* c_density = add_common(app.add_subcommand("density", "between-witnesses from the subtrees"), true);
    c_density->add_option("--n", stage_n, "largest stage")->required();
    auto* c_combine = add_common(app.add_subcommand("combine", "combine stage gradings"), true);
    c_combine->add_option("--n", stage_n, "largest stage")->required();
    auto* c_inject = add_common(app.add_subcommand("inject", "branching-node injection of a finite subtree"), true);
    auto* c_diag = add_common(app.add_subcommand("diag", "promise diagonalization over injective words"));
    auto* c_validate = add_common(app.add_subcommand("validate", "check presentation invariants"));
    auto* c_wispy = add_common(app.add_subcommand("wispy", "branching-node and twig counts"));
    auto* c_width = add_common(app.add_subcommand("width", "maximum antichain cardinality"));
    auto* c_reroot = add_common(app.add_subcommand("reroot", "cut-point order at a new root"));
    c_reroot->add_option("--root", root_tok, "new root point")->required();
    auto* c_convex = add_common(app.add_subcommand("convex", "convexity of a sub-presentation"), true);
    auto* c_dot = add_common(app.add_subcommand("dot", "DOT export"));
    c_dot->add_option("--grading", grading_path, "grading annotations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    if (c_rank->parsed()) {
        OrdinalTree t = io::parse_wstree(slurp(input));
        if (args.size() != 1) throw domain_error("rank expects one point");
        std::cout << ord_str(rank(t, io::parse_point_w(t, args[0]))) << "\n";
    } else if (c_pad->parsed()) {
        std::cout << io::serialize(pad(io::parse_wstree(slurp(input))));
    } else if (c_succ->parsed()) {
        std::cout << io::serialize(succ_subtree(io::parse_wstree(slurp(input))));
    } else if (c_iso->parsed()) {
        bool same = iso_check(io::parse_wstree(slurp(input)), io::parse_wstree(slurp(other)));
        std::cout << (same ? "true" : "false") << "\n";
    } else if (c_meet->parsed()) {
        std::string text = slurp(input);
        if (args.size() != 2) throw domain_error("meet expects two points");
        if (io::document_kind(text) == "wstree") {
            OrdinalTree t = io::parse_wstree(text);
            std::cout << point_str(t, meet_w(t, io::parse_point_w(t, args[0]),
                                             io::parse_point_w(t, args[1])))
                      << "\n";
        } else {
            SegmentTree x = io::parse_segtree(text);
            std::cout << point_str(x, meet_s(x, io::parse_point_s(x, args[0]),
                                             io::parse_point_s(x, args[1])))
                      << "\n";
        }
    } else if (c_graderank->parsed()) {
        OrdinalTree t = io::parse_wstree(slurp(input));
        GradingW g;
        if (args.empty()) {
            // every point when that set is finite, vertices otherwise
            if (t.has_omega_edge()) {
                std::vector<PointW> vertices;
                for (std::size_t i = 0; i < t.size(); ++i)
                    vertices.push_back(PointW{static_cast<int>(i), 0});
                g = rank_qgrading(t, vertices);
            } else {
                g = rank_qgrading(t);
            }
        } else {
            std::vector<PointW> carrier;
            for (const auto& a : args) carrier.push_back(io::parse_point_w(t, a));
            g = rank_qgrading(t, carrier);
        }
        std::cout << io::serialize(t, g);
    } else if (c_cover->parsed()) {
        OrdinalTree t = io::parse_wstree(slurp(input));
        GradingW g = io::parse_grading_w(slurp(grading_path), t);
        std::cout << io::serialize_cover(t, cover_from_qgrading(t, g));
    } else if (c_rgrade->parsed()) {
        OrdinalTree t = io::parse_wstree(slurp(input));
        AntichainCover c = io::parse_cover(slurp(cover_path), t);
        std::cout << io::serialize(t, rgrading_from_cover(t, c));
    } else if (c_qsucc->parsed()) {
        OrdinalTree t = io::parse_wstree(slurp(input));
        GradingW f = io::parse_grading_w(slurp(grading_path), t);
        std::cout << io::serialize(t, succ_qgrading_from_r(t, f));
    } else if (c_extend->parsed()) {
        OrdinalTree t = io::parse_wstree(slurp(input));
        AntichainCover c = io::parse_cover(slurp(cover_path), t);
        GradingW g;
        if (args.empty() && !t.has_omega_edge()) {
            g = extend_branch_grading(t, c);
        } else if (args.empty()) {
            std::vector<PointW> vertices;
            for (std::size_t i = 0; i < t.size(); ++i)
                vertices.push_back(PointW{static_cast<int>(i), 0});
            g = extend_branch_grading(t, c, vertices);
        } else {
            std::vector<PointW> carrier;
            for (const auto& a : args) carrier.push_back(io::parse_point_w(t, a));
            g = extend_branch_grading(t, c, carrier);
        }
        std::cout << io::serialize(t, g);
    } else if (c_road->parsed()) {
        OrdinalTree t = io::parse_wstree(slurp(input));
        RoadResult r = road(t);
        std::cout << io::serialize(r.space);
        for (std::size_t i = 0; i < t.size(); ++i) {
            PointW p{static_cast<int>(i), 0};
            std::cout << "# embed " << point_str(t, p) << " -> "
                      << point_str(r.space, r.embed(t, p)) << "\n";
        }
    } else if (c_arclen->parsed()) {
        SegmentTree x = io::parse_segtree(slurp(input));
        std::cout << io::serialize(x, arc_length_grading(x));
    } else if (c_metric->parsed()) {
        SegmentTree x = io::parse_segtree(slurp(input));
        if (args.size() != 2) throw domain_error("metric expects two points");
        GradingS g = grading_path.empty() ? arc_length_grading(x)
                                          : io::parse_grading_s(slurp(grading_path), x);
        std::cout << rat_str(railroad_metric(x, g, io::parse_point_s(x, args[0]),
                                             io::parse_point_s(x, args[1])))
                  << "\n";
    } else if (c_checkm->parsed()) {
        SegmentTree x = io::parse_segtree(slurp(input));
        GradingS g = grading_path.empty() ? arc_length_grading(x)
                                          : io::parse_grading_s(slurp(grading_path), x);
        validate_grading(x, g, GradingCheck::continuous);
        auto pts = grid_points(x, per_edge);
        if (sample_count > 0 && sample_count < pts.size()) {
            std::mt19937_64 rng(seed);
            std::shuffle(pts.begin(), pts.end(), rng);
            pts.resize(sample_count);
        }
        auto report = check_metric(
            x, [&](const PointS& p, const PointS& q) { return railroad_distance(x, g, p, q); }, pts);
        std::cout << (report.ok() ? "pass" : "fail") << " pairs=" << report.pairs
                  << " triples=" << report.triples << " quads=" << report.quads << "\n";
        for (const auto& f : report.failures) std::cout << f << "\n";
        if (!report.ok()) return 1;
    } else if (c_cont->parsed()) {
        std::string text = slurp(input);
        if (!grading_path.empty()) {
            SegmentTree x = io::parse_segtree(text);
            GradingS g = io::parse_grading_s(slurp(grading_path), x);
            std::cout << io::serialize(x, full_continuization(x, g));
        } else {
            if (target_tok.empty()) throw domain_error("continuize needs --target for a unit-chart input");
            JumpFunction f = io::parse_jump_function(text);
            std::cout << io::serialize(continuize(f, parse_rat(target_tok)));
        }
    } else if (c_decomp->parsed()) {
        SegmentTree x = io::parse_segtree(slurp(input));
        BranchDecomposition d = branch_decomposition(x);
        for (std::size_t i = 0; i < d.charts.size(); ++i) {
            const auto& c = d.charts[i];
            std::cout << "branch " << i;
            if (c.singleton) {
                std::cout << " singleton interval={1}\n";
                continue;
            }
            std::cout << " attach=" << x.node(c.lo_vertex).name
                      << " interval=" << (c.includes_lo ? "[" : "(") << "0:1"
                      << (c.top_closed ? "]" : ")") << " total=" << rat_str(c.total) << " records=";
            for (std::size_t k = 0; k < c.records.size(); ++k) {
                if (k) std::cout << ",";
                std::cout << x.node(c.records[k]).name;
            }
            std::cout << "\n";
        }
    } else if (c_subtree->parsed()) {
        SegmentTree x = io::parse_segtree(slurp(input));
        auto t = subtree_Tn(branch_decomposition(x), stage_n);
        for (const PointS& p : t.points) std::cout << "point " << point_str(x, p) << "\n";
    } else if (c_density->parsed()) {
        SegmentTree x = io::parse_segtree(slurp(input));
        if (args.size() % 2 != 0 || args.empty()) throw domain_error("density expects point pairs");
        std::vector<std::pair<PointS, PointS>> pairs;
        for (std::size_t i = 0; i + 1 < args.size(); i += 2)
            pairs.push_back({io::parse_point_s(x, args[i]), io::parse_point_s(x, args[i + 1])});
        auto results = check_density(branch_decomposition(x), stage_n, pairs);
        for (std::size_t i = 0; i < results.size(); ++i) {
            std::cout << point_str(x, pairs[i].first) << " < " << point_str(x, pairs[i].second) << ": ";
            if (results[i])
                std::cout << "witness " << point_str(x, results[i]->witness) << " at n="
                          << results[i]->stage << "\n";
            else
                std::cout << "none within n=" << stage_n << "\n";
        }
    } else if (c_combine->parsed()) {
        SegmentTree x = io::parse_segtree(slurp(input));
        BranchDecomposition d = branch_decomposition(x);
        GradingS arc = arc_length_grading(x);
        std::vector<std::pair<FiniteSubtree, std::map<PointS, Rat>>> stages;
        for (std::size_t n = 0; n <= stage_n; ++n) {
            FiniteSubtree tn = subtree_Tn(d, n);
            std::map<PointS, Rat> fn;
            if (n < args.size()) {
                // stage files use "p <point> <value>" with segment-tree points
                auto lines = io::detail::logical_lines(slurp(args[n]));
                if (lines.empty() || io::detail::split_ws(lines[0].second) != std::vector<std::string>{"grading"})
                    throw parse_error("expected header 'grading'", lines.empty() ? 1 : lines[0].first);
                for (std::size_t i = 1; i < lines.size(); ++i) {
                    auto toks = io::detail::split_ws(lines[i].second);
                    if (toks.size() != 3 || toks[0] != "p")
                        throw parse_error("expected 'p <point> <value>'", lines[i].first);
                    fn[io::parse_point_s(x, toks[1])] = parse_rat(toks[2]);
                }
            } else {
                fn = auto_stage_grading(x, arc, tn);
            }
            stages.push_back({std::move(tn), std::move(fn)});
        }
        std::cout << io::serialize(x, combine_gradings(x, stages));
    } else if (c_inject->parsed()) {
        SegmentTree x = io::parse_segtree(slurp(input));
        FiniteSubtree t;
        for (const auto& a : args) t.points.push_back(io::parse_point_s(x, a));
        std::sort(t.points.begin(), t.points.end());
        t.points.erase(std::unique(t.points.begin(), t.points.end()), t.points.end());
        for (const auto& [p, q] : branching_injection(x, t))
            std::cout << "s(" << point_str(x, p) << ") = " << point_str(x, q) << "\n";
    } else if (c_diag->parsed()) {
        auto fam = io::parse_family(slurp(input));
        PromiseState st = diag_run(fam);
        for (std::size_t n = 1; n < st.chain.size(); ++n)
            std::cout << "stage " << n << ": f=" << word_str(st.chain[n])
                      << " promise=" << st.promises[n - 1]
                      << " preference=" << (st.preference_fired[n - 1] ? "fired" : "blocked") << "\n";
        std::cout << "final " << word_str(st.chain.back()) << "\n";
    } else if (c_validate->parsed()) {
        std::string text = slurp(input);
        if (io::document_kind(text) == "wstree") {
            io::parse_wstree(text);
            std::cout << "ok\n";
        } else {
            auto raw = io::parse_segtree_raw(text);
            auto diag = SegmentTree::diagnose(raw);
            if (diag.empty()) {
                std::cout << "ok\n";
            } else {
                for (const auto& d : diag) std::cerr << d << "\n";
                return 1;
            }
        }
    } else if (c_wispy->parsed()) {
        SegmentTree x = io::parse_segtree(slurp(input));
        auto [b, tw] = wispiness(x);
        std::cout << "branching=" << b << " twigs=" << tw << "\n";
    } else if (c_width->parsed()) {
        std::cout << width(io::parse_segtree(slurp(input))) << "\n";
    } else if (c_reroot->parsed()) {
        SegmentTree x = io::parse_segtree(slurp(input));
        std::cout << io::serialize(reroot(x, io::parse_point_s(x, root_tok)));
    } else if (c_convex->parsed()) {
        SegmentTree x = io::parse_segtree(slurp(input));
        std::string witness;
        bool conv = is_convex(x, parse_subpresentation(x, args), &witness);
        std::cout << (conv ? "true" : "false") << "\n";
        if (!conv) std::cout << witness << "\n";
    } else if (c_dot->parsed()) {
        std::string text = slurp(input);
        if (io::document_kind(text) == "wstree") {
            OrdinalTree t = io::parse_wstree(text);
            if (grading_path.empty()) {
                std::cout << io::emit_dot(t);
            } else {
                GradingW g = io::parse_grading_w(slurp(grading_path), t);
                std::cout << io::emit_dot(t, &g);
            }
        } else {
            SegmentTree x = io::parse_segtree(text);
            if (grading_path.empty()) {
                std::cout << io::emit_dot(x);
            } else {
                GradingS g = io::parse_grading_s(slurp(grading_path), x);
                std::cout << io::emit_dot(x, &g);
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const parse_error& e) {
        if (e.line_number)
            std::cerr << "parse error at line " << e.line_number << ": " << e.what() << "\n";
        else
            std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
