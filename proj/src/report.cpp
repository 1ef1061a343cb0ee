#include "clpslice/report.hpp"

#include "clpslice/dot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace clpslice {

using nlohmann::json;

std::string_view to_string(SliceMode mode) {
    switch (mode) {
        case SliceMode::Tree: return "tree";
        case SliceMode::Dynamic: return "dynamic";
        case SliceMode::Position: return "position";
        case SliceMode::Static: return "static";
    }
    return "tree";
}

SliceMode parse_slice_mode(std::string_view text) {
    for (auto m : {SliceMode::Tree, SliceMode::Dynamic, SliceMode::Position, SliceMode::Static}) {
        if (text == to_string(m)) {
            return m;
        }
    }
    throw std::invalid_argument("unknown slice mode '" + std::string(text) + "'");
}

SliceStats slice_stats(const DerivationTree &tree, const std::set<TreePosition> &slice) {
    SliceStats s;
    s.tree_node_count = tree.size();
    for (const auto &p : tree.positions()) {
        s.tree_argpos_count += tree.info(p).kind == PositionKind::Argument ? 1 : 0;
    }
    std::set<std::size_t> nodes;
    for (const auto &p : slice) {
        nodes.insert(p.node);
        s.slice_argpos_count += tree.info(p).kind == PositionKind::Argument ? 1 : 0;
    }
    s.slice_node_count = nodes.size();
    auto pct = [](std::size_t part, std::size_t whole) { return whole == 0 ? 0.0 : 100.0 * double(part) / double(whole); };
    s.slice_node_pct = pct(s.slice_node_count, s.tree_node_count);
    s.slice_argpos_pct = pct(s.slice_argpos_count, s.tree_argpos_count);
    return s;
}

// {{{1 json

namespace {

json stats_json(const SliceStats &s) {
    return json{{"tree_node_count", s.tree_node_count},   {"tree_argpos_count", s.tree_argpos_count},
                {"slice_node_count", s.slice_node_count}, {"slice_argpos_count", s.slice_argpos_count},
                {"slice_node_pct", s.slice_node_pct},     {"slice_argpos_pct", s.slice_argpos_pct}};
}

SliceStats stats_from(const json &j) {
    SliceStats s;
    j.at("tree_node_count").get_to(s.tree_node_count);
    j.at("tree_argpos_count").get_to(s.tree_argpos_count);
    j.at("slice_node_count").get_to(s.slice_node_count);
    j.at("slice_argpos_count").get_to(s.slice_argpos_count);
    j.at("slice_node_pct").get_to(s.slice_node_pct);
    j.at("slice_argpos_pct").get_to(s.slice_argpos_pct);
    return s;
}

} // namespace

json to_json(const SliceReport &r) {
    json branches = json::array();
    for (const auto &b : r.branches) {
        json oracle = json::array();
        for (const auto &o : b.oracle) {
            oracle.push_back({{"criterion", o.criterion}, {"variable", o.variable}, {"domain", o.domain}, {"checked", o.checked}, {"valid", o.valid}});
        }
        json groundness = json::array();
        for (const auto &g : b.groundness) {
            groundness.push_back({{"kind", g.kind},
                                  {"position", g.position},
                                  {"ground_before", g.ground_before},
                                  {"ground_at_success", g.ground_at_success},
                                  {"determined", g.determined}});
        }
        branches.push_back({{"solution", b.solution},
                            {"criteria", b.criteria},
                            {"tree_positions", b.tree_positions},
                            {"store", b.store},
                            {"stats", stats_json(b.stats)},
                            {"oracle", oracle},
                            {"annotation", b.annotation},
                            {"groundness", groundness}});
    }
    return json{{"mode", to_string(r.mode)},
                {"program", r.program},
                {"goal", r.goal},
                {"criterion", r.criterion},
                {"annotation_used", r.annotation_used},
                {"branches", branches},
                {"program_positions", r.program_positions},
                {"warnings", r.warnings}};
}

SliceReport report_from_json(const json &j) {
    SliceReport r;
    r.mode = parse_slice_mode(j.at("mode").get<std::string>());
    j.at("program").get_to(r.program);
    j.at("goal").get_to(r.goal);
    j.at("criterion").get_to(r.criterion);
    j.at("annotation_used").get_to(r.annotation_used);
    j.at("program_positions").get_to(r.program_positions);
    j.at("warnings").get_to(r.warnings);
    for (const auto &jb : j.at("branches")) {
        BranchReport b;
        jb.at("solution").get_to(b.solution);
        jb.at("criteria").get_to(b.criteria);
        jb.at("tree_positions").get_to(b.tree_positions);
        jb.at("store").get_to(b.store);
        b.stats = stats_from(jb.at("stats"));
        jb.at("annotation").get_to(b.annotation);
        for (const auto &jo : jb.at("oracle")) {
            OracleCheck o;
            jo.at("criterion").get_to(o.criterion);
            jo.at("variable").get_to(o.variable);
            jo.at("domain").get_to(o.domain);
            jo.at("checked").get_to(o.checked);
            jo.at("valid").get_to(o.valid);
            b.oracle.push_back(std::move(o));
        }
        for (const auto &jg : jb.at("groundness")) {
            GroundnessEntry g;
            jg.at("kind").get_to(g.kind);
            jg.at("position").get_to(g.position);
            jg.at("ground_before").get_to(g.ground_before);
            jg.at("ground_at_success").get_to(g.ground_at_success);
            jg.at("determined").get_to(g.determined);
            b.groundness.push_back(std::move(g));
        }
        r.branches.push_back(std::move(b));
    }
    return r;
}

// {{{1 listings

std::string highlighted_listing(const Program &program, const Clause &goal, const std::set<ProgramPosition> &marked) {
    std::ostringstream out;
    auto line = [&](const std::string &label, std::size_t index, const Clause &clause) {
        auto marker = [&](const LocalPosition &l) { return marked.contains(ProgramPosition{index, l}); };
        char buf[16];
        std::snprintf(buf, sizeof buf, "%4s  ", label.c_str());
        out << buf << to_string(clause, marker) << '\n';
    };
    line("g", kGoalClause, goal);
    for (std::size_t c = 0; c < program.clauses.size(); ++c) {
        line(std::to_string(c), c, program.clauses[c]);
    }
    return out.str();
}

namespace {

std::string tree_listing(const DerivationTree &tree, const std::set<TreePosition> &marked) {
    std::ostringstream out;
    for (std::size_t n = 0; n < tree.size(); ++n) {
        const auto &node = tree.node(n);
        out << std::string(2 * node.depth, ' ') << '[' << n << "] ";
        if (node.incomplete) {
            out << "?\n";
            continue;
        }
        out << to_string(node.label, [&](const LocalPosition &l) { return marked.contains(TreePosition{n, l}); }) << '\n';
    }
    return out.str();
}

std::string domain_text(IntDomain dom) { return std::to_string(dom.lo) + ".." + std::to_string(dom.hi); }

struct BranchContext {
    const Derivation &derivation;
    TreeGraph graph;
    Annotation annotation;
    std::optional<DirectedDepGraph> directed;
};

} // namespace

// {{{1 slicing commands

namespace {

BranchReport slice_branch(const SliceRequest &rq, std::size_t index, BranchContext &ctx,
                          const std::vector<TreePosition> &criteria, std::set<TreePosition> &slice,
                          std::vector<std::string> &warnings, bool &oracle_failed) {
    const auto &tree = ctx.derivation.tree;
    BranchReport b;
    b.solution = index;
    for (const auto &alpha : criteria) {
        b.criteria.push_back(format_address(alpha));
        auto s = rq.undirected ? tree_slice(tree, ctx.graph, alpha) : directional_slice(tree, *ctx.directed, alpha);
        for (auto &w : s.warnings) {
            if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) {
                warnings.push_back(std::move(w));
            }
        }
        slice.insert(s.positions.begin(), s.positions.end());
        if (!rq.oracle_domain) {
            continue;
        }
        const auto &info = tree.info(alpha);
        if (!info.is_term() || info.vars.empty()) {
            warnings.push_back("oracle check skipped for " + format_address(alpha) + ": no variable at the criterion");
            continue;
        }
        auto sub = rq.undirected ? positions_to_store(tree, s.positions) : origin_store(tree, s.positions);
        for (const auto &var : info.vars) {
            OracleCheck check{format_address(alpha), var, domain_text(*rq.oracle_domain)};
            try {
                check.valid = is_slice(tree.store(), sub, var, *rq.oracle_domain);
            } catch (const OracleUnsupported &e) {
                check.checked = false;
                warnings.push_back("oracle could not check " + format_address(alpha) + ": " + e.what());
            }
            oracle_failed = oracle_failed || (check.checked && !check.valid);
            b.oracle.push_back(std::move(check));
        }
    }
    for (const auto &p : slice) {
        b.tree_positions.push_back(format_address(p));
    }
    auto store = rq.undirected ? positions_to_store(tree, slice) : origin_store(tree, slice);
    for (const auto &c : store.constraints) {
        b.store.push_back(c.text);
    }
    b.stats = slice_stats(tree, slice);
    for (const auto &[pos, mode] : ctx.annotation.modes) {
        b.annotation.emplace(format_address(pos), to_string(mode));
    }
    for (const auto &r : ctx.derivation.log.calls) {
        b.groundness.push_back(GroundnessEntry{"call", format_address(TreePosition{r.caller, LocalPosition{r.literal, {}}}),
                                               r.ground_at_call, r.ground_at_success, r.determined_by_subtree});
    }
    for (const auto &r : ctx.derivation.log.constraints) {
        b.groundness.push_back(GroundnessEntry{"constraint", format_address(TreePosition{r.node, LocalPosition{r.literal, {}}}),
                                               r.ground_before, {}, r.determined_by_constraint});
    }
    return b;
}

SliceOutcome run_static(const SliceRequest &rq) {
    SliceOutcome out;
    auto &rep = out.report;
    auto beta = position_of(rq.program, rq.goal, rq.at);
    auto graph = program_dep_graph(rq.program, rq.goal);
    auto slice = program_slice(rq.program, rq.goal, graph, beta);
    rep.warnings = slice.warnings;
    for (const auto &p : slice.positions) {
        rep.program_positions.push_back(format_address(p));
    }
    if (rq.oracle_domain) {
        rep.warnings.emplace_back("oracle validation applies to tree slices only; skipped for a static slice");
    }
    out.listing = highlighted_listing(rq.program, rq.goal, slice.positions);
    out.dot = program_dot(rq.program, rq.goal, graph, slice.positions);
    return out;
}

} // namespace

SliceOutcome run_slice(const SliceRequest &rq) {
    SliceOutcome out;
    if (rq.mode == SliceMode::Static) {
        out = run_static(rq);
    } else {
        auto derived = derive(rq.program, rq.goal, rq.derive);
        if (!derived.success()) {
            throw NoSolution("no proof tree for goal " + to_string(rq.goal), std::move(derived.deepest));
        }
        std::optional<TreePosition> alpha;
        std::optional<ProgramPosition> q;
        if (rq.mode == SliceMode::Position) {
            q = position_of(rq.program, rq.goal, rq.at);
        } else {
            alpha = parse_tree_address(rq.at);
            (void)derived.solutions.front().tree.info(*alpha);
        }
        std::set<ProgramPosition> phi_union;
        bool instantiated = false;
        for (std::size_t i = 0; i < derived.solutions.size(); ++i) {
            const auto &d = derived.solutions[i];
            BranchContext ctx{d, tree_dep_graph(d.tree), rq.undirected ? Annotation::all_dual() : annotate(d.tree, d.log), {}};
            ctx.directed.emplace(ctx.graph, d.tree, ctx.annotation);
            std::vector<TreePosition> criteria;
            if (q) {
                auto inv = phi_inverse(rq.program, rq.goal, d.tree, *q);
                criteria.assign(inv.begin(), inv.end());
            } else if (d.tree.contains(*alpha)) {
                criteria.push_back(*alpha);
            } else {
                out.report.warnings.push_back("criterion " + rq.at + " does not exist in proof tree " + std::to_string(i));
            }
            instantiated = instantiated || !criteria.empty();
            std::set<TreePosition> slice;
            out.report.branches.push_back(
                slice_branch(rq, i, ctx, criteria, slice, out.report.warnings, out.oracle_failed));
            for (const auto &p : slice) {
                phi_union.insert(d.tree.phi(p));
            }
            if (i == 0) {
                out.listing = tree_listing(d.tree, slice);
                out.dot = tree_dot(d.tree, ctx.graph, slice, rq.undirected ? nullptr : &ctx.annotation);
            }
        }
        if (!instantiated) {
            out.report.warnings.push_back("program position " + rq.at + " is never instantiated in the proof tree");
        }
        if (rq.mode != SliceMode::Tree) {
            for (const auto &p : phi_union) {
                out.report.program_positions.push_back(format_address(p));
            }
            out.listing = highlighted_listing(rq.program, rq.goal, phi_union);
        }
    }
    auto &rep = out.report;
    rep.mode = rq.mode;
    rep.program = rq.program_name;
    rep.goal = to_string(rq.goal);
    rep.criterion = rq.at;
    rep.annotation_used = rq.mode != SliceMode::Static && !rq.undirected;
    return out;
}

// {{{1 statistics

std::vector<std::string> read_goal_lines(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '%') {
            continue;
        }
        auto last = line.find_last_not_of(" \t\r");
        out.push_back(line.substr(first, last - first + 1));
    }
    return out;
}

StatsTable run_stats(const std::string &name, const Program &program, const std::vector<std::string> &goals,
                     const DeriveOptions &opts) {
    StatsTable table;
    table.program = name;
    table.clauses = program.clauses.size();
    double node_sum = 0;
    double arg_sum = 0;
    double unode_sum = 0;
    double uarg_sum = 0;
    for (const auto &text : goals) {
        StatsRow row;
        row.goal = text;
        try {
            auto goal = parse_goal(text);
            auto d = first_proof(program, goal, opts);
            auto graph = tree_dep_graph(d.tree);
            DirectedDepGraph directed(graph, d.tree, annotate(d.tree, d.log));
            for (const auto &p : d.tree.positions()) {
                if (d.tree.info(p).kind != PositionKind::Argument) {
                    continue;
                }
                auto dir = directed.backward(p);
                auto und = graph.component(p);
                auto ds = slice_stats(d.tree, dir);
                auto us = slice_stats(d.tree, und);
                row.nodes = ds.tree_node_count;
                row.argpos = ds.tree_argpos_count;
                row.node_pct += ds.slice_node_pct;
                row.argpos_pct += ds.slice_argpos_pct;
                row.undirected_node_pct += us.slice_node_pct;
                row.undirected_argpos_pct += us.slice_argpos_pct;
                row.reduced += dir.size() < und.size() ? 1 : 0;
                ++row.slices;
            }
            node_sum += row.node_pct;
            arg_sum += row.argpos_pct;
            unode_sum += row.undirected_node_pct;
            uarg_sum += row.undirected_argpos_pct;
            if (row.slices > 0) {
                auto n = double(row.slices);
                row.node_pct /= n;
                row.argpos_pct /= n;
                row.undirected_node_pct /= n;
                row.undirected_argpos_pct /= n;
            }
            row.ok = true;
            table.slices += row.slices;
            table.reduced += row.reduced;
        } catch (const NoSolution &e) {
            row.error = e.what();
        } catch (const SyntaxError &e) {
            row.error = std::string("syntax error: ") + e.what();
        }
        table.rows.push_back(std::move(row));
    }
    if (table.slices > 0) {
        auto n = double(table.slices);
        table.node_pct = node_sum / n;
        table.argpos_pct = arg_sum / n;
        table.undirected_node_pct = unode_sum / n;
        table.undirected_argpos_pct = uarg_sum / n;
    }
    return table;
}

std::string to_string(const StatsTable &t) {
    std::ostringstream out;
    char buf[256];
    out << "PROGRAM " << t.program << "  CLAUSES " << t.clauses << "  GOALS " << t.rows.size() << '\n';
    std::snprintf(buf, sizeof buf, "%-32s %6s %7s %7s %7s %7s %8s %8s %8s\n", "GOAL", "NODES", "ARGPOS", "SLICES",
                  "NODE%", "ARG%", "U-NODE%", "U-ARG%", "REDUCED");
    out << buf;
    for (const auto &r : t.rows) {
        auto goal = r.goal.size() > 32 ? r.goal.substr(0, 29) + "..." : r.goal;
        if (!r.ok) {
            std::snprintf(buf, sizeof buf, "%-32s FAILED: %s\n", goal.c_str(), r.error.c_str());
        } else {
            std::snprintf(buf, sizeof buf, "%-32s %6zu %7zu %7zu %7.1f %7.1f %8.1f %8.1f %8zu\n", goal.c_str(), r.nodes,
                          r.argpos, r.slices, r.node_pct, r.argpos_pct, r.undirected_node_pct, r.undirected_argpos_pct,
                          r.reduced);
        }
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "%-32s %6s %7s %7zu %7.1f %7.1f %8.1f %8.1f %8zu\n", "AVERAGE", "", "", t.slices,
                  t.node_pct, t.argpos_pct, t.undirected_node_pct, t.undirected_argpos_pct, t.reduced);
    out << buf;
    return out.str();
}

json to_json(const StatsTable &t) {
    json rows = json::array();
    for (const auto &r : t.rows) {
        rows.push_back({{"goal", r.goal},
                        {"ok", r.ok},
                        {"error", r.error},
                        {"nodes", r.nodes},
                        {"argpos", r.argpos},
                        {"slices", r.slices},
                        {"node_pct", r.node_pct},
                        {"argpos_pct", r.argpos_pct},
                        {"undirected_node_pct", r.undirected_node_pct},
                        {"undirected_argpos_pct", r.undirected_argpos_pct},
                        {"reduced", r.reduced}});
    }
    return json{{"program", t.program},
                {"clauses", t.clauses},
                {"rows", rows},
                {"slices", t.slices},
                {"node_pct", t.node_pct},
                {"argpos_pct", t.argpos_pct},
                {"undirected_node_pct", t.undirected_node_pct},
                {"undirected_argpos_pct", t.undirected_argpos_pct},
                {"reduced", t.reduced}};
}

} // namespace clpslice
