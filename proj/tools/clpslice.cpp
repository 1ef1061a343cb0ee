// Command line front end: slice, static, derive, stats, positions.

#include "clpslice/depgraph.hpp"
#include "clpslice/directional.hpp"
#include "clpslice/dot.hpp"
#include "clpslice/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace clpslice;

enum Exit { Ok = 0, Usage = 1, NoProof = 2, OracleFailure = 3 };

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

//! Writes through a temporary file in the same directory, then renames it into place.
void write_atomic(const std::string &path, const std::string &content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << content;
        if (!out.flush()) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

struct Common {
    std::string program_file;
    std::string goal = "";
    std::size_t depth = DeriveOptions{}.depth_limit;
    std::size_t steps = DeriveOptions{}.step_limit;
    std::string json_path;
    std::string dot_path;

    [[nodiscard]] DeriveOptions derive_options(std::size_t solutions = 1) const {
        DeriveOptions opts;
        opts.depth_limit = depth;
        opts.step_limit = steps;
        opts.max_solutions = std::max<std::size_t>(1, solutions);
        return opts;
    }
};

void add_common(CLI::App &cmd, Common &c, bool need_goal) {
    cmd.add_option("program", c.program_file, "program file (.clp)")->required()->check(CLI::ExistingFile);
    auto *goal = cmd.add_option("-g,--goal", c.goal, "goal, e.g. \"p(X,Y).\"");
    if (need_goal) {
        goal->required();
    }
    cmd.add_option("--depth", c.depth, "depth limit for derivations")->check(CLI::PositiveNumber);
    cmd.add_option("--steps", c.steps, "resolution step limit")->check(CLI::PositiveNumber);
}

void print_tree_summary(const Derivation &d, std::ostream &out) {
    out << to_string(d.tree);
    out << "store: " << to_string(d.tree.store()) << '\n';
    auto solved = satisfiable(d.tree.store());
    out << "ground:";
    for (const auto &[var, value] : ground_vars(solved)) {
        out << ' ' << var << '=' << to_string(value);
    }
    out << '\n';
    auto ann = annotate(d.tree, d.log);
    out << "annotation:";
    for (const auto &[pos, mode] : ann.modes) {
        out << ' ' << format_address(pos) << mode_suffix(mode);
    }
    out << '\n';
}

int cmd_slice(const Common &c, const std::string &mode, const std::string &at, bool undirected, std::size_t solutions,
              const std::string &domain) {
    SliceRequest rq;
    rq.program_name = c.program_file;
    rq.program = parse_program(read_file(c.program_file));
    rq.goal = c.goal.empty() ? Clause{} : parse_goal(c.goal);
    rq.mode = parse_slice_mode(mode);
    rq.at = at;
    rq.undirected = undirected;
    rq.derive = c.derive_options(solutions);
    if (!domain.empty()) {
        rq.oracle_domain = parse_domain(domain);
    }
    auto outcome = run_slice(rq);
    const auto &rep = outcome.report;
    std::cout << outcome.listing;
    for (const auto &b : rep.branches) {
        char pct[64];
        std::snprintf(pct, sizeof pct, "%.1f%%), ", b.stats.slice_node_pct);
        std::cout << "slice (proof tree " << b.solution << "): " << b.tree_positions.size() << " positions, "
                  << b.stats.slice_node_count << "/" << b.stats.tree_node_count << " nodes (" << pct;
        std::snprintf(pct, sizeof pct, "%.1f%%)", b.stats.slice_argpos_pct);
        std::cout << b.stats.slice_argpos_count << "/" << b.stats.tree_argpos_count << " argument positions (" << pct
                  << '\n';
        std::cout << "store: {";
        for (std::size_t i = 0; i < b.store.size(); ++i) {
            std::cout << (i ? ", " : "") << b.store[i];
        }
        std::cout << "}\n";
        for (const auto &o : b.oracle) {
            std::cout << "oracle " << o.criterion << " " << o.variable << " over " << o.domain << ": "
                      << (!o.checked ? "not checked" : o.valid ? "valid" : "INVALID") << '\n';
        }
    }
    if (!rep.program_positions.empty()) {
        std::cout << "program positions:";
        for (const auto &p : rep.program_positions) {
            std::cout << ' ' << p;
        }
        std::cout << '\n';
    }
    for (const auto &w : rep.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    if (!c.json_path.empty()) {
        write_atomic(c.json_path, to_json(rep).dump(2) + "\n");
    }
    if (!c.dot_path.empty()) {
        write_atomic(c.dot_path, outcome.dot);
    }
    return outcome.oracle_failed ? OracleFailure : Ok;
}

int cmd_derive(const Common &c, std::size_t solutions) {
    auto program = parse_program(read_file(c.program_file));
    auto goal = parse_goal(c.goal);
    auto result = derive(program, goal, c.derive_options(solutions));
    if (!result.success()) {
        std::cout << "no proof tree" << (result.depth_limit_hit ? " (depth limit reached)" : "")
                  << (result.step_limit_hit ? " (step limit reached)" : "") << "\ndeepest derivation tree:\n";
        if (result.deepest) {
            std::cout << to_string(*result.deepest);
        }
        return NoProof;
    }
    nlohmann::json trees = nlohmann::json::array();
    for (std::size_t i = 0; i < result.solutions.size(); ++i) {
        const auto &d = result.solutions[i];
        std::cout << "proof tree " << i << ":\n";
        print_tree_summary(d, std::cout);
        nlohmann::json store = nlohmann::json::array();
        for (const auto &sc : d.tree.store().constraints) {
            store.push_back(sc.text);
        }
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto &n : d.tree.nodes()) {
            nodes.push_back({{"clause", n.clause ? nlohmann::json(*n.clause) : nlohmann::json(nullptr)},
                             {"label", n.incomplete ? "?" : to_string(n.label)},
                             {"children", n.children}});
        }
        trees.push_back({{"nodes", nodes}, {"store", store}});
    }
    if (!c.json_path.empty()) {
        write_atomic(c.json_path, nlohmann::json{{"program", c.program_file}, {"goal", c.goal}, {"trees", trees}}.dump(2) + "\n");
    }
    if (!c.dot_path.empty()) {
        const auto &d = result.solutions.front();
        auto ann = annotate(d.tree, d.log);
        write_atomic(c.dot_path, tree_dot(d.tree, tree_dep_graph(d.tree), {}, &ann));
    }
    return Ok;
}

int cmd_stats(const Common &c, const std::string &goals_file) {
    auto program = parse_program(read_file(c.program_file));
    auto goals = read_goal_lines(read_file(goals_file));
    auto table = run_stats(c.program_file, program, goals, c.derive_options());
    std::cout << to_string(table);
    if (!c.json_path.empty()) {
        write_atomic(c.json_path, to_json(table).dump(2) + "\n");
    }
    return Ok;
}

int cmd_positions(const Common &c) {
    auto program = parse_program(read_file(c.program_file));
    Clause goal;
    if (!c.goal.empty()) {
        goal = parse_goal(c.goal);
    }
    for (std::size_t i = 0; i <= program.clauses.size(); ++i) {
        bool is_goal = i == program.clauses.size();
        if (is_goal && c.goal.empty()) {
            break;
        }
        const auto &clause = is_goal ? goal : program.clauses[i];
        for (const auto &info : clause_layout(clause)) {
            ProgramPosition pos{is_goal ? kGoalClause : i, info.pos};
            std::printf("%-12s %-10s %s\n", format_address(pos).c_str(), std::string(to_string(info.kind)).c_str(),
                        info.text.c_str());
        }
    }
    return Ok;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Slicing of constraint logic programs"};
    app.require_subcommand(1);

    Common common;
    std::string mode = "tree";
    std::string at;
    bool undirected = false;
    std::size_t solutions = 1;
    std::string domain;
    std::string goals_file;

    auto *slice = app.add_subcommand("slice", "slice a proof tree (tree, dynamic or position mode)");
    add_common(*slice, common, true);
    slice->add_option("--mode", mode, "tree | dynamic | position")
        ->check(CLI::IsMember({"tree", "dynamic", "position"}));
    slice->add_option("--at", at, "criterion address: tree position n/l/a.b or program position c/l/a.b")->required();
    slice->add_flag("--undirected", undirected, "use the undirected dependency graph");
    slice->add_option("--all-solutions", solutions, "slice the first k proof trees and take the union")
        ->check(CLI::PositiveNumber);
    slice->add_option("--oracle-domain", domain, "validate every slice over the integer domain lo..hi");
    slice->add_option("--json", common.json_path, "write the JSON report");
    slice->add_option("--dot", common.dot_path, "write the dependency graph as DOT");

    auto *stat = app.add_subcommand("static", "static program slice");
    add_common(*stat, common, false);
    stat->add_option("--at", at, "program position c/l/a.b (g/... for the goal)")->required();
    stat->add_option("--json", common.json_path, "write the JSON report");
    stat->add_option("--dot", common.dot_path, "write the program dependency graph as DOT");

    auto *der = app.add_subcommand("derive", "build proof trees");
    add_common(*der, common, true);
    der->add_option("--all-solutions", solutions, "number of proof trees")->check(CLI::PositiveNumber);
    der->add_option("--json", common.json_path, "write the trees as JSON");
    der->add_option("--dot", common.dot_path, "write the directed graph of the first tree as DOT");

    auto *stats = app.add_subcommand("stats", "slice size statistics over a goals file");
    add_common(*stats, common, false);
    stats->add_option("goals", goals_file, "goals file, one goal per line")->required()->check(CLI::ExistingFile);
    stats->add_option("--json", common.json_path, "write the table as JSON");

    auto *pos = app.add_subcommand("positions", "list program (and goal) positions");
    add_common(*pos, common, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return Usage;
    }

    try {
        if (*slice) {
            return cmd_slice(common, mode, at, undirected, solutions, domain);
        }
        if (*stat) {
            return cmd_slice(common, "static", at, false, 1, "");
        }
        if (*der) {
            return cmd_derive(common, solutions);
        }
        if (*stats) {
            return cmd_stats(common, goals_file);
        }
        return cmd_positions(common);
    } catch (const NoSolution &e) {
        std::cerr << "error: " << e.what() << '\n';
        if (e.deepest()) {
            std::cerr << "deepest derivation tree:\n" << to_string(*e.deepest());
        }
        return NoProof;
    } catch (const SyntaxError &e) {
        std::cerr << "syntax error: " << e.what() << '\n';
        return Usage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return Usage;
    }
}
