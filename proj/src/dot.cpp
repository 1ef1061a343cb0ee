#include "clpslice/dot.hpp"

#include <sstream>

namespace clpslice {

namespace {

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out;
}

template <class Pos>
std::string node_id(const Pos &pos) {
    std::string id = "p_" + format_address(pos);
    for (auto &c : id) {
        if (c == '/' || c == '.') {
            c = '_';
        }
    }
    return id;
}

template <class Pos>
void emit_position(std::ostream &out, const Pos &pos, const PositionInfo &info, bool in_slice, std::string_view suffix) {
    out << "    " << node_id(pos) << " [label=\"" << escape(format_address(pos)) << "\\n" << escape(info.text);
    if (!suffix.empty()) {
        out << ' ' << escape(suffix);
    }
    out << "\", shape=" << (info.is_term() ? "ellipse" : "box");
    if (in_slice) {
        out << ", style=filled, fillcolor=\"#ffd27f\"";
    }
    out << "];\n";
}

} // namespace

std::string_view mode_suffix(Mode mode) {
    switch (mode) {
        case Mode::Inherited: return "v";
        case Mode::Synthesized: return "^";
        case Mode::Dual: return "<->";
    }
    return "<->";
}

std::string tree_dot(const DerivationTree &tree, const TreeGraph &graph, const std::set<TreePosition> &slice,
                     const Annotation *annotation) {
    std::ostringstream out;
    out << (annotation ? "digraph" : "graph") << " tree {\n  rankdir=TB;\n  node [fontname=\"monospace\"];\n";
    for (std::size_t n = 0; n < tree.size(); ++n) {
        const auto &node = tree.node(n);
        out << "  subgraph cluster_" << n << " {\n    label=\"" << n << ": "
            << escape(node.incomplete ? std::string("?") : to_string(node.label)) << "\";\n";
        for (const auto &info : tree.layout(n)) {
            TreePosition pos{n, info.pos};
            std::string_view suffix;
            if (annotation && (info.kind == PositionKind::Argument || info.kind == PositionKind::Occurrence)) {
                suffix = mode_suffix(annotation->at(pos));
            }
            emit_position(out, pos, info, slice.contains(pos), suffix);
        }
        out << "  }\n";
    }
    if (annotation) {
        DirectedDepGraph directed(graph, tree, *annotation);
        for (const auto &e : graph.edges()) {
            bool fwd = directed.has_arc(e.a, e.b);
            bool bwd = directed.has_arc(e.b, e.a);
            const auto &from = fwd ? e.a : e.b;
            const auto &to = fwd ? e.b : e.a;
            out << "  " << node_id(from) << " -> " << node_id(to) << " [label=\"" << to_string(e.kind) << "\"";
            if (fwd && bwd) {
                out << ", dir=both";
            }
            out << "];\n";
        }
    } else {
        for (const auto &e : graph.edges()) {
            out << "  " << node_id(e.a) << " -- " << node_id(e.b) << " [label=\"" << to_string(e.kind) << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

std::string program_dot(const Program &program, const Clause &goal, const ProgramGraph &graph,
                        const std::set<ProgramPosition> &slice) {
    std::ostringstream out;
    out << "graph program {\n  node [fontname=\"monospace\"];\n";
    auto cluster = [&](std::size_t index, const Clause &clause, const std::string &name) {
        out << "  subgraph cluster_" << name << " {\n    label=\"" << escape(to_string(clause)) << "\";\n";
        for (const auto &info : clause_layout(clause)) {
            ProgramPosition pos{index, info.pos};
            emit_position(out, pos, info, slice.contains(pos), "");
        }
        out << "  }\n";
    };
    for (std::size_t c = 0; c < program.clauses.size(); ++c) {
        cluster(c, program.clauses[c], std::to_string(c));
    }
    cluster(kGoalClause, goal, "goal");
    for (const auto &e : graph.edges()) {
        out << "  " << node_id(e.a) << " -- " << node_id(e.b) << " [label=\"" << to_string(e.kind) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace clpslice
