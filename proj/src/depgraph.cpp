#include "clpslice/depgraph.hpp"

#include <algorithm>
#include <functional>

namespace clpslice {

std::string_view to_string(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::Constraint: return "constraint";
        case EdgeKind::Transition: return "transition";
        case EdgeKind::Functor: return "functor";
        case EdgeKind::Local: return "local";
    }
    return "local";
}

namespace {

bool share_variable(const std::set<std::string> &a, const std::set<std::string> &b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            return true;
        }
    }
    return false;
}

//! Constraint, functor and local edges inside one clause.
template <class Pos>
void clause_edges(const std::vector<PositionInfo> &layout, const std::function<Pos(const LocalPosition &)> &at,
                  DependencyGraph<Pos> &g) {
    for (const auto &info : layout) {
        if (!info.parent) {
            continue;
        }
        if (info.kind == PositionKind::Occurrence) {
            g.add_edge(at(info.pos), at(layout[*info.parent].pos), EdgeKind::Constraint);
        } else if (info.kind == PositionKind::Subterm) {
            g.add_edge(at(info.pos), at(layout[*info.parent].pos), EdgeKind::Functor);
        }
    }
    for (std::size_t i = 0; i < layout.size(); ++i) {
        if (!layout[i].is_term() || layout[i].vars.empty()) {
            continue;
        }
        for (std::size_t j = i + 1; j < layout.size(); ++j) {
            if (layout[j].is_term() && share_variable(layout[i].vars, layout[j].vars)) {
                g.add_edge(at(layout[i].pos), at(layout[j].pos), EdgeKind::Local);
            }
        }
    }
}

} // namespace

TreeGraph tree_dep_graph(const DerivationTree &tree) {
    TreeGraph g(tree.positions());
    for (std::size_t n = 0; n < tree.size(); ++n) {
        const auto &node = tree.node(n);
        if (node.incomplete) {
            continue;
        }
        clause_edges<TreePosition>(tree.layout(n), [n](const LocalPosition &l) { return TreePosition{n, l}; }, g);
        for (std::size_t k = 1; k <= node.label.body.size(); ++k) {
            auto child = tree.child_at(n, k);
            if (!child || tree.node(*child).incomplete) {
                continue;
            }
            auto arity = node.label.body[k - 1].atom.args.size();
            for (std::size_t i = 1; i <= arity; ++i) {
                g.add_edge(TreePosition{n, LocalPosition{k, {i}}}, TreePosition{*child, LocalPosition{0, {i}}},
                           EdgeKind::Transition);
            }
        }
    }
    return g;
}

std::vector<ProgramPosition> program_positions(const Program &program, const Clause &goal) {
    std::vector<ProgramPosition> out = program.position_table;
    if (out.empty() && !program.clauses.empty()) {
        for (std::size_t c = 0; c < program.clauses.size(); ++c) {
            for (const auto &info : clause_layout(program.clauses[c])) {
                out.push_back(ProgramPosition{c, info.pos});
            }
        }
    }
    for (const auto &info : clause_layout(goal)) {
        out.push_back(ProgramPosition{kGoalClause, info.pos});
    }
    return out;
}

ProgramGraph program_dep_graph(const Program &program, const Clause &goal) {
    ProgramGraph g(program_positions(program, goal));
    auto clauses = program.clauses.size();
    auto clause_of = [&](std::size_t c) -> const Clause & { return c == clauses ? goal : program.clauses[c]; };
    auto index_of = [&](std::size_t c) { return c == clauses ? kGoalClause : c; };
    for (std::size_t c = 0; c <= clauses; ++c) {
        auto idx = index_of(c);
        clause_edges<ProgramPosition>(
            clause_layout(clause_of(c)), [idx](const LocalPosition &l) { return ProgramPosition{idx, l}; }, g);
    }
    for (std::size_t h = 0; h < clauses; ++h) {
        const auto &head = program.clauses[h].head;
        if (!head) {
            continue;
        }
        for (std::size_t d = 0; d <= clauses; ++d) {
            const auto &body = clause_of(d).body;
            for (std::size_t k = 1; k <= body.size(); ++k) {
                const auto &item = body[k - 1];
                if (!item.is_call() || item.atom.predicate != head->predicate || item.atom.arity() != head->arity()) {
                    continue;
                }
                for (std::size_t i = 1; i <= head->arity(); ++i) {
                    g.add_edge(ProgramPosition{h, LocalPosition{0, {i}}}, ProgramPosition{index_of(d), LocalPosition{k, {i}}},
                               EdgeKind::Transition);
                }
            }
        }
    }
    return g;
}

std::string criterion_warning(const PositionInfo &info) {
    if (info.is_variable) {
        return {};
    }
    return "criterion " + std::string(to_string(info.kind)) + " '" + info.text +
           "' is not a variable position; slicing its equivalence class anyway";
}

Slice<TreePosition> tree_slice(const DerivationTree &tree, const TreeGraph &graph, const TreePosition &alpha) {
    Slice<TreePosition> out;
    out.kind = SliceKind::Tree;
    out.criterion = alpha;
    if (auto w = criterion_warning(tree.info(alpha)); !w.empty()) {
        out.warnings.push_back(std::move(w));
    }
    out.positions = graph.component(alpha);
    return out;
}

Slice<TreePosition> tree_slice(const DerivationTree &tree, const TreePosition &alpha) {
    (void)tree.info(alpha);
    return tree_slice(tree, tree_dep_graph(tree), alpha);
}

Slice<ProgramPosition> program_slice(const Program &program, const Clause &goal, const ProgramGraph &graph,
                                     const ProgramPosition &beta) {
    const auto &clause = clause_at(program, goal, beta);
    (void)element_at(clause, beta.local);
    Slice<ProgramPosition> out;
    out.kind = SliceKind::Program;
    out.criterion = beta;
    for (const auto &info : clause_layout(clause)) {
        if (info.pos == beta.local) {
            if (auto w = criterion_warning(info); !w.empty()) {
                out.warnings.push_back(std::move(w));
            }
        }
    }
    out.positions = graph.component(beta);
    return out;
}

Slice<ProgramPosition> program_slice(const Program &program, const Clause &goal, const ProgramPosition &beta) {
    const auto &clause = clause_at(program, goal, beta);
    (void)element_at(clause, beta.local);
    return program_slice(program, goal, program_dep_graph(program, goal), beta);
}

} // namespace clpslice
