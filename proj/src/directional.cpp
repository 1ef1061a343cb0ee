#include "clpslice/directional.hpp"

#include <stdexcept>

namespace clpslice {

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::Inherited: return "inherited";
        case Mode::Synthesized: return "synthesized";
        case Mode::Dual: return "dual";
    }
    return "dual";
}

std::string_view to_string(IOClass io) {
    switch (io) {
        case IOClass::Input: return "input";
        case IOClass::Output: return "output";
        case IOClass::Neither: return "neither";
    }
    return "neither";
}

Mode Annotation::at(const TreePosition &pos) const {
    auto it = modes.find(pos);
    return it == modes.end() ? Mode::Dual : it->second;
}

Annotation annotate(const DerivationTree &tree, const GroundnessLog &log) {
    Annotation out;
    auto mismatch = [](const std::string &what) { return std::invalid_argument("groundness log does not match tree: " + what); };
    for (const auto &r : log.calls) {
        if (r.callee >= tree.size() || r.caller >= tree.size() || tree.node(r.callee).incomplete ||
            tree.child_at(r.caller, r.literal) != r.callee) {
            throw mismatch("call record into node " + std::to_string(r.callee));
        }
        auto arity = tree.node(r.callee).label.head->arity();
        if (r.ground_at_call.size() != arity || r.ground_at_success.size() != arity ||
            r.determined_by_subtree.size() != arity) {
            throw mismatch("arity of call record into node " + std::to_string(r.callee));
        }
        for (std::size_t i = 0; i < arity; ++i) {
            Mode m = Mode::Dual;
            if (r.ground_at_call[i]) {
                m = Mode::Inherited;
            } else if (r.ground_at_success[i] && r.determined_by_subtree[i]) {
                m = Mode::Synthesized;
            }
            if (m != Mode::Dual) {
                out.modes[TreePosition{r.caller, LocalPosition{r.literal, {i + 1}}}] = m;
                out.modes[TreePosition{r.callee, LocalPosition{0, {i + 1}}}] = m;
            }
        }
    }
    for (const auto &r : log.constraints) {
        TreePosition lit{r.node, LocalPosition{r.literal, {}}};
        if (!tree.contains(lit) || tree.info(lit).kind != PositionKind::Constraint) {
            throw mismatch("constraint record " + format_address(lit));
        }
        for (std::size_t j = 0; j < r.ground_before.size(); ++j) {
            TreePosition occ{r.node, LocalPosition{r.literal, {j + 1}}};
            if (!tree.contains(occ)) {
                throw mismatch("occurrence " + format_address(occ));
            }
            if (r.ground_before[j]) {
                out.modes[occ] = Mode::Inherited;
            } else if (r.determined_by_constraint[j]) {
                out.modes[occ] = Mode::Synthesized;
            }
        }
    }
    return out;
}

IOClass io_class(const DerivationTree &tree, const Annotation &annotation, const TreePosition &pos) {
    const auto &info = tree.info(pos);
    if (info.kind != PositionKind::Argument && info.kind != PositionKind::Occurrence) {
        return IOClass::Neither;
    }
    auto mode = annotation.at(pos);
    if (mode == Mode::Dual) {
        return IOClass::Neither;
    }
    bool inherited = mode == Mode::Inherited;
    if (info.in_head) {
        return inherited ? IOClass::Input : IOClass::Output;
    }
    return inherited ? IOClass::Output : IOClass::Input;
}

DirectedDepGraph::DirectedDepGraph(const TreeGraph &graph, const DerivationTree &tree, const Annotation &annotation)
    : universe_(graph.universe()) {
    for (const auto &p : universe_) {
        io_.emplace(p, io_class(tree, annotation, p));
    }
    for (const auto &e : graph.edges()) {
        auto ia = io_.at(e.a);
        auto ib = io_.at(e.b);
        bool forward = true;
        bool backward = true;
        if (e.kind == EdgeKind::Transition) {
            if (ia == IOClass::Output && ib == IOClass::Input) {
                backward = false;
            } else if (ib == IOClass::Output && ia == IOClass::Input) {
                forward = false;
            }
        } else if (e.kind == EdgeKind::Local) {
            if (ia == IOClass::Input && ib == IOClass::Output) {
                backward = false;
            } else if (ib == IOClass::Input && ia == IOClass::Output) {
                forward = false;
            }
        }
        if (forward && arcs_.emplace(e.a, e.b).second) {
            preds_[e.b].push_back(e.a);
        }
        if (backward && arcs_.emplace(e.b, e.a).second) {
            preds_[e.a].push_back(e.b);
        }
    }
}

bool DirectedDepGraph::has_arc(const TreePosition &from, const TreePosition &to) const {
    return arcs_.contains({from, to});
}

std::set<TreePosition> DirectedDepGraph::backward(const TreePosition &target) const {
    if (!io_.contains(target)) {
        throw PositionError("position " + format_address(target) + " is not in the graph");
    }
    std::set<TreePosition> seen{target};
    std::vector<TreePosition> todo{target};
    while (!todo.empty()) {
        auto p = todo.back();
        todo.pop_back();
        auto it = preds_.find(p);
        if (it == preds_.end()) {
            continue;
        }
        for (const auto &q : it->second) {
            if (seen.insert(q).second) {
                todo.push_back(q);
            }
        }
    }
    return seen;
}

DirectedDepGraph orient(const TreeGraph &graph, const DerivationTree &tree, const Annotation &annotation) {
    return DirectedDepGraph(graph, tree, annotation);
}

Slice<TreePosition> directional_slice(const DerivationTree &tree, const DirectedDepGraph &graph,
                                      const TreePosition &alpha) {
    Slice<TreePosition> out;
    out.kind = SliceKind::Tree;
    out.criterion = alpha;
    if (auto w = criterion_warning(tree.info(alpha)); !w.empty()) {
        out.warnings.push_back(std::move(w));
    }
    out.positions = graph.backward(alpha);
    return out;
}

Slice<TreePosition> directional_slice(const DerivationTree &tree, const Annotation &annotation,
                                      const TreePosition &alpha) {
    (void)tree.info(alpha);
    return directional_slice(tree, orient(tree_dep_graph(tree), tree, annotation), alpha);
}

} // namespace clpslice
