#include "clpslice/engine.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace clpslice {

// {{{1 derivation trees

namespace {

std::set<TreePosition> constraint_origin(std::size_t node, std::size_t literal, const ConstraintExpr &c) {
    std::set<TreePosition> origin{TreePosition{node, LocalPosition{literal, {}}}};
    auto n = c.occurrences().size();
    for (std::size_t j = 1; j <= n; ++j) {
        origin.insert(TreePosition{node, LocalPosition{literal, {j}}});
    }
    return origin;
}

} // namespace

ConstraintStore constraints_of(const std::vector<SkeletonNode> &nodes) {
    ConstraintStore store;
    if (nodes.empty()) {
        return store;
    }
    std::function<void(std::size_t)> visit = [&](std::size_t n) {
        const auto &node = nodes.at(n);
        if (node.incomplete) {
            return;
        }
        std::size_t ordinal = 0;
        for (std::size_t k = 1; k <= node.label.body.size(); ++k) {
            const auto &item = node.label.body[k - 1];
            if (item.is_constraint()) {
                store.constraints.push_back(StoreConstraint::numeric(item.constraint, constraint_origin(n, k, item.constraint)));
                continue;
            }
            if (ordinal >= node.children.size()) {
                ++ordinal;
                continue;
            }
            auto c = node.children[ordinal++];
            const auto &child = nodes.at(c);
            if (child.incomplete) {
                continue;
            }
            if (!child.label.head || child.label.head->predicate != item.atom.predicate ||
                child.label.head->args.size() != item.atom.args.size()) {
                throw std::invalid_argument("malformed skeleton: node " + std::to_string(c) +
                                            " does not match the call " + to_string(item.atom));
            }
            for (std::size_t i = 0; i < item.atom.args.size(); ++i) {
                std::set<TreePosition> origin{TreePosition{n, LocalPosition{k, {i + 1}}},
                                              TreePosition{c, LocalPosition{0, {i + 1}}}};
                store.constraints.push_back(
                    StoreConstraint::equation(item.atom.args[i], child.label.head->args[i], std::move(origin)));
            }
            visit(c);
        }
    };
    visit(0);
    return store;
}

DerivationTree::DerivationTree(std::vector<SkeletonNode> nodes) : nodes_(std::move(nodes)) {
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        layouts_.push_back(nodes_[n].incomplete ? std::vector<PositionInfo>{} : clause_layout(nodes_[n].label));
        auto &idx = index_.emplace_back();
        for (std::size_t i = 0; i < layouts_[n].size(); ++i) {
            idx.emplace(layouts_[n][i].pos, i);
            positions_.push_back(TreePosition{n, layouts_[n][i].pos});
        }
    }
    store_ = constraints_of(nodes_);
}

bool DerivationTree::complete() const {
    return std::none_of(nodes_.begin(), nodes_.end(), [](const SkeletonNode &n) { return n.incomplete; });
}

bool DerivationTree::contains(const TreePosition &pos) const {
    return pos.node < index_.size() && index_[pos.node].contains(pos.local);
}

const PositionInfo &DerivationTree::info(const TreePosition &pos) const {
    if (!contains(pos)) {
        throw PositionError("no tree position " + format_address(pos));
    }
    return layouts_[pos.node][index_[pos.node].at(pos.local)];
}

std::optional<std::size_t> DerivationTree::child_at(std::size_t node, std::size_t literal) const {
    const auto &n = nodes_.at(node);
    if (n.incomplete || literal == 0 || literal > n.label.body.size() || !n.label.body[literal - 1].is_call()) {
        return std::nullopt;
    }
    std::size_t ordinal = 0;
    for (std::size_t k = 1; k < literal; ++k) {
        ordinal += n.label.body[k - 1].is_call() ? 1 : 0;
    }
    if (ordinal >= n.children.size()) {
        return std::nullopt;
    }
    return n.children[ordinal];
}

std::set<std::size_t> DerivationTree::subtree(std::size_t node) const {
    std::set<std::size_t> out;
    std::vector<std::size_t> todo{node};
    while (!todo.empty()) {
        auto n = todo.back();
        todo.pop_back();
        out.insert(n);
        for (auto c : nodes_.at(n).children) {
            todo.push_back(c);
        }
    }
    return out;
}

ProgramPosition DerivationTree::phi(const TreePosition &pos) const {
    if (!contains(pos)) {
        throw PositionError("no tree position " + format_address(pos));
    }
    const auto &n = nodes_[pos.node];
    return ProgramPosition{n.clause ? *n.clause : kGoalClause, pos.local};
}

std::string to_string(const DerivationTree &tree) {
    std::ostringstream out;
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const auto &n = tree.node(i);
        out << std::string(2 * n.depth, ' ') << '[' << i << "] ";
        if (n.incomplete) {
            out << "?";
        } else {
            out << to_string(n.label);
            if (n.clause) {
                out << "   % clause " << *n.clause;
            }
        }
        out << '\n';
    }
    return out.str();
}

std::set<TreePosition> phi_inverse(const Program &program, const Clause &goal, const DerivationTree &tree,
                                   const ProgramPosition &q) {
    (void)element_at(clause_at(program, goal, q), q.local);
    std::set<TreePosition> out;
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const auto &n = tree.node(i);
        if (n.incomplete) {
            continue;
        }
        bool same = q.is_goal() ? n.is_root() : (n.clause && *n.clause == q.clause);
        if (same) {
            out.insert(TreePosition{i, q.local});
        }
    }
    return out;
}

ConstraintStore positions_to_store(const DerivationTree &tree, const std::set<TreePosition> &positions) {
    std::set<std::string> psi;
    for (const auto &p : positions) {
        const auto &vars = tree.info(p).vars;
        psi.insert(vars.begin(), vars.end());
    }
    ConstraintStore out;
    for (const auto &c : tree.store().constraints) {
        auto vs = c.variables();
        if (std::any_of(vs.begin(), vs.end(), [&](const std::string &v) { return psi.contains(v); })) {
            out.constraints.push_back(c);
        }
    }
    return out;
}

ConstraintStore origin_store(const DerivationTree &tree, const std::set<TreePosition> &positions) {
    for (const auto &p : positions) {
        (void)tree.info(p);
    }
    ConstraintStore out;
    for (const auto &c : tree.store().constraints) {
        if (std::any_of(c.origin.begin(), c.origin.end(), [&](const TreePosition &p) { return positions.contains(p); })) {
            out.constraints.push_back(c);
        }
    }
    return out;
}

// {{{1 groundness log

const CallRecord *GroundnessLog::call_into(std::size_t callee) const {
    for (const auto &r : calls) {
        if (r.callee == callee) {
            return &r;
        }
    }
    return nullptr;
}

const CallRecord *GroundnessLog::call_at(std::size_t caller, std::size_t literal) const {
    for (const auto &r : calls) {
        if (r.caller == caller && r.literal == literal) {
            return &r;
        }
    }
    return nullptr;
}

const ConstraintRecord *GroundnessLog::constraint_at(std::size_t node, std::size_t literal) const {
    for (const auto &r : constraints) {
        if (r.node == node && r.literal == literal) {
            return &r;
        }
    }
    return nullptr;
}

// {{{1 search

namespace {

struct Goal {
    enum class Kind { Call, Constraint, Exit };

    Kind kind = Kind::Call;
    std::size_t node = 0;
    std::size_t literal = 0;
};

struct State {
    std::vector<SkeletonNode> nodes;
    Solver op;   // constraints selected so far plus node equations
    Solver full; // C(S) of the current skeleton
    std::vector<Goal> stack;
    GroundnessLog log;
    std::size_t next_tag = 1;
};

struct ChoicePoint {
    State state;
    Goal call;
    std::size_t next_clause = 0;
};

//! Pre-order renumbering that materializes incomplete leaves for unexpanded calls.
std::vector<SkeletonNode> renumber(const std::vector<SkeletonNode> &nodes, std::vector<std::size_t> &mapping) {
    std::vector<SkeletonNode> out;
    mapping.assign(nodes.size(), 0);
    std::function<std::size_t(std::size_t, std::optional<std::size_t>)> visit =
        [&](std::size_t old, std::optional<std::size_t> parent) -> std::size_t {
        auto id = out.size();
        mapping[old] = id;
        out.push_back(nodes[old]);
        out[id].parent = parent;
        out[id].children.clear();
        std::vector<std::size_t> kids;
        std::size_t ordinal = 0;
        const auto &label = nodes[old].label;
        for (std::size_t k = 1; k <= label.body.size(); ++k) {
            if (!label.body[k - 1].is_call()) {
                continue;
            }
            if (ordinal < nodes[old].children.size()) {
                kids.push_back(visit(nodes[old].children[ordinal], id));
            } else {
                SkeletonNode leaf;
                leaf.incomplete = true;
                leaf.parent = id;
                leaf.parent_literal = k;
                leaf.depth = nodes[old].depth + 1;
                kids.push_back(out.size());
                out.push_back(std::move(leaf));
            }
            ++ordinal;
        }
        out[id].children = std::move(kids);
        return id;
    };
    if (!nodes.empty()) {
        visit(0, std::nullopt);
    }
    return out;
}

class Engine {
public:
    Engine(const Program &program, const Clause &goal, const DeriveOptions &opts)
        : program_(program), goal_(goal), opts_(opts) {}

    DeriveResult run() {
        State state;
        SkeletonNode root;
        root.label = rename_clause(goal_, 0);
        state.nodes.push_back(root);
        for (const auto &item : root.label.body) {
            if (item.is_constraint()) {
                state.full.add_linear(item.constraint.linearize());
            }
        }
        push_body(state, 0);
        remember(state);
        bool alive = state.full.satisfiable();
        while (alive) {
            if (++result_.steps > opts_.step_limit) {
                result_.step_limit_hit = true;
                break;
            }
            if (state.stack.empty()) {
                record_solution(state);
                if (result_.solutions.size() >= opts_.max_solutions) {
                    break;
                }
                alive = backtrack(state);
                continue;
            }
            auto goal = state.stack.back();
            state.stack.pop_back();
            bool ok = true;
            switch (goal.kind) {
                case Goal::Kind::Constraint: ok = select_constraint(state, goal); break;
                case Goal::Kind::Exit: exit_node(state, goal.node); break;
                case Goal::Kind::Call: ok = expand(state, goal, 0); break;
            }
            if (!ok) {
                alive = backtrack(state);
            }
        }
        if (result_.solutions.empty()) {
            std::vector<std::size_t> mapping;
            result_.deepest = DerivationTree(renumber(deepest_, mapping));
        }
        return std::move(result_);
    }

private:
    static void push_body(State &state, std::size_t node) {
        const auto &body = state.nodes[node].label.body;
        for (std::size_t k = body.size(); k >= 1; --k) {
            state.stack.push_back(Goal{body[k - 1].is_call() ? Goal::Kind::Call : Goal::Kind::Constraint, node, k});
        }
    }

    void remember(const State &state) {
        if (state.nodes.size() > deepest_.size()) {
            deepest_ = state.nodes;
        }
    }

    bool matches(const Atom &call, std::size_t clause) const {
        const auto &head = program_.clauses[clause].head;
        return head && head->predicate == call.predicate && head->args.size() == call.args.size();
    }

    bool select_constraint(State &state, const Goal &goal) {
        const auto &c = state.nodes[goal.node].label.body[goal.literal - 1].constraint;
        ConstraintRecord rec;
        rec.node = goal.node;
        rec.literal = goal.literal;
        Solver local;
        local.add_linear(c.linearize());
        auto leaves = c.occurrences();
        for (const auto *leaf : leaves) {
            auto v = state.op.value(*leaf);
            rec.ground_before.push_back(v.has_value());
            if (v && leaf->is_variable()) {
                local.add_equation(*leaf, *v);
            }
        }
        bool local_sat = local.satisfiable();
        for (const auto *leaf : leaves) {
            rec.determined_by_constraint.push_back(local_sat && local.is_ground(*leaf));
        }
        state.log.constraints.push_back(std::move(rec));
        state.op.add_linear(c.linearize());
        return state.op.satisfiable();
    }

    static void exit_node(State &state, std::size_t node) {
        for (auto it = state.log.calls.rbegin(); it != state.log.calls.rend(); ++it) {
            if (it->callee != node) {
                continue;
            }
            for (const auto &arg : state.nodes[node].label.head->args) {
                it->ground_at_success.push_back(state.op.is_ground(arg));
            }
            return;
        }
    }

    bool attach(State &state, const Goal &call, std::size_t clause) {
        Atom atom = state.nodes[call.node].label.body[call.literal - 1].atom;
        SkeletonNode child;
        child.clause = clause;
        child.label = rename_clause(program_.clauses[clause], state.next_tag++);
        child.parent = call.node;
        child.parent_literal = call.literal;
        child.depth = state.nodes[call.node].depth + 1;
        if (child.depth > opts_.depth_limit) {
            result_.depth_limit_hit = true;
            return false;
        }
        CallRecord rec;
        rec.caller = call.node;
        rec.literal = call.literal;
        for (const auto &arg : atom.args) {
            auto v = state.op.value(arg);
            rec.ground_at_call.push_back(v.has_value());
            rec.call_values.push_back(std::move(v));
        }
        const auto &head = *child.label.head;
        for (std::size_t i = 0; i < atom.args.size(); ++i) {
            state.op.add_equation(atom.args[i], head.args[i]);
            state.full.add_equation(atom.args[i], head.args[i]);
        }
        for (const auto &item : child.label.body) {
            if (item.is_constraint()) {
                state.full.add_linear(item.constraint.linearize());
            }
        }
        if (!state.full.satisfiable() || !state.op.satisfiable()) {
            return false;
        }
        rec.callee = state.nodes.size();
        state.nodes[call.node].children.push_back(rec.callee);
        state.nodes.push_back(std::move(child));
        state.log.calls.push_back(std::move(rec));
        state.stack.push_back(Goal{Goal::Kind::Exit, state.nodes.size() - 1, 0});
        push_body(state, state.nodes.size() - 1);
        remember(state);
        return true;
    }

    bool expand(State &state, const Goal &call, std::size_t from) {
        const auto &atom = state.nodes[call.node].label.body[call.literal - 1].atom;
        for (std::size_t j = from; j < program_.clauses.size(); ++j) {
            if (!matches(atom, j)) {
                continue;
            }
            State next = state;
            if (!attach(next, call, j)) {
                continue;
            }
            for (std::size_t rest = j + 1; rest < program_.clauses.size(); ++rest) {
                if (matches(atom, rest)) {
                    choice_points_.push_back(ChoicePoint{std::move(state), call, rest});
                    break;
                }
            }
            state = std::move(next);
            return true;
        }
        return false;
    }

    bool backtrack(State &state) {
        while (!choice_points_.empty()) {
            auto cp = std::move(choice_points_.back());
            choice_points_.pop_back();
            state = std::move(cp.state);
            if (expand(state, cp.call, cp.next_clause)) {
                return true;
            }
        }
        return false;
    }

    void record_solution(const State &state) {
        std::vector<std::size_t> mapping;
        Derivation d;
        d.tree = DerivationTree(renumber(state.nodes, mapping));
        d.log = state.log;
        for (auto &r : d.log.calls) {
            r.caller = mapping[r.caller];
            r.callee = mapping[r.callee];
        }
        for (auto &r : d.log.constraints) {
            r.node = mapping[r.node];
        }
        for (auto &r : d.log.calls) {
            r.determined_by_subtree = determined(d.tree, r);
        }
        result_.solutions.push_back(std::move(d));
    }

    static std::vector<bool> determined(const DerivationTree &tree, const CallRecord &r) {
        auto sub = tree.subtree(r.callee);
        Solver s;
        for (const auto &c : tree.store().constraints) {
            if (std::all_of(c.origin.begin(), c.origin.end(), [&](const TreePosition &p) { return sub.contains(p.node); })) {
                s.add(c);
            }
        }
        const auto &head = *tree.node(r.callee).label.head;
        for (std::size_t i = 0; i < head.args.size(); ++i) {
            if (r.ground_at_call[i]) {
                s.add_equation(head.args[i], *r.call_values[i]);
            }
        }
        std::vector<bool> out;
        bool sat = s.satisfiable();
        for (const auto &arg : head.args) {
            out.push_back(sat && s.is_ground(arg));
        }
        return out;
    }

    const Program &program_;
    const Clause &goal_;
    DeriveOptions opts_;
    DeriveResult result_;
    std::vector<ChoicePoint> choice_points_;
    std::vector<SkeletonNode> deepest_;
};

} // namespace

DeriveResult derive(const Program &program, const Clause &goal, const DeriveOptions &opts) {
    if (opts.depth_limit < 1) {
        throw std::invalid_argument("depth limit must be at least 1");
    }
    if (goal.head) {
        throw std::invalid_argument("goal clause must not have a head");
    }
    return Engine(program, goal, opts).run();
}

Derivation first_proof(const Program &program, const Clause &goal, const DeriveOptions &opts) {
    auto result = derive(program, goal, opts);
    if (!result.success()) {
        std::string why = "no proof tree for goal " + to_string(goal);
        if (result.step_limit_hit) {
            why += " (step limit reached)";
        } else if (result.depth_limit_hit) {
            why += " (depth limit reached)";
        }
        throw NoSolution(why, std::move(result.deepest));
    }
    return std::move(result.solutions.front());
}

} // namespace clpslice
