#pragma once

#include "clpslice/constraints.hpp"
#include "clpslice/syntax.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace clpslice {

// {{{1 derivation trees

struct SkeletonNode {
    //! Program clause labelling the node; empty for the goal root and for incomplete leaves.
    std::optional<std::size_t> clause;
    bool incomplete = false;
    //! Renamed label. The root carries the renamed goal.
    Clause label;
    std::optional<std::size_t> parent;
    //! Body literal of the parent this node resolves.
    std::size_t parent_literal = 0;
    //! One child per call literal of the label, in body order.
    std::vector<std::size_t> children;
    std::size_t depth = 0;

    [[nodiscard]] bool is_root() const { return !parent.has_value(); }
};

class DerivationTree {
public:
    DerivationTree() = default;
    //! Nodes must be in pre-order with the root first. Computes layouts and C(S).
    explicit DerivationTree(std::vector<SkeletonNode> nodes);

    [[nodiscard]] const std::vector<SkeletonNode> &nodes() const { return nodes_; }
    [[nodiscard]] const SkeletonNode &node(std::size_t i) const { return nodes_.at(i); }
    [[nodiscard]] std::size_t size() const { return nodes_.size(); }
    [[nodiscard]] const ConstraintStore &store() const { return store_; }
    [[nodiscard]] bool complete() const;

    //! Pos(T) in enumeration order: nodes in pre-order, each in clause layout order.
    [[nodiscard]] const std::vector<TreePosition> &positions() const { return positions_; }
    [[nodiscard]] bool contains(const TreePosition &pos) const;
    [[nodiscard]] const PositionInfo &info(const TreePosition &pos) const;
    [[nodiscard]] const std::vector<PositionInfo> &layout(std::size_t node) const { return layouts_.at(node); }
    //! Child node linked to the call at (node, literal), if any.
    [[nodiscard]] std::optional<std::size_t> child_at(std::size_t node, std::size_t literal) const;
    //! Nodes of the subtree rooted at node, including it.
    [[nodiscard]] std::set<std::size_t> subtree(std::size_t node) const;

    //! Throws PositionError for positions not in the tree.
    [[nodiscard]] ProgramPosition phi(const TreePosition &pos) const;

private:
    std::vector<SkeletonNode> nodes_;
    std::vector<std::vector<PositionInfo>> layouts_;
    std::vector<std::map<LocalPosition, std::size_t>> index_;
    std::vector<TreePosition> positions_;
    ConstraintStore store_;
};

//! C(S): every clause constraint plus the node equations between each call and its
//! (complete) child. Throws std::invalid_argument on an arity mismatch.
ConstraintStore constraints_of(const std::vector<SkeletonNode> &nodes);

//! Indented listing, one node per line, "?" for incomplete leaves.
std::string to_string(const DerivationTree &tree);

std::set<TreePosition> phi_inverse(const Program &program, const Clause &goal, const DerivationTree &tree,
                                   const ProgramPosition &q);

//! C_P: constraints mentioning a variable that occurs at one of the positions (Psi).
ConstraintStore positions_to_store(const DerivationTree &tree, const std::set<TreePosition> &positions);

//! Constraints created from at least one of the positions (clause constraints through
//! their literal and occurrences, node equations through the two linked arguments).
ConstraintStore origin_store(const DerivationTree &tree, const std::set<TreePosition> &positions);

// {{{1 groundness log

struct CallRecord {
    std::size_t caller = 0;
    std::size_t literal = 0;
    std::size_t callee = 0;
    std::vector<bool> ground_at_call;
    //! Value of each argument when the call was selected.
    std::vector<std::optional<Term>> call_values;
    std::vector<bool> ground_at_success;
    //! Fixed by the callee's subtree together with the call-time values of ground arguments.
    std::vector<bool> determined_by_subtree;
};

struct ConstraintRecord {
    std::size_t node = 0;
    std::size_t literal = 0;
    //! Per occurrence: ground before the constraint was added (constants always are).
    std::vector<bool> ground_before;
    //! Per occurrence: fixed by the constraint together with the occurrences ground before.
    std::vector<bool> determined_by_constraint;
};

struct GroundnessLog {
    std::vector<CallRecord> calls;
    std::vector<ConstraintRecord> constraints;

    [[nodiscard]] const CallRecord *call_into(std::size_t callee) const;
    [[nodiscard]] const CallRecord *call_at(std::size_t caller, std::size_t literal) const;
    [[nodiscard]] const ConstraintRecord *constraint_at(std::size_t node, std::size_t literal) const;
};

// {{{1 derivation

struct DeriveOptions {
    //! Nodes deeper than this are not expanded (root has depth 0).
    std::size_t depth_limit = 64;
    std::size_t max_solutions = 1;
    std::size_t step_limit = 200'000;
};

struct Derivation {
    DerivationTree tree;
    GroundnessLog log;
};

struct DeriveResult {
    std::vector<Derivation> solutions;
    //! Largest derivation tree reached when there is no solution.
    std::optional<DerivationTree> deepest;
    bool depth_limit_hit = false;
    bool step_limit_hit = false;
    std::size_t steps = 0;

    [[nodiscard]] bool success() const { return !solutions.empty(); }
};

class NoSolution : public std::runtime_error {
public:
    NoSolution(const std::string &message, std::optional<DerivationTree> deepest)
        : std::runtime_error(message), deepest_(std::move(deepest)) {}
    [[nodiscard]] const std::optional<DerivationTree> &deepest() const { return deepest_; }

private:
    std::optional<DerivationTree> deepest_;
};

//! Leftmost selection, clause order, chronological backtracking. Every partial skeleton
//! has a satisfiable C(S).
DeriveResult derive(const Program &program, const Clause &goal, const DeriveOptions &opts = {});

//! First proof tree, or NoSolution.
Derivation first_proof(const Program &program, const Clause &goal, const DeriveOptions &opts = {});

} // namespace clpslice
