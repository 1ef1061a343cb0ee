#pragma once

#include "clpslice/engine.hpp"
#include "clpslice/syntax.hpp"

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace clpslice {

enum class EdgeKind { Constraint, Transition, Functor, Local };

std::string_view to_string(EdgeKind kind);

template <class Pos>
struct Edge {
    Pos a;
    Pos b;
    EdgeKind kind = EdgeKind::Local;
};

//! Undirected graph over positions with an incrementally maintained union-find.
template <class Pos>
class DependencyGraph {
public:
    DependencyGraph() = default;
    explicit DependencyGraph(std::vector<Pos> universe) : universe_(std::move(universe)) {
        for (std::size_t i = 0; i < universe_.size(); ++i) {
            index_.emplace(universe_[i], i);
            parent_.push_back(i);
        }
    }

    //! Adds an unordered edge; self loops and repeated (pair, kind) entries are ignored.
    void add_edge(const Pos &a, const Pos &b, EdgeKind kind) {
        auto i = index_of(a);
        auto j = index_of(b);
        if (i == j) {
            return;
        }
        auto key = std::make_tuple(std::min(i, j), std::max(i, j), static_cast<int>(kind));
        if (!keys_.insert(key).second) {
            return;
        }
        edges_.push_back(Edge<Pos>{a, b, kind});
        unite(i, j);
    }

    [[nodiscard]] const std::vector<Pos> &universe() const { return universe_; }
    [[nodiscard]] const std::vector<Edge<Pos>> &edges() const { return edges_; }
    [[nodiscard]] bool contains(const Pos &p) const { return index_.contains(p); }

    [[nodiscard]] std::size_t index_of(const Pos &p) const {
        auto it = index_.find(p);
        if (it == index_.end()) {
            throw PositionError("position " + format_address(p) + " is not in the graph");
        }
        return it->second;
    }

    [[nodiscard]] bool has_edge(const Pos &a, const Pos &b) const {
        auto i = index_of(a);
        auto j = index_of(b);
        for (int k = 0; k < 4; ++k) {
            if (keys_.contains(std::make_tuple(std::min(i, j), std::max(i, j), k))) {
                return true;
            }
        }
        return false;
    }

    [[nodiscard]] bool connected(const Pos &a, const Pos &b) const { return find(index_of(a)) == find(index_of(b)); }

    [[nodiscard]] std::set<Pos> component(const Pos &p) const {
        auto root = find(index_of(p));
        std::set<Pos> out;
        for (std::size_t i = 0; i < universe_.size(); ++i) {
            if (find(i) == root) {
                out.insert(universe_[i]);
            }
        }
        return out;
    }

    //! Components ordered by their first position in universe order.
    [[nodiscard]] std::vector<std::set<Pos>> components() const {
        std::map<std::size_t, std::size_t> slot;
        std::vector<std::set<Pos>> out;
        for (std::size_t i = 0; i < universe_.size(); ++i) {
            auto [it, inserted] = slot.emplace(find(i), out.size());
            if (inserted) {
                out.emplace_back();
            }
            out[it->second].insert(universe_[i]);
        }
        return out;
    }

private:
    std::size_t find(std::size_t x) const {
        while (parent_[x] != x) {
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[std::max(a, b)] = std::min(a, b);
        }
    }

    std::vector<Pos> universe_;
    std::map<Pos, std::size_t> index_;
    std::vector<Edge<Pos>> edges_;
    std::set<std::tuple<std::size_t, std::size_t, int>> keys_;
    std::vector<std::size_t> parent_;
};

using TreeGraph = DependencyGraph<TreePosition>;
using ProgramGraph = DependencyGraph<ProgramPosition>;

enum class SliceKind { Tree, Program };

template <class Pos>
struct Slice {
    SliceKind kind = SliceKind::Tree;
    Pos criterion;
    std::set<Pos> positions;
    std::vector<std::string> warnings;
};

TreeGraph tree_dep_graph(const DerivationTree &tree);

//! Graph over the program positions plus the goal positions (clause index kGoalClause).
ProgramGraph program_dep_graph(const Program &program, const Clause &goal);

//! Every program and goal position, program clauses first.
std::vector<ProgramPosition> program_positions(const Program &program, const Clause &goal);

Slice<TreePosition> tree_slice(const DerivationTree &tree, const TreePosition &alpha);
Slice<TreePosition> tree_slice(const DerivationTree &tree, const TreeGraph &graph, const TreePosition &alpha);

Slice<ProgramPosition> program_slice(const Program &program, const Clause &goal, const ProgramPosition &beta);
Slice<ProgramPosition> program_slice(const Program &program, const Clause &goal, const ProgramGraph &graph,
                                     const ProgramPosition &beta);

//! Warning text for criteria that are not variable positions, empty otherwise.
std::string criterion_warning(const PositionInfo &info);

} // namespace clpslice
