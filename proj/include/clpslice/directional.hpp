#pragma once

#include "clpslice/depgraph.hpp"
#include "clpslice/engine.hpp"

#include <map>
#include <set>
#include <string_view>
#include <vector>

namespace clpslice {

enum class Mode { Inherited, Synthesized, Dual };
enum class IOClass { Input, Output, Neither };

std::string_view to_string(Mode mode);
std::string_view to_string(IOClass io);

//! Groundness annotation of the tree positions. Positions without an entry are Dual.
struct Annotation {
    std::map<TreePosition, Mode> modes;

    [[nodiscard]] Mode at(const TreePosition &pos) const;
    static Annotation all_dual() { return {}; }
};

//! Arguments of call atoms and occurrences of constraints get Inherited when ground at
//! call, Synthesized when fixed by the callee (resp. the constraint) at success, else Dual.
Annotation annotate(const DerivationTree &tree, const GroundnessLog &log);

//! Input for inherited head arguments and synthesized body arguments, Output for the
//! converse; the goal and constraints count as bodies. Everything else is Neither.
IOClass io_class(const DerivationTree &tree, const Annotation &annotation, const TreePosition &pos);

//! Arcs of the oriented dependency graph, stored as predecessor lists.
class DirectedDepGraph {
public:
    DirectedDepGraph(const TreeGraph &graph, const DerivationTree &tree, const Annotation &annotation);

    [[nodiscard]] const std::vector<TreePosition> &universe() const { return universe_; }
    [[nodiscard]] bool has_arc(const TreePosition &from, const TreePosition &to) const;
    [[nodiscard]] const std::set<std::pair<TreePosition, TreePosition>> &arcs() const { return arcs_; }
    [[nodiscard]] IOClass io(const TreePosition &pos) const { return io_.at(pos); }

    //! Every position with a directed path to target, target included.
    [[nodiscard]] std::set<TreePosition> backward(const TreePosition &target) const;

private:
    std::vector<TreePosition> universe_;
    std::map<TreePosition, IOClass> io_;
    std::set<std::pair<TreePosition, TreePosition>> arcs_;
    std::map<TreePosition, std::vector<TreePosition>> preds_;
};

DirectedDepGraph orient(const TreeGraph &graph, const DerivationTree &tree, const Annotation &annotation);

Slice<TreePosition> directional_slice(const DerivationTree &tree, const Annotation &annotation,
                                      const TreePosition &alpha);
Slice<TreePosition> directional_slice(const DerivationTree &tree, const DirectedDepGraph &graph,
                                      const TreePosition &alpha);

} // namespace clpslice
