#pragma once

#include "clpslice/depgraph.hpp"
#include "clpslice/directional.hpp"

#include <set>
#include <string>

namespace clpslice {

//! Tree graph with one cluster per node. Slice members are filled. With an annotation the
//! edges are oriented: one-way arcs get a single arrowhead, two-way pairs dir=both.
std::string tree_dot(const DerivationTree &tree, const TreeGraph &graph, const std::set<TreePosition> &slice,
                     const Annotation *annotation = nullptr);

std::string program_dot(const Program &program, const Clause &goal, const ProgramGraph &graph,
                        const std::set<ProgramPosition> &slice);

//! Label suffix for an annotation: "v" inherited, "^" synthesized, "<->" dual.
std::string_view mode_suffix(Mode mode);

} // namespace clpslice
