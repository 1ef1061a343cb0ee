#pragma once

#include "clpslice/directional.hpp"
#include "clpslice/engine.hpp"
#include "clpslice/oracle.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace clpslice {

enum class SliceMode { Tree, Dynamic, Position, Static };

std::string_view to_string(SliceMode mode);
//! Accepts "tree", "dynamic", "position" and "static".
SliceMode parse_slice_mode(std::string_view text);

struct SliceStats {
    std::size_t tree_node_count = 0;
    std::size_t tree_argpos_count = 0;
    std::size_t slice_node_count = 0;
    std::size_t slice_argpos_count = 0;
    double slice_node_pct = 0;
    double slice_argpos_pct = 0;

    bool operator==(const SliceStats &) const = default;
};

//! Nodes touched and atom argument positions (head and call arguments) in the slice,
//! relative to the whole tree.
SliceStats slice_stats(const DerivationTree &tree, const std::set<TreePosition> &slice);

struct OracleCheck {
    std::string criterion;
    std::string variable;
    std::string domain;
    //! False when the store could not be enumerated; `valid` is then meaningless.
    bool checked = true;
    bool valid = false;

    bool operator==(const OracleCheck &) const = default;
};

//! One line of the groundness event log. For calls `position` is the call literal and
//! `ground_before` is ground-at-call; for constraints it is per occurrence.
struct GroundnessEntry {
    std::string kind;
    std::string position;
    std::vector<bool> ground_before;
    std::vector<bool> ground_at_success;
    std::vector<bool> determined;

    bool operator==(const GroundnessEntry &) const = default;
};

struct BranchReport {
    std::size_t solution = 0;
    std::vector<std::string> criteria;
    std::vector<std::string> tree_positions;
    std::vector<std::string> store;
    SliceStats stats;
    std::vector<OracleCheck> oracle;
    //! Non-dual annotations by tree address.
    std::map<std::string, std::string> annotation;
    std::vector<GroundnessEntry> groundness;

    bool operator==(const BranchReport &) const = default;
};

struct SliceReport {
    SliceMode mode = SliceMode::Tree;
    std::string program;
    std::string goal;
    std::string criterion;
    bool annotation_used = false;
    //! One entry per proof tree used; empty for static slices.
    std::vector<BranchReport> branches;
    std::vector<std::string> program_positions;
    std::vector<std::string> warnings;

    bool operator==(const SliceReport &) const = default;
};

nlohmann::json to_json(const SliceReport &report);
SliceReport report_from_json(const nlohmann::json &json);

struct SliceRequest {
    std::string program_name;
    Program program;
    Clause goal;
    SliceMode mode = SliceMode::Tree;
    std::string at;
    bool undirected = false;
    DeriveOptions derive;
    std::optional<IntDomain> oracle_domain;
};

struct SliceOutcome {
    SliceReport report;
    std::string listing;
    std::string dot;
    bool oracle_failed = false;
};

//! Throws NoSolution when no proof tree exists and PositionError for bad addresses.
SliceOutcome run_slice(const SliceRequest &request);

//! Program and goal listing with slice members wrapped in << >>.
std::string highlighted_listing(const Program &program, const Clause &goal, const std::set<ProgramPosition> &marked);

// {{{1 statistics

struct StatsRow {
    std::string goal;
    bool ok = false;
    std::string error;
    std::size_t nodes = 0;
    std::size_t argpos = 0;
    std::size_t slices = 0;
    double node_pct = 0;
    double argpos_pct = 0;
    double undirected_node_pct = 0;
    double undirected_argpos_pct = 0;
    //! Slices where the directional slice is strictly smaller than the undirected one.
    std::size_t reduced = 0;

    bool operator==(const StatsRow &) const = default;
};

struct StatsTable {
    std::string program;
    std::size_t clauses = 0;
    std::vector<StatsRow> rows;
    std::size_t slices = 0;
    double node_pct = 0;
    double argpos_pct = 0;
    double undirected_node_pct = 0;
    double undirected_argpos_pct = 0;
    std::size_t reduced = 0;

    bool operator==(const StatsTable &) const = default;
};

//! Slices every argument position of the first proof tree of each goal.
StatsTable run_stats(const std::string &name, const Program &program, const std::vector<std::string> &goals,
                     const DeriveOptions &opts = {});

//! Goals file: one goal per non-empty line, "%" starts a comment line.
std::vector<std::string> read_goal_lines(std::string_view text);

std::string to_string(const StatsTable &table);
nlohmann::json to_json(const StatsTable &table);

} // namespace clpslice
