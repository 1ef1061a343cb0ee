#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace clpslice {

//! 1-based argument indices descending into a term tree. For a constraint the single
//! step indexes its variable/constant occurrence list.
using ArgPath = std::vector<std::size_t>;

//! Position inside one clause: literal 0 is the head, k >= 1 the k-th body item.
struct LocalPosition {
    std::size_t literal = 0;
    ArgPath path;

    auto operator<=>(const LocalPosition &) const = default;
};

//! Clause index reserved for positions of the goal clause.
inline constexpr std::size_t kGoalClause = std::numeric_limits<std::size_t>::max();

struct ProgramPosition {
    std::size_t clause = 0;
    LocalPosition local;

    [[nodiscard]] bool is_goal() const { return clause == kGoalClause; }
    auto operator<=>(const ProgramPosition &) const = default;
};

//! A derivation tree position: skeleton node plus a position in the clause labelling it.
struct TreePosition {
    std::size_t node = 0;
    LocalPosition local;

    auto operator<=>(const TreePosition &) const = default;
};

//! Raised for malformed addresses and positions that do not exist.
class PositionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Textual addresses: "<clause>/<literal>[/<a1>.<a2>...]", with "g" as clause for the goal.
// Tree addresses use the node index in place of the clause.
std::string format_local(const LocalPosition &pos);
std::string format_address(const ProgramPosition &pos);
std::string format_address(const TreePosition &pos);

ProgramPosition parse_program_address(std::string_view text);
TreePosition parse_tree_address(std::string_view text);

} // namespace clpslice
