#include "clpslice/positions.hpp"

#include <charconv>

namespace clpslice {

namespace {

std::size_t parse_index(std::string_view text, std::string_view whole) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw PositionError("malformed position address: " + std::string(whole));
    }
    return value;
}

// Splits "<first>/<literal>[/<path>]" and fills the local part.
std::string_view parse_parts(std::string_view text, LocalPosition &local) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        throw PositionError("malformed position address: " + std::string(text));
    }
    auto first = text.substr(0, slash);
    auto rest = text.substr(slash + 1);
    auto slash2 = rest.find('/');
    local.literal = parse_index(rest.substr(0, slash2), text);
    local.path.clear();
    if (slash2 != std::string_view::npos) {
        auto path = rest.substr(slash2 + 1);
        while (!path.empty()) {
            auto dot = path.find('.');
            auto step = parse_index(path.substr(0, dot), text);
            if (step == 0) {
                throw PositionError("argument indices are 1-based: " + std::string(text));
            }
            local.path.push_back(step);
            if (dot == std::string_view::npos) {
                break;
            }
            path = path.substr(dot + 1);
            if (path.empty()) {
                throw PositionError("malformed position address: " + std::string(text));
            }
        }
    }
    return first;
}

} // namespace

std::string format_local(const LocalPosition &pos) {
    std::string out = std::to_string(pos.literal);
    for (std::size_t i = 0; i < pos.path.size(); ++i) {
        out += i == 0 ? '/' : '.';
        out += std::to_string(pos.path[i]);
    }
    return out;
}

std::string format_address(const ProgramPosition &pos) {
    return (pos.is_goal() ? std::string("g") : std::to_string(pos.clause)) + "/" + format_local(pos.local);
}

std::string format_address(const TreePosition &pos) {
    return std::to_string(pos.node) + "/" + format_local(pos.local);
}

ProgramPosition parse_program_address(std::string_view text) {
    ProgramPosition pos;
    auto first = parse_parts(text, pos.local);
    pos.clause = first == "g" ? kGoalClause : parse_index(first, text);
    return pos;
}

TreePosition parse_tree_address(std::string_view text) {
    TreePosition pos;
    pos.node = parse_index(parse_parts(text, pos.local), text);
    return pos;
}

} // namespace clpslice
