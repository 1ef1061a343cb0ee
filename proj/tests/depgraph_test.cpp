#include "support.hpp"

#include <doctest.h>

using namespace clpslice;
using namespace testing;

namespace {

const char *kExample1 = "p(X,Y,Z) :- {X-Y=1}, q(X,Y), r(Z).\nq(U,V) :- {U+V=3}.\nr(42).\n";

TreePosition tp(const std::string &a) { return parse_tree_address(a); }

std::set<std::string> addresses(const std::set<TreePosition> &s) {
    std::set<std::string> out;
    for (const auto &p : s) {
        out.insert(format_address(p));
    }
    return out;
}

std::set<std::string> addresses(const std::set<ProgramPosition> &s) {
    std::set<std::string> out;
    for (const auto &p : s) {
        out.insert(format_address(p));
    }
    return out;
}

bool is_atom(const PositionInfo &info) { return info.kind == PositionKind::Atom; }

} // namespace

TEST_CASE("example 1 tree graph components") {
    auto d = first_proof(parse_program(kExample1), parse_goal("p(X,Y,Z)."));
    const auto &t = d.tree;
    auto g = tree_dep_graph(t);
    // hand-enumerated: Z in the goal, Z in the head, Z in r(Z), 42 in r(42)
    std::set<std::string> z{"0/1/3", "1/0/3", "1/3/1", "3/0/1"};
    std::set<std::string> rest;
    for (const auto &p : t.positions()) {
        if (!is_atom(t.info(p)) && !z.contains(format_address(p))) {
            rest.insert(format_address(p));
        }
    }
    std::vector<std::set<std::string>> non_atom;
    for (const auto &c : g.components()) {
        if (c.size() == 1 && is_atom(t.info(*c.begin()))) {
            continue;
        }
        non_atom.push_back(addresses(c));
    }
    REQUIRE(non_atom.size() == 2);
    CHECK(std::find(non_atom.begin(), non_atom.end(), z) != non_atom.end());
    CHECK(std::find(non_atom.begin(), non_atom.end(), rest) != non_atom.end());
    CHECK(addresses(tree_slice(t, tp("0/1/3")).positions) == z);
    CHECK(addresses(tree_slice(t, tp("0/1/1")).positions) == rest);
}

TEST_CASE("edge kinds") {
    auto d = first_proof(parse_program("p(X,Y,Z) :- {X-Y=1}, q(X,Y), r(Z).\nq(U,V) :- {U+V=3}.\nr(f(42)).\n"),
                         parse_goal("p(X,Y,Z)."));
    auto g = tree_dep_graph(d.tree);
    auto kind_of = [&](const std::string &a, const std::string &b) {
        for (const auto &e : g.edges()) {
            if ((format_address(e.a) == a && format_address(e.b) == b) ||
                (format_address(e.a) == b && format_address(e.b) == a)) {
                return std::string(to_string(e.kind));
            }
        }
        return std::string("none");
    };
    CHECK(kind_of("1/1", "1/1/1") == "constraint");
    CHECK(kind_of("1/2/1", "2/0/1") == "transition");
    CHECK(kind_of("3/0/1", "3/0/1.1") == "functor");
    CHECK(kind_of("1/0/1", "1/2/1") == "local");
    CHECK(kind_of("1/2", "1/2/1") == "none");
}

TEST_CASE("ground fact tree") {
    auto d = first_proof(parse_program("r(42, g(1, 2)).\n"), parse_goal("r(A, B)."));
    auto g = tree_dep_graph(d.tree);
    auto s = tree_slice(d.tree, g, tp("1/0/1"));
    CHECK(addresses(s.positions) == std::set<std::string>{"0/1/1", "1/0/1"});
    auto f = tree_slice(d.tree, g, tp("1/0/2.1"));
    CHECK(addresses(f.positions) == std::set<std::string>{"0/1/2", "1/0/2", "1/0/2.1", "1/0/2.2"});
    CHECK_FALSE(f.warnings.empty());
}

TEST_CASE("criterion is always in the slice") {
    for (const auto &e : load_corpus()) {
        auto goal = parse_goal(e.goals.front());
        auto t = first_proof(e.program, goal).tree;
        auto g = tree_dep_graph(t);
        for (const auto &p : t.positions()) {
            CHECK(tree_slice(t, g, p).positions.contains(p));
        }
        CHECK_THROWS_AS(tree_slice(t, g, TreePosition{t.size() + 3, {0, {}}}), PositionError);
    }
}

TEST_CASE("components form a partition and slices are idempotent") {
    for (const auto &e : load_corpus()) {
        auto t = first_proof(e.program, parse_goal(e.goals.front())).tree;
        auto g = tree_dep_graph(t);
        std::set<TreePosition> seen;
        for (const auto &c : g.components()) {
            for (const auto &p : c) {
                CHECK(seen.insert(p).second);
            }
        }
        CHECK(seen.size() == t.positions().size());
        for (const auto &p : t.positions()) {
            auto s = tree_slice(t, g, p).positions;
            for (const auto &q : s) {
                CHECK(tree_slice(t, g, q).positions == s);
            }
        }
    }
}

TEST_CASE("program slices of example 1") {
    auto p = parse_program(kExample1);
    auto goal = parse_goal("p(X,Y,Z).");
    auto z = program_slice(p, goal, position_of(p, goal, "g/1/3"));
    CHECK(addresses(z.positions) == std::set<std::string>{"g/1/3", "0/0/3", "0/3/1", "2/0/1"});
    auto x = program_slice(p, goal, position_of(p, goal, "g/1/1"));
    std::set<std::string> rest;
    for (const auto &pos : program_positions(p, goal)) {
        auto kind = element_at(clause_at(p, goal, pos), pos.local).kind;
        if (kind != PositionKind::Atom && !z.positions.contains(pos)) {
            rest.insert(format_address(pos));
        }
    }
    CHECK(addresses(x.positions) == rest);
}

TEST_CASE("program graph is context insensitive") {
    auto p = parse_program("a(X) :- q(X).\nb(Y) :- q(Y).\nq(Z).\n");
    Clause none;
    auto g = program_dep_graph(p, none);
    CHECK(g.has_edge(position_of(p, "0/1/1"), position_of(p, "2/0/1")));
    CHECK(g.has_edge(position_of(p, "1/1/1"), position_of(p, "2/0/1")));
    CHECK(g.connected(position_of(p, "0/0/1"), position_of(p, "1/0/1")));

    auto facts = parse_program("f(1, g(2)).\nh(3).\n");
    auto s = program_slice(facts, none, position_of(facts, "0/0/2.1"));
    CHECK(addresses(s.positions) == std::set<std::string>{"0/0/2", "0/0/2.1"});
    CHECK(addresses(program_slice(facts, none, position_of(facts, "1/0/1")).positions) == std::set<std::string>{"1/0/1"});
}

TEST_CASE("tree slices pass the oracle") {
    int checked = 0;
    for (const auto &e : load_corpus()) {
        for (const auto &g : e.goals) {
            auto r = derive(e.program, parse_goal(g));
            if (!r.success()) {
                continue;
            }
            const auto &t = r.solutions.front().tree;
            auto dom = domain_around(t.store());
            if (!dom || dom->hi - dom->lo > 60) {
                continue;
            }
            try {
                if (!satisfiable_finite(t.store(), *dom, OracleOptions{2'000'000})) {
                    continue;
                }
                auto graph = tree_dep_graph(t);
                for (const auto &p : t.positions()) {
                    const auto &info = t.info(p);
                    if (!info.is_variable) {
                        continue;
                    }
                    auto s = positions_to_store(t, tree_slice(t, graph, p).positions);
                    CAPTURE(g);
                    CAPTURE(format_address(p));
                    CHECK(is_slice(t.store(), s, *info.vars.begin(), *dom, OracleOptions{2'000'000}));
                    ++checked;
                }
            } catch (const OracleUnsupported &) {
            }
        }
    }
    CHECK(checked > 100);
}
