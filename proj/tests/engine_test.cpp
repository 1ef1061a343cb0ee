#include "support.hpp"

#include <doctest.h>

using namespace clpslice;
using namespace testing;

namespace {

const char *kExample1 = "p(X,Y,Z) :- {X-Y=1}, q(X,Y), r(Z).\nq(U,V) :- {U+V=3}.\nr(42).\n";

std::string strip_tags(const std::string &s) { return std::regex_replace(s, std::regex("#[0-9]+"), ""); }

std::set<std::string> as_set(const std::vector<std::string> &v) { return {v.begin(), v.end()}; }

std::set<TreePosition> positions_of_literal(const DerivationTree &t, std::size_t node, std::size_t literal) {
    std::set<TreePosition> out;
    for (const auto &p : t.positions()) {
        if (p.node == node && p.local.literal == literal) {
            out.insert(p);
        }
    }
    return out;
}

} // namespace

TEST_CASE("example 1 proof tree") {
    auto d = first_proof(parse_program(kExample1), parse_goal("p(X,Y,Z)."));
    const auto &t = d.tree;
    REQUIRE(t.size() == 4);
    CHECK(t.complete());
    CHECK(t.node(0).is_root());
    CHECK(t.node(1).clause == 0u);
    CHECK(t.node(2).clause == 1u);
    CHECK(t.node(3).clause == 2u);
    CHECK(t.node(1).children == std::vector<std::size_t>{2, 3});
    CHECK(as_set(collapsed_texts(t.store())) == std::set<std::string>{"X-Y=1", "X=U", "Y=V", "U+V=3", "Z=42"});
    CHECK(satisfiable(t.store()).sat());
}

TEST_CASE("derived stores are satisfiable") {
    for (const auto &e : load_corpus()) {
        for (const auto &g : e.goals) {
            auto r = derive(e.program, parse_goal(g), DeriveOptions{64, 3, 200000});
            for (const auto &d : r.solutions) {
                CAPTURE(g);
                CHECK(satisfiable(d.tree.store()).sat());
            }
        }
    }
    // small integer programs also through enumeration
    for (const char *src : {kExample1, "p(X,Y) :- {X+1=0, Y>X}.", "p(X,Y) :- r(X), q(X,Y).\nr(3).\nq(U,V) :- {U+V=5}."}) {
        auto p = parse_program(src);
        auto goal = parse_goal(p.clauses[0].head->arity() == 3 ? "p(X,Y,Z)." : "p(X,Y).");
        auto d = first_proof(p, goal);
        CHECK(satisfiable_finite(d.tree.store(), {-5, 45}));
    }
}

TEST_CASE("node equation count") {
    for (const auto &e : load_corpus()) {
        for (const auto &g : e.goals) {
            auto r = derive(e.program, parse_goal(g));
            if (!r.success()) {
                continue;
            }
            const auto &t = r.solutions.front().tree;
            std::size_t expected = 0;
            for (const auto &n : t.nodes()) {
                if (!n.is_root() && !n.incomplete) {
                    expected += n.label.head->arity();
                }
            }
            std::size_t clause_constraints = 0;
            for (const auto &n : t.nodes()) {
                for (const auto &item : n.label.body) {
                    clause_constraints += item.is_constraint() ? 1 : 0;
                }
            }
            CHECK(t.store().size() == expected + clause_constraints);
        }
    }
}

TEST_CASE("phi naturality") {
    for (const auto &e : load_corpus()) {
        for (const auto &g : e.goals) {
            auto goal = parse_goal(g);
            auto r = derive(e.program, goal);
            if (!r.success()) {
                continue;
            }
            const auto &t = r.solutions.front().tree;
            for (const auto &pos : t.positions()) {
                auto q = t.phi(pos);
                const auto &clause = clause_at(e.program, goal, q);
                CHECK(strip_tags(t.info(pos).text) == strip_tags(element_at(clause, q.local).text()));
            }
        }
    }
}

TEST_CASE("determinism") {
    for (const auto &e : load_corpus()) {
        for (const auto &g : e.goals) {
            auto a = derive(e.program, parse_goal(g), DeriveOptions{64, 2, 200000});
            auto b = derive(e.program, parse_goal(g), DeriveOptions{64, 2, 200000});
            REQUIRE(a.solutions.size() == b.solutions.size());
            CHECK(a.steps == b.steps);
            for (std::size_t i = 0; i < a.solutions.size(); ++i) {
                CHECK(to_string(a.solutions[i].tree) == to_string(b.solutions[i].tree));
                CHECK(to_string(a.solutions[i].tree.store()) == to_string(b.solutions[i].tree.store()));
                const auto &la = a.solutions[i].log;
                const auto &lb = b.solutions[i].log;
                REQUIRE(la.calls.size() == lb.calls.size());
                for (std::size_t k = 0; k < la.calls.size(); ++k) {
                    CHECK(la.calls[k].ground_at_call == lb.calls[k].ground_at_call);
                    CHECK(la.calls[k].ground_at_success == lb.calls[k].ground_at_success);
                    CHECK(la.calls[k].determined_by_subtree == lb.calls[k].determined_by_subtree);
                }
            }
        }
    }
}

TEST_CASE("backtracking and multiple solutions") {
    auto p = parse_program("c(1).\nc(2).\nc(3).\nt(X) :- c(X), {X>=2}.\n");
    auto r = derive(p, parse_goal("t(X)."), DeriveOptions{64, 5, 200000});
    REQUIRE(r.solutions.size() == 2);
    auto g0 = ground_vars(satisfiable(r.solutions[0].tree.store()));
    auto g1 = ground_vars(satisfiable(r.solutions[1].tree.store()));
    CHECK(to_string(g0.at("X#0")) == "2");
    CHECK(to_string(g1.at("X#0")) == "3");
}

TEST_CASE("no proof tree") {
    auto loop = parse_program("p :- p.");
    auto r = derive(loop, parse_goal("p."), DeriveOptions{10, 1, 200000});
    CHECK_FALSE(r.success());
    CHECK(r.depth_limit_hit);
    REQUIRE(r.deepest.has_value());
    CHECK_FALSE(r.deepest->complete());
    CHECK_THROWS_AS(first_proof(loop, parse_goal("p."), DeriveOptions{10, 1, 200000}), NoSolution);

    auto unsat = parse_program("p(X,Y) :- {X>Y, Y>X}.");
    try {
        first_proof(unsat, parse_goal("p(A,B)."));
        FAIL("expected NoSolution");
    } catch (const NoSolution &e) {
        CHECK(e.deepest().has_value());
    }
}

TEST_CASE("psi and positions_to_store") {
    auto d = first_proof(parse_program(kExample1), parse_goal("p(X,Y,Z)."));
    const auto &t = d.tree;
    // q(X,Y) is literal 2 of node 1
    auto q = positions_of_literal(t, 1, 2);
    REQUIRE(q.size() == 3);
    CHECK(as_set(collapsed_texts(positions_to_store(t, q))) == std::set<std::string>{"X-Y=1", "X=U", "Y=V"});
    CHECK(positions_to_store(t, {}).empty());
    std::set<TreePosition> all(t.positions().begin(), t.positions().end());
    CHECK(positions_to_store(t, all).size() == t.store().size());
}

TEST_CASE("origin_store") {
    auto d = first_proof(parse_program(kExample1), parse_goal("p(X,Y,Z)."));
    const auto &t = d.tree;
    // the 42 argument of r(42) in node 3 and the r(Z) call argument in node 1
    auto s = origin_store(t, {TreePosition{3, {0, {1}}}});
    REQUIRE(s.size() == 1);
    CHECK(strip_tags(s.constraints[0].text) == "Z=42");
    auto c = origin_store(t, {TreePosition{1, {1, {2}}}});
    REQUIRE(c.size() == 1);
    CHECK(strip_tags(c.constraints[0].text) == "X-Y=1");
}

TEST_CASE("phi inverse") {
    auto p = parse_program(kExample1);
    auto goal = parse_goal("p(X,Y,Z).");
    auto d = first_proof(p, goal);
    auto inst = phi_inverse(p, goal, d.tree, position_of(p, goal, "1/0/1"));
    CHECK(inst == std::set<TreePosition>{TreePosition{2, {0, {1}}}});
    auto rec = parse_program("n(0).\nn(X) :- {X>0, Y=X-1}, n(Y).\n");
    auto goal2 = parse_goal("n(3).");
    auto d2 = first_proof(rec, goal2);
    CHECK(phi_inverse(rec, goal2, d2.tree, position_of(rec, goal2, "1/0/1")).size() == 3);
    CHECK(phi_inverse(rec, goal2, d2.tree, position_of(rec, goal2, "0/0/1")).size() == 1);
}

TEST_CASE("tree rendering") {
    auto d = first_proof(parse_program(kExample1), parse_goal("p(X,Y,Z)."));
    auto text = to_string(d.tree);
    CHECK(text.find("q(U#2,V#2)") != std::string::npos);
    CHECK(text.find("r(42)") != std::string::npos);
}
