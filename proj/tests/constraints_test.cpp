#include "support.hpp"

#include <doctest.h>

using namespace clpslice;
using namespace testing;

namespace {

const char *kExample1Store = "{X-Y=1, X=U, Y=V, U+V=3, Z=42}";

std::map<std::string, std::string> ground_text(const std::string &store) {
    std::map<std::string, std::string> out;
    for (const auto &[v, t] : ground_vars(satisfiable(parse_store(store)))) {
        out[v] = to_string(t);
    }
    return out;
}

std::vector<LinearConstraint> linear_of(const ConstraintStore &c) {
    std::vector<LinearConstraint> out;
    for (const auto &sc : c.constraints) {
        out.push_back(sc.linear());
    }
    return out;
}

} // namespace

TEST_CASE("satisfiable") {
    CHECK(satisfiable(parse_store(kExample1Store)).sat());
    CHECK(satisfiable(parse_store("{}")).sat());
    CHECK_FALSE(satisfiable(parse_store("{X=1, X=2}")).sat());
    CHECK_FALSE(satisfiable(parse_store("{f(X)=g(X)}")).sat());
    CHECK_FALSE(satisfiable(parse_store("{X=f(X)}")).sat());
    CHECK_FALSE(satisfiable(parse_store("{X<Y, Y<Z, Z<X}")).sat());
    CHECK(satisfiable(parse_store("{X<=Y, Y<=Z, Z<=X}")).sat());
    CHECK_FALSE(satisfiable(parse_store("{X=a, X+1=0}")).sat());
    CHECK(satisfiable(parse_store("{f(X,Y)=f(1,Z), Z+X=3}")).sat());
    CHECK_FALSE(satisfiable(parse_store("{X>=2, X<=2, X<2}")).sat());
}

TEST_CASE("solved form invariants") {
    auto s = satisfiable(parse_store("{f(A,B)=f(C,g(D)), C=h(D), X-Y=1, Y+Z=2, X>Z}"));
    REQUIRE(s.sat());
    for (const auto &[v, t] : s.herbrand_bindings) {
        for (const auto &w : t.variables()) {
            CHECK_FALSE(s.herbrand_bindings.contains(w));
        }
    }
    for (const auto &[pivot, form] : s.numeric_solved) {
        for (const auto &[w, k] : form.coeffs) {
            CHECK_FALSE(s.numeric_solved.contains(w));
        }
        for (const auto &r : s.residual) {
            CHECK(r.form.coeff(pivot) == 0);
        }
    }
}

TEST_CASE("ground vars") {
    // X-Y=1, X+Y=3 solved independently
    std::vector<LinearForm> eqs;
    for (const auto &c : parse_store("{X-Y=1, X+Y=3}").constraints) {
        eqs.push_back(c.linear().form);
    }
    auto pins = gauss_pins(eqs);
    REQUIRE(pins.size() == 2);
    auto g = ground_text(kExample1Store);
    CHECK(g == std::map<std::string, std::string>{{"U", to_string(pins["X"])},
                                                  {"V", to_string(pins["Y"])},
                                                  {"X", to_string(pins["X"])},
                                                  {"Y", to_string(pins["Y"])},
                                                  {"Z", "42"}});
    CHECK(ground_text("{Y>X}").empty());
    CHECK(ground_text("{X=3}") == std::map<std::string, std::string>{{"X", "3"}});
    CHECK(ground_text("{X<=2, X>=2}").empty());
    CHECK(ground_text("{X=f(Y), Y=a}") == std::map<std::string, std::string>{{"X", "f(a)"}, {"Y", "a"}});
}

TEST_CASE("ground vars agree with gaussian elimination") {
    Random r(11);
    for (int i = 0; i < 300; ++i) {
        std::vector<std::string> vars{"W", "X", "Y", "Z"};
        std::string text = "{";
        int n = r.range(1, 4);
        for (int k = 0; k < n; ++k) {
            auto c = random_constraint(r, vars, false);
            c = c.substr(0, c.find_first_of("<>=")) + "=" + std::to_string(r.range(-3, 3));
            text += (k ? ", " : "") + c;
        }
        auto store = parse_store(text + "}");
        auto solved = satisfiable(store);
        if (!solved.sat()) {
            continue;
        }
        std::vector<LinearForm> eqs;
        for (const auto &c : store.constraints) {
            eqs.push_back(c.linear().form);
        }
        auto expected = gauss_pins(eqs);
        auto got = ground_vars(solved);
        CAPTURE(text);
        REQUIRE(got.size() == expected.size());
        for (const auto &[v, value] : expected) {
            REQUIRE(got.contains(v));
            CHECK(got.at(v).value == value);
        }
    }
}

TEST_CASE("ground soundness against enumeration") {
    Random r(12);
    int checked = 0;
    for (int i = 0; i < 800; ++i) {
        auto store = random_store(r, 3, 4);
        auto solved = satisfiable(store);
        if (!solved.sat()) {
            continue;
        }
        for (const auto &[v, t] : ground_vars(solved)) {
            auto sol = brute_sol(store, v, -3, 3, store);
            CAPTURE(to_string(store));
            CAPTURE(v);
            if (sol.empty()) {
                continue;
            }
            ++checked;
            REQUIRE(sol.size() == 1);
            CHECK(Rational(sol.begin()->n) == t.value);
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("solver agrees with rational vertex enumeration") {
    Random r(13);
    for (int i = 0; i < 300; ++i) {
        auto store = random_store(r, 4, 5);
        // box [-3,3] on every variable
        auto boxed = store;
        for (const auto &v : store.vars()) {
            auto extra = parse_store("{" + v + ">=-3, " + v + "<=3}");
            boxed.constraints.insert(boxed.constraints.end(), extra.constraints.begin(), extra.constraints.end());
        }
        CAPTURE(to_string(store));
        bool solver = satisfiable(boxed).sat();
        CHECK(solver == vertex_feasible(linear_of(store), 3));
        if (integer_feasible(linear_of(store), 3)) {
            CHECK(solver);
        }
    }
}

TEST_CASE("inequalities feasible") {
    auto lin = [](const std::string &s) { return linear_of(parse_store(s)); };
    CHECK(inequalities_feasible(lin("{X<Y, Y<X+1}")));
    CHECK_FALSE(inequalities_feasible(lin("{X<Y, Y<X}")));
    CHECK(inequalities_feasible({}));
}

TEST_CASE("dependency classes") {
    auto classes = dep_classes(parse_store(kExample1Store));
    CHECK(classes == std::vector<std::set<std::string>>{{"U", "V", "X", "Y"}, {"Z"}});
    CHECK(dep_classes(parse_store("{}")).empty());
    CHECK(dep_classes(parse_store("{X=Y, Y=Z}")) == std::vector<std::set<std::string>>{{"X", "Y", "Z"}});
    CHECK(to_string(class_slice(parse_store(kExample1Store), "X")) == "{X-Y=1, X=U, Y=V, U+V=3}");
    CHECK(to_string(class_slice(parse_store(kExample1Store), "Z")) == "{Z=42}");
    CHECK(to_string(class_slice(parse_store("{X=1}"), "X")) == "{X=1}");
    CHECK_THROWS_AS(class_slice(parse_store("{X=1}"), "Q"), std::invalid_argument);
}

TEST_CASE("dependency classes partition the variables") {
    Random r(14);
    for (int i = 0; i < 200; ++i) {
        auto store = random_store(r, 4, 6);
        auto classes = dep_classes(store);
        std::set<std::string> seen;
        for (const auto &c : classes) {
            for (const auto &v : c) {
                CHECK(seen.insert(v).second);
            }
        }
        CHECK(seen == store.vars());
        for (const auto &sc : store.constraints) {
            auto vs = sc.variables();
            if (vs.empty()) {
                continue;
            }
            auto owner = std::find_if(classes.begin(), classes.end(), [&](const auto &c) { return c.contains(*vs.begin()); });
            for (const auto &v : vs) {
                CHECK(owner->contains(v));
            }
        }
    }
}

TEST_CASE("store parsing and subsets") {
    auto c = parse_store("{X+1=0, Y>X, f(A)=f(b)}");
    REQUIRE(c.size() == 3);
    CHECK(c.constraints[0].is_numeric());
    CHECK_FALSE(c.constraints[2].is_numeric());
    CHECK(c.vars() == std::set<std::string>{"A", "X", "Y"});
    CHECK(to_string(c.subset({0, 2})) == "{X+1=0, f(A)=f(b)}");
    CHECK(c.indices_of(parse_store("{Y>X}")) == std::set<std::size_t>{1});
    CHECK_FALSE(c.indices_of(parse_store("{Y>=X}")).has_value());
}
