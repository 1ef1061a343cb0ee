// Shared helpers for the test binaries: corpus access, random generators and
// brute-force reference implementations that do not use the library's solvers.
#pragma once

#include "clpslice/constraints.hpp"
#include "clpslice/depgraph.hpp"
#include "clpslice/directional.hpp"
#include "clpslice/engine.hpp"
#include "clpslice/oracle.hpp"
#include "clpslice/syntax.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace testing {

using namespace clpslice;

inline std::string corpus_path(const std::string &file) { return std::string(CLPSLICE_CORPUS_DIR) + "/" + file; }

inline std::string read_text(const std::string &path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CorpusEntry {
    std::string name;
    Program program;
    std::vector<std::string> goals;
};

inline const std::vector<std::string> &corpus_names() {
    static const std::vector<std::string> names{"example1", "example5", "integer", "fib", "sum",
                                                "mortgage", "lsum", "path", "lightmeal", "circuit"};
    return names;
}

inline std::vector<std::string> corpus_text() {
    std::vector<std::string> out;
    for (const auto &name : corpus_names()) {
        out.push_back(read_text(corpus_path(name + ".clp")));
    }
    return out;
}

inline std::vector<CorpusEntry> load_corpus() {
    std::vector<CorpusEntry> out;
    for (const auto &name : corpus_names()) {
        CorpusEntry e;
        e.name = name;
        e.program = parse_program(read_text(corpus_path(name + ".clp")));
        std::istringstream goals(read_text(corpus_path(name + ".goals")));
        for (std::string line; std::getline(goals, line);) {
            if (line.find_first_not_of(" \t\r") != std::string::npos && line[0] != '%') {
                e.goals.push_back(line);
            }
        }
        out.push_back(std::move(e));
    }
    return out;
}

//! Constraint texts with the goal-to-head equations X#0=X#k collapsed (the goal variable
//! renamed to the head variable) and every "#tag" stripped.
inline std::vector<std::string> collapsed_texts(const ConstraintStore &store) {
    std::map<std::string, std::string> rename;
    std::vector<const StoreConstraint *> kept;
    auto is_goal_var = [](const std::string &v) { return v.size() > 2 && v.ends_with("#0"); };
    for (const auto &sc : store.constraints) {
        if (!sc.is_numeric() && sc.term_equation().lhs.is_variable() && sc.term_equation().rhs.is_variable()) {
            const auto &l = sc.term_equation().lhs.name;
            const auto &r = sc.term_equation().rhs.name;
            if (is_goal_var(l) && !rename.contains(l)) {
                rename[l] = r;
                continue;
            }
        }
        kept.push_back(&sc);
    }
    static const std::regex goal_var("[A-Z_][A-Za-z0-9_]*#0\\b");
    static const std::regex tag("#[0-9]+");
    std::vector<std::string> out;
    for (const auto *sc : kept) {
        std::string text;
        auto it = std::sregex_iterator(sc->text.begin(), sc->text.end(), goal_var);
        std::size_t last = 0;
        for (; it != std::sregex_iterator(); ++it) {
            auto m = *it;
            text += sc->text.substr(last, static_cast<std::size_t>(m.position()) - last);
            auto found = rename.find(m.str());
            text += found == rename.end() ? m.str() : found->second;
            last = static_cast<std::size_t>(m.position() + m.length());
        }
        text += sc->text.substr(last);
        out.push_back(std::regex_replace(text, tag, ""));
    }
    return out;
}

// {{{1 brute-force evaluation

//! Value of a variable during enumeration: an integer or an atom name.
struct Val {
    bool is_int = true;
    long n = 0;
    std::string atom;
    bool operator==(const Val &) const = default;
    bool operator<(const Val &o) const {
        return std::tie(is_int, n, atom) < std::tie(o.is_int, o.n, o.atom);
    }
};

inline std::optional<Val> eval_flat(const Term &t, const std::map<std::string, Val> &env) {
    if (t.is_variable()) {
        return env.at(t.name);
    }
    if (t.is_number()) {
        if (t.value.get_den() != 1) {
            return std::nullopt;
        }
        return Val{true, t.value.get_num().get_si(), ""};
    }
    return Val{false, 0, t.name};
}

inline bool terms_equal(const Term &a, const Term &b, const std::map<std::string, Val> &env) {
    if (a.is_compound() && b.is_compound() && !(a.args.empty() && b.args.empty())) {
        if (a.name != b.name || a.args.size() != b.args.size()) {
            return false;
        }
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            if (!terms_equal(a.args[i], b.args[i], env)) {
                return false;
            }
        }
        return true;
    }
    auto va = eval_flat(a, env);
    auto vb = eval_flat(b, env);
    return va && vb && *va == *vb;
}

inline bool holds(const StoreConstraint &c, const std::map<std::string, Val> &env) {
    if (!c.is_numeric()) {
        return terms_equal(c.term_equation().lhs, c.term_equation().rhs, env);
    }
    Rational sum = c.linear().form.constant;
    for (const auto &[var, coeff] : c.linear().form.coeffs) {
        const auto &v = env.at(var);
        if (!v.is_int) {
            return false;
        }
        sum += coeff * v.n;
    }
    switch (c.linear().sense) {
        case Sense::Eq: return sum == 0;
        case Sense::Lt: return sum < 0;
        case Sense::Le: return sum <= 0;
    }
    return false;
}

inline void collect_atoms(const Term &t, std::set<std::string> &out) {
    if (t.is_compound() && t.args.empty()) {
        out.insert(t.name);
    }
    for (const auto &a : t.args) {
        collect_atoms(a, out);
    }
}

//! Plain nested enumeration of every valuation of vars(c) (plus x) over lo..hi and the
//! atoms of `domain_of`. Only for small stores.
inline std::set<Val> brute_sol(const ConstraintStore &c, const std::string &x, long lo, long hi,
                               const ConstraintStore &domain_of) {
    std::set<std::string> atoms;
    for (const auto &sc : domain_of.constraints) {
        if (!sc.is_numeric()) {
            collect_atoms(sc.term_equation().lhs, atoms);
            collect_atoms(sc.term_equation().rhs, atoms);
        }
    }
    std::vector<Val> values;
    for (long v = lo; v <= hi; ++v) {
        values.push_back(Val{true, v, ""});
    }
    for (const auto &a : atoms) {
        values.push_back(Val{false, 0, a});
    }
    auto vs = c.vars();
    vs.insert(x);
    std::vector<std::string> vars(vs.begin(), vs.end());
    std::set<Val> out;
    std::map<std::string, Val> env;
    std::vector<std::size_t> idx(vars.size(), 0);
    while (true) {
        for (std::size_t i = 0; i < vars.size(); ++i) {
            env[vars[i]] = values[idx[i]];
        }
        if (std::all_of(c.constraints.begin(), c.constraints.end(), [&](const auto &sc) { return holds(sc, env); })) {
            out.insert(env.at(x));
        }
        std::size_t k = 0;
        while (k < vars.size() && ++idx[k] == values.size()) {
            idx[k++] = 0;
        }
        if (k == vars.size()) {
            break;
        }
    }
    return out;
}

inline std::set<Val> to_vals(const SolutionSet &s) {
    std::set<Val> out;
    for (const auto &t : s.values) {
        out.insert(t.is_number() ? Val{true, t.value.get_num().get_si(), ""} : Val{false, 0, t.name});
    }
    return out;
}

//! Integer domain covering every ground numeric value of the store with a small margin;
//! nothing when some ground value is not an integer.
inline std::optional<IntDomain> domain_around(const ConstraintStore &store) {
    auto solved = satisfiable(store);
    long lo = -2;
    long hi = 2;
    for (const auto &[v, t] : ground_vars(solved)) {
        if (!t.is_number()) {
            continue;
        }
        if (t.value.get_den() != 1) {
            return std::nullopt;
        }
        long n = t.value.get_num().get_si();
        lo = std::min(lo, n - 2);
        hi = std::max(hi, n + 2);
    }
    return IntDomain{lo, hi};
}

// {{{1 dense exact linear algebra

using Row = std::vector<Rational>;

//! Solves A x = b by Gauss-Jordan; nothing if singular.
inline std::optional<Row> solve_square(std::vector<Row> a, Row b) {
    auto n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) {
            ++piv;
        }
        if (piv == n) {
            return std::nullopt;
        }
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) {
                continue;
            }
            Rational f = a[r][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) {
                a[r][k] -= f * a[col][k];
            }
            b[r] -= f * b[col];
        }
    }
    Row x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = b[i] / a[i][i];
    }
    return x;
}

//! Variables whose value is the same in every solution of the equality system
//! (reduced row echelon form, rows with a single non-zero coefficient).
inline std::map<std::string, Rational> gauss_pins(const std::vector<LinearForm> &equations) {
    std::set<std::string> names;
    for (const auto &e : equations) {
        for (const auto &[v, c] : e.coeffs) {
            names.insert(v);
        }
    }
    std::vector<std::string> vars(names.begin(), names.end());
    std::vector<Row> m;
    for (const auto &e : equations) {
        Row r(vars.size() + 1);
        for (std::size_t i = 0; i < vars.size(); ++i) {
            r[i] = e.coeff(vars[i]);
        }
        r[vars.size()] = -e.constant;
        m.push_back(r);
    }
    std::size_t row = 0;
    for (std::size_t col = 0; col < vars.size() && row < m.size(); ++col) {
        std::size_t piv = row;
        while (piv < m.size() && m[piv][col] == 0) {
            ++piv;
        }
        if (piv == m.size()) {
            continue;
        }
        std::swap(m[piv], m[row]);
        Rational p = m[row][col];
        for (auto &x : m[row]) {
            x /= p;
        }
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r != row && m[r][col] != 0) {
                Rational f = m[r][col];
                for (std::size_t k = 0; k <= vars.size(); ++k) {
                    m[r][k] -= f * m[row][k];
                }
            }
        }
        ++row;
    }
    std::map<std::string, Rational> out;
    for (const auto &r : m) {
        std::size_t nz = 0;
        std::size_t at = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (r[i] != 0) {
                ++nz;
                at = i;
            }
        }
        if (nz == 1) {
            out[vars[at]] = r[vars.size()];
        }
    }
    return out;
}

//! Rational feasibility of linear constraints inside the box [-b,b]^n, by enumerating the
//! vertices of {(x,t) : a.x + t <= c for strict rows, a.x <= c otherwise, t <= 1} and
//! checking whether the largest t is positive.
inline bool vertex_feasible(const std::vector<LinearConstraint> &cs, long box) {
    std::set<std::string> names;
    for (const auto &c : cs) {
        for (const auto &[v, k] : c.form.coeffs) {
            names.insert(v);
        }
    }
    std::vector<std::string> vars(names.begin(), names.end());
    auto n = vars.size();
    auto d = n + 1;
    struct Ineq {
        Row a; // coefficients over (x..., t)
        Rational c;
        bool eq = false;
    };
    std::vector<Ineq> rows;
    for (const auto &con : cs) {
        Ineq r{Row(d), -con.form.constant, con.sense == Sense::Eq};
        for (std::size_t i = 0; i < n; ++i) {
            r.a[i] = con.form.coeff(vars[i]);
        }
        if (con.sense == Sense::Lt) {
            r.a[n] = 1;
        }
        if (std::all_of(r.a.begin(), r.a.end(), [](const Rational &x) { return x == 0; })) {
            bool ok = con.sense == Sense::Eq ? r.c == 0 : (con.sense == Sense::Lt ? r.c > 0 : r.c >= 0);
            if (!ok) {
                return false;
            }
            continue;
        }
        rows.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < n; ++i) {
        Ineq up{Row(d), Rational(box)};
        up.a[i] = 1;
        Ineq dn{Row(d), Rational(box)};
        dn.a[i] = -1;
        rows.push_back(up);
        rows.push_back(dn);
    }
    Ineq tcap{Row(d), Rational(1)};
    tcap.a[n] = 1;
    rows.push_back(tcap);

    std::vector<std::size_t> forced;
    std::vector<std::size_t> optional;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        (rows[i].eq ? forced : optional).push_back(i);
    }
    if (forced.size() > d) {
        // More equalities than dimensions: pick any d of them plus a consistency check below.
    }
    std::optional<Rational> best;
    auto feasible_point = [&](const Row &x) {
        for (const auto &r : rows) {
            Rational lhs = 0;
            for (std::size_t i = 0; i < d; ++i) {
                lhs += r.a[i] * x[i];
            }
            if (r.eq ? lhs != r.c : lhs > r.c) {
                return false;
            }
        }
        return true;
    };
    std::vector<std::size_t> all(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        all[i] = i;
    }
    std::vector<bool> pick(rows.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(std::min(d, rows.size())), true);
    do {
        std::vector<Row> a;
        Row b;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (pick[i]) {
                a.push_back(rows[i].a);
                b.push_back(rows[i].c);
            }
        }
        if (a.size() != d) {
            break;
        }
        auto x = solve_square(a, b);
        if (x && feasible_point(*x) && (!best || (*x)[n] > *best)) {
            best = (*x)[n];
        }
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return best && *best > 0;
}

//! Satisfiability over the integers of [-b,b] by enumeration.
inline bool integer_feasible(const std::vector<LinearConstraint> &cs, long box) {
    ConstraintStore store;
    for (const auto &c : cs) {
        StoreConstraint sc;
        sc.body = c;
        store.constraints.push_back(sc);
    }
    auto vs = store.vars();
    if (vs.empty()) {
        std::map<std::string, Val> env;
        return std::all_of(store.constraints.begin(), store.constraints.end(), [&](const auto &c) { return holds(c, env); });
    }
    return !brute_sol(store, *vs.begin(), -box, box, store).empty();
}

// {{{1 random generation

class Random {
public:
    explicit Random(unsigned seed) : rng_(seed) {}
    int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
    template <class T>
    const T &pick(const std::vector<T> &v) {
        return v[static_cast<std::size_t>(range(0, static_cast<int>(v.size()) - 1))];
    }

private:
    std::mt19937 rng_;
};

//! Random linear constraint text over the given variables, e.g. "2*X-Y<=3".
inline std::string random_constraint(Random &r, const std::vector<std::string> &vars, bool allow_strict = true) {
    std::string out;
    int terms = r.range(1, std::min<int>(3, static_cast<int>(vars.size())));
    std::vector<std::string> pool = vars;
    for (int i = 0; i < terms; ++i) {
        auto idx = static_cast<std::size_t>(r.range(0, static_cast<int>(pool.size()) - 1));
        auto var = pool[idx];
        pool.erase(pool.begin() + static_cast<long>(idx));
        int coeff = r.pick(std::vector<int>{-2, -1, 1, 1, 2});
        if (coeff < 0) {
            out += "-";
        } else if (i > 0) {
            out += "+";
        }
        if (std::abs(coeff) != 1) {
            out += std::to_string(std::abs(coeff)) + "*";
        }
        out += var;
    }
    std::vector<std::string> rels = allow_strict ? std::vector<std::string>{"=", "=", "<=", ">=", "<", ">"}
                                                 : std::vector<std::string>{"=", "=", "<=", ">="};
    return out + r.pick(rels) + std::to_string(r.range(-3, 3));
}

inline ConstraintStore random_store(Random &r, int max_vars, int max_constraints, bool allow_strict = true) {
    std::vector<std::string> all{"W", "X", "Y", "Z"};
    std::vector<std::string> vars(all.begin(), all.begin() + r.range(1, max_vars));
    std::string text = "{";
    int n = r.range(1, max_constraints);
    for (int i = 0; i < n; ++i) {
        text += (i ? ", " : "") + random_constraint(r, vars, allow_strict);
    }
    return parse_store(text + "}");
}

//! Random acyclic program p0 -> p1 -> p2 with at most 4 variables per clause and at most
//! 6 constraints in the whole program. Arguments are variables or small integers.
inline std::string random_program(Random &r) {
    std::vector<std::string> pool{"A", "B", "C", "D"};
    std::ostringstream out;
    const int preds = 3;
    std::vector<int> arity(preds);
    for (auto &a : arity) {
        a = r.range(1, 3);
    }
    int budget = 6;
    for (int p = 0; p < preds; ++p) {
        int clauses = r.range(1, 2);
        for (int k = 0; k < clauses; ++k) {
            std::vector<std::string> vars(pool.begin(), pool.begin() + r.range(1, 4));
            out << "p" << p << "(";
            for (int i = 0; i < arity[p]; ++i) {
                out << (i ? "," : "");
                if (r.chance(0.15)) {
                    out << r.range(-2, 2);
                } else {
                    out << r.pick(vars);
                }
            }
            out << ")";
            std::vector<std::string> body;
            int constraints = std::min(budget, r.range(0, 3));
            budget -= constraints;
            for (int c = 0; c < constraints; ++c) {
                body.push_back("{" + random_constraint(r, vars) + "}");
            }
            if (p + 1 < preds) {
                int calls = r.range(0, 2);
                for (int c = 0; c < calls; ++c) {
                    int q = r.range(p + 1, preds - 1);
                    std::string call = "p" + std::to_string(q) + "(";
                    for (int i = 0; i < arity[q]; ++i) {
                        call += (i ? "," : "") + r.pick(vars);
                    }
                    body.push_back(call + ")");
                }
            }
            std::shuffle(body.begin(), body.end(), std::mt19937(static_cast<unsigned>(r.range(0, 1 << 20))));
            for (std::size_t i = 0; i < body.size(); ++i) {
                out << (i ? ", " : " :- ") << body[i];
            }
            out << ".\n";
        }
    }
    out << "% goal\n";
    return out.str();
}

inline std::string random_goal(const std::string &program) {
    auto p = parse_program(program);
    const auto &head = *p.clauses.front().head;
    std::string goal = "p0(";
    const char *names[] = {"X", "Y", "Z"};
    for (std::size_t i = 0; i < head.arity(); ++i) {
        goal += std::string(i ? "," : "") + names[i];
    }
    return goal + ").";
}

} // namespace testing
