#include "clpslice/constraints.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace clpslice {

// {{{1 stores

StoreConstraint StoreConstraint::numeric(const ConstraintExpr &expr, std::set<TreePosition> origin) {
    StoreConstraint c;
    c.body = expr.linearize();
    c.text = to_string(expr);
    c.origin = std::move(origin);
    return c;
}

StoreConstraint StoreConstraint::equation(Term lhs, Term rhs, std::set<TreePosition> origin) {
    StoreConstraint c;
    c.text = to_string(lhs) + "=" + to_string(rhs);
    c.body = TermEquation{std::move(lhs), std::move(rhs)};
    c.origin = std::move(origin);
    return c;
}

std::set<std::string> StoreConstraint::variables() const {
    if (is_numeric()) {
        return linear().form.variables();
    }
    std::set<std::string> out;
    term_equation().lhs.collect_variables(out);
    term_equation().rhs.collect_variables(out);
    return out;
}

std::set<std::string> ConstraintStore::vars() const {
    std::set<std::string> out;
    for (const auto &c : constraints) {
        auto vs = c.variables();
        out.insert(vs.begin(), vs.end());
    }
    return out;
}

ConstraintStore ConstraintStore::subset(const std::set<std::size_t> &indices) const {
    ConstraintStore out;
    for (auto i : indices) {
        out.constraints.push_back(constraints.at(i));
    }
    return out;
}

std::optional<std::set<std::size_t>> ConstraintStore::indices_of(const ConstraintStore &sub) const {
    std::set<std::size_t> out;
    for (const auto &c : sub.constraints) {
        bool found = false;
        for (std::size_t i = 0; i < constraints.size(); ++i) {
            if (!out.contains(i) && constraints[i] == c) {
                out.insert(i);
                found = true;
                break;
            }
        }
        if (!found) {
            return std::nullopt;
        }
    }
    return out;
}

std::string to_string(const ConstraintStore &store) {
    std::string out = "{";
    for (std::size_t i = 0; i < store.constraints.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += store.constraints[i].text;
    }
    return out + "}";
}

namespace {

std::vector<std::string> split_top_level(std::string_view text) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : text) {
        if (c == '(' || c == '[') {
            ++depth;
        } else if (c == ')' || c == ']') {
            --depth;
        }
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (cur.find_first_not_of(" \t\r\n") != std::string::npos) {
        out.push_back(cur);
    } else if (!out.empty()) {
        throw SyntaxError("empty item in constraint store", 0, 0);
    }
    return out;
}

//! Index of a top-level "=" that is not part of "<=", ">=" or "=<".
std::size_t find_equals(std::string_view text) {
    int depth = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '(' || c == '[') {
            ++depth;
        } else if (c == ')' || c == ']') {
            --depth;
        } else if (c == '=' && depth == 0) {
            bool prev = i > 0 && (text[i - 1] == '<' || text[i - 1] == '>');
            bool next = i + 1 < text.size() && text[i + 1] == '<';
            if (!prev && !next) {
                return i;
            }
        }
    }
    return std::string_view::npos;
}

} // namespace

ConstraintStore parse_store(std::string_view text) {
    auto first = text.find_first_not_of(" \t\r\n");
    auto last = text.find_last_not_of(" \t\r\n");
    if (first == std::string_view::npos || text[first] != '{' || text[last] != '}') {
        throw SyntaxError("constraint store must be written as {c1, c2, ...}", 0, 0);
    }
    ConstraintStore store;
    for (const auto &item : split_top_level(text.substr(first + 1, last - first - 1))) {
        try {
            store.constraints.push_back(StoreConstraint::numeric(parse_constraint(item)));
        } catch (const NonlinearError &) {
            throw;
        } catch (const SyntaxError &err) {
            auto eq = find_equals(item);
            if (eq == std::string_view::npos) {
                throw;
            }
            store.constraints.push_back(
                StoreConstraint::equation(parse_term(item.substr(0, eq)), parse_term(item.substr(eq + 1))));
        }
    }
    return store;
}

// {{{1 Fourier-Motzkin

namespace {

struct Inequality {
    LinearForm form;
    bool strict = false;
};

//! Scale so the first coefficient is +1 or -1; keeps the inequality direction.
LinearForm normalized(LinearForm form) {
    if (!form.coeffs.empty()) {
        Rational s = abs(form.coeffs.begin()->second);
        form.scale(1 / s);
    }
    return form;
}

class InequalitySet {
public:
    //! Returns false on a trivially false constant inequality.
    bool insert(LinearForm form, bool strict) {
        if (form.is_constant()) {
            return strict ? form.constant < 0 : form.constant <= 0;
        }
        form = normalized(std::move(form));
        auto key = to_string(form);
        auto [it, inserted] = items_.emplace(key, Inequality{std::move(form), strict});
        if (!inserted) {
            it->second.strict = it->second.strict || strict;
        }
        return true;
    }

    [[nodiscard]] bool empty() const { return items_.empty(); }
    [[nodiscard]] const std::map<std::string, Inequality> &items() const { return items_; }

private:
    std::map<std::string, Inequality> items_;
};

} // namespace

bool inequalities_feasible(const std::vector<LinearConstraint> &constraints) {
    InequalitySet current;
    for (const auto &c : constraints) {
        if (c.sense == Sense::Eq) {
            if (!current.insert(c.form, false)) {
                return false;
            }
            auto neg = c.form;
            neg.scale(-1);
            if (!current.insert(neg, false)) {
                return false;
            }
        } else if (!current.insert(c.form, c.sense == Sense::Lt)) {
            return false;
        }
    }
    while (!current.empty()) {
        std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
        for (const auto &[key, ineq] : current.items()) {
            for (const auto &[var, coeff] : ineq.form.coeffs) {
                auto &entry = counts[var];
                (coeff > 0 ? entry.first : entry.second) += 1;
            }
        }
        std::string pick;
        std::size_t best = 0;
        for (const auto &[var, pn] : counts) {
            auto cost = pn.first * pn.second;
            if (pick.empty() || cost < best) {
                pick = var;
                best = cost;
            }
        }
        std::vector<const Inequality *> pos;
        std::vector<const Inequality *> neg;
        InequalitySet next;
        for (const auto &[key, ineq] : current.items()) {
            auto c = ineq.form.coeff(pick);
            if (c > 0) {
                pos.push_back(&ineq);
            } else if (c < 0) {
                neg.push_back(&ineq);
            } else {
                next.insert(ineq.form, ineq.strict);
            }
        }
        for (const auto *p : pos) {
            for (const auto *n : neg) {
                LinearForm combined = p->form;
                combined.scale(1 / p->form.coeff(pick));
                combined.add(n->form, 1 / abs(n->form.coeff(pick)));
                if (!next.insert(std::move(combined), p->strict || n->strict)) {
                    return false;
                }
            }
        }
        current = std::move(next);
    }
    return true;
}

// {{{1 solver

const Term &Solver::walk(const Term &t) const {
    const Term *cur = &t;
    while (cur->is_variable()) {
        auto it = bindings_.find(cur->name);
        if (it == bindings_.end()) {
            break;
        }
        cur = &it->second;
    }
    return *cur;
}

Term Solver::resolve(const Term &t) const {
    const Term &w = walk(t);
    if (!w.is_compound() || w.args.empty()) {
        return w;
    }
    Term out = w;
    for (auto &arg : out.args) {
        arg = resolve(arg);
    }
    return out;
}

bool Solver::occurs(const std::string &var, const Term &t) const {
    const Term &w = walk(t);
    if (w.is_variable()) {
        return w.name == var;
    }
    return std::any_of(w.args.begin(), w.args.end(), [&](const Term &arg) { return occurs(var, arg); });
}

void Solver::make_numeric(const std::string &var) { numeric_.insert(var); }

void Solver::bind(const std::string &var, const Term &t) {
    if (t.is_variable()) {
        bool v_num = numeric_.contains(var);
        bool w_num = numeric_.contains(t.name);
        if (v_num && !w_num) {
            bindings_.emplace(t.name, Term::variable(var));
            return;
        }
        bindings_.emplace(var, t);
        if (v_num && w_num) {
            LinearForm f;
            f.add_term(var, 1);
            f.add_term(t.name, -1);
            numeric_eq(std::move(f));
        }
        return;
    }
    if (t.is_number()) {
        bindings_.emplace(var, t);
        if (numeric_.contains(var)) {
            LinearForm f;
            f.add_term(var, 1);
            f.constant = -t.value;
            numeric_eq(std::move(f));
        }
        return;
    }
    if (numeric_.contains(var) || occurs(var, t)) {
        unsat_ = true;
        return;
    }
    bindings_.emplace(var, t);
}

void Solver::unify(const Term &a_in, const Term &b_in) {
    if (unsat_) {
        return;
    }
    Term a = walk(a_in);
    Term b = walk(b_in);
    if (a.is_variable() && b.is_variable() && a.name == b.name) {
        return;
    }
    if (a.is_variable()) {
        bind(a.name, b);
        return;
    }
    if (b.is_variable()) {
        bind(b.name, a);
        return;
    }
    if (a.is_number() || b.is_number()) {
        if (!(a.is_number() && b.is_number() && a.value == b.value)) {
            unsat_ = true;
        }
        return;
    }
    if (a.name != b.name || a.args.size() != b.args.size()) {
        unsat_ = true;
        return;
    }
    for (std::size_t i = 0; i < a.args.size() && !unsat_; ++i) {
        unify(a.args[i], b.args[i]);
    }
}

LinearForm Solver::reduce(const LinearForm &form) const {
    LinearForm out = form;
    for (const auto &[var, coeff] : form.coeffs) {
        auto it = rows_.find(var);
        if (it != rows_.end()) {
            out.substitute(var, it->second);
        }
    }
    return out;
}

std::optional<LinearForm> Solver::numeric_form(const LinearForm &form) {
    LinearForm out;
    out.constant = form.constant;
    for (const auto &[var, coeff] : form.coeffs) {
        const Term &w = walk(Term::variable(var));
        if (w.is_number()) {
            out.constant += coeff * w.value;
        } else if (w.is_variable()) {
            make_numeric(w.name);
            out.add_term(w.name, coeff);
        } else {
            return std::nullopt;
        }
    }
    return out;
}

void Solver::numeric_eq(LinearForm form) {
    form = reduce(form);
    if (form.is_constant()) {
        if (form.constant != 0) {
            unsat_ = true;
        }
        return;
    }
    auto [pivot, c] = *form.coeffs.begin();
    form.coeffs.erase(form.coeffs.begin());
    form.scale(-1 / c);
    for (auto &[var, row] : rows_) {
        row.substitute(pivot, form);
    }
    rows_.emplace(pivot, std::move(form));
    if (!inequalities_.empty()) {
        checked_ = false;
    }
}

void Solver::add_equation(const Term &lhs, const Term &rhs) { unify(lhs, rhs); }

void Solver::add_linear(const LinearConstraint &constraint) {
    if (unsat_) {
        return;
    }
    auto form = numeric_form(constraint.form);
    if (!form) {
        unsat_ = true;
        return;
    }
    if (constraint.sense == Sense::Eq) {
        numeric_eq(std::move(*form));
        return;
    }
    inequalities_.push_back(LinearConstraint{std::move(*form), constraint.sense});
    checked_ = false;
}

void Solver::add(const StoreConstraint &constraint) {
    if (constraint.is_numeric()) {
        add_linear(constraint.linear());
    } else {
        add_equation(constraint.term_equation().lhs, constraint.term_equation().rhs);
    }
}

bool Solver::satisfiable() {
    if (unsat_) {
        return false;
    }
    if (!checked_) {
        std::vector<LinearConstraint> reduced;
        reduced.reserve(inequalities_.size());
        for (const auto &ineq : inequalities_) {
            reduced.push_back(LinearConstraint{reduce(ineq.form), ineq.sense});
        }
        unsat_ = !inequalities_feasible(reduced);
        checked_ = true;
    }
    return !unsat_;
}

SolvedForm Solver::solved_form() {
    SolvedForm out;
    if (!satisfiable()) {
        out.status = SolvedForm::Status::Unsat;
        return out;
    }
    for (const auto &[var, term] : bindings_) {
        out.herbrand_bindings.emplace(var, resolve(term));
    }
    out.numeric_solved = rows_;
    for (const auto &ineq : inequalities_) {
        out.residual.push_back(LinearConstraint{reduce(ineq.form), ineq.sense});
    }
    return out;
}

std::optional<Term> Solver::value(const Term &t) const {
    const Term &w = walk(t);
    if (w.is_number()) {
        return w;
    }
    if (w.is_variable()) {
        auto it = rows_.find(w.name);
        if (it != rows_.end() && it->second.is_constant()) {
            return Term::number(it->second.constant);
        }
        return std::nullopt;
    }
    Term out = w;
    for (auto &arg : out.args) {
        auto v = value(arg);
        if (!v) {
            return std::nullopt;
        }
        arg = std::move(*v);
    }
    return out;
}

SolvedForm satisfiable(const ConstraintStore &store) {
    Solver solver;
    for (const auto &c : store.constraints) {
        solver.add(c);
    }
    return solver.solved_form();
}

namespace {

std::optional<Term> pinned_value(const Term &t, const std::map<std::string, Term> &pinned) {
    if (t.is_number()) {
        return t;
    }
    if (t.is_variable()) {
        auto it = pinned.find(t.name);
        return it == pinned.end() ? std::nullopt : std::optional<Term>(it->second);
    }
    Term out = t;
    for (auto &arg : out.args) {
        auto v = pinned_value(arg, pinned);
        if (!v) {
            return std::nullopt;
        }
        arg = std::move(*v);
    }
    return out;
}

} // namespace

std::map<std::string, Term> ground_vars(const SolvedForm &solved) {
    std::map<std::string, Term> pinned;
    if (!solved.sat()) {
        return pinned;
    }
    for (const auto &[var, row] : solved.numeric_solved) {
        if (row.is_constant()) {
            pinned.emplace(var, Term::number(row.constant));
        }
    }
    std::map<std::string, Term> out = pinned;
    for (const auto &[var, term] : solved.herbrand_bindings) {
        if (auto v = pinned_value(term, pinned)) {
            out.insert_or_assign(var, std::move(*v));
        }
    }
    return out;
}

// {{{1 dependency classes

namespace {

class UnionFind {
public:
    std::size_t add() {
        parent_.push_back(parent_.size());
        return parent_.size() - 1;
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
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

private:
    std::vector<std::size_t> parent_;
};

} // namespace

std::vector<std::set<std::string>> dep_classes(const ConstraintStore &store) {
    auto vars = store.vars();
    std::map<std::string, std::size_t> index;
    UnionFind uf;
    for (const auto &v : vars) {
        index.emplace(v, uf.add());
    }
    for (const auto &c : store.constraints) {
        auto vs = c.variables();
        for (const auto &v : vs) {
            uf.unite(index.at(*vs.begin()), index.at(v));
        }
    }
    std::map<std::size_t, std::set<std::string>> groups;
    for (const auto &[v, i] : index) {
        groups[uf.find(i)].insert(v);
    }
    std::vector<std::set<std::string>> out;
    for (auto &[root, group] : groups) {
        out.push_back(std::move(group));
    }
    std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return *a.begin() < *b.begin(); });
    return out;
}

ConstraintStore class_slice(const ConstraintStore &store, const std::string &x) {
    for (const auto &cls : dep_classes(store)) {
        if (!cls.contains(x)) {
            continue;
        }
        ConstraintStore out;
        for (const auto &c : store.constraints) {
            auto vs = c.variables();
            if (std::any_of(vs.begin(), vs.end(), [&](const std::string &v) { return cls.contains(v); })) {
                out.constraints.push_back(c);
            }
        }
        return out;
    }
    throw std::invalid_argument("variable " + x + " does not occur in the store");
}

} // namespace clpslice
