#pragma once

#include "clpslice/linear.hpp"
#include "clpslice/positions.hpp"
#include "clpslice/syntax.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace clpslice {

// {{{1 stores

struct TermEquation {
    Term lhs;
    Term rhs;

    bool operator==(const TermEquation &) const = default;
};

struct StoreConstraint {
    std::variant<LinearConstraint, TermEquation> body;
    //! Rendering as written, e.g. "X-Y=1" or "X=U".
    std::string text;
    //! Tree positions the constraint was created from; empty for standalone stores.
    std::set<TreePosition> origin;

    static StoreConstraint numeric(const ConstraintExpr &expr, std::set<TreePosition> origin = {});
    static StoreConstraint equation(Term lhs, Term rhs, std::set<TreePosition> origin = {});

    [[nodiscard]] bool is_numeric() const { return std::holds_alternative<LinearConstraint>(body); }
    [[nodiscard]] const LinearConstraint &linear() const { return std::get<LinearConstraint>(body); }
    [[nodiscard]] const TermEquation &term_equation() const { return std::get<TermEquation>(body); }
    [[nodiscard]] std::set<std::string> variables() const;

    bool operator==(const StoreConstraint &other) const { return body == other.body && text == other.text; }
};

struct ConstraintStore {
    std::vector<StoreConstraint> constraints;

    [[nodiscard]] std::set<std::string> vars() const;
    [[nodiscard]] std::size_t size() const { return constraints.size(); }
    [[nodiscard]] bool empty() const { return constraints.empty(); }
    //! Constraints at the given indices, in index order.
    [[nodiscard]] ConstraintStore subset(const std::set<std::size_t> &indices) const;
    //! Indices of the constraints of `sub` in this store (matched by value, first unused match).
    [[nodiscard]] std::optional<std::set<std::size_t>> indices_of(const ConstraintStore &sub) const;
};

std::string to_string(const ConstraintStore &store);

//! Parses "{c1, c2, ...}". Linear items become numeric constraints, "t1 = t2" between
//! non-arithmetic terms becomes a term equation.
ConstraintStore parse_store(std::string_view text);

// {{{1 solving

struct SolvedForm {
    enum class Status { Sat, Unsat };

    Status status = Status::Sat;
    //! Idempotent: right-hand sides contain no bound variable.
    std::map<std::string, Term> herbrand_bindings;
    //! pivot = affine form over non-pivot variables.
    std::map<std::string, LinearForm> numeric_solved;
    //! Inequalities with all pivots substituted away.
    std::vector<LinearConstraint> residual;

    [[nodiscard]] bool sat() const { return status == Status::Sat; }
};

//! Incremental solver for Herbrand equations plus linear rational constraints.
//! Unsatisfiability is sticky. Inequalities are checked lazily by Fourier-Motzkin elimination.
class Solver {
public:
    void add(const StoreConstraint &constraint);
    void add_equation(const Term &lhs, const Term &rhs);
    void add_linear(const LinearConstraint &constraint);

    [[nodiscard]] bool satisfiable();
    [[nodiscard]] SolvedForm solved_form();

    //! The unique value of t if every variable in it is fixed, otherwise nothing.
    [[nodiscard]] std::optional<Term> value(const Term &t) const;
    [[nodiscard]] bool is_ground(const Term &t) const { return value(t).has_value(); }

private:
    [[nodiscard]] const Term &walk(const Term &t) const;
    [[nodiscard]] Term resolve(const Term &t) const;
    void bind(const std::string &var, const Term &t);
    void unify(const Term &a, const Term &b);
    [[nodiscard]] bool occurs(const std::string &var, const Term &t) const;
    void numeric_eq(LinearForm form);
    void make_numeric(const std::string &var);
    [[nodiscard]] LinearForm reduce(const LinearForm &form) const;
    [[nodiscard]] std::optional<LinearForm> numeric_form(const LinearForm &form);

    bool unsat_ = false;
    bool checked_ = true;
    std::map<std::string, Term> bindings_;
    std::set<std::string> numeric_;
    std::map<std::string, LinearForm> rows_;
    std::vector<LinearConstraint> inequalities_;
};

//! Fourier-Motzkin feasibility of a conjunction of inequalities (form < 0 or form <= 0).
bool inequalities_feasible(const std::vector<LinearConstraint> &constraints);

SolvedForm satisfiable(const ConstraintStore &store);

//! Variables with a unique value certified by the solved form.
std::map<std::string, Term> ground_vars(const SolvedForm &solved);

// {{{1 dependency classes

//! Equivalence classes of variable co-occurrence, each class sorted, classes ordered by least member.
std::vector<std::set<std::string>> dep_classes(const ConstraintStore &store);

//! All constraints containing a variable of x's class. Throws std::invalid_argument for unknown x.
ConstraintStore class_slice(const ConstraintStore &store, const std::string &x);

} // namespace clpslice
