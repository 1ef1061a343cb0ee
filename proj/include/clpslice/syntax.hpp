#pragma once

#include "clpslice/linear.hpp"
#include "clpslice/positions.hpp"
#include "clpslice/rational.hpp"

#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace clpslice {

// {{{1 terms

//! Herbrand term with exact rational literals. A compound with no arguments is a constant.
struct Term {
    enum class Kind { Variable, Number, Compound };

    Kind kind = Kind::Compound;
    std::string name; //!< variable name or functor
    Rational value;   //!< only meaningful for numbers
    std::vector<Term> args;

    static Term variable(std::string name);
    static Term number(Rational value);
    static Term compound(std::string functor, std::vector<Term> args = {});

    [[nodiscard]] bool is_variable() const { return kind == Kind::Variable; }
    [[nodiscard]] bool is_number() const { return kind == Kind::Number; }
    [[nodiscard]] bool is_compound() const { return kind == Kind::Compound; }
    [[nodiscard]] bool is_ground() const;
    void collect_variables(std::set<std::string> &out) const;
    [[nodiscard]] std::set<std::string> variables() const;

    bool operator==(const Term &other) const;
};

std::string to_string(const Term &term);

// {{{1 constraint expressions

enum class Relation { Eq, Lt, Le, Gt, Ge };

std::string_view to_string(Relation rel);

//! Arithmetic expression tree as written in the source. Leaves are variables or numbers.
struct Expr {
    enum class Op { Leaf, Add, Sub, Mul, Div, Neg, Paren };

    Op op = Op::Leaf;
    Term leaf;
    std::vector<Expr> operands;

    bool operator==(const Expr &other) const;
};

std::string to_string(const Expr &expr);

struct ConstraintExpr {
    Relation rel = Relation::Eq;
    Expr lhs;
    Expr rhs;

    //! Variable and constant leaves in textual order; argument paths index into this list.
    [[nodiscard]] std::vector<const Term *> occurrences() const;
    [[nodiscard]] std::set<std::string> variables() const;
    //! Throws NonlinearError when a product has two non-constant factors.
    [[nodiscard]] LinearConstraint linearize() const;

    bool operator==(const ConstraintExpr &other) const = default;
};

std::string to_string(const ConstraintExpr &constraint);

// {{{1 clauses and programs

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    [[nodiscard]] std::size_t arity() const { return args.size(); }
    bool operator==(const Atom &other) const = default;
};

std::string to_string(const Atom &atom);

struct BodyItem {
    enum class Kind { Call, Constraint };

    Kind kind = Kind::Call;
    Atom atom;
    ConstraintExpr constraint;
    //! Shares the curly-bracket group of the preceding item (rendering only).
    bool grouped_with_previous = false;

    [[nodiscard]] bool is_call() const { return kind == Kind::Call; }
    [[nodiscard]] bool is_constraint() const { return kind == Kind::Constraint; }
    bool operator==(const BodyItem &other) const {
        return kind == other.kind && atom == other.atom && constraint == other.constraint &&
               grouped_with_previous == other.grouped_with_previous;
    }
};

struct Clause {
    std::optional<Atom> head;
    std::vector<BodyItem> body;
    std::size_t line = 0;

    [[nodiscard]] bool is_goal() const { return !head.has_value(); }
    //! Number of call (non-constraint) body items.
    [[nodiscard]] std::size_t call_count() const;
    [[nodiscard]] std::set<std::string> variables() const;
    bool operator==(const Clause &other) const { return head == other.head && body == other.body; }
};

//! Marks positions for bracketed highlighting when rendering.
using PositionMarker = std::function<bool(const LocalPosition &)>;

std::string to_string(const Clause &clause, const PositionMarker &marked = {});

struct Program {
    std::vector<Clause> clauses;
    //! Every program position in enumeration order (clause, literal, pre-order path).
    std::vector<ProgramPosition> position_table;

    bool operator==(const Program &other) const { return clauses == other.clauses; }
};

std::string to_string(const Program &program);

// {{{1 errors

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string &message, std::size_t line, std::size_t column);
    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class NonlinearError : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

// {{{1 operations

Program parse_program(std::string_view text);
Clause parse_goal(std::string_view text);
//! A single term or a single constraint, e.g. "f(X,[1])" or "X+2*Y<=3".
Term parse_term(std::string_view text);
ConstraintExpr parse_constraint(std::string_view text);

//! Renames every variable V to "V#tag". Structure and positions are unchanged.
Clause rename_clause(const Clause &clause, std::size_t tag);

//! Strips a "#tag" suffix added by rename_clause.
std::string base_name(std::string_view var);

// {{{1 position layout

enum class PositionKind {
    Atom,       //!< a head or body call atom as a whole
    Constraint, //!< a constraint body item as a whole
    Argument,   //!< an argument of an atom
    Subterm,    //!< a proper subterm of an argument
    Occurrence  //!< a variable or constant occurrence in a constraint
};

std::string_view to_string(PositionKind kind);

struct PositionInfo {
    LocalPosition pos;
    PositionKind kind = PositionKind::Atom;
    bool in_head = false;
    //! Layout index of the enclosing element (atom, compound term or constraint); empty for literals.
    std::optional<std::size_t> parent;
    std::set<std::string> vars;
    bool is_variable = false;
    bool is_compound = false;
    std::string text;

    [[nodiscard]] bool is_term() const {
        return kind == PositionKind::Argument || kind == PositionKind::Subterm || kind == PositionKind::Occurrence;
    }
};

//! All positions of a clause in enumeration order.
std::vector<PositionInfo> clause_layout(const Clause &clause);

//! Reference to the syntactic element at a position.
struct ElementRef {
    PositionKind kind = PositionKind::Atom;
    const Atom *atom = nullptr;
    const ConstraintExpr *constraint = nullptr;
    const Term *term = nullptr;

    [[nodiscard]] std::string text() const;
    [[nodiscard]] std::set<std::string> variables() const;
};

//! Throws PositionError when pos does not exist in clause.
ElementRef element_at(const Clause &clause, const LocalPosition &pos);

ProgramPosition position_of(const Program &program, std::string_view address);
//! As above, also accepting "g/..." addresses into the goal.
ProgramPosition position_of(const Program &program, const Clause &goal, std::string_view address);

const Clause &clause_at(const Program &program, const Clause &goal, const ProgramPosition &pos);

} // namespace clpslice
