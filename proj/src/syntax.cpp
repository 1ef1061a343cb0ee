#include "clpslice/syntax.hpp"

#include <cctype>
#include <sstream>

namespace clpslice {

// {{{1 terms

Term Term::variable(std::string name) {
    Term t;
    t.kind = Kind::Variable;
    t.name = std::move(name);
    return t;
}

Term Term::number(Rational value) {
    Term t;
    t.kind = Kind::Number;
    t.value = std::move(value);
    return t;
}

Term Term::compound(std::string functor, std::vector<Term> args) {
    Term t;
    t.kind = Kind::Compound;
    t.name = std::move(functor);
    t.args = std::move(args);
    return t;
}

bool Term::is_ground() const {
    switch (kind) {
        case Kind::Variable: return false;
        case Kind::Number: return true;
        case Kind::Compound:
            for (const auto &arg : args) {
                if (!arg.is_ground()) {
                    return false;
                }
            }
            return true;
    }
    return true;
}

void Term::collect_variables(std::set<std::string> &out) const {
    if (kind == Kind::Variable) {
        out.insert(name);
    }
    for (const auto &arg : args) {
        arg.collect_variables(out);
    }
}

std::set<std::string> Term::variables() const {
    std::set<std::string> out;
    collect_variables(out);
    return out;
}

bool Term::operator==(const Term &other) const {
    if (kind != other.kind) {
        return false;
    }
    switch (kind) {
        case Kind::Variable: return name == other.name;
        case Kind::Number: return value == other.value;
        case Kind::Compound: return name == other.name && args == other.args;
    }
    return false;
}

bool Expr::operator==(const Expr &other) const {
    return op == other.op && (op != Op::Leaf || leaf == other.leaf) && operands == other.operands;
}

std::string base_name(std::string_view var) {
    auto hash = var.find('#');
    return std::string(var.substr(0, hash));
}

namespace {

constexpr std::string_view kAnonPrefix = "_%";

std::string display_var(const std::string &name) {
    if (name.starts_with(kAnonPrefix)) {
        auto hash = name.find('#');
        return hash == std::string::npos ? "_" : "_" + name.substr(hash);
    }
    return name;
}

bool is_list_cell(const Term &t) { return t.is_compound() && t.name == "." && t.args.size() == 2; }

class Renderer {
public:
    explicit Renderer(const PositionMarker &marked) : marked_(marked) {}

    void term(std::ostream &out, const Term &t, LocalPosition &pos) const {
        bool mark = is_marked(pos);
        if (mark) {
            out << "<<";
        }
        switch (t.kind) {
            case Term::Kind::Variable: out << display_var(t.name); break;
            case Term::Kind::Number: out << to_string(t.value); break;
            case Term::Kind::Compound:
                if (is_list_cell(t)) {
                    list(out, t, pos);
                } else {
                    out << t.name;
                    args(out, t.args, pos);
                }
                break;
        }
        if (mark) {
            out << ">>";
        }
    }

    void args(std::ostream &out, const std::vector<Term> &args, LocalPosition &pos) const {
        if (args.empty()) {
            return;
        }
        out << '(';
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i > 0) {
                out << ',';
            }
            pos.path.push_back(i + 1);
            term(out, args[i], pos);
            pos.path.pop_back();
        }
        out << ')';
    }

    void list(std::ostream &out, const Term &cell, LocalPosition &pos) const {
        out << '[';
        const Term *cur = &cell;
        std::size_t depth = 0;
        while (true) {
            pos.path.push_back(1);
            term(out, cur->args[0], pos);
            pos.path.back() = 2;
            const Term &tail = cur->args[1];
            bool tail_marked = is_marked(pos);
            if (!tail_marked && is_list_cell(tail)) {
                out << ',';
                cur = &tail;
                ++depth;
                continue;
            }
            if (tail_marked || !(tail.is_compound() && tail.name == "[]" && tail.args.empty())) {
                out << '|';
                term(out, tail, pos);
            }
            pos.path.pop_back();
            break;
        }
        for (std::size_t i = 0; i < depth; ++i) {
            pos.path.pop_back();
        }
        out << ']';
    }

    void atom(std::ostream &out, const Atom &a, LocalPosition &pos) const {
        bool mark = is_marked(pos);
        if (mark) {
            out << "<<";
        }
        out << a.predicate;
        args(out, a.args, pos);
        if (mark) {
            out << ">>";
        }
    }

    void expr(std::ostream &out, const Expr &e, LocalPosition &pos, std::size_t &leaf, bool divisor) const {
        switch (e.op) {
            case Expr::Op::Leaf: {
                pos.path.assign(1, ++leaf);
                bool mark = is_marked(pos);
                pos.path.clear();
                if (mark) {
                    out << "<<";
                }
                if (e.leaf.is_number() && divisor && !is_integer(e.leaf.value)) {
                    out << '(' << to_string(e.leaf.value) << ')';
                } else {
                    out << (e.leaf.is_number() ? to_string(e.leaf.value) : display_var(e.leaf.name));
                }
                if (mark) {
                    out << ">>";
                }
                break;
            }
            case Expr::Op::Neg:
                out << '-';
                expr(out, e.operands[0], pos, leaf, false);
                break;
            case Expr::Op::Paren:
                out << '(';
                expr(out, e.operands[0], pos, leaf, false);
                out << ')';
                break;
            default: {
                static constexpr const char *ops[] = {"", "+", "-", "*", "/"};
                expr(out, e.operands[0], pos, leaf, false);
                out << ops[static_cast<int>(e.op)];
                expr(out, e.operands[1], pos, leaf, e.op == Expr::Op::Div);
                break;
            }
        }
    }

    void constraint(std::ostream &out, const ConstraintExpr &c, LocalPosition &pos) const {
        bool mark = is_marked(pos);
        if (mark) {
            out << "<<";
        }
        std::size_t leaf = 0;
        auto literal = pos.literal;
        expr(out, c.lhs, pos, leaf, false);
        out << to_string(c.rel);
        expr(out, c.rhs, pos, leaf, false);
        pos.literal = literal;
        pos.path.clear();
        if (mark) {
            out << ">>";
        }
    }

    void clause(std::ostream &out, const Clause &c) const {
        LocalPosition pos;
        if (c.head) {
            atom(out, *c.head, pos);
            if (!c.body.empty()) {
                out << " :- ";
            }
        } else {
            out << ":- ";
        }
        for (std::size_t i = 0; i < c.body.size(); ++i) {
            const auto &item = c.body[i];
            pos.literal = i + 1;
            pos.path.clear();
            bool in_group = item.is_constraint() && item.grouped_with_previous && i > 0 &&
                            c.body[i - 1].is_constraint();
            if (i > 0) {
                out << ", ";
            }
            if (item.is_call()) {
                atom(out, item.atom, pos);
                continue;
            }
            if (!in_group) {
                out << '{';
            }
            constraint(out, item.constraint, pos);
            bool next_in_group = i + 1 < c.body.size() && c.body[i + 1].is_constraint() &&
                                 c.body[i + 1].grouped_with_previous;
            if (!next_in_group) {
                out << '}';
            }
        }
        out << '.';
    }

private:
    bool is_marked(const LocalPosition &pos) const { return marked_ && marked_(pos); }

    const PositionMarker &marked_;
};

const PositionMarker kNoMarks;

} // namespace

std::string to_string(const Term &term) {
    std::ostringstream out;
    LocalPosition pos;
    Renderer(kNoMarks).term(out, term, pos);
    return out.str();
}

std::string_view to_string(Relation rel) {
    switch (rel) {
        case Relation::Eq: return "=";
        case Relation::Lt: return "<";
        case Relation::Le: return "<=";
        case Relation::Gt: return ">";
        case Relation::Ge: return ">=";
    }
    return "=";
}

std::string to_string(const Expr &expr) {
    std::ostringstream out;
    LocalPosition pos;
    std::size_t leaf = 0;
    Renderer(kNoMarks).expr(out, expr, pos, leaf, false);
    return out.str();
}

std::string to_string(const ConstraintExpr &constraint) {
    std::ostringstream out;
    LocalPosition pos;
    Renderer(kNoMarks).constraint(out, constraint, pos);
    return out.str();
}

std::string to_string(const Atom &atom) {
    std::ostringstream out;
    LocalPosition pos;
    Renderer(kNoMarks).atom(out, atom, pos);
    return out.str();
}

std::string to_string(const Clause &clause, const PositionMarker &marked) {
    std::ostringstream out;
    Renderer(marked).clause(out, clause);
    return out.str();
}

std::string to_string(const Program &program) {
    std::string out;
    for (const auto &clause : program.clauses) {
        out += to_string(clause);
        out += '\n';
    }
    return out;
}

// {{{1 constraint expressions

namespace {

void collect_leaves(const Expr &e, std::vector<const Term *> &out) {
    if (e.op == Expr::Op::Leaf) {
        out.push_back(&e.leaf);
        return;
    }
    for (const auto &operand : e.operands) {
        collect_leaves(operand, out);
    }
}

struct Linearizer {
    LinearForm operator()(const Expr &e) const {
        switch (e.op) {
            case Expr::Op::Leaf: {
                LinearForm f;
                if (e.leaf.is_number()) {
                    f.constant = e.leaf.value;
                } else {
                    f.add_term(e.leaf.name, 1);
                }
                return f;
            }
            case Expr::Op::Paren: return (*this)(e.operands[0]);
            case Expr::Op::Neg: {
                auto f = (*this)(e.operands[0]);
                f.scale(-1);
                return f;
            }
            case Expr::Op::Add:
            case Expr::Op::Sub: {
                auto f = (*this)(e.operands[0]);
                f.add((*this)(e.operands[1]), e.op == Expr::Op::Add ? 1 : -1);
                return f;
            }
            case Expr::Op::Mul: {
                auto l = (*this)(e.operands[0]);
                auto r = (*this)(e.operands[1]);
                if (!l.is_constant() && !r.is_constant()) {
                    throw NonlinearError("nonlinear product " + to_string(e), 0, 0);
                }
                if (l.is_constant()) {
                    r.scale(l.constant);
                    return r;
                }
                l.scale(r.constant);
                return l;
            }
            case Expr::Op::Div: {
                auto l = (*this)(e.operands[0]);
                auto r = (*this)(e.operands[1]);
                if (!r.is_constant()) {
                    throw NonlinearError("division by a non-constant in " + to_string(e), 0, 0);
                }
                if (r.constant == 0) {
                    throw NonlinearError("division by zero in " + to_string(e), 0, 0);
                }
                l.scale(1 / r.constant);
                return l;
            }
        }
        return {};
    }
};

} // namespace

std::vector<const Term *> ConstraintExpr::occurrences() const {
    std::vector<const Term *> out;
    collect_leaves(lhs, out);
    collect_leaves(rhs, out);
    return out;
}

std::set<std::string> ConstraintExpr::variables() const {
    std::set<std::string> out;
    for (const auto *leaf : occurrences()) {
        leaf->collect_variables(out);
    }
    return out;
}

LinearConstraint ConstraintExpr::linearize() const {
    Linearizer lin;
    auto form = lin(lhs);
    form.add(lin(rhs), -1);
    LinearConstraint out;
    switch (rel) {
        case Relation::Eq: out.sense = Sense::Eq; break;
        case Relation::Lt: out.sense = Sense::Lt; break;
        case Relation::Le: out.sense = Sense::Le; break;
        case Relation::Gt:
            out.sense = Sense::Lt;
            form.scale(-1);
            break;
        case Relation::Ge:
            out.sense = Sense::Le;
            form.scale(-1);
            break;
    }
    out.form = std::move(form);
    return out;
}

std::size_t Clause::call_count() const {
    std::size_t n = 0;
    for (const auto &item : body) {
        n += item.is_call() ? 1 : 0;
    }
    return n;
}

std::set<std::string> Clause::variables() const {
    std::set<std::string> out;
    if (head) {
        for (const auto &arg : head->args) {
            arg.collect_variables(out);
        }
    }
    for (const auto &item : body) {
        if (item.is_call()) {
            for (const auto &arg : item.atom.args) {
                arg.collect_variables(out);
            }
        } else {
            auto vars = item.constraint.variables();
            out.insert(vars.begin(), vars.end());
        }
    }
    return out;
}

// {{{1 errors

SyntaxError::SyntaxError(const std::string &message, std::size_t line, std::size_t column)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + message : message)
    , line_(line)
    , column_(column) {}

// {{{1 lexer and parser

namespace {

enum class Tok {
    Var, Ident, Number, LParen, RParen, LBracket, RBracket, LBrace, RBrace, Bar, Comma, Dot,
    Neck, Query, Plus, Minus, Star, Slash, Eq, Lt, Le, Gt, Ge, End
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    std::size_t line = 1;
    std::size_t col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            advance(1);
            continue;
        }
        if (c == '%') {
            while (i < src.size() && src[i] != '\n') {
                advance(1);
            }
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            auto start_line = line;
            auto start_col = col;
            advance(2);
            while (i < src.size() && !(src[i] == '*' && i + 1 < src.size() && src[i + 1] == '/')) {
                advance(1);
            }
            if (i >= src.size()) {
                throw SyntaxError("unterminated block comment", start_line, start_col);
            }
            advance(2);
            continue;
        }
        Token tok{Tok::End, "", line, col};
        std::size_t len = 1;
        if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
            while (i + len < src.size() && std::isdigit(static_cast<unsigned char>(src[i + len])) != 0) {
                ++len;
            }
            bool after_slash = !out.empty() && out.back().kind == Tok::Slash;
            if (!after_slash && i + len + 1 < src.size() && src[i + len] == '/' &&
                std::isdigit(static_cast<unsigned char>(src[i + len + 1])) != 0) {
                ++len;
                while (i + len < src.size() && std::isdigit(static_cast<unsigned char>(src[i + len])) != 0) {
                    ++len;
                }
            }
            tok.kind = Tok::Number;
        } else if (std::isupper(static_cast<unsigned char>(c)) != 0 || c == '_') {
            while (i + len < src.size() && is_ident(src[i + len])) {
                ++len;
            }
            tok.kind = Tok::Var;
        } else if (std::islower(static_cast<unsigned char>(c)) != 0) {
            while (i + len < src.size() && is_ident(src[i + len])) {
                ++len;
            }
            tok.kind = Tok::Ident;
        } else {
            auto two = src.substr(i, 2);
            if (two == ":-") {
                tok.kind = Tok::Neck, len = 2;
            } else if (two == "?-") {
                tok.kind = Tok::Query, len = 2;
            } else if (two == "<=" || two == "=<") {
                tok.kind = Tok::Le, len = 2;
            } else if (two == ">=") {
                tok.kind = Tok::Ge, len = 2;
            } else {
                switch (c) {
                    case '(': tok.kind = Tok::LParen; break;
                    case ')': tok.kind = Tok::RParen; break;
                    case '[': tok.kind = Tok::LBracket; break;
                    case ']': tok.kind = Tok::RBracket; break;
                    case '{': tok.kind = Tok::LBrace; break;
                    case '}': tok.kind = Tok::RBrace; break;
                    case '|': tok.kind = Tok::Bar; break;
                    case ',': tok.kind = Tok::Comma; break;
                    case '.': tok.kind = Tok::Dot; break;
                    case '+': tok.kind = Tok::Plus; break;
                    case '-': tok.kind = Tok::Minus; break;
                    case '*': tok.kind = Tok::Star; break;
                    case '/': tok.kind = Tok::Slash; break;
                    case '=': tok.kind = Tok::Eq; break;
                    case '<': tok.kind = Tok::Lt; break;
                    case '>': tok.kind = Tok::Gt; break;
                    default: throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
                }
            }
        }
        tok.text = std::string(src.substr(i, len));
        advance(len);
        out.push_back(std::move(tok));
    }
    out.push_back(Token{Tok::End, "", line, col});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    Program program() {
        Program p;
        while (peek().kind != Tok::End) {
            p.clauses.push_back(clause());
        }
        return p;
    }

    Clause goal() {
        anon_ = 0;
        Clause c;
        c.line = peek().line;
        if (peek().kind == Tok::Neck || peek().kind == Tok::Query) {
            next();
        }
        body(c, true);
        expect(Tok::Dot, "'.' after goal");
        if (peek().kind != Tok::End) {
            fail("unexpected input after goal");
        }
        return c;
    }

    Term single_term() {
        auto t = term();
        if (peek().kind != Tok::End) {
            fail("unexpected input after term");
        }
        return t;
    }

    ConstraintExpr single_constraint() {
        auto c = constraint();
        if (peek().kind != Tok::End) {
            fail("unexpected input after constraint");
        }
        return c;
    }

private:
    const Token &peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token &next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    [[noreturn]] void fail(const std::string &msg) const {
        const auto &t = peek();
        throw SyntaxError(msg + (t.kind == Tok::End ? " (at end of input)" : " near '" + t.text + "'"), t.line,
                          t.column);
    }

    const Token &expect(Tok kind, const char *what) {
        if (peek().kind != kind) {
            fail(std::string("expected ") + what);
        }
        return next();
    }

    Clause clause() {
        anon_ = 0;
        Clause c;
        c.line = peek().line;
        if (peek().kind != Tok::Ident) {
            fail("clause head must be an atom");
        }
        c.head = atom();
        if (peek().kind == Tok::Neck) {
            next();
            body(c, false);
        }
        expect(Tok::Dot, "'.' at end of clause");
        return c;
    }

    void body(Clause &c, bool goal) {
        while (true) {
            if (peek().kind == Tok::LBrace) {
                next();
                bool first = true;
                while (true) {
                    BodyItem item;
                    item.kind = BodyItem::Kind::Constraint;
                    item.constraint = constraint();
                    item.grouped_with_previous = !first;
                    first = false;
                    c.body.push_back(std::move(item));
                    if (peek().kind == Tok::Comma) {
                        next();
                        continue;
                    }
                    expect(Tok::RBrace, "'}' or ',' in constraint group");
                    break;
                }
            } else if (peek().kind == Tok::Ident) {
                BodyItem item;
                item.kind = BodyItem::Kind::Call;
                item.atom = atom();
                c.body.push_back(std::move(item));
            } else {
                fail("expected a body atom or a {constraint}");
            }
            if (goal && peek().kind == Tok::Neck) {
                fail("a goal clause must not have a head");
            }
            if (peek().kind != Tok::Comma) {
                return;
            }
            next();
        }
    }

    Atom atom() {
        Atom a;
        a.predicate = expect(Tok::Ident, "predicate name").text;
        if (peek().kind == Tok::LParen) {
            next();
            a.args = arguments();
        }
        return a;
    }

    std::vector<Term> arguments() {
        std::vector<Term> args;
        args.push_back(term());
        while (peek().kind == Tok::Comma) {
            next();
            args.push_back(term());
        }
        expect(Tok::RParen, "')' after arguments");
        return args;
    }

    std::string var_name(const Token &t) { return t.text == "_" ? std::string(kAnonPrefix) + std::to_string(++anon_) : t.text; }

    Rational number(const Token &t) const {
        try {
            return parse_rational(t.text);
        } catch (const std::invalid_argument &e) {
            throw SyntaxError(e.what(), t.line, t.column);
        }
    }

    Term term() {
        const auto &t = peek();
        switch (t.kind) {
            case Tok::Var: next(); return Term::variable(var_name(t));
            case Tok::Number: next(); return Term::number(number(t));
            case Tok::Minus:
                if (peek(1).kind == Tok::Number) {
                    next();
                    return Term::number(-number(next()));
                }
                break;
            case Tok::Ident: {
                next();
                if (peek().kind == Tok::LParen) {
                    next();
                    return Term::compound(t.text, arguments());
                }
                return Term::compound(t.text);
            }
            case Tok::LBracket: return list();
            default: break;
        }
        fail("expected a term");
    }

    Term list() {
        expect(Tok::LBracket, "'['");
        if (peek().kind == Tok::RBracket) {
            next();
            return Term::compound("[]");
        }
        std::vector<Term> items;
        items.push_back(term());
        while (peek().kind == Tok::Comma) {
            next();
            items.push_back(term());
        }
        Term tail = Term::compound("[]");
        if (peek().kind == Tok::Bar) {
            next();
            tail = term();
        }
        expect(Tok::RBracket, "']' closing list");
        for (auto it = items.rbegin(); it != items.rend(); ++it) {
            tail = Term::compound(".", {std::move(*it), std::move(tail)});
        }
        return tail;
    }

    ConstraintExpr constraint() {
        const auto &start = peek();
        auto line = start.line;
        auto column = start.column;
        ConstraintExpr c;
        c.lhs = expr();
        switch (peek().kind) {
            case Tok::Eq: c.rel = Relation::Eq; break;
            case Tok::Lt: c.rel = Relation::Lt; break;
            case Tok::Le: c.rel = Relation::Le; break;
            case Tok::Gt: c.rel = Relation::Gt; break;
            case Tok::Ge: c.rel = Relation::Ge; break;
            default: fail("expected a relation (=, <, <=, >, >=)");
        }
        next();
        c.rhs = expr();
        try {
            (void)c.linearize();
        } catch (const NonlinearError &e) {
            throw NonlinearError(e.what(), line, column);
        }
        return c;
    }

    static Expr binary(Expr::Op op, Expr lhs, Expr rhs) {
        Expr e;
        e.op = op;
        e.operands.push_back(std::move(lhs));
        e.operands.push_back(std::move(rhs));
        return e;
    }

    Expr expr() {
        auto e = product();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            auto op = next().kind == Tok::Plus ? Expr::Op::Add : Expr::Op::Sub;
            e = binary(op, std::move(e), product());
        }
        return e;
    }

    Expr product() {
        auto e = unary();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            auto op = next().kind == Tok::Star ? Expr::Op::Mul : Expr::Op::Div;
            e = binary(op, std::move(e), unary());
        }
        return e;
    }

    Expr unary() {
        if (peek().kind == Tok::Minus) {
            next();
            auto operand = unary();
            if (operand.op == Expr::Op::Leaf && operand.leaf.is_number() && operand.leaf.value >= 0) {
                operand.leaf.value = -operand.leaf.value;
                return operand;
            }
            Expr e;
            e.op = Expr::Op::Neg;
            e.operands.push_back(std::move(operand));
            return e;
        }
        return primary();
    }

    Expr primary() {
        const auto &t = peek();
        Expr e;
        switch (t.kind) {
            case Tok::Var:
                next();
                e.leaf = Term::variable(var_name(t));
                return e;
            case Tok::Number:
                next();
                e.leaf = Term::number(number(t));
                return e;
            case Tok::LParen: {
                next();
                auto inner = expr();
                expect(Tok::RParen, "')'");
                if (inner.op == Expr::Op::Leaf && inner.leaf.is_number()) {
                    return inner;
                }
                e.op = Expr::Op::Paren;
                e.operands.push_back(std::move(inner));
                return e;
            }
            case Tok::Ident: fail("non-arithmetic term in constraint");
            default: fail("expected a variable, number or '('");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::size_t anon_ = 0;
};

} // namespace

Program parse_program(std::string_view text) {
    auto program = Parser(text).program();
    for (std::size_t c = 0; c < program.clauses.size(); ++c) {
        for (const auto &info : clause_layout(program.clauses[c])) {
            program.position_table.push_back(ProgramPosition{c, info.pos});
        }
    }
    return program;
}

Clause parse_goal(std::string_view text) { return Parser(text).goal(); }

Term parse_term(std::string_view text) { return Parser(text).single_term(); }

ConstraintExpr parse_constraint(std::string_view text) { return Parser(text).single_constraint(); }

// {{{1 renaming

namespace {

void rename_term(Term &t, const std::string &suffix) {
    if (t.is_variable()) {
        t.name += suffix;
    }
    for (auto &arg : t.args) {
        rename_term(arg, suffix);
    }
}

void rename_expr(Expr &e, const std::string &suffix) {
    if (e.op == Expr::Op::Leaf) {
        rename_term(e.leaf, suffix);
    }
    for (auto &operand : e.operands) {
        rename_expr(operand, suffix);
    }
}

} // namespace

Clause rename_clause(const Clause &clause, std::size_t tag) {
    Clause out = clause;
    auto suffix = "#" + std::to_string(tag);
    if (out.head) {
        for (auto &arg : out.head->args) {
            rename_term(arg, suffix);
        }
    }
    for (auto &item : out.body) {
        if (item.is_call()) {
            for (auto &arg : item.atom.args) {
                rename_term(arg, suffix);
            }
        } else {
            rename_expr(item.constraint.lhs, suffix);
            rename_expr(item.constraint.rhs, suffix);
        }
    }
    return out;
}

// {{{1 layout

std::string_view to_string(PositionKind kind) {
    switch (kind) {
        case PositionKind::Atom: return "atom";
        case PositionKind::Constraint: return "constraint";
        case PositionKind::Argument: return "argument";
        case PositionKind::Subterm: return "subterm";
        case PositionKind::Occurrence: return "occurrence";
    }
    return "atom";
}

namespace {

void layout_term(const Term &t, LocalPosition &pos, std::size_t parent, bool in_head, bool top,
                 std::vector<PositionInfo> &out) {
    PositionInfo info;
    info.pos = pos;
    info.kind = top ? PositionKind::Argument : PositionKind::Subterm;
    info.in_head = in_head;
    info.parent = parent;
    info.vars = t.variables();
    info.is_variable = t.is_variable();
    info.is_compound = t.is_compound();
    info.text = to_string(t);
    auto self = out.size();
    out.push_back(std::move(info));
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        pos.path.push_back(i + 1);
        layout_term(t.args[i], pos, self, in_head, false, out);
        pos.path.pop_back();
    }
}

void layout_atom(const Atom &a, std::size_t literal, bool in_head, std::vector<PositionInfo> &out) {
    PositionInfo info;
    info.pos.literal = literal;
    info.kind = PositionKind::Atom;
    info.in_head = in_head;
    for (const auto &arg : a.args) {
        arg.collect_variables(info.vars);
    }
    info.text = to_string(a);
    auto self = out.size();
    out.push_back(std::move(info));
    LocalPosition pos{literal, {}};
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        pos.path.assign(1, i + 1);
        layout_term(a.args[i], pos, self, in_head, true, out);
    }
}

} // namespace

std::vector<PositionInfo> clause_layout(const Clause &clause) {
    std::vector<PositionInfo> out;
    if (clause.head) {
        layout_atom(*clause.head, 0, true, out);
    }
    for (std::size_t i = 0; i < clause.body.size(); ++i) {
        const auto &item = clause.body[i];
        if (item.is_call()) {
            layout_atom(item.atom, i + 1, false, out);
            continue;
        }
        PositionInfo info;
        info.pos.literal = i + 1;
        info.kind = PositionKind::Constraint;
        info.vars = item.constraint.variables();
        info.text = to_string(item.constraint);
        auto self = out.size();
        out.push_back(std::move(info));
        auto leaves = item.constraint.occurrences();
        for (std::size_t j = 0; j < leaves.size(); ++j) {
            PositionInfo occ;
            occ.pos = LocalPosition{i + 1, {j + 1}};
            occ.kind = PositionKind::Occurrence;
            occ.parent = self;
            occ.vars = leaves[j]->variables();
            occ.is_variable = leaves[j]->is_variable();
            occ.text = to_string(*leaves[j]);
            out.push_back(std::move(occ));
        }
    }
    return out;
}

std::string ElementRef::text() const {
    switch (kind) {
        case PositionKind::Atom: return to_string(*atom);
        case PositionKind::Constraint: return to_string(*constraint);
        default: return to_string(*term);
    }
}

std::set<std::string> ElementRef::variables() const {
    switch (kind) {
        case PositionKind::Atom: {
            std::set<std::string> out;
            for (const auto &arg : atom->args) {
                arg.collect_variables(out);
            }
            return out;
        }
        case PositionKind::Constraint: return constraint->variables();
        default: return term->variables();
    }
}

ElementRef element_at(const Clause &clause, const LocalPosition &pos) {
    auto bad = [&]() { return PositionError("no position " + format_local(pos) + " in clause " + to_string(clause)); };
    ElementRef ref;
    if (pos.literal == 0) {
        if (!clause.head) {
            throw bad();
        }
        ref.atom = &*clause.head;
    } else if (pos.literal <= clause.body.size()) {
        const auto &item = clause.body[pos.literal - 1];
        if (item.is_constraint()) {
            ref.constraint = &item.constraint;
            if (pos.path.empty()) {
                ref.kind = PositionKind::Constraint;
                return ref;
            }
            auto leaves = item.constraint.occurrences();
            if (pos.path.size() != 1 || pos.path[0] > leaves.size()) {
                throw bad();
            }
            ref.kind = PositionKind::Occurrence;
            ref.term = leaves[pos.path[0] - 1];
            return ref;
        }
        ref.atom = &item.atom;
    } else {
        throw bad();
    }
    if (pos.path.empty()) {
        ref.kind = PositionKind::Atom;
        return ref;
    }
    const std::vector<Term> *args = &ref.atom->args;
    for (std::size_t i = 0; i < pos.path.size(); ++i) {
        auto step = pos.path[i];
        if (step == 0 || step > args->size()) {
            throw bad();
        }
        ref.term = &(*args)[step - 1];
        args = &ref.term->args;
    }
    ref.kind = pos.path.size() == 1 ? PositionKind::Argument : PositionKind::Subterm;
    return ref;
}

const Clause &clause_at(const Program &program, const Clause &goal, const ProgramPosition &pos) {
    if (pos.is_goal()) {
        return goal;
    }
    if (pos.clause >= program.clauses.size()) {
        throw PositionError("no clause " + std::to_string(pos.clause) + " (program has " +
                            std::to_string(program.clauses.size()) + " clauses)");
    }
    return program.clauses[pos.clause];
}

ProgramPosition position_of(const Program &program, std::string_view address) {
    auto pos = parse_program_address(address);
    if (pos.is_goal()) {
        throw PositionError("goal address without a goal: " + std::string(address));
    }
    (void)element_at(clause_at(program, Clause{}, pos), pos.local);
    return pos;
}

ProgramPosition position_of(const Program &program, const Clause &goal, std::string_view address) {
    auto pos = parse_program_address(address);
    (void)element_at(clause_at(program, goal, pos), pos.local);
    return pos;
}

} // namespace clpslice
