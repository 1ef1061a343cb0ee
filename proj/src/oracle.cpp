#include "clpslice/oracle.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <map>

namespace clpslice {

namespace {

struct Operand {
    int var = -1;   //!< variable index, or -1 for a fixed value
    int value = -1; //!< domain index when var < 0; -1 means a value outside the domain
};

struct OracleConstraint {
    enum class Kind { Linear, Equal, False };

    Kind kind = Kind::Linear;
    std::vector<std::pair<int, Rational>> terms;
    Rational constant;
    Sense sense = Sense::Eq;
    Operand lhs;
    Operand rhs;
    std::vector<int> vars;
};

class Search {
public:
    Search(const ConstraintStore &store, const std::string &x, IntDomain dom, const std::vector<Term> &atoms,
           OracleOptions opts)
        : dom_(dom), opts_(opts) {
        if (dom.lo > dom.hi) {
            throw std::invalid_argument("empty domain");
        }
        for (long v = dom.lo; v <= dom.hi; ++v) {
            values_.push_back(Term::number(v));
        }
        ints_ = static_cast<int>(values_.size());
        auto own = store_atoms(store);
        for (const auto &a : atoms) {
            add_atom(a);
        }
        for (const auto &a : own) {
            add_atom(a);
        }
        if (!x.empty()) {
            var_index(x);
        }
        for (const auto &c : store.constraints) {
            translate(c);
        }
        per_var_.resize(names_.size());
        for (std::size_t i = 0; i < constraints_.size(); ++i) {
            for (int v : constraints_[i].vars) {
                per_var_[v].push_back(i);
            }
        }
    }

    //! Indices of values x can take.
    std::vector<int> solutions(const std::string &x) {
        if (has_false_) {
            return {};
        }
        int xi = var_index(x);
        auto comps = components();
        std::vector<int> x_comp;
        for (auto &comp : comps) {
            if (std::find(comp.begin(), comp.end(), xi) != comp.end()) {
                x_comp = comp;
            } else if (!exists(comp)) {
                return {};
            }
        }
        std::vector<int> out;
        assignment_.assign(names_.size(), -1);
        prepare(x_comp);
        for (int v : candidates(xi)) {
            assignment_[xi] = v;
            if (consistent(xi) && dfs(x_comp.size() - 1)) {
                out.push_back(v);
            }
            assignment_[xi] = -1;
        }
        return out;
    }

    bool satisfiable() {
        if (has_false_) {
            return false;
        }
        for (auto &comp : components()) {
            if (!exists(comp)) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] const Term &value(int index) const { return values_[index]; }

private:
    void add_atom(const Term &a) {
        if (std::find(values_.begin(), values_.end(), a) == values_.end()) {
            values_.push_back(a);
        }
    }

    int var_index(const std::string &name) {
        auto [it, inserted] = index_.emplace(name, static_cast<int>(names_.size()));
        if (inserted) {
            names_.push_back(name);
        }
        return it->second;
    }

    int value_index(const Term &t) const {
        if (t.is_number()) {
            if (!is_integer(t.value)) {
                throw OracleUnsupported("non-integer value " + to_string(t.value) + " in a term equation");
            }
            if (t.value < dom_.lo || t.value > dom_.hi) {
                return -1;
            }
            return static_cast<int>(t.value.get_num().get_si() - dom_.lo);
        }
        auto it = std::find(values_.begin(), values_.end(), t);
        return it == values_.end() ? -1 : static_cast<int>(it - values_.begin());
    }

    Operand operand(const Term &t) {
        if (t.is_variable()) {
            return Operand{var_index(t.name), -1};
        }
        return Operand{-1, value_index(t)};
    }

    void equal(const Term &a, const Term &b) {
        if (a.is_variable() || b.is_variable()) {
            const Term &other = a.is_variable() ? b : a;
            if (other.is_compound() && !other.args.empty()) {
                throw OracleUnsupported("variable bound to a compound term: " + to_string(a) + "=" + to_string(b));
            }
            OracleConstraint c;
            c.kind = OracleConstraint::Kind::Equal;
            c.lhs = operand(a);
            c.rhs = operand(b);
            for (auto *op : {&c.lhs, &c.rhs}) {
                if (op->var >= 0 && std::find(c.vars.begin(), c.vars.end(), op->var) == c.vars.end()) {
                    c.vars.push_back(op->var);
                }
            }
            constraints_.push_back(std::move(c));
            return;
        }
        if (a.is_number() || b.is_number()) {
            if (!(a.is_number() && b.is_number() && a.value == b.value)) {
                has_false_ = true;
            }
            return;
        }
        if (a.name != b.name || a.args.size() != b.args.size()) {
            has_false_ = true;
            return;
        }
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            equal(a.args[i], b.args[i]);
        }
    }

    void translate(const StoreConstraint &sc) {
        if (!sc.is_numeric()) {
            equal(sc.term_equation().lhs, sc.term_equation().rhs);
            return;
        }
        const auto &lin = sc.linear();
        OracleConstraint c;
        c.kind = OracleConstraint::Kind::Linear;
        c.sense = lin.sense;
        c.constant = lin.form.constant;
        for (const auto &[var, coeff] : lin.form.coeffs) {
            int vi = var_index(var);
            c.terms.emplace_back(vi, coeff);
            c.vars.push_back(vi);
        }
        if (c.vars.empty()) {
            if (!holds(c.constant, c.sense)) {
                has_false_ = true;
            }
            return;
        }
        constraints_.push_back(std::move(c));
    }

    static bool holds(const Rational &v, Sense sense) {
        switch (sense) {
            case Sense::Eq: return v == 0;
            case Sense::Lt: return v < 0;
            case Sense::Le: return v <= 0;
        }
        return false;
    }

    std::vector<std::vector<int>> components() const {
        std::vector<int> comp(names_.size(), -1);
        std::vector<std::vector<int>> out;
        for (int start = 0; start < static_cast<int>(names_.size()); ++start) {
            if (comp[start] >= 0) {
                continue;
            }
            std::vector<int> order;
            std::deque<int> queue{start};
            comp[start] = static_cast<int>(out.size());
            while (!queue.empty()) {
                int v = queue.front();
                queue.pop_front();
                order.push_back(v);
                std::vector<int> next;
                for (auto ci : per_var_[v]) {
                    for (int w : constraints_[ci].vars) {
                        if (comp[w] < 0) {
                            comp[w] = comp[start];
                            next.push_back(w);
                        }
                    }
                }
                std::sort(next.begin(), next.end(), [&](int a, int b) { return names_[a] < names_[b]; });
                queue.insert(queue.end(), next.begin(), next.end());
            }
            out.push_back(std::move(order));
        }
        return out;
    }

    void prepare(const std::vector<int> &order) { order_ = order; }

    bool exists(const std::vector<int> &order) {
        assignment_.assign(names_.size(), -1);
        prepare(order);
        return dfs(order_.size());
    }

    //! Branches on the unassigned variable with the fewest candidates; `left` counts the
    //! unassigned variables of order_.
    bool dfs(std::size_t left) {
        if (left == 0) {
            return true;
        }
        int best = -1;
        std::vector<int> best_values;
        for (int var : order_) {
            if (assignment_[var] >= 0) {
                continue;
            }
            auto values = candidates(var);
            if (best < 0 || values.size() < best_values.size()) {
                best = var;
                best_values = std::move(values);
                if (best_values.size() <= 1) {
                    break;
                }
            }
        }
        for (int v : best_values) {
            if (++nodes_ > opts_.budget) {
                throw OracleUnsupported("finite-domain search budget exceeded");
            }
            assignment_[best] = v;
            if (consistent(best) && dfs(left - 1)) {
                assignment_[best] = -1;
                return true;
            }
        }
        assignment_[best] = -1;
        return false;
    }

    //! Every fully assigned constraint mentioning var holds.
    bool consistent(int var) const {
        for (auto ci : per_var_[var]) {
            const auto &c = constraints_[ci];
            bool ready = std::all_of(c.vars.begin(), c.vars.end(), [&](int v) { return assignment_[v] >= 0; });
            if (ready && !satisfied(c)) {
                return false;
            }
        }
        return true;
    }

    int operand_value(const Operand &op) const { return op.var >= 0 ? assignment_[op.var] : op.value; }

    bool satisfied(const OracleConstraint &c) const {
        if (c.kind == OracleConstraint::Kind::Equal) {
            int a = operand_value(c.lhs);
            return a >= 0 && a == operand_value(c.rhs);
        }
        Rational sum = c.constant;
        for (const auto &[var, coeff] : c.terms) {
            int v = assignment_[var];
            if (v >= ints_) {
                return false;
            }
            sum += coeff * (dom_.lo + v);
        }
        return holds(sum, c.sense);
    }

    static long floor_of(const Rational &r) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
        return q.get_si();
    }

    static long ceil_of(const Rational &r) {
        mpz_class q;
        mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
        return q.get_si();
    }

    //! Values for var consistent with every constraint in which it is the only unassigned variable.
    std::vector<int> candidates(int var) const {
        long lo = dom_.lo;
        long hi = dom_.hi;
        bool numeric_only = false;
        std::optional<int> forced;
        bool none = false;
        for (auto ci : per_var_[var]) {
            const auto &c = constraints_[ci];
            bool ready = std::all_of(c.vars.begin(), c.vars.end(),
                                     [&](int v) { return v == var || assignment_[v] >= 0; });
            if (!ready) {
                continue;
            }
            if (c.kind == OracleConstraint::Kind::Equal) {
                int other = c.lhs.var == var ? operand_value(c.rhs) : operand_value(c.lhs);
                if (c.lhs.var == var && c.rhs.var == var) {
                    continue;
                }
                if (other < 0 || (forced && *forced != other)) {
                    none = true;
                } else {
                    forced = other;
                }
                continue;
            }
            numeric_only = true;
            Rational a = 0;
            Rational b = c.constant;
            bool atom_seen = false;
            for (const auto &[v, coeff] : c.terms) {
                if (v == var) {
                    a += coeff;
                } else if (assignment_[v] >= ints_) {
                    atom_seen = true;
                } else {
                    b += coeff * (dom_.lo + assignment_[v]);
                }
            }
            if (atom_seen) {
                none = true;
                continue;
            }
            if (a == 0) {
                if (!holds(b, c.sense)) {
                    none = true;
                }
                continue;
            }
            Rational r = -b / a;
            if (c.sense == Sense::Eq) {
                if (!is_integer(r)) {
                    none = true;
                    continue;
                }
                lo = std::max(lo, floor_of(r));
                hi = std::min(hi, floor_of(r));
            } else if ((a > 0) == true) {
                hi = std::min(hi, c.sense == Sense::Lt ? ceil_of(r) - 1 : floor_of(r));
            } else {
                lo = std::max(lo, c.sense == Sense::Lt ? floor_of(r) + 1 : ceil_of(r));
            }
        }
        std::vector<int> out;
        if (none) {
            return out;
        }
        if (forced) {
            bool ok = *forced < ints_ ? (dom_.lo + *forced >= lo && dom_.lo + *forced <= hi) : !numeric_only;
            if (ok) {
                out.push_back(*forced);
            }
            return out;
        }
        for (long v = lo; v <= hi; ++v) {
            out.push_back(static_cast<int>(v - dom_.lo));
        }
        if (!numeric_only) {
            for (int i = ints_; i < static_cast<int>(values_.size()); ++i) {
                out.push_back(i);
            }
        }
        return out;
    }

    IntDomain dom_;
    OracleOptions opts_;
    std::vector<Term> values_;
    int ints_ = 0;
    std::map<std::string, int> index_;
    std::vector<std::string> names_;
    std::vector<OracleConstraint> constraints_;
    std::vector<std::vector<std::size_t>> per_var_;
    bool has_false_ = false;

    std::vector<int> order_;
    std::vector<int> assignment_;
    std::size_t nodes_ = 0;
};

void collect_atoms(const Term &t, std::vector<Term> &out) {
    if (t.is_compound() && t.args.empty()) {
        if (std::find(out.begin(), out.end(), t) == out.end()) {
            out.push_back(t);
        }
    }
    for (const auto &arg : t.args) {
        collect_atoms(arg, out);
    }
}

} // namespace

std::vector<Term> store_atoms(const ConstraintStore &c) {
    std::vector<Term> out;
    for (const auto &sc : c.constraints) {
        if (!sc.is_numeric()) {
            collect_atoms(sc.term_equation().lhs, out);
            collect_atoms(sc.term_equation().rhs, out);
        }
    }
    std::sort(out.begin(), out.end(), [](const Term &a, const Term &b) { return to_string(a) < to_string(b); });
    return out;
}

SolutionSet sol_finite(const ConstraintStore &c, const std::string &x, IntDomain dom, const std::vector<Term> &atoms,
                       OracleOptions opts) {
    Search search(c, x, dom, atoms, opts);
    SolutionSet out;
    out.variable = x;
    for (int v : search.solutions(x)) {
        out.values.push_back(search.value(v));
    }
    return out;
}

bool satisfiable_finite(const ConstraintStore &c, IntDomain dom, OracleOptions opts) {
    return Search(c, "", dom, {}, opts).satisfiable();
}

bool is_slice(const ConstraintStore &c, const ConstraintStore &s, const std::string &x, IntDomain dom,
              OracleOptions opts) {
    if (!c.indices_of(s)) {
        throw std::invalid_argument("candidate slice is not a subset of the store");
    }
    auto atoms = store_atoms(c);
    return sol_finite(c, x, dom, atoms, opts) == sol_finite(s, x, dom, atoms, opts);
}

std::vector<std::set<std::size_t>> minimal_slices(const ConstraintStore &c, const std::string &x, IntDomain dom) {
    if (c.size() > 6) {
        throw std::invalid_argument("minimal slice search is limited to 6 constraints");
    }
    auto atoms = store_atoms(c);
    auto full = sol_finite(c, x, dom, atoms);
    std::vector<std::set<std::size_t>> out;
    for (std::size_t size = 0; size <= c.size() && out.empty(); ++size) {
        for (unsigned mask = 0; mask < (1U << c.size()); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcount(mask)) != size) {
                continue;
            }
            std::set<std::size_t> idx;
            for (std::size_t i = 0; i < c.size(); ++i) {
                if ((mask >> i) & 1U) {
                    idx.insert(i);
                }
            }
            if (sol_finite(c.subset(idx), x, dom, atoms) == full) {
                out.push_back(std::move(idx));
            }
        }
    }
    return out;
}

IntDomain parse_domain(std::string_view text) {
    auto dots = text.find("..");
    IntDomain dom;
    auto parse = [&](std::string_view part, long &out) {
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
        if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
            throw std::invalid_argument("bad domain '" + std::string(text) + "', expected lo..hi");
        }
    };
    if (dots == std::string_view::npos) {
        throw std::invalid_argument("bad domain '" + std::string(text) + "', expected lo..hi");
    }
    parse(text.substr(0, dots), dom.lo);
    parse(text.substr(dots + 2), dom.hi);
    if (dom.lo > dom.hi) {
        throw std::invalid_argument("empty domain " + std::string(text));
    }
    return dom;
}

} // namespace clpslice
