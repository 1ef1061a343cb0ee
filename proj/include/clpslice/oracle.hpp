#pragma once

#include "clpslice/constraints.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace clpslice {

//! Closed integer interval.
struct IntDomain {
    long lo = 0;
    long hi = 0;
};

//! Raised for stores the finite-domain enumeration cannot interpret.
class OracleUnsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

//! Values of one variable over all satisfying valuations: integers of the domain in
//! ascending order, then atom constants occurring in the store.
struct SolutionSet {
    std::string variable;
    std::vector<Term> values;

    bool operator==(const SolutionSet &other) const = default;
};

struct OracleOptions {
    //! Search nodes before giving up with OracleUnsupported.
    std::size_t budget = 20'000'000;
};

//! Sol(x, c) by exhaustive search over dom. `atoms` extends the value domain (used to
//! evaluate a subset with the domain of its superset).
SolutionSet sol_finite(const ConstraintStore &c, const std::string &x, IntDomain dom,
                       const std::vector<Term> &atoms = {}, OracleOptions opts = {});

//! Sol(x, s) == Sol(x, c). Throws std::invalid_argument when s is not a subset of c.
bool is_slice(const ConstraintStore &c, const ConstraintStore &s, const std::string &x, IntDomain dom,
              OracleOptions opts = {});

//! Whether some valuation over dom satisfies every constraint.
bool satisfiable_finite(const ConstraintStore &c, IntDomain dom, OracleOptions opts = {});

//! All smallest subsets of c that are slices for x. Only for stores of at most 6 constraints.
std::vector<std::set<std::size_t>> minimal_slices(const ConstraintStore &c, const std::string &x, IntDomain dom);

//! Atom constants occurring in the store, in rendering order.
std::vector<Term> store_atoms(const ConstraintStore &c);

//! Parses "lo..hi".
IntDomain parse_domain(std::string_view text);

} // namespace clpslice
