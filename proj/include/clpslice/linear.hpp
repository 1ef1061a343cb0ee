#pragma once

#include "clpslice/rational.hpp"

#include <map>
#include <set>
#include <string>

namespace clpslice {

//! Affine form sum(coeffs[v] * v) + constant. Zero coefficients are never stored.
struct LinearForm {
    std::map<std::string, Rational> coeffs;
    Rational constant = 0;

    void add_term(const std::string &var, const Rational &coeff);
    void add(const LinearForm &other, const Rational &scale = 1);
    void scale(const Rational &factor);

    [[nodiscard]] bool is_constant() const { return coeffs.empty(); }
    [[nodiscard]] Rational coeff(const std::string &var) const;
    [[nodiscard]] std::set<std::string> variables() const;

    //! Replace `var` by `replacement` (no-op when var does not occur).
    void substitute(const std::string &var, const LinearForm &replacement);
    void rename(const std::string &from, const std::string &to);

    bool operator==(const LinearForm &) const = default;
};

//! form (sense) 0.
enum class Sense { Eq, Lt, Le };

struct LinearConstraint {
    LinearForm form;
    Sense sense = Sense::Eq;

    bool operator==(const LinearConstraint &) const = default;
};

std::string to_string(const LinearForm &form);
std::string to_string(const LinearConstraint &constraint);

} // namespace clpslice
