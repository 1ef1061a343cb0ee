#include "clpslice/linear.hpp"

namespace clpslice {

void LinearForm::add_term(const std::string &var, const Rational &coeff) {
    if (coeff == 0) {
        return;
    }
    auto [it, inserted] = coeffs.emplace(var, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) {
            coeffs.erase(it);
        }
    }
}

void LinearForm::add(const LinearForm &other, const Rational &scale) {
    for (const auto &[var, coeff] : other.coeffs) {
        add_term(var, coeff * scale);
    }
    constant += other.constant * scale;
}

void LinearForm::scale(const Rational &factor) {
    if (factor == 0) {
        coeffs.clear();
        constant = 0;
        return;
    }
    for (auto &[var, coeff] : coeffs) {
        coeff *= factor;
    }
    constant *= factor;
}

Rational LinearForm::coeff(const std::string &var) const {
    auto it = coeffs.find(var);
    return it == coeffs.end() ? Rational(0) : it->second;
}

std::set<std::string> LinearForm::variables() const {
    std::set<std::string> out;
    for (const auto &entry : coeffs) {
        out.insert(entry.first);
    }
    return out;
}

void LinearForm::substitute(const std::string &var, const LinearForm &replacement) {
    auto it = coeffs.find(var);
    if (it == coeffs.end()) {
        return;
    }
    Rational c = it->second;
    coeffs.erase(it);
    add(replacement, c);
}

void LinearForm::rename(const std::string &from, const std::string &to) {
    if (from == to) {
        return;
    }
    auto it = coeffs.find(from);
    if (it == coeffs.end()) {
        return;
    }
    Rational c = it->second;
    coeffs.erase(it);
    add_term(to, c);
}

std::string to_string(const LinearForm &form) {
    std::string out;
    for (const auto &[var, coeff] : form.coeffs) {
        if (out.empty()) {
            if (coeff == -1) {
                out += "-";
            } else if (coeff != 1) {
                out += to_string(coeff) + "*";
            }
        } else {
            out += coeff < 0 ? "-" : "+";
            Rational mag = abs(coeff);
            if (mag != 1) {
                out += to_string(mag) + "*";
            }
        }
        out += var;
    }
    if (out.empty()) {
        return to_string(form.constant);
    }
    if (form.constant > 0) {
        out += "+" + to_string(form.constant);
    } else if (form.constant < 0) {
        out += "-" + to_string(Rational(-form.constant));
    }
    return out;
}

std::string to_string(const LinearConstraint &constraint) {
    static constexpr const char *ops[] = {"=", "<", "<="};
    return to_string(constraint.form) + ops[static_cast<int>(constraint.sense)] + "0";
}

} // namespace clpslice
