#include "clpslice/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace clpslice {

std::string to_string(const Rational &value) { return value.get_str(); }

Rational parse_rational(std::string_view text) {
    auto valid = !text.empty();
    auto slashes = 0;
    for (std::size_t i = 0; i < text.size() && valid; ++i) {
        char c = text[i];
        if (c == '/') {
            valid = ++slashes == 1 && i > 0 && i + 1 < text.size();
        } else if (c == '-' || c == '+') {
            valid = i == 0 && text.size() > 1;
        } else {
            valid = std::isdigit(static_cast<unsigned char>(c)) != 0;
        }
    }
    if (!valid) {
        throw std::invalid_argument("not a rational literal: " + std::string(text));
    }
    std::string digits(text.front() == '+' ? text.substr(1) : text);
    Rational result(digits);
    if (result.get_den() == 0) {
        throw std::invalid_argument("zero denominator: " + std::string(text));
    }
    result.canonicalize();
    return result;
}

} // namespace clpslice
