#include "qclp/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace qclp {

Rational make_rational(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string to_fraction_string(const Rational& r) {
    return r.get_str();
}

std::string to_decimal_string(const Rational& r, int places) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
    mpz_class num = r.get_num() * scale;
    mpz_class scaled = num / r.get_den();
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string digits = scaled.get_str();
    if (static_cast<int>(digits.size()) <= places)
        digits.insert(0, static_cast<size_t>(places) + 1 - digits.size(), '0');
    std::string out = digits.substr(0, digits.size() - static_cast<size_t>(places));
    if (places > 0) {
        out += '.';
        out += digits.substr(digits.size() - static_cast<size_t>(places));
    }
    return negative ? "-" + out : out;
}

std::optional<Rational> parse_decimal(std::string_view text, int max_fraction_digits) {
    if (text.empty()) return std::nullopt;
    std::string whole, frac;
    size_t i = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) whole += text[i++];
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) frac += text[i++];
        if (frac.empty()) return std::nullopt;  // "7." is not a number
    }
    if (i != text.size() || (whole.empty() && frac.empty())) return std::nullopt;
    if (static_cast<int>(frac.size()) > max_fraction_digits) return std::nullopt;
    if (whole.empty()) whole = "0";
    mpz_class num(whole + frac, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::optional<Rational> parse_rational(std::string_view text) {
    size_t slash = text.find('/');
    if (slash == std::string_view::npos) return parse_decimal(text);
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    if (num.empty() || den.empty()) return std::nullopt;
    for (char c : num)
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    for (char c : den)
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    mpz_class d(std::string(den), 10);
    if (d == 0) return std::nullopt;
    Rational r(mpz_class(std::string(num), 10), d);
    r.canonicalize();
    return r;
}

}  // namespace qclp
