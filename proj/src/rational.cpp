#include "deceptiplan/rational.hpp"

#include <cctype>

namespace deceptiplan {

std::string Rational::decimal_str() const {
    if (den == 1) return std::to_string(num);
    // exact decimal when the denominator divides a power of ten
    long long d = den;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1) return str(); // fall back to num/den
    int digits = twos > fives ? twos : fives;
    long long scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    long long scaled = num * (scale / den);
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string frac = std::to_string(scaled % scale);
    frac.insert(frac.begin(), digits - frac.size(), '0');
    return (neg ? "-" : "") + std::to_string(scaled / scale) + "." + frac;
}

Rational Rational::parse(const std::string& text) {
    size_t i = 0, n = text.size();
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    size_t end = n;
    while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    if (i >= end) throw std::invalid_argument("empty number");

    bool neg = false;
    if (text[i] == '+' || text[i] == '-') {
        neg = text[i] == '-';
        ++i;
    }
    long long num = 0, den = 1;
    bool any = false, frac = false;
    for (; i < end; ++i) {
        char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            num = num * 10 + (c - '0');
            if (frac) den *= 10;
            any = true;
        } else if (c == '.' && !frac) {
            frac = true;
        } else if (c == '/' && !frac && any) {
            Rational d = Rational::parse(text.substr(i + 1, end - i - 1));
            if (d.num == 0) throw std::invalid_argument("division by zero in number");
            return Rational(neg ? -num : num) * Rational(d.den, d.num);
        } else {
            throw std::invalid_argument("malformed number '" + text + "'");
        }
    }
    if (!any) throw std::invalid_argument("malformed number '" + text + "'");
    return Rational(neg ? -num : num, den);
}

} // namespace deceptiplan
