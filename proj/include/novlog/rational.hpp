#pragma once

#include <gmpxx.h>

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

namespace novlog {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "p", "-p" or "p/q" with decimal digits. Rejects a zero
/// denominator and anything that is not plain integer syntax.
inline std::optional<Rational> parse_rational(std::string_view text) {
    auto digits = [](std::string_view s) {
        if (s.empty())
            return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                return false;
        return true;
    };
    std::string_view num = text;
    std::string_view den = "1";
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
    }
    std::string_view num_digits = num;
    if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+'))
        num_digits.remove_prefix(1);
    if (!digits(num_digits) || !digits(den))
        return std::nullopt;
    mpz_class n, d;
    if (n.set_str(std::string(num_digits), 10) != 0 || d.set_str(std::string(den), 10) != 0)
        return std::nullopt;
    if (d == 0)
        return std::nullopt;
    if (num.front() == '-')
        n = -n;
    Rational q(n, d);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational &q) { return q.get_str(); }

} // namespace novlog
