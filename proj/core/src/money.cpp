#include "anchorbench/money.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace anchorbench {

Money Money::from_double_cents(double value) {
    double cents = value * 100.0;
    double rounded = cents >= 0 ? std::floor(cents + 0.5) : std::ceil(cents - 0.5);
    return from_cents(static_cast<std::int64_t>(rounded));
}

std::optional<Money> Money::parse(std::string_view text, int max_fraction_digits) {
    std::size_t pos = 0;
    auto peek = [&]() -> int { return pos < text.size() ? static_cast<unsigned char>(text[pos]) : -1; };

    bool negative = false;
    if (peek() == '-') {
        negative = true;
        ++pos;
    }
    if (peek() == '$') ++pos;
    if (pos >= text.size() || !std::isdigit(peek())) return std::nullopt;

    // Integer part, with optional comma grouping. Once a comma appears,
    // every following group must be exactly three digits.
    std::int64_t whole = 0;
    bool grouped = false;
    std::size_t first_group_len = 0;
    std::size_t group_len = 0;
    while (pos < text.size()) {
        int c = peek();
        if (std::isdigit(c)) {
            whole = whole * 10 + (c - '0');
            ++group_len;
            if (whole > 1'000'000'000'000ll) return std::nullopt;  // keep units in range
            ++pos;
        } else if (c == ',') {
            if (group_len == 0) return std::nullopt;
            if (!grouped) {
                if (group_len > 3) return std::nullopt;
                first_group_len = group_len;
                grouped = true;
            } else if (group_len != 3) {
                return std::nullopt;
            }
            group_len = 0;
            ++pos;
        } else {
            break;
        }
    }
    if (grouped && group_len != 3) return std::nullopt;
    (void)first_group_len;

    std::int64_t frac_units = 0;
    if (peek() == '.') {
        ++pos;
        int digits = 0;
        std::int64_t scale = kScale;
        while (pos < text.size() && std::isdigit(peek())) {
            ++digits;
            if (digits > max_fraction_digits) return std::nullopt;
            scale /= 10;
            frac_units += (peek() - '0') * scale;
            ++pos;
        }
        if (digits == 0) return std::nullopt;
    }
    if (pos != text.size()) return std::nullopt;

    std::int64_t units = whole * kScale + frac_units;
    return from_units(negative ? -units : units);
}

std::string Money::str() const {
    std::int64_t units = units_;
    bool negative = units < 0;
    if (negative) units = -units;
    std::int64_t whole = units / kScale;
    std::int64_t frac = units % kScale;

    char buf[40];
    if (frac == 0) {
        std::snprintf(buf, sizeof(buf), "%s%lld", negative ? "-" : "", static_cast<long long>(whole));
        return buf;
    }
    int digits = 4;
    while (frac % 10 == 0) {
        frac /= 10;
        --digits;
    }
    std::snprintf(buf, sizeof(buf), "%s%lld.%0*lld", negative ? "-" : "",
                  static_cast<long long>(whole), digits, static_cast<long long>(frac));
    return buf;
}

}  // namespace anchorbench
