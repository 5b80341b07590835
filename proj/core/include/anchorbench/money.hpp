#pragma once
// Exact fixed-point money.
//
// Prices entering the system carry at most two fraction digits; deriving the
// acceptable-price bounds divides a spread by 10, which adds a third. Four
// digits of fixed-point headroom keep all of that exact, so the bound
// construction ratio holds with no floating-point drift.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace anchorbench {

class Money {
public:
    static constexpr std::int64_t kScale = 10'000;

    constexpr Money() = default;

    static constexpr Money from_units(std::int64_t units) {
        Money m;
        m.units_ = units;
        return m;
    }
    static constexpr Money from_cents(std::int64_t cents) { return from_units(cents * (kScale / 100)); }
    static constexpr Money from_whole(std::int64_t amount) { return from_units(amount * kScale); }

    // Nearest cent, ties away from zero. For values computed in floating
    // point (scripted concession schedules); never used on parsed input.
    static Money from_double_cents(double value);

    // Strict decimal parse: optional leading '$', optional comma thousands
    // separators (validated 3-digit groups), at most max_fraction_digits
    // after the point. Rejects trailing junk.
    static std::optional<Money> parse(std::string_view text, int max_fraction_digits = 2);

    constexpr std::int64_t units() const { return units_; }
    constexpr bool is_cent_precision() const { return units_ % (kScale / 100) == 0; }
    double to_double() const { return static_cast<double>(units_) / kScale; }

    // Canonical decimal string: no separators, minimal fraction digits
    // ("2550", "14.4", "2137.22"). Round-trips through parse(text, 4).
    std::string str() const;

    constexpr Money operator+(Money other) const { return from_units(units_ + other.units_); }
    constexpr Money operator-(Money other) const { return from_units(units_ - other.units_); }
    constexpr Money operator*(std::int64_t k) const { return from_units(units_ * k); }
    constexpr Money operator-() const { return from_units(-units_); }

    // Exact division; nullopt when the result would not be representable.
    constexpr std::optional<Money> divide_exact(std::int64_t k) const {
        if (k == 0 || units_ % k != 0) return std::nullopt;
        return from_units(units_ / k);
    }

    auto operator<=>(const Money&) const = default;

private:
    std::int64_t units_ = 0;
};

}  // namespace anchorbench
