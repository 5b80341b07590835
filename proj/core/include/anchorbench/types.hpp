#pragma once
// Shared enums and the error base used across the library.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace anchorbench {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Role { Seller, Buyer };

inline constexpr std::string_view role_name(Role role) {
    return role == Role::Seller ? "seller" : "buyer";
}

std::optional<Role> parse_role(std::string_view name);

// The three prompt conditions. At the wire level and in files these always
// appear under their snake_case names.
enum class Condition { Baseline, SellerAnchor, SellerAnchorBuyerInformed };

inline constexpr std::string_view condition_name(Condition condition) {
    switch (condition) {
        case Condition::Baseline: return "baseline";
        case Condition::SellerAnchor: return "seller_anchor";
        case Condition::SellerAnchorBuyerInformed: return "seller_anchor_buyer_informed";
    }
    return "baseline";
}

std::optional<Condition> parse_condition(std::string_view name);

inline constexpr Role other_role(Role role) {
    return role == Role::Seller ? Role::Buyer : Role::Seller;
}

}  // namespace anchorbench
