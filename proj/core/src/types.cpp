#include "anchorbench/types.hpp"

namespace anchorbench {

std::optional<Role> parse_role(std::string_view name) {
    if (name == "seller") return Role::Seller;
    if (name == "buyer") return Role::Buyer;
    return std::nullopt;
}

std::optional<Condition> parse_condition(std::string_view name) {
    if (name == "baseline") return Condition::Baseline;
    if (name == "seller_anchor") return Condition::SellerAnchor;
    if (name == "seller_anchor_buyer_informed") return Condition::SellerAnchorBuyerInformed;
    return std::nullopt;
}

}  // namespace anchorbench
