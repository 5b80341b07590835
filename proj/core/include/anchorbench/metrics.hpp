#pragma once
// Objective negotiation metrics.
//
// The acceptable-price interval is constructed from the two targets so that
// (seller_target - buyer_max) : (buyer_max - seller_min) : (seller_min -
// buyer_target) = 3:4:3 exactly. Utilities are the agreed price normalized
// against each side's interval and are deliberately not clamped, so values
// outside [0, 1] are legal. An algebraic consequence of the 3:4:3 split is
// that seller and buyer utility always sum to 4/7.

#include "anchorbench/money.hpp"
#include "anchorbench/types.hpp"

namespace anchorbench {

struct PriceBounds {
    Money seller_target;  // seller's stated goal
    Money seller_min;     // least the seller finds acceptable
    Money buyer_max;      // most the buyer finds acceptable
    Money buyer_target;   // buyer's stated goal
};

struct DegenerateSpread : Error {
    using Error::Error;
};

// k = (seller_target - buyer_target) / 10; buyer_max = seller_target - 3k,
// seller_min = buyer_target + 3k. Exact in fixed-point arithmetic.
PriceBounds derive_price_bounds(Money seller_target, Money buyer_target);

// (price - seller_min) / (seller_target - seller_min)
double seller_utility(const PriceBounds& bounds, Money price);

// (buyer_max - price) / (buyer_max - buyer_target)
double buyer_utility(const PriceBounds& bounds, Money price);

// Buyer-utility drop from the baseline run to the anchored run of a matched
// cell; positive means the anchor moved the buyer.
double susceptibility(double buyer_utility_baseline, double buyer_utility_anchor);

}  // namespace anchorbench
