#include "anchorbench/metrics.hpp"

namespace anchorbench {

PriceBounds derive_price_bounds(Money seller_target, Money buyer_target) {
    if (!(seller_target > buyer_target)) {
        throw DegenerateSpread("derive_price_bounds: seller_target " + seller_target.str() +
                               " must exceed buyer_target " + buyer_target.str());
    }
    Money spread = seller_target - buyer_target;
    auto k = spread.divide_exact(10);
    if (!k) {
        // Cent-precision targets always divide; anything finer is a caller bug.
        throw DegenerateSpread("derive_price_bounds: spread " + spread.str() +
                               " is not exactly divisible into the 3:4:3 ratio");
    }
    PriceBounds bounds;
    bounds.seller_target = seller_target;
    bounds.buyer_target = buyer_target;
    bounds.buyer_max = seller_target - *k * 3;
    bounds.seller_min = buyer_target + *k * 3;
    return bounds;
}

double seller_utility(const PriceBounds& bounds, Money price) {
    const double denom = (bounds.seller_target - bounds.seller_min).to_double();
    return (price - bounds.seller_min).to_double() / denom;
}

double buyer_utility(const PriceBounds& bounds, Money price) {
    const double denom = (bounds.buyer_max - bounds.buyer_target).to_double();
    return (bounds.buyer_max - price).to_double() / denom;
}

double susceptibility(double buyer_utility_baseline, double buyer_utility_anchor) {
    return buyer_utility_baseline - buyer_utility_anchor;
}

}  // namespace anchorbench
