#pragma once
// Negotiation scenario catalog: products, descriptions, and the two target
// prices. File format is a JSON array of records with keys id, title,
// description, seller_target, buyer_target (decimals, two fraction digits max).

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "anchorbench/money.hpp"
#include "anchorbench/persona.hpp"
#include "anchorbench/types.hpp"

namespace anchorbench {

struct Scenario {
    std::string id;
    std::string title;
    std::string description;
    Money seller_target;
    Money buyer_target;
};

struct Catalog {
    std::vector<Scenario> scenarios;

    const Scenario* find(std::string_view id) const;
};

struct CatalogParseError : Error {
    using Error::Error;
};
struct CatalogValidationError : Error {
    using Error::Error;
};

Catalog load_catalog(const std::filesystem::path& path);
Catalog parse_catalog(std::string_view json_text);
std::string catalog_to_json(const Catalog& catalog);

// One planned session. Personality profiles are sampled once per
// (scenario, iteration) cell and shared across that cell's conditions, so
// later analyses can pair runs.
struct SessionPlan {
    std::string session_id;
    std::string scenario_id;
    int iteration = 1;  // 1-based
    Condition condition = Condition::Baseline;
    PersonalityProfile seller_profile;
    PersonalityProfile buyer_profile;
};

// Deterministic under master_seed: the (scenario, iteration, condition) index
// set depends only on the inputs, and profiles only on the seed.
std::vector<SessionPlan> plan_sessions(const Catalog& catalog, int per_product,
                                       const std::vector<Condition>& conditions,
                                       std::uint64_t master_seed);

}  // namespace anchorbench
