#include "anchorbench/catalog.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace anchorbench {
namespace {

// Prices may arrive as JSON numbers or as strings ("2550", "15.5"). Numbers
// are re-serialized and parsed as decimals so 0.1-style binary noise cannot
// leak into the exact representation.
Money parse_price(const nlohmann::json& value, std::size_t record_index, const char* field) {
    std::string text;
    if (value.is_string()) {
        text = value.get<std::string>();
    } else if (value.is_number_integer()) {
        text = std::to_string(value.get<std::int64_t>());
    } else if (value.is_number_float()) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.2f", value.get<double>());
        text = buf;
    } else {
        throw CatalogParseError("catalog record " + std::to_string(record_index) + ": field " +
                                field + " must be a number or decimal string");
    }
    auto parsed = Money::parse(text, 2);
    if (!parsed) {
        throw CatalogParseError("catalog record " + std::to_string(record_index) + ": field " +
                                field + " is not a valid price: \"" + text + "\"");
    }
    return *parsed;
}

}  // namespace

const Scenario* Catalog::find(std::string_view id) const {
    for (const auto& s : scenarios) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

Catalog load_catalog(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CatalogParseError("catalog: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_catalog(buf.str());
}

Catalog parse_catalog(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw CatalogParseError(std::string("catalog: ") + e.what());
    }
    if (!doc.is_array()) throw CatalogParseError("catalog: top level must be an array of records");

    Catalog catalog;
    std::set<std::string> seen_ids;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& rec = doc[i];
        if (!rec.is_object()) {
            throw CatalogParseError("catalog record " + std::to_string(i) + ": not an object");
        }
        Scenario s;
        for (const char* field : {"id", "title", "description"}) {
            if (!rec.contains(field) || !rec[field].is_string()) {
                throw CatalogParseError("catalog record " + std::to_string(i) +
                                        ": missing string field \"" + field + "\"");
            }
        }
        s.id = rec["id"].get<std::string>();
        s.title = rec["title"].get<std::string>();
        s.description = rec["description"].get<std::string>();
        if (!rec.contains("seller_target") || !rec.contains("buyer_target")) {
            throw CatalogParseError("catalog record " + std::to_string(i) + ": missing target price");
        }
        s.seller_target = parse_price(rec["seller_target"], i, "seller_target");
        s.buyer_target = parse_price(rec["buyer_target"], i, "buyer_target");

        if (s.id.empty()) {
            throw CatalogValidationError("catalog record " + std::to_string(i) + ": empty id");
        }
        if (s.title.empty() || s.description.empty()) {
            throw CatalogValidationError("catalog record " + std::to_string(i) + " (id " + s.id +
                                         "): title and description must be non-empty");
        }
        if (!(s.buyer_target > Money{})) {
            throw CatalogValidationError("catalog record " + std::to_string(i) + " (id " + s.id +
                                         "): buyer_target must be positive");
        }
        if (!(s.seller_target > s.buyer_target)) {
            throw CatalogValidationError("catalog record " + std::to_string(i) + " (id " + s.id +
                                         "): seller_target (" + s.seller_target.str() +
                                         ") must exceed buyer_target (" + s.buyer_target.str() + ")");
        }
        if (!seen_ids.insert(s.id).second) {
            throw CatalogValidationError("catalog record " + std::to_string(i) + ": duplicate id " + s.id);
        }
        catalog.scenarios.push_back(std::move(s));
    }
    return catalog;
}

std::string catalog_to_json(const Catalog& catalog) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : catalog.scenarios) {
        arr.push_back({{"id", s.id},
                       {"title", s.title},
                       {"description", s.description},
                       {"seller_target", s.seller_target.str()},
                       {"buyer_target", s.buyer_target.str()}});
    }
    return arr.dump(2) + "\n";
}

namespace {

std::string sanitize_for_filename(std::string_view raw) {
    std::string out;
    for (char c : raw.substr(0, 24)) {
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    }
    return out;
}

}  // namespace

std::vector<SessionPlan> plan_sessions(const Catalog& catalog, int per_product,
                                       const std::vector<Condition>& conditions,
                                       std::uint64_t master_seed) {
    if (catalog.scenarios.empty()) throw CatalogValidationError("plan_sessions: empty catalog");
    if (per_product < 1) throw std::invalid_argument("plan_sessions: per_product must be positive");
    if (conditions.empty()) throw std::invalid_argument("plan_sessions: no conditions");

    std::vector<SessionPlan> plans;
    plans.reserve(catalog.scenarios.size() * per_product * conditions.size());
    std::size_t index = 0;
    for (const auto& scenario : catalog.scenarios) {
        for (int iteration = 1; iteration <= per_product; ++iteration) {
            // One profile pair per cell, independent of condition order.
            Rng cell_rng(derive_seed(master_seed,
                                     {"profiles", scenario.id, std::to_string(iteration)}));
            PersonalityProfile seller_profile = sample_profile(cell_rng);
            PersonalityProfile buyer_profile = sample_profile(cell_rng);
            for (Condition condition : conditions) {
                SessionPlan plan;
                char prefix[8];
                std::snprintf(prefix, sizeof(prefix), "%05zu", index++);
                plan.session_id = std::string(prefix) + "_" + sanitize_for_filename(scenario.id) +
                                  "_i" + std::to_string(iteration) + "_" +
                                  std::string(condition_name(condition));
                plan.scenario_id = scenario.id;
                plan.iteration = iteration;
                plan.condition = condition;
                plan.seller_profile = seller_profile;
                plan.buyer_profile = buyer_profile;
                plans.push_back(std::move(plan));
            }
        }
    }
    return plans;
}

}  // namespace anchorbench
