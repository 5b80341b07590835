#include "anchorbench/analysis.hpp"

#include <algorithm>

#include "anchorbench/agents.hpp"
#include "anchorbench/metrics.hpp"

namespace anchorbench {

MetricFn utility_metric(Role role) {
    return [role](const RunRecord& record) -> std::optional<double> {
        if (!record.accepted()) return std::nullopt;
        return role == Role::Seller ? record.seller_utility : record.buyer_utility;
    };
}

MetricFn satisfaction_metric(Role role, SurveyDimension dim) {
    return [role, dim](const RunRecord& record) -> std::optional<double> {
        if (!record.accepted()) return std::nullopt;
        const auto& survey = role == Role::Seller ? record.seller_survey : record.buyer_survey;
        if (!survey) return std::nullopt;
        return aggregate_response(*survey).get(dim);
    };
}

namespace {

struct Cell {
    const RunRecord* a = nullptr;
    const RunRecord* b = nullptr;
};

// cells in deterministic order: scenario appearance order, then iteration
std::vector<std::pair<std::pair<std::string, int>, Cell>> collect_cells(
    std::span<const RunRecord> records, Condition condition_a, Condition condition_b) {
    std::vector<std::pair<std::string, int>> order;
    std::map<std::pair<std::string, int>, Cell> cells;
    for (const auto& record : records) {
        if (record.condition != condition_a && record.condition != condition_b) continue;
        const auto key = std::make_pair(record.scenario_id, record.iteration);
        auto [it, inserted] = cells.try_emplace(key);
        if (inserted) order.push_back(key);
        if (record.condition == condition_a) it->second.a = &record;
        if (record.condition == condition_b) it->second.b = &record;
    }
    std::vector<std::pair<std::pair<std::string, int>, Cell>> out;
    out.reserve(order.size());
    for (const auto& key : order) out.emplace_back(key, cells[key]);
    return out;
}

}  // namespace

PairedRuns pair_runs(std::span<const RunRecord> records, Condition condition_a,
                     Condition condition_b, const MetricFn& metric) {
    PairedRuns out;
    out.sample.label_x = condition_name(condition_a);
    out.sample.label_y = condition_name(condition_b);
    for (const auto& [key, cell] : collect_cells(records, condition_a, condition_b)) {
        if (!cell.a || !cell.b || !cell.a->accepted() || !cell.b->accepted()) {
            ++out.excluded_cells;
            continue;
        }
        const auto x = metric(*cell.a);
        const auto y = metric(*cell.b);
        if (!x || !y) {
            ++out.excluded_cells;
            continue;
        }
        out.sample.pairs.emplace_back(*x, *y);
    }
    if (out.sample.pairs.empty()) {
        throw NoPairs("pair_runs: no cell accepted under both " + std::string(condition_name(condition_a)) +
                      " and " + std::string(condition_name(condition_b)));
    }
    return out;
}

ConditionTable condition_table(std::span<const RunRecord> records) {
    ConditionTable table;
    std::map<std::pair<Role, Condition>, std::vector<double>> utilities;
    std::map<std::pair<Role, Condition>, std::vector<SurveyResponse>> surveys;

    for (const auto& record : records) {
        ++table.total_per_condition[record.condition];
        if (!record.accepted()) continue;
        ++table.accepted_per_condition[record.condition];
        if (record.seller_utility) {
            utilities[{Role::Seller, record.condition}].push_back(*record.seller_utility);
        }
        if (record.buyer_utility) {
            utilities[{Role::Buyer, record.condition}].push_back(*record.buyer_utility);
        }
        if (record.seller_survey) surveys[{Role::Seller, record.condition}].push_back(*record.seller_survey);
        if (record.buyer_survey) surveys[{Role::Buyer, record.condition}].push_back(*record.buyer_survey);
    }

    for (const auto& [key, values] : utilities) {
        UtilityCell cell;
        cell.n = static_cast<int>(values.size());
        const MeanSd ms = mean_sd(values);
        cell.mean = ms.mean;
        cell.sd = ms.sd;
        table.utility[key] = cell;
    }
    for (const auto& [key, responses] : surveys) {
        SatisfactionCell cell;
        cell.n = static_cast<int>(responses.size());
        cell.dimensions = aggregate_dimensions_over_runs(responses);
        for (int item = 1; item <= 16; ++item) {
            cell.item_means[item - 1] = aggregate_over_runs(responses, item);
        }
        table.satisfaction[key] = cell;
    }
    return table;
}

std::map<Dimension, DimensionCorrelation> susceptibility_correlations(
    std::span<const RunRecord> records) {
    std::vector<double> drops;
    std::vector<std::array<int, 5>> traits;
    for (const auto& [key, cell] :
         collect_cells(records, Condition::Baseline, Condition::SellerAnchor)) {
        if (!cell.a || !cell.b || !cell.a->accepted() || !cell.b->accepted()) continue;
        if (!cell.a->buyer_utility || !cell.b->buyer_utility) continue;
        drops.push_back(susceptibility(*cell.a->buyer_utility, *cell.b->buyer_utility));
        std::array<int, 5> scores{};
        for (std::size_t d = 0; d < kDimensions.size(); ++d) {
            scores[d] = cell.a->buyer_trait_score(kDimensions[d]);
        }
        traits.push_back(scores);
    }
    if (drops.size() < 3) {
        throw NoPairs("susceptibility_correlations: need at least 3 paired cells, have " +
                      std::to_string(drops.size()));
    }

    std::map<Dimension, DimensionCorrelation> out;
    for (std::size_t d = 0; d < kDimensions.size(); ++d) {
        std::vector<double> xs(drops.size());
        for (std::size_t i = 0; i < drops.size(); ++i) xs[i] = traits[i][d];
        DimensionCorrelation entry;
        try {
            entry.result = spearman(xs, drops);
        } catch (const StatsError& e) {
            entry.error = e.what();
        }
        out[kDimensions[d]] = std::move(entry);
    }
    return out;
}

std::string resurvey_prompt_header(const Transcript& transcript, Role role,
                                   const std::string& instructions_template) {
    std::string instructions = instructions_template;
    const std::string token = "$ROLE";
    std::size_t pos;
    while ((pos = instructions.find(token)) != std::string::npos) {
        instructions.replace(pos, token.size(), role_name(role));
    }
    return transcript_log(transcript) + "\n" + instructions;
}

ResurveyStats resurvey(const Transcript& transcript, Role role, Agent& agent,
                       const Questionnaire& questionnaire, const std::string& instructions_template,
                       int times) {
    if (times < 1) throw std::invalid_argument("resurvey: times must be positive");
    const std::string header = resurvey_prompt_header(transcript, role, instructions_template);

    std::vector<SurveyResponse> responses;
    responses.reserve(times);
    for (int i = 0; i < times; ++i) {
        responses.push_back(administer(transcript, role, agent, questionnaire, header));
    }

    ResurveyStats stats;
    stats.times = times;
    for (int item = 1; item <= 16; ++item) {
        stats.mean[item - 1] = aggregate_over_runs(responses, item);
    }
    if (times >= 2) {
        std::array<double, 16> sds{};
        for (int item = 1; item <= 16; ++item) {
            std::vector<double> values;
            values.reserve(responses.size());
            for (const auto& r : responses) values.push_back(r.scores[item - 1]);
            sds[item - 1] = sample_sd(values);
        }
        stats.sd = sds;
    }
    return stats;
}

}  // namespace anchorbench
