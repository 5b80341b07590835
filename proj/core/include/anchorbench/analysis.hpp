#pragma once
// Cross-condition analysis over persisted run records: pairing with exclusion
// rules, condition tables (utility and satisfaction), trait/susceptibility
// correlations, and the resurvey stability check.
//
// A (scenario, iteration) cell enters a pairwise analysis only when BOTH
// conditions ended Accepted; excluded counts are reported alongside.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "anchorbench/persona.hpp"
#include "anchorbench/stats.hpp"
#include "anchorbench/store.hpp"
#include "anchorbench/survey.hpp"
#include "anchorbench/types.hpp"

namespace anchorbench {

struct NoPairs : Error {
    using Error::Error;
};

using MetricFn = std::function<std::optional<double>(const RunRecord&)>;

MetricFn utility_metric(Role role);
MetricFn satisfaction_metric(Role role, SurveyDimension dim);

struct PairedRuns {
    PairedSample sample;
    int excluded_cells = 0;  // cells dropped because either side was not Accepted
};

// Matched metric values in deterministic cell order (scenario appearance
// order, then iteration).
PairedRuns pair_runs(std::span<const RunRecord> records, Condition condition_a,
                     Condition condition_b, const MetricFn& metric);

struct UtilityCell {
    int n = 0;
    double mean = 0.0;
    std::optional<double> sd;
};

struct SatisfactionCell {
    int n = 0;
    DimensionScores dimensions;              // averaged per Eq-style two-step
    std::array<double, 16> item_means{};     // raw per-item means
};

struct ConditionTable {
    // keyed by (role, condition); cells absent when no accepted runs exist
    std::map<std::pair<Role, Condition>, UtilityCell> utility;
    std::map<std::pair<Role, Condition>, SatisfactionCell> satisfaction;
    std::map<Condition, int> accepted_per_condition;
    std::map<Condition, int> total_per_condition;
};

ConditionTable condition_table(std::span<const RunRecord> records);

// Per Big Five dimension, Spearman rho between buyer trait scores and the
// per-cell buyer-utility drop baseline -> seller_anchor. Dimensions whose
// correlation is undefined (constant input) carry an error note instead.
struct DimensionCorrelation {
    std::optional<CorrelationResult> result;
    std::string error;  // set when result is absent
};

std::map<Dimension, DimensionCorrelation> susceptibility_correlations(
    std::span<const RunRecord> records);

struct ResurveyStats {
    int times = 0;
    std::array<double, 16> mean{};
    std::optional<std::array<double, 16>> sd;  // absent when times == 1
};

// Re-administers the questionnaire against a fixed transcript, framed as a
// third-person evaluation ("If you were the buyer..."), and reports per-item
// mean and sd across the repetitions.
ResurveyStats resurvey(const Transcript& transcript, Role role, Agent& agent,
                       const Questionnaire& questionnaire, const std::string& instructions_template,
                       int times);

// Renders the resurvey instruction template: $ROLE substituted, transcript
// log prepended.
std::string resurvey_prompt_header(const Transcript& transcript, Role role,
                                   const std::string& instructions_template);

}  // namespace anchorbench
