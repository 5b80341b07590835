#pragma once
// Post-session satisfaction questionnaire: sixteen 7-point Likert items in
// four blocks (Outcome 1-4, Self 5-8, Process 9-12, Relationship 13-16).
// Items 3 and 5 are reverse-scored: their values are replaced by 7 - score
// before the per-dimension average.

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "anchorbench/dialogue.hpp"
#include "anchorbench/types.hpp"

namespace anchorbench {

class Agent;

struct SurveyError : Error {
    using Error::Error;
};
struct SurveyParseFailure : SurveyError {
    using SurveyError::SurveyError;
};
struct EmptySet : SurveyError {
    using SurveyError::SurveyError;
};

struct QuestionItem {
    int id = 0;  // 1..16
    std::string text;
    std::map<int, std::string> scale_anchors;  // keys 1, 4, 7
};

struct Questionnaire {
    std::vector<QuestionItem> items;  // exactly 16, ordered

    static constexpr std::array<int, 2> kReversedItems = {3, 5};
    static bool is_reversed(int item) { return item == 3 || item == 5; }

    static Questionnaire load(const std::filesystem::path& path);
    static Questionnaire parse(std::string_view json_text);
};

struct SurveyResponse {
    std::string session_id;
    Role role = Role::Seller;
    std::array<int, 16> scores{};  // index i holds item i+1, each in [1,7]
};

enum class SurveyDimension { Outcome, Self, Process, Relationship };

inline constexpr std::array<SurveyDimension, 4> kSurveyDimensions = {
    SurveyDimension::Outcome, SurveyDimension::Self, SurveyDimension::Process,
    SurveyDimension::Relationship};

std::string_view survey_dimension_name(SurveyDimension dim);

struct DimensionScores {
    double outcome = 0.0;
    double self = 0.0;
    double process = 0.0;
    double relationship = 0.0;

    double get(SurveyDimension dim) const;
};

// Per dimension, the mean of its 4 items with items 3 and 5 replaced by
// (7 - score) first.
DimensionScores aggregate_response(const SurveyResponse& response);

// Mean of RAW item scores across responses (1-based item index). Reversal is
// applied only at dimension level; averaging items first and combining later
// gives identical results because both steps are affine.
double aggregate_over_runs(std::span<const SurveyResponse> responses, int item);

// Combines item-level cross-run means into dimension scores (reversal here).
DimensionScores aggregate_dimensions_over_runs(std::span<const SurveyResponse> responses);

// Accepts "5, 6, 2, ..." or numbered "1. 5" lines; exactly 16 integers in
// [1,7] or nullopt.
std::optional<std::array<int, 16>> parse_survey_reply(std::string_view reply);

// Questionnaire rendered as numbered items with their 1/4/7 anchors plus the
// strict answer-format instruction.
std::string build_survey_prompt(const Questionnaire& questionnaire,
                                const std::string& instructions);

// Asks the agent once and re-asks up to 2 times on unusable replies, then
// throws SurveyParseFailure.
SurveyResponse administer(const Transcript& transcript, Role role, Agent& agent,
                          const Questionnaire& questionnaire, const std::string& instructions);

// Plain-text rendering of a transcript ("seller: ...\nbuyer: ..."), used in
// survey and resurvey prompts.
std::string transcript_log(const Transcript& transcript);

}  // namespace anchorbench
