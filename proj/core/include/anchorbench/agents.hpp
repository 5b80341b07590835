#pragma once
// Role prompt assembly per condition, the agent contract, and deterministic
// scripted policies used as stand-ins for model-backed agents in tests and
// offline runs.
//
// Templates live as editable text files with $-placeholders. The condition
// blocks are appended verbatim: sellers get the anchor instruction under both
// anchor conditions, buyers get the informed counter-strategy block under
// seller_anchor_buyer_informed only. The control-trailer instruction is a
// harness addition kept in its own template file, clearly separate from the
// role templates.

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "anchorbench/catalog.hpp"
#include "anchorbench/dialogue.hpp"
#include "anchorbench/money.hpp"
#include "anchorbench/persona.hpp"
#include "anchorbench/types.hpp"

namespace anchorbench {

struct TemplateError : Error {
    using Error::Error;
};

class PromptTemplates {
public:
    // Loads every *.txt in the directory; these names must be present:
    // seller_setting, buyer_setting, seller_anchor,
    // seller_anchor_buyer_informed, control_trailer, survey_instructions,
    // resurvey_instructions.
    static PromptTemplates load(const std::filesystem::path& dir);

    const std::string& text(const std::string& name) const;
    std::map<std::string, std::string> digests() const;  // name -> fnv64 hex

private:
    std::map<std::string, std::string> by_name_;
};

struct RolePrompt {
    Role role = Role::Seller;
    std::string system_text;
};

// Substitutes $PRODUCT, $TARGET_PRICE, $DESCRIPTION (seller only) and
// $PERSONA_TEXT, then appends the condition block for this role, and the
// trailer instruction when include_trailer_instruction is set.
RolePrompt build_role_prompt(Role role, const Scenario& scenario, const PersonaText& persona,
                             Condition condition, const PromptTemplates& templates,
                             bool include_trailer_instruction = true);

struct PolicyExhausted : Error {
    using Error::Error;
};

class Agent {
public:
    virtual ~Agent() = default;

    // Next turn given the annotated history (alternating roles, seller
    // first). Scripted agents always attach a control trailer.
    virtual AgentUtterance next_utterance(std::span<const AnnotatedTurn> history) = 0;

    // Free-form reply to a post-session questionnaire prompt, given the
    // dialogue the agent took part in (empty for third-person evaluation).
    virtual std::string survey_reply(std::span<const AnnotatedTurn> history,
                                     const std::string& prompt) = 0;
};

// Scripted seller: opens at anchor_multiplier x target under the anchor
// conditions (plain target otherwise), concedes geometrically toward its
// floor, and accepts once the buyer's standing offer reaches the concession
// it was about to make.
struct AnchorSellerParams {
    double anchor_multiplier = 1.6;  // >= 1
    double concession_rate = 0.25;   // in (0,1)
    Money floor;
};

// Scripted buyer: anchors an internal reference at
// (1-c)*buyer_target + c*first_seller_offer with c = susceptibility_coeff,
// opens at open_ratio x target, raises its offers geometrically toward the
// reference, and accepts once the seller's offer is within accept_gap of
// max(current willingness, buyer_target).
struct ConcessionBuyerParams {
    double open_ratio = 1.0;          // in (0,1]
    double step = 0.5;                // in (0,1)
    Money accept_gap;                 // >= 0
    double susceptibility_coeff = 0.5;  // in [0,1]
};

inline constexpr std::array<int, 16> kDefaultSellerSurveyAnswers = {5, 5, 3, 5, 2, 6, 5, 6,
                                                                    5, 5, 5, 5, 5, 5, 5, 5};
inline constexpr std::array<int, 16> kDefaultBuyerSurveyAnswers = {5, 6, 2, 5, 1, 7, 4, 6,
                                                                   5, 6, 5, 5, 5, 5, 5, 5};

class ScriptedSeller : public Agent {
public:
    ScriptedSeller(const Scenario& scenario, const AnchorSellerParams& params, Condition condition,
                   std::array<int, 16> survey_answers = kDefaultSellerSurveyAnswers);

    AgentUtterance next_utterance(std::span<const AnnotatedTurn> history) override;
    std::string survey_reply(std::span<const AnnotatedTurn> history,
                             const std::string& prompt) override;

private:
    Scenario scenario_;
    AnchorSellerParams params_;
    bool anchor_active_;
    std::array<int, 16> survey_answers_;
    std::optional<Money> current_offer_;
    bool done_ = false;
};

class ScriptedBuyer : public Agent {
public:
    ScriptedBuyer(const Scenario& scenario, const ConcessionBuyerParams& params,
                  std::array<int, 16> survey_answers = kDefaultBuyerSurveyAnswers);

    AgentUtterance next_utterance(std::span<const AnnotatedTurn> history) override;
    std::string survey_reply(std::span<const AnnotatedTurn> history,
                             const std::string& prompt) override;

private:
    Scenario scenario_;
    ConcessionBuyerParams params_;
    std::array<int, 16> survey_answers_;
    std::optional<Money> reference_;    // set from the first seller offer
    std::optional<Money> willingness_;  // current counteroffer level
    bool greeted_ = false;
    bool done_ = false;
};

std::string format_survey_answers(std::span<const int> answers);

// Questionnaire responder with a fixed answer vector; stands in for an agent
// when only survey replies are needed (scripted survey/resurvey paths).
class FixedSurveyAgent : public Agent {
public:
    explicit FixedSurveyAgent(std::array<int, 16> answers) : answers_(answers) {}

    AgentUtterance next_utterance(std::span<const AnnotatedTurn>) override {
        throw PolicyExhausted("FixedSurveyAgent cannot take dialogue turns");
    }
    std::string survey_reply(std::span<const AnnotatedTurn>, const std::string&) override {
        return format_survey_answers(answers_);
    }

private:
    std::array<int, 16> answers_;
};

}  // namespace anchorbench
