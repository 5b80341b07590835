#include "anchorbench/agents.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "anchorbench/rng.hpp"

namespace anchorbench {

namespace {

constexpr const char* kRequiredTemplates[] = {
    "seller_setting",
    "buyer_setting",
    "seller_anchor",
    "seller_anchor_buyer_informed",
    "control_trailer",
    "survey_instructions",
    "resurvey_instructions",
};

std::string replace_all(std::string text, std::string_view token, std::string_view value) {
    std::size_t pos = 0;
    while ((pos = text.find(token, pos)) != std::string::npos) {
        text.replace(pos, token.size(), value);
        pos += value.size();
    }
    return text;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
    PromptTemplates templates;
    if (!std::filesystem::is_directory(dir)) {
        throw TemplateError("templates: not a directory: " + dir.string());
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        // trim exactly one trailing newline so editors can keep files POSIX-clean
        if (!text.empty() && text.back() == '\n') text.pop_back();
        templates.by_name_[entry.path().stem().string()] = std::move(text);
    }
    for (const char* name : kRequiredTemplates) {
        if (!templates.by_name_.count(name)) {
            throw TemplateError("templates: missing " + std::string(name) + ".txt in " + dir.string());
        }
    }
    return templates;
}

const std::string& PromptTemplates::text(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw TemplateError("templates: unknown template " + name);
    return it->second;
}

std::map<std::string, std::string> PromptTemplates::digests() const {
    std::map<std::string, std::string> out;
    for (const auto& [name, text] : by_name_) out[name] = hex64(fnv1a64(text));
    return out;
}

RolePrompt build_role_prompt(Role role, const Scenario& scenario, const PersonaText& persona,
                             Condition condition, const PromptTemplates& templates,
                             bool include_trailer_instruction) {
    std::string text =
        templates.text(role == Role::Seller ? "seller_setting" : "buyer_setting");
    text = replace_all(std::move(text), "$PRODUCT", scenario.title);
    text = replace_all(std::move(text), "$TARGET_PRICE",
                       role == Role::Seller ? scenario.seller_target.str()
                                            : scenario.buyer_target.str());
    text = replace_all(std::move(text), "$DESCRIPTION", scenario.description);
    text = replace_all(std::move(text), "$PERSONA_TEXT", persona.rendered);

    const bool anchor = condition != Condition::Baseline;
    if (role == Role::Seller && anchor) {
        text += "\n\n" + templates.text("seller_anchor");
    }
    if (role == Role::Buyer && condition == Condition::SellerAnchorBuyerInformed) {
        text += "\n\n" + templates.text("seller_anchor_buyer_informed");
    }
    if (include_trailer_instruction) {
        text += "\n\n" + templates.text("control_trailer");
    }
    return RolePrompt{role, std::move(text)};
}

std::string format_survey_answers(std::span<const int> answers) {
    std::string out;
    for (std::size_t i = 0; i < answers.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(answers[i]);
    }
    return out;
}

namespace {

std::string trailer_line(NegotiationState state, std::optional<Money> price) {
    std::string out = "\n<<state=" + std::string(negotiation_state_name(state));
    if (price) out += " price=" + price->str();
    out += ">>";
    return out;
}

AgentUtterance make_utterance(std::string text, NegotiationState state,
                              std::optional<Money> price) {
    AgentUtterance utt;
    utt.text = std::move(text) + trailer_line(state, price);
    utt.control = ControlTrailer{state, price};
    return utt;
}

std::optional<Money> last_offer_by(std::span<const AnnotatedTurn> history, Role role) {
    for (auto it = history.rbegin(); it != history.rend(); ++it) {
        if (it->role == role && it->state == NegotiationState::Offer && it->price) return it->price;
    }
    return std::nullopt;
}

}  // namespace

ScriptedSeller::ScriptedSeller(const Scenario& scenario, const AnchorSellerParams& params,
                               Condition condition, std::array<int, 16> survey_answers)
    : scenario_(scenario),
      params_(params),
      anchor_active_(condition != Condition::Baseline),
      survey_answers_(survey_answers) {
    if (params_.anchor_multiplier < 1.0) throw std::invalid_argument("anchor_multiplier must be >= 1");
    if (params_.concession_rate <= 0.0 || params_.concession_rate >= 1.0) {
        throw std::invalid_argument("concession_rate must be in (0,1)");
    }
}

AgentUtterance ScriptedSeller::next_utterance(std::span<const AnnotatedTurn> history) {
    if (done_) throw PolicyExhausted("scripted seller asked to move past an absorbing state");

    if (!current_offer_) {
        const Money open = anchor_active_
                               ? Money::from_double_cents(scenario_.seller_target.to_double() *
                                                          params_.anchor_multiplier)
                               : scenario_.seller_target;
        current_offer_ = open;
        return make_utterance("Thanks for your interest in the " + scenario_.title +
                                  "! I can offer it to you for $" + open.str() + ".",
                              NegotiationState::Offer, open);
    }

    const std::optional<Money> buyer_offer = last_offer_by(history, Role::Buyer);
    const Money candidate = Money::from_double_cents(
        current_offer_->to_double() -
        params_.concession_rate * (current_offer_->to_double() - params_.floor.to_double()));

    if (buyer_offer && *buyer_offer >= candidate) {
        done_ = true;
        return make_utterance("Alright, you've got a deal at $" + buyer_offer->str() + ".",
                              NegotiationState::Accept, *buyer_offer);
    }
    current_offer_ = candidate;
    return make_utterance("I hear you. I could come down to $" + candidate.str() + ".",
                          NegotiationState::Offer, candidate);
}

std::string ScriptedSeller::survey_reply(std::span<const AnnotatedTurn>, const std::string&) {
    return format_survey_answers(survey_answers_);
}

ScriptedBuyer::ScriptedBuyer(const Scenario& scenario, const ConcessionBuyerParams& params,
                             std::array<int, 16> survey_answers)
    : scenario_(scenario), params_(params), survey_answers_(survey_answers) {
    if (params_.open_ratio <= 0.0 || params_.open_ratio > 1.0) {
        throw std::invalid_argument("open_ratio must be in (0,1]");
    }
    if (params_.step <= 0.0 || params_.step >= 1.0) {
        throw std::invalid_argument("step must be in (0,1)");
    }
    if (params_.susceptibility_coeff < 0.0 || params_.susceptibility_coeff > 1.0) {
        throw std::invalid_argument("susceptibility_coeff must be in [0,1]");
    }
    if (params_.accept_gap < Money{}) throw std::invalid_argument("accept_gap must be >= 0");
}

AgentUtterance ScriptedBuyer::next_utterance(std::span<const AnnotatedTurn> history) {
    if (done_) throw PolicyExhausted("scripted buyer asked to move past an absorbing state");

    const std::optional<Money> seller_offer = last_offer_by(history, Role::Seller);
    if (!seller_offer) {
        if (greeted_) {
            // seller still has not named a price; keep the floor open
            return make_utterance("How much are you asking for it?", NegotiationState::ChitChat,
                                  std::nullopt);
        }
        greeted_ = true;
        return make_utterance("Hello! I'm interested in the " + scenario_.title +
                                  ". What are you asking for it?",
                              NegotiationState::ChitChat, std::nullopt);
    }

    if (!reference_) {
        const double c = params_.susceptibility_coeff;
        reference_ = Money::from_double_cents((1.0 - c) * scenario_.buyer_target.to_double() +
                                              c * seller_offer->to_double());
        willingness_ = Money::from_double_cents(params_.open_ratio *
                                                scenario_.buyer_target.to_double());
    }

    const Money acceptable = std::max(*willingness_, scenario_.buyer_target) + params_.accept_gap;
    if (*seller_offer <= acceptable) {
        done_ = true;
        return make_utterance("Deal. $" + seller_offer->str() + " works for me.",
                              NegotiationState::Accept, *seller_offer);
    }

    const Money counter = *willingness_;
    willingness_ = Money::from_double_cents(
        willingness_->to_double() +
        params_.step * (reference_->to_double() - willingness_->to_double()));
    return make_utterance("That's more than I was hoping to spend. Could you do $" +
                              counter.str() + "?",
                          NegotiationState::Offer, counter);
}

std::string ScriptedBuyer::survey_reply(std::span<const AnnotatedTurn>, const std::string&) {
    return format_survey_answers(survey_answers_);
}

}  // namespace anchorbench
