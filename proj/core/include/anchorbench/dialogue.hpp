#pragma once
// One negotiation session: alternating turns, per-utterance annotation
// (state + price), termination, transcript assembly.
//
// Annotation has two paths. Agents are asked to end each reply with a
// control trailer line `<<state=offer price=2450>>`; when present and
// well-formed it wins verbatim. Otherwise a fallback classifier keys off
// acceptance/refusal phrasing, currency amounts in offer phrasing, and
// deliberation cues. The trailer is stripped from the text the counterpart
// sees and from the persisted display text.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anchorbench/catalog.hpp"
#include "anchorbench/money.hpp"
#include "anchorbench/persona.hpp"
#include "anchorbench/types.hpp"

namespace anchorbench {

class Agent;

enum class NegotiationState { Offer, Pondering, Accept, Breakdown, ChitChat };

std::string_view negotiation_state_name(NegotiationState state);
std::optional<NegotiationState> parse_negotiation_state(std::string_view name);

struct ControlTrailer {
    NegotiationState state = NegotiationState::ChitChat;
    std::optional<Money> price;
};

struct AgentUtterance {
    std::string text;
    std::optional<ControlTrailer> control;
};

struct AnnotatedTurn {
    int index = 1;  // 1-based, strictly increasing
    Role role = Role::Seller;
    std::string text;  // trailer already stripped
    NegotiationState state = NegotiationState::ChitChat;
    std::optional<Money> price;
};

enum class OutcomeKind { Accepted, Broken, MaxTurns };

std::string_view outcome_kind_name(OutcomeKind kind);
std::optional<OutcomeKind> parse_outcome_kind(std::string_view name);

struct SessionOutcome {
    OutcomeKind kind = OutcomeKind::MaxTurns;
    std::optional<Money> final_price;  // present iff Accepted
};

struct Transcript {
    std::string session_id;
    std::string scenario_id;
    Condition condition = Condition::Baseline;
    PersonalityProfile seller_persona;
    PersonalityProfile buyer_persona;
    std::vector<AnnotatedTurn> turns;
    SessionOutcome outcome;
};

// Fixed harness-produced opening line; it mirrors how every reference
// transcript starts and makes the buyer initiate product talk.
inline constexpr std::string_view kSellerGreeting = "Hi, how can I help you?";

// Control trailer `<<state=NAME price=AMOUNT>>` (price optional) on the final
// non-empty line. Returns the trailer and the text with that line removed.
std::pair<std::string, std::optional<ControlTrailer>> strip_control_trailer(std::string_view text);

// Last currency amount mentioned in the text: "$2,550", "2550 dollars",
// "$2,137.22". Thousands separators validated, at most two fraction digits.
std::optional<Money> find_last_price_mention(std::string_view text);

// Total classification; trailer precedence, then fallback phrase/price
// heuristics: Accept > Breakdown > Offer > Pondering > ChitChat.
std::pair<NegotiationState, std::optional<Money>> classify_utterance(
    const AgentUtterance& utterance, std::optional<Money> previous_price_on_table);

struct AgentFailure : Error {
    AgentFailure(const std::string& what, std::vector<AnnotatedTurn> partial)
        : Error(what), partial_turns(std::move(partial)) {}
    std::vector<AnnotatedTurn> partial_turns;
};

struct SessionOptions {
    int t_max = 20;                 // counts utterances, both roles combined
    bool scripted_greeting = true;  // emit kSellerGreeting as turn 1
};

struct SessionContext {
    std::string session_id;
    std::string scenario_id;
    Condition condition = Condition::Baseline;
    PersonalityProfile seller_persona;
    PersonalityProfile buyer_persona;
};

// Seller speaks first; the loop ends at the first Accept or Breakdown turn or
// at t_max. The final price of an accepted session is the accepting turn's
// own declared price if present, else the most recent Offer; acceptance with
// no price anywhere downgrades the outcome to Broken.
Transcript run_session(Agent& seller, Agent& buyer, const SessionContext& context,
                       const SessionOptions& options);

}  // namespace anchorbench
