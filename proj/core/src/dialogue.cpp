#include "anchorbench/dialogue.hpp"

#include "anchorbench/agents.hpp"

namespace anchorbench {

std::string_view outcome_kind_name(OutcomeKind kind) {
    switch (kind) {
        case OutcomeKind::Accepted: return "accepted";
        case OutcomeKind::Broken: return "broken";
        case OutcomeKind::MaxTurns: return "max_turns";
    }
    return "max_turns";
}

std::optional<OutcomeKind> parse_outcome_kind(std::string_view name) {
    for (OutcomeKind k : {OutcomeKind::Accepted, OutcomeKind::Broken, OutcomeKind::MaxTurns}) {
        if (name == outcome_kind_name(k)) return k;
    }
    return std::nullopt;
}

Transcript run_session(Agent& seller, Agent& buyer, const SessionContext& context,
                       const SessionOptions& options) {
    if (options.t_max < 2) throw std::invalid_argument("run_session: t_max must be >= 2");

    Transcript transcript;
    transcript.session_id = context.session_id;
    transcript.scenario_id = context.scenario_id;
    transcript.condition = context.condition;
    transcript.seller_persona = context.seller_persona;
    transcript.buyer_persona = context.buyer_persona;

    std::optional<Money> price_on_table;
    auto append_turn = [&](Role role, const AgentUtterance& utterance) -> const AnnotatedTurn& {
        auto [display_text, trailer] = strip_control_trailer(utterance.text);
        AgentUtterance normalized;
        normalized.text = display_text;
        normalized.control = utterance.control ? utterance.control : trailer;
        auto [state, price] = classify_utterance(normalized, price_on_table);

        AnnotatedTurn turn;
        turn.index = static_cast<int>(transcript.turns.size()) + 1;
        turn.role = role;
        turn.text = std::move(display_text);
        turn.state = state;
        turn.price = price;
        transcript.turns.push_back(std::move(turn));
        if (state == NegotiationState::Offer && price) price_on_table = price;
        return transcript.turns.back();
    };

    Role next_role = Role::Seller;
    if (options.scripted_greeting) {
        AgentUtterance greeting;
        greeting.text = std::string(kSellerGreeting);
        greeting.control = ControlTrailer{NegotiationState::ChitChat, std::nullopt};
        append_turn(Role::Seller, greeting);
        next_role = Role::Buyer;
    }

    transcript.outcome.kind = OutcomeKind::MaxTurns;
    while (static_cast<int>(transcript.turns.size()) < options.t_max) {
        Agent& speaker = next_role == Role::Seller ? seller : buyer;
        AgentUtterance utterance;
        try {
            utterance = speaker.next_utterance(transcript.turns);
        } catch (const Error& e) {
            throw AgentFailure(std::string(role_name(next_role)) + " agent failed in session " +
                                   context.session_id + ": " + e.what(),
                               transcript.turns);
        }
        if (utterance.text.empty()) {
            throw AgentFailure(std::string(role_name(next_role)) + " agent produced an empty turn",
                               transcript.turns);
        }

        const AnnotatedTurn& turn = append_turn(next_role, utterance);
        if (turn.state == NegotiationState::Accept) {
            if (turn.price) {
                transcript.outcome = {OutcomeKind::Accepted, turn.price};
            } else if (price_on_table) {
                transcript.outcome = {OutcomeKind::Accepted, price_on_table};
            } else {
                // acceptance with no price anywhere: no agreed price exists
                transcript.outcome = {OutcomeKind::Broken, std::nullopt};
            }
            return transcript;
        }
        if (turn.state == NegotiationState::Breakdown) {
            transcript.outcome = {OutcomeKind::Broken, std::nullopt};
            return transcript;
        }
        next_role = other_role(next_role);
    }
    return transcript;  // MaxTurns
}

}  // namespace anchorbench
