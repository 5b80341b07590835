#pragma once
// Agent backed by a chat-completion backend. The dialogue history maps onto
// messages from the agent's perspective: own turns become assistant messages,
// the counterpart's become user messages.

#include <map>
#include <string>

#include "anchorbench/agents.hpp"
#include "anchorbench/transport.hpp"

namespace anchorbench {

class ChatAgent : public Agent {
public:
    ChatAgent(ChatBackend& backend, Role role, RolePrompt prompt, std::string model_id,
              double temperature, std::map<std::string, ParamValue> extra_params = {});

    AgentUtterance next_utterance(std::span<const AnnotatedTurn> history) override;
    std::string survey_reply(std::span<const AnnotatedTurn> history,
                             const std::string& prompt) override;

private:
    ChatRequest base_request(std::span<const AnnotatedTurn> history) const;

    ChatBackend& backend_;
    Role role_;
    RolePrompt prompt_;
    std::string model_id_;
    double temperature_;
    std::map<std::string, ParamValue> extra_params_;
};

}  // namespace anchorbench
