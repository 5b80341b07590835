#include "anchorbench/chat_agent.hpp"

namespace anchorbench {

ChatAgent::ChatAgent(ChatBackend& backend, Role role, RolePrompt prompt, std::string model_id,
                     double temperature, std::map<std::string, ParamValue> extra_params)
    : backend_(backend),
      role_(role),
      prompt_(std::move(prompt)),
      model_id_(std::move(model_id)),
      temperature_(temperature),
      extra_params_(std::move(extra_params)) {}

ChatRequest ChatAgent::base_request(std::span<const AnnotatedTurn> history) const {
    ChatRequest request;
    request.model_id = model_id_;
    request.system_text = prompt_.system_text;
    request.temperature = temperature_;
    request.extra_params = extra_params_;
    for (const auto& turn : history) {
        request.messages.push_back(
            {turn.role == role_ ? "assistant" : "user", turn.text});
    }
    return request;
}

AgentUtterance ChatAgent::next_utterance(std::span<const AnnotatedTurn> history) {
    ChatRequest request = base_request(history);
    if (request.messages.empty()) {
        // the model speaks first; give it an opening nudge rather than an
        // empty message list
        request.messages.push_back({"user", "(The negotiation begins. Please make your opening.)"});
    }
    ChatResponse response = backend_.chat(request);
    AgentUtterance utterance;
    utterance.text = response.text;
    return utterance;  // trailer, if any, is parsed by the session loop
}

std::string ChatAgent::survey_reply(std::span<const AnnotatedTurn> history,
                                    const std::string& prompt) {
    ChatRequest request = base_request(history);
    request.messages.push_back({"user", prompt});
    return backend_.chat(request).text;
}

}  // namespace anchorbench
