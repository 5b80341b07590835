#pragma once
// Provider-agnostic chat-completion client.
//
// One generic wire dialect (model, messages, temperature, extra params)
// covers the OpenAI-compatible providers; per-provider differences are
// configuration (base_url, path, auth header). Transient failures (timeouts,
// 429, 5xx) retry with exponential backoff; other 4xx do not. A record/replay
// wrapper keyed by a canonical request digest makes every remote interaction
// reproducible offline.

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "anchorbench/types.hpp"

namespace anchorbench {

struct TransportFailure : Error {
    using Error::Error;
};
struct AuthError : TransportFailure {
    using TransportFailure::TransportFailure;
};
struct ProtocolError : TransportFailure {
    using TransportFailure::TransportFailure;
};
struct FixtureMiss : TransportFailure {
    using TransportFailure::TransportFailure;
};

using ParamValue = std::variant<bool, std::int64_t, double, std::string>;

struct ChatMessage {
    std::string role;  // "user" | "assistant"
    std::string text;
};

struct ChatRequest {
    std::string model_id;
    std::string system_text;
    std::vector<ChatMessage> messages;
    double temperature = 1.0;
    std::map<std::string, ParamValue> extra_params;  // e.g. reasoning_effort
};

struct ChatResponse {
    std::string text;
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
    std::chrono::milliseconds latency{0};
};

struct BackendConfig {
    std::string base_url;                          // e.g. https://api.example.com
    std::string path = "/v1/chat/completions";
    std::string auth_env_var = "ANCHORBENCH_API_KEY";
    int max_retries = 5;
    std::chrono::milliseconds backoff_base{500};
    int rate_limit_per_min = 60;
    std::chrono::milliseconds timeout{60000};
};

// Injectable time source so retry/backoff and rate limiting are testable
// without waiting.
class Clock {
public:
    using TimePoint = std::chrono::steady_clock::time_point;

    virtual ~Clock() = default;
    virtual TimePoint now() = 0;
    virtual void sleep_for(std::chrono::milliseconds duration) = 0;
};

class SystemClock : public Clock {
public:
    TimePoint now() override { return std::chrono::steady_clock::now(); }
    void sleep_for(std::chrono::milliseconds duration) override;
};

// Fake time for tests: sleep_for advances a shared virtual clock.
class ManualClock : public Clock {
public:
    TimePoint now() override;
    void sleep_for(std::chrono::milliseconds duration) override;

private:
    std::mutex mutex_;
    TimePoint now_{};
};

// Sliding-window limiter: at most per_minute acquisitions in any 60 s window.
// Shared across concurrent callers; acquire blocks (via the clock) until a
// slot frees and returns the send timestamp.
class RateLimiter {
public:
    RateLimiter(int per_minute, Clock& clock);

    Clock::TimePoint acquire();

private:
    int per_minute_;
    Clock& clock_;
    std::mutex mutex_;
    std::deque<Clock::TimePoint> window_;
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatResponse chat(const ChatRequest& request) = 0;
};

// Request body in the generic chat-completions dialect. Consecutive
// same-role messages are merged so the wire invariant (alternating roles)
// holds regardless of how the dialogue history maps onto messages.
std::string build_chat_body_json(const ChatRequest& request);

// Digest over a canonical serialization (sorted keys, normalized numbers);
// stable across field reordering of the same logical request.
std::string canonical_request_digest(const ChatRequest& request);

class HttpBackend : public ChatBackend {
public:
    explicit HttpBackend(BackendConfig config, Clock* clock = nullptr);
    ~HttpBackend() override;

    ChatResponse chat(const ChatRequest& request) override;

private:
    BackendConfig config_;
    std::unique_ptr<Clock> owned_clock_;
    Clock* clock_;
    std::unique_ptr<RateLimiter> limiter_;
};

// Record mode: forward to the inner backend and append (digest -> response)
// to the fixture file. Replay mode: serve responses by digest and never touch
// the inner backend; unseen digests raise FixtureMiss.
class RecordReplayBackend : public ChatBackend {
public:
    enum class Mode { Record, Replay };

    RecordReplayBackend(Mode mode, std::filesystem::path store_path, ChatBackend* inner = nullptr);

    ChatResponse chat(const ChatRequest& request) override;

private:
    Mode mode_;
    std::filesystem::path store_path_;
    ChatBackend* inner_;
    std::mutex mutex_;
    std::map<std::string, ChatResponse> fixtures_;
};

}  // namespace anchorbench
