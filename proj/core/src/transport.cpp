#include "anchorbench/transport.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "anchorbench/rng.hpp"

// httplib is only needed for the real HTTP path; kept out of the header.
#define CPPHTTPLIB_OPENSSL_SUPPORT_DISABLED
#include <httplib.h>

namespace anchorbench {

void SystemClock::sleep_for(std::chrono::milliseconds duration) {
    std::this_thread::sleep_for(duration);
}

Clock::TimePoint ManualClock::now() {
    std::lock_guard lock(mutex_);
    return now_;
}

void ManualClock::sleep_for(std::chrono::milliseconds duration) {
    std::lock_guard lock(mutex_);
    now_ += duration;
}

RateLimiter::RateLimiter(int per_minute, Clock& clock) : per_minute_(per_minute), clock_(clock) {
    if (per_minute <= 0) throw std::invalid_argument("RateLimiter: per_minute must be positive");
}

Clock::TimePoint RateLimiter::acquire() {
    using namespace std::chrono_literals;
    for (;;) {
        std::chrono::milliseconds wait{0};
        {
            std::lock_guard lock(mutex_);
            const auto now = clock_.now();
            while (!window_.empty() && now - window_.front() >= 60s) window_.pop_front();
            if (static_cast<int>(window_.size()) < per_minute_) {
                window_.push_back(now);
                return now;
            }
            wait = std::chrono::duration_cast<std::chrono::milliseconds>(window_.front() + 60s - now);
            if (wait <= 0ms) wait = std::chrono::milliseconds{1};
        }
        clock_.sleep_for(wait);
    }
}

namespace {

void append_param(nlohmann::json& body, const std::string& key, const ParamValue& value) {
    std::visit([&](const auto& v) { body[key] = v; }, value);
}

std::vector<ChatMessage> merged_messages(const ChatRequest& request) {
    std::vector<ChatMessage> merged;
    for (const auto& message : request.messages) {
        if (!merged.empty() && merged.back().role == message.role) {
            merged.back().text += "\n\n" + message.text;
        } else {
            merged.push_back(message);
        }
    }
    return merged;
}

std::string format_temperature(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", t);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::string build_chat_body_json(const ChatRequest& request) {
    nlohmann::json body;
    body["model"] = request.model_id;
    body["temperature"] = request.temperature;
    nlohmann::json messages = nlohmann::json::array();
    if (!request.system_text.empty()) {
        messages.push_back({{"role", "system"}, {"content", request.system_text}});
    }
    for (const auto& message : merged_messages(request)) {
        messages.push_back({{"role", message.role}, {"content", message.text}});
    }
    body["messages"] = messages;
    for (const auto& [key, value] : request.extra_params) append_param(body, key, value);
    return body.dump();
}

std::string canonical_request_digest(const ChatRequest& request) {
    // Fixed field order, explicit separators, normalized temperature text;
    // extra_params arrive sorted because the container is an ordered map.
    std::string canon = "model\x1f" + request.model_id + "\x1e";
    canon += "temperature\x1f" + format_temperature(request.temperature) + "\x1e";
    canon += "system\x1f" + request.system_text + "\x1e";
    for (const auto& message : merged_messages(request)) {
        canon += "msg\x1f" + message.role + "\x1f" + message.text + "\x1e";
    }
    for (const auto& [key, value] : request.extra_params) {
        canon += "param\x1f" + key + "\x1f";
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, std::string>) {
                    canon += v;
                } else if constexpr (std::is_same_v<T, bool>) {
                    canon += v ? "true" : "false";
                } else if constexpr (std::is_same_v<T, double>) {
                    canon += format_temperature(v);
                } else {
                    canon += std::to_string(v);
                }
            },
            value);
        canon += "\x1e";
    }
    return hex64(fnv1a64(canon));
}

HttpBackend::HttpBackend(BackendConfig config, Clock* clock) : config_(std::move(config)) {
    if (!clock) {
        owned_clock_ = std::make_unique<SystemClock>();
        clock_ = owned_clock_.get();
    } else {
        clock_ = clock;
    }
    limiter_ = std::make_unique<RateLimiter>(config_.rate_limit_per_min, *clock_);
}

HttpBackend::~HttpBackend() = default;

ChatResponse HttpBackend::chat(const ChatRequest& request) {
    const char* key = nullptr;
    if (!config_.auth_env_var.empty()) {
        key = std::getenv(config_.auth_env_var.c_str());
        if (!key || !*key) {
            throw AuthError("transport: credential env var " + config_.auth_env_var + " is not set");
        }
    }

    const std::string body = build_chat_body_json(request);
    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            const auto backoff = config_.backoff_base * (1 << (attempt - 1));
            clock_->sleep_for(std::chrono::duration_cast<std::chrono::milliseconds>(backoff));
        }
        limiter_->acquire();

        httplib::Client client(config_.base_url);
        client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(config_.timeout));
        client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(config_.timeout));
        httplib::Headers headers;
        if (key) headers.emplace("Authorization", std::string("Bearer ") + key);

        const auto started = clock_->now();
        auto result = client.Post(config_.path, headers, body, "application/json");
        if (!result) {
            last_error = "connection error: " + httplib::to_string(result.error());
            continue;  // retryable
        }
        const int status = result->status;
        if (status == 401 || status == 403) {
            throw AuthError("transport: credential rejected (HTTP " + std::to_string(status) + ")");
        }
        if (status == 429 || status >= 500) {
            last_error = "HTTP " + std::to_string(status);
            continue;  // retryable
        }
        if (status != 200) {
            throw TransportFailure("transport: HTTP " + std::to_string(status) + " from " +
                                   config_.base_url + config_.path);
        }

        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(result->body);
        } catch (const nlohmann::json::exception& e) {
            throw ProtocolError(std::string("transport: unparseable response body: ") + e.what());
        }
        ChatResponse response;
        try {
            response.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception&) {
            throw ProtocolError("transport: response missing choices[0].message.content");
        }
        if (doc.contains("usage")) {
            response.prompt_tokens = doc["usage"].value("prompt_tokens", 0);
            response.completion_tokens = doc["usage"].value("completion_tokens", 0);
        }
        response.latency = std::chrono::duration_cast<std::chrono::milliseconds>(clock_->now() - started);
        return response;
    }
    throw TransportFailure("transport: retries exhausted (" + std::to_string(config_.max_retries + 1) +
                           " attempts); last error: " + last_error);
}

RecordReplayBackend::RecordReplayBackend(Mode mode, std::filesystem::path store_path,
                                         ChatBackend* inner)
    : mode_(mode), store_path_(std::move(store_path)), inner_(inner) {
    if (mode_ == Mode::Record && !inner_) {
        throw std::invalid_argument("record mode needs an inner backend");
    }
    if (std::filesystem::exists(store_path_)) {
        std::ifstream in(store_path_, std::ios::binary);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::json rec;
            try {
                rec = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw ProtocolError("fixture: corrupt line in " + store_path_.string() + ": " +
                                    e.what());
            }
            ChatResponse response;
            response.text = rec.value("text", std::string{});
            response.prompt_tokens = rec.value("prompt_tokens", 0);
            response.completion_tokens = rec.value("completion_tokens", 0);
            fixtures_[rec.at("digest").get<std::string>()] = std::move(response);
        }
    } else if (mode_ == Mode::Replay) {
        throw FixtureMiss("fixture: file does not exist: " + store_path_.string());
    }
}

ChatResponse RecordReplayBackend::chat(const ChatRequest& request) {
    const std::string digest = canonical_request_digest(request);
    {
        std::lock_guard lock(mutex_);
        auto it = fixtures_.find(digest);
        if (it != fixtures_.end()) return it->second;
    }
    if (mode_ == Mode::Replay) {
        throw FixtureMiss("fixture: no recorded response for digest " + digest);
    }
    ChatResponse response = inner_->chat(request);
    {
        std::lock_guard lock(mutex_);
        fixtures_[digest] = response;
        nlohmann::json rec{{"digest", digest},
                           {"text", response.text},
                           {"prompt_tokens", response.prompt_tokens},
                           {"completion_tokens", response.completion_tokens}};
        std::ofstream out(store_path_, std::ios::binary | std::ios::app);
        if (!out) throw TransportFailure("fixture: cannot append to " + store_path_.string());
        out << rec.dump() << "\n";
    }
    return response;
}

}  // namespace anchorbench
