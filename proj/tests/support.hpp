#pragma once
// Shared test helpers: scratch directories, synthetic catalogs, stub agents.

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "anchorbench/agents.hpp"
#include "anchorbench/catalog.hpp"
#include "anchorbench/dialogue.hpp"
#include "anchorbench/rng.hpp"

namespace anchorbench::test {

inline std::filesystem::path data_dir() { return ANCHORBENCH_DATA_DIR; }

class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("anchorbench-" + tag + "-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

// n items with buyer/seller target ratios in [0.6, 0.8] and varied price
// scales; deterministic under seed.
inline Catalog synthetic_catalog(int n, std::uint64_t seed) {
    Rng rng(derive_seed(seed, {"catalog"}));
    Catalog catalog;
    for (int i = 0; i < n; ++i) {
        Scenario s;
        s.id = "item-" + std::to_string(i);
        s.title = "Test Item " + std::to_string(i);
        s.description = "Synthetic listing number " + std::to_string(i) + " for harness tests.";
        const std::int64_t seller_whole = 50 + static_cast<std::int64_t>(rng.uniform_below(5000));
        const double ratio = 0.6 + 0.2 * rng.uniform01();
        const std::int64_t buyer_whole =
            std::max<std::int64_t>(10, static_cast<std::int64_t>(seller_whole * ratio));
        s.seller_target = Money::from_whole(seller_whole);
        s.buyer_target = Money::from_whole(buyer_whole);
        catalog.scenarios.push_back(std::move(s));
    }
    return catalog;
}

// Plays back a fixed utterance list, then throws.
class StubAgent : public Agent {
public:
    explicit StubAgent(std::vector<AgentUtterance> script) : script_(std::move(script)) {}

    AgentUtterance next_utterance(std::span<const AnnotatedTurn>) override {
        if (next_ >= script_.size()) throw PolicyExhausted("stub agent out of lines");
        return script_[next_++];
    }
    std::string survey_reply(std::span<const AnnotatedTurn>, const std::string&) override {
        return "4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4";
    }

private:
    std::vector<AgentUtterance> script_;
    std::size_t next_ = 0;
};

inline AgentUtterance say(std::string text) {
    AgentUtterance utt;
    utt.text = std::move(text);
    return utt;
}

inline AgentUtterance say(std::string text, NegotiationState state,
                          std::optional<Money> price = std::nullopt) {
    AgentUtterance utt;
    utt.text = std::move(text);
    utt.control = ControlTrailer{state, price};
    return utt;
}

}  // namespace anchorbench::test
