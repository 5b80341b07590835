#pragma once
// Durable persistence: the system of record for analysis.
//
// Layout: <exp>/manifest holds a single Manifest event; each session appends
// to <exp>/sessions/<id>.events. Every line is "<fnv64-hex> <json>\n" so torn
// writes are detectable; a corrupt FINAL line is tolerated with a warning
// (crash consistency), corruption earlier in a file is an error. Prices are
// stored as exact decimal strings.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anchorbench/dialogue.hpp"
#include "anchorbench/money.hpp"
#include "anchorbench/persona.hpp"
#include "anchorbench/survey.hpp"
#include "anchorbench/transport.hpp"
#include "anchorbench/types.hpp"

namespace anchorbench {

struct StoreError : Error {
    using Error::Error;
};
struct SequenceViolation : StoreError {
    using StoreError::StoreError;
};
struct IoFailure : StoreError {
    using StoreError::StoreError;
};
struct CorruptStore : StoreError {
    using StoreError::StoreError;
};

enum class EventKind { Manifest, Turn, Outcome, Survey, Metric };

std::string_view event_kind_name(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view name);

struct EventLine {
    EventKind kind = EventKind::Turn;
    std::string session_id;
    int sequence = 0;  // strictly increasing per session, starting at 1
    std::string payload_json;
};

std::string encode_event(const EventLine& event);
// nullopt when the checksum does not match (torn line).
std::optional<EventLine> decode_event(std::string_view line);

struct BackendDescriptor {
    std::string kind = "scripted";  // scripted | http | replay
    std::string model_id = "scripted";
    std::map<std::string, ParamValue> extra_params;
    // http
    std::string base_url;
    std::string path = "/v1/chat/completions";
    std::string auth_env_var = "ANCHORBENCH_API_KEY";
    int max_retries = 5;
    int rate_limit_per_min = 60;
    int timeout_ms = 60000;
    // replay
    std::string fixture_path;
};

struct ScriptedParams {
    double anchor_multiplier = 1.6;
    double concession_rate = 0.25;
    double floor_spread_ratio = 0.3;  // floor = buyer_target + ratio * spread
    double open_ratio = 1.0;
    double step = 0.5;
    double accept_gap_ratio = 0.2;  // gap = ratio * spread
    double susceptibility_coeff = 0.5;
    double informed_coeff_factor = 0.5;  // multiplier on the coeff when informed
};

struct RunManifest {
    std::string experiment_id;
    std::uint64_t master_seed = 0;
    int per_product = 2;
    int t_max = 20;
    int n_adjectives = 3;
    double temperature = 1.0;
    std::vector<Condition> conditions;
    std::string catalog_digest;
    std::map<std::string, std::string> template_digests;
    std::string lexicon_digest;
    std::string questionnaire_digest;
    BackendDescriptor seller_backend;
    BackendDescriptor buyer_backend;
    ScriptedParams scripted;

    std::string to_json() const;
    static RunManifest from_json(std::string_view json_text);
};

// Serialized writer for one session file. Appends are flushed per line.
class SessionWriter {
public:
    SessionWriter(std::filesystem::path file, int last_sequence);

    void append(EventKind kind, const std::string& session_id, const std::string& payload_json);
    int last_sequence() const { return last_sequence_; }

private:
    std::filesystem::path file_;
    int last_sequence_;
};

struct LoadedSession {
    std::string session_id;
    std::vector<EventLine> events;
    bool torn_tail = false;
};

class ExperimentStore {
public:
    // Creates <dir>, writes the manifest. Fails if a manifest already exists
    // with different content (manifests are immutable).
    static ExperimentStore create(const std::filesystem::path& dir, const RunManifest& manifest);
    static ExperimentStore open(const std::filesystem::path& dir);

    const RunManifest& manifest() const { return manifest_; }
    const std::filesystem::path& dir() const { return dir_; }

    SessionWriter session_writer(const std::string& session_id);
    bool session_has_outcome(const std::string& session_id) const;
    bool session_has_survey(const std::string& session_id, Role role) const;
    LoadedSession load_session(const std::string& session_id) const;
    std::vector<std::string> session_ids() const;  // sorted

private:
    std::filesystem::path dir_;
    RunManifest manifest_;
};

// Per-session analysis record rebuilt from the store. The plan (scenario,
// iteration, condition, profiles) is re-derived from the manifest seed, so
// only events need to be persisted.
struct RunRecord {
    std::string session_id;
    std::string scenario_id;
    int iteration = 1;
    Condition condition = Condition::Baseline;
    PersonalityProfile seller_profile;
    PersonalityProfile buyer_profile;

    bool failed = false;
    std::optional<OutcomeKind> outcome;
    std::optional<Money> final_price;
    std::optional<double> seller_utility;
    std::optional<double> buyer_utility;
    std::optional<SurveyResponse> seller_survey;
    std::optional<SurveyResponse> buyer_survey;
    std::vector<AnnotatedTurn> turns;

    bool accepted() const { return outcome && *outcome == OutcomeKind::Accepted; }
    int buyer_trait_score(Dimension dim) const { return trait_score(buyer_profile, dim); }
};

struct LoadedExperiment {
    RunManifest manifest;
    std::vector<RunRecord> records;  // plan order; sessions without events have no outcome
    int torn_line_warnings = 0;
};

// Needs the catalog copy saved next to the manifest at plan time.
LoadedExperiment load_experiment(const std::filesystem::path& dir);

// Event payload builders/parsers shared by runner and loader.
std::string turn_payload(const AnnotatedTurn& turn);
std::string outcome_payload(const SessionOutcome& outcome, bool failed,
                            std::optional<double> seller_utility,
                            std::optional<double> buyer_utility);
std::string survey_payload(const SurveyResponse& response);

}  // namespace anchorbench
