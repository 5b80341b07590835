#include "anchorbench/store.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "anchorbench/catalog.hpp"
#include "anchorbench/metrics.hpp"
#include "anchorbench/rng.hpp"

namespace anchorbench {

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("store: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

nlohmann::json param_to_json(const ParamValue& value) {
    nlohmann::json out;
    std::visit([&](const auto& v) { out = v; }, value);
    return out;
}

ParamValue param_from_json(const nlohmann::json& value) {
    if (value.is_boolean()) return value.get<bool>();
    if (value.is_number_integer()) return value.get<std::int64_t>();
    if (value.is_number_float()) return value.get<double>();
    return value.get<std::string>();
}

nlohmann::json backend_to_json(const BackendDescriptor& backend) {
    nlohmann::json extra = nlohmann::json::object();
    for (const auto& [key, value] : backend.extra_params) extra[key] = param_to_json(value);
    return {{"kind", backend.kind},
            {"model_id", backend.model_id},
            {"extra_params", extra},
            {"base_url", backend.base_url},
            {"path", backend.path},
            {"auth_env_var", backend.auth_env_var},
            {"max_retries", backend.max_retries},
            {"rate_limit_per_min", backend.rate_limit_per_min},
            {"timeout_ms", backend.timeout_ms},
            {"fixture_path", backend.fixture_path}};
}

BackendDescriptor backend_from_json(const nlohmann::json& doc) {
    BackendDescriptor backend;
    backend.kind = doc.value("kind", "scripted");
    backend.model_id = doc.value("model_id", "scripted");
    backend.base_url = doc.value("base_url", std::string{});
    backend.path = doc.value("path", std::string{"/v1/chat/completions"});
    backend.auth_env_var = doc.value("auth_env_var", std::string{"ANCHORBENCH_API_KEY"});
    backend.max_retries = doc.value("max_retries", 5);
    backend.rate_limit_per_min = doc.value("rate_limit_per_min", 60);
    backend.timeout_ms = doc.value("timeout_ms", 60000);
    backend.fixture_path = doc.value("fixture_path", std::string{});
    if (doc.contains("extra_params")) {
        for (const auto& [key, value] : doc["extra_params"].items()) {
            backend.extra_params[key] = param_from_json(value);
        }
    }
    return backend;
}

}  // namespace

std::string_view event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::Manifest: return "manifest";
        case EventKind::Turn: return "turn";
        case EventKind::Outcome: return "outcome";
        case EventKind::Survey: return "survey";
        case EventKind::Metric: return "metric";
    }
    return "turn";
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
    for (EventKind k : {EventKind::Manifest, EventKind::Turn, EventKind::Outcome, EventKind::Survey,
                        EventKind::Metric}) {
        if (name == event_kind_name(k)) return k;
    }
    return std::nullopt;
}

std::string encode_event(const EventLine& event) {
    nlohmann::json rec{{"kind", std::string(event_kind_name(event.kind))},
                       {"session", event.session_id},
                       {"seq", event.sequence},
                       {"payload", nlohmann::json::parse(event.payload_json)}};
    const std::string body = rec.dump();
    return hex64(fnv1a64(body)) + " " + body;
}

std::optional<EventLine> decode_event(std::string_view line) {
    if (line.size() < 18 || line[16] != ' ') return std::nullopt;
    const std::string_view checksum = line.substr(0, 16);
    const std::string_view body = line.substr(17);
    if (hex64(fnv1a64(body)) != checksum) return std::nullopt;
    nlohmann::json rec;
    try {
        rec = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
    EventLine event;
    auto kind = parse_event_kind(rec.value("kind", std::string{}));
    if (!kind) return std::nullopt;
    event.kind = *kind;
    event.session_id = rec.value("session", std::string{});
    event.sequence = rec.value("seq", 0);
    event.payload_json = rec.at("payload").dump();
    return event;
}

std::string RunManifest::to_json() const {
    nlohmann::json conditions_json = nlohmann::json::array();
    for (Condition c : conditions) conditions_json.push_back(std::string(condition_name(c)));
    nlohmann::json doc{
        {"experiment_id", experiment_id},
        {"master_seed", master_seed},
        {"per_product", per_product},
        {"t_max", t_max},
        {"n_adjectives", n_adjectives},
        {"temperature", temperature},
        {"conditions", conditions_json},
        {"catalog_digest", catalog_digest},
        {"template_digests", template_digests},
        {"lexicon_digest", lexicon_digest},
        {"questionnaire_digest", questionnaire_digest},
        {"seller_backend", backend_to_json(seller_backend)},
        {"buyer_backend", backend_to_json(buyer_backend)},
        {"scripted",
         {{"anchor_multiplier", scripted.anchor_multiplier},
          {"concession_rate", scripted.concession_rate},
          {"floor_spread_ratio", scripted.floor_spread_ratio},
          {"open_ratio", scripted.open_ratio},
          {"step", scripted.step},
          {"accept_gap_ratio", scripted.accept_gap_ratio},
          {"susceptibility_coeff", scripted.susceptibility_coeff},
          {"informed_coeff_factor", scripted.informed_coeff_factor}}},
    };
    return doc.dump();
}

RunManifest RunManifest::from_json(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptStore(std::string("manifest: ") + e.what());
    }
    RunManifest m;
    m.experiment_id = doc.value("experiment_id", std::string{});
    m.master_seed = doc.value("master_seed", std::uint64_t{0});
    m.per_product = doc.value("per_product", 2);
    m.t_max = doc.value("t_max", 20);
    m.n_adjectives = doc.value("n_adjectives", 3);
    m.temperature = doc.value("temperature", 1.0);
    for (const auto& name : doc.value("conditions", nlohmann::json::array())) {
        auto condition = parse_condition(name.get<std::string>());
        if (!condition) throw CorruptStore("manifest: unknown condition " + name.get<std::string>());
        m.conditions.push_back(*condition);
    }
    m.catalog_digest = doc.value("catalog_digest", std::string{});
    if (doc.contains("template_digests")) {
        for (const auto& [key, value] : doc["template_digests"].items()) {
            m.template_digests[key] = value.get<std::string>();
        }
    }
    m.lexicon_digest = doc.value("lexicon_digest", std::string{});
    m.questionnaire_digest = doc.value("questionnaire_digest", std::string{});
    if (doc.contains("seller_backend")) m.seller_backend = backend_from_json(doc["seller_backend"]);
    if (doc.contains("buyer_backend")) m.buyer_backend = backend_from_json(doc["buyer_backend"]);
    if (doc.contains("scripted")) {
        const auto& s = doc["scripted"];
        m.scripted.anchor_multiplier = s.value("anchor_multiplier", 1.6);
        m.scripted.concession_rate = s.value("concession_rate", 0.25);
        m.scripted.floor_spread_ratio = s.value("floor_spread_ratio", 0.3);
        m.scripted.open_ratio = s.value("open_ratio", 1.0);
        m.scripted.step = s.value("step", 0.5);
        m.scripted.accept_gap_ratio = s.value("accept_gap_ratio", 0.2);
        m.scripted.susceptibility_coeff = s.value("susceptibility_coeff", 0.5);
        m.scripted.informed_coeff_factor = s.value("informed_coeff_factor", 0.5);
    }
    return m;
}

SessionWriter::SessionWriter(std::filesystem::path file, int last_sequence)
    : file_(std::move(file)), last_sequence_(last_sequence) {}

void SessionWriter::append(EventKind kind, const std::string& session_id,
                           const std::string& payload_json) {
    EventLine event;
    event.kind = kind;
    event.session_id = session_id;
    event.sequence = last_sequence_ + 1;
    event.payload_json = payload_json;

    std::ofstream out(file_, std::ios::binary | std::ios::app);
    if (!out) throw IoFailure("store: cannot append to " + file_.string());
    out << encode_event(event) << "\n";
    out.flush();
    if (!out) throw IoFailure("store: write failed on " + file_.string());
    ++last_sequence_;
}

ExperimentStore ExperimentStore::create(const std::filesystem::path& dir,
                                        const RunManifest& manifest) {
    std::filesystem::create_directories(dir / "sessions");
    const auto manifest_path = dir / "manifest";
    EventLine event;
    event.kind = EventKind::Manifest;
    event.sequence = 1;
    event.payload_json = manifest.to_json();
    const std::string line = encode_event(event) + "\n";

    if (std::filesystem::exists(manifest_path)) {
        if (read_file(manifest_path) != line) {
            throw StoreError("store: manifest already exists with different content in " +
                             dir.string());
        }
    } else {
        std::ofstream out(manifest_path, std::ios::binary);
        if (!out) throw IoFailure("store: cannot write manifest in " + dir.string());
        out << line;
    }
    return open(dir);
}

ExperimentStore ExperimentStore::open(const std::filesystem::path& dir) {
    const auto manifest_path = dir / "manifest";
    if (!std::filesystem::exists(manifest_path)) {
        throw StoreError("store: no manifest in " + dir.string());
    }
    std::string content = read_file(manifest_path);
    while (!content.empty() && (content.back() == '\n' || content.back() == '\r')) content.pop_back();
    auto event = decode_event(content);
    if (!event || event->kind != EventKind::Manifest) {
        throw CorruptStore("store: manifest line corrupt in " + dir.string());
    }
    ExperimentStore store;
    store.dir_ = dir;
    store.manifest_ = RunManifest::from_json(event->payload_json);
    std::filesystem::create_directories(dir / "sessions");
    return store;
}

SessionWriter ExperimentStore::session_writer(const std::string& session_id) {
    const auto file = dir_ / "sessions" / (session_id + ".events");
    int last_sequence = 0;
    if (std::filesystem::exists(file)) {
        LoadedSession session = load_session(session_id);
        for (const auto& event : session.events) last_sequence = event.sequence;
    }
    return SessionWriter(file, last_sequence);
}

LoadedSession ExperimentStore::load_session(const std::string& session_id) const {
    const auto file = dir_ / "sessions" / (session_id + ".events");
    LoadedSession session;
    session.session_id = session_id;
    if (!std::filesystem::exists(file)) return session;

    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoFailure("store: cannot open " + file.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    int expected_sequence = 1;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto event = decode_event(lines[i]);
        if (!event) {
            if (i + 1 == lines.size()) {
                session.torn_tail = true;  // crash-consistent: drop the tail
                break;
            }
            throw CorruptStore("store: checksum failure mid-file in " + file.string() + " at line " +
                               std::to_string(i + 1));
        }
        if (event->sequence != expected_sequence) {
            throw SequenceViolation("store: sequence gap in " + file.string() + ": expected " +
                                    std::to_string(expected_sequence) + ", got " +
                                    std::to_string(event->sequence));
        }
        ++expected_sequence;
        session.events.push_back(std::move(*event));
    }
    return session;
}

bool ExperimentStore::session_has_outcome(const std::string& session_id) const {
    LoadedSession session = load_session(session_id);
    return std::any_of(session.events.begin(), session.events.end(),
                       [](const EventLine& e) { return e.kind == EventKind::Outcome; });
}

bool ExperimentStore::session_has_survey(const std::string& session_id, Role role) const {
    LoadedSession session = load_session(session_id);
    for (const auto& event : session.events) {
        if (event.kind != EventKind::Survey) continue;
        auto doc = nlohmann::json::parse(event.payload_json);
        if (doc.value("role", std::string{}) == role_name(role)) return true;
    }
    return false;
}

std::vector<std::string> ExperimentStore::session_ids() const {
    std::vector<std::string> ids;
    const auto sessions_dir = dir_ / "sessions";
    if (std::filesystem::exists(sessions_dir)) {
        for (const auto& entry : std::filesystem::directory_iterator(sessions_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".events") {
                ids.push_back(entry.path().stem().string());
            }
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::string turn_payload(const AnnotatedTurn& turn) {
    nlohmann::json doc{{"index", turn.index},
                       {"role", std::string(role_name(turn.role))},
                       {"text", turn.text},
                       {"state", std::string(negotiation_state_name(turn.state))}};
    if (turn.price) doc["price"] = turn.price->str();
    return doc.dump();
}

std::string outcome_payload(const SessionOutcome& outcome, bool failed,
                            std::optional<double> seller_utility,
                            std::optional<double> buyer_utility) {
    nlohmann::json doc{{"kind", failed ? "failed" : std::string(outcome_kind_name(outcome.kind))}};
    if (!failed && outcome.final_price) doc["final_price"] = outcome.final_price->str();
    if (seller_utility) doc["seller_utility"] = *seller_utility;
    if (buyer_utility) doc["buyer_utility"] = *buyer_utility;
    return doc.dump();
}

std::string survey_payload(const SurveyResponse& response) {
    nlohmann::json scores = nlohmann::json::array();
    for (int score : response.scores) scores.push_back(score);
    nlohmann::json doc{{"role", std::string(role_name(response.role))}, {"scores", scores}};
    return doc.dump();
}

LoadedExperiment load_experiment(const std::filesystem::path& dir) {
    ExperimentStore store = ExperimentStore::open(dir);
    const RunManifest& manifest = store.manifest();

    const auto catalog_path = dir / "catalog.json";
    Catalog catalog = load_catalog(catalog_path);

    LoadedExperiment loaded;
    loaded.manifest = manifest;
    const auto plans =
        plan_sessions(catalog, manifest.per_product, manifest.conditions, manifest.master_seed);

    for (const auto& plan : plans) {
        LoadedSession session = store.load_session(plan.session_id);
        if (session.torn_tail) ++loaded.torn_line_warnings;
        if (session.events.empty()) continue;  // planned but never started

        RunRecord record;
        record.session_id = plan.session_id;
        record.scenario_id = plan.scenario_id;
        record.iteration = plan.iteration;
        record.condition = plan.condition;
        record.seller_profile = plan.seller_profile;
        record.buyer_profile = plan.buyer_profile;
        for (const auto& event : session.events) {
            const auto doc = nlohmann::json::parse(event.payload_json);
            switch (event.kind) {
                case EventKind::Turn: {
                    AnnotatedTurn turn;
                    turn.index = doc.value("index", 0);
                    auto role = parse_role(doc.value("role", std::string{}));
                    auto state = parse_negotiation_state(doc.value("state", std::string{}));
                    if (!role || !state) {
                        throw CorruptStore("store: bad turn event in session " + plan.session_id);
                    }
                    turn.role = *role;
                    turn.state = *state;
                    turn.text = doc.value("text", std::string{});
                    if (doc.contains("price")) {
                        auto price = Money::parse(doc["price"].get<std::string>(), 4);
                        if (!price) throw CorruptStore("store: bad price in session " + plan.session_id);
                        turn.price = *price;
                    }
                    record.turns.push_back(std::move(turn));
                    break;
                }
                case EventKind::Outcome: {
                    const std::string kind = doc.value("kind", std::string{});
                    if (kind == "failed") {
                        record.failed = true;
                    } else {
                        auto outcome = parse_outcome_kind(kind);
                        if (!outcome) throw CorruptStore("store: bad outcome in " + plan.session_id);
                        record.outcome = outcome;
                        if (doc.contains("final_price")) {
                            auto price = Money::parse(doc["final_price"].get<std::string>(), 4);
                            if (!price) {
                                throw CorruptStore("store: bad final price in " + plan.session_id);
                            }
                            record.final_price = *price;
                        }
                    }
                    if (doc.contains("seller_utility")) {
                        record.seller_utility = doc["seller_utility"].get<double>();
                    }
                    if (doc.contains("buyer_utility")) {
                        record.buyer_utility = doc["buyer_utility"].get<double>();
                    }
                    break;
                }
                case EventKind::Metric: {
                    if (doc.contains("seller_utility")) {
                        record.seller_utility = doc["seller_utility"].get<double>();
                    }
                    if (doc.contains("buyer_utility")) {
                        record.buyer_utility = doc["buyer_utility"].get<double>();
                    }
                    break;
                }
                case EventKind::Survey: {
                    SurveyResponse response;
                    response.session_id = plan.session_id;
                    auto role = parse_role(doc.value("role", std::string{}));
                    if (!role) throw CorruptStore("store: bad survey role in " + plan.session_id);
                    response.role = *role;
                    const auto& scores = doc.at("scores");
                    if (!scores.is_array() || scores.size() != 16) {
                        throw CorruptStore("store: bad survey scores in " + plan.session_id);
                    }
                    for (std::size_t i = 0; i < 16; ++i) response.scores[i] = scores[i].get<int>();
                    if (*role == Role::Seller) {
                        record.seller_survey = std::move(response);
                    } else {
                        record.buyer_survey = std::move(response);
                    }
                    break;
                }
                case EventKind::Manifest:
                    break;
            }
        }
        loaded.records.push_back(std::move(record));
    }
    return loaded;
}

}  // namespace anchorbench
