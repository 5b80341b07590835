#include "anchorbench/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "anchorbench/agents.hpp"
#include "anchorbench/chat_agent.hpp"
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
    if (!in) throw RunnerError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RunnerError("cannot write " + path.string());
    out << content;
}

std::string file_digest(const std::filesystem::path& path) { return hex64(fnv1a64(read_file(path))); }

struct ExperimentInputs {
    Catalog catalog;
    AdjectiveLexicon lexicon;
    Questionnaire questionnaire;
    PromptTemplates templates;
};

ExperimentInputs load_inputs(const std::filesystem::path& exp_dir) {
    ExperimentInputs inputs{
        load_catalog(exp_dir / "catalog.json"),
        AdjectiveLexicon::load(exp_dir / "lexicon.json"),
        Questionnaire::load(exp_dir / "questionnaire.json"),
        PromptTemplates::load(exp_dir / "templates"),
    };
    return inputs;
}

Money ratio_of_spread(Money base, Money spread, double ratio) {
    const double cents = (base.units() + ratio * spread.units()) / (Money::kScale / 100.0);
    return Money::from_cents(static_cast<std::int64_t>(std::llround(cents)));
}

struct SessionAgents {
    std::unique_ptr<Agent> seller;
    std::unique_ptr<Agent> buyer;
};

// Shared per-run transport state (one client per remote backend, shared
// limiter); scripted sessions need none.
struct BackendPool {
    std::unique_ptr<ChatBackend> seller_backend;
    std::unique_ptr<ChatBackend> buyer_backend;
};

std::unique_ptr<ChatBackend> make_remote_backend(const BackendDescriptor& descriptor,
                                                 const std::filesystem::path& exp_dir) {
    if (descriptor.kind == "http") {
        BackendConfig config;
        config.base_url = descriptor.base_url;
        config.path = descriptor.path;
        config.auth_env_var = descriptor.auth_env_var;
        config.max_retries = descriptor.max_retries;
        config.rate_limit_per_min = descriptor.rate_limit_per_min;
        config.timeout = std::chrono::milliseconds(descriptor.timeout_ms);
        return std::make_unique<HttpBackend>(config);
    }
    if (descriptor.kind == "replay") {
        std::filesystem::path fixture = descriptor.fixture_path;
        if (fixture.is_relative()) fixture = exp_dir / fixture;
        return std::make_unique<RecordReplayBackend>(RecordReplayBackend::Mode::Replay, fixture);
    }
    return nullptr;  // scripted
}

PersonaText render_session_persona(const RunManifest& manifest, const ExperimentInputs& inputs,
                                   const SessionPlan& plan, Role role) {
    Rng rng(derive_seed(manifest.master_seed, {"persona", plan.scenario_id,
                                               std::to_string(plan.iteration),
                                               role_name(role)}));
    const PersonalityProfile& profile =
        role == Role::Seller ? plan.seller_profile : plan.buyer_profile;
    return render_persona_text(profile, inputs.lexicon, manifest.n_adjectives, rng);
}

SessionAgents make_agents(const RunManifest& manifest, const ExperimentInputs& inputs,
                          const SessionPlan& plan, const Scenario& scenario,
                          BackendPool& backends) {
    SessionAgents agents;

    const Money spread = scenario.seller_target - scenario.buyer_target;
    const ScriptedParams& sp = manifest.scripted;

    if (manifest.seller_backend.kind == "scripted") {
        AnchorSellerParams params;
        params.anchor_multiplier = sp.anchor_multiplier;
        params.concession_rate = sp.concession_rate;
        params.floor = ratio_of_spread(scenario.buyer_target, spread, sp.floor_spread_ratio);
        agents.seller = std::make_unique<ScriptedSeller>(scenario, params, plan.condition);
    } else {
        RolePrompt prompt =
            build_role_prompt(Role::Seller, scenario,
                              render_session_persona(manifest, inputs, plan, Role::Seller),
                              plan.condition, inputs.templates);
        agents.seller = std::make_unique<ChatAgent>(*backends.seller_backend, Role::Seller,
                                                    std::move(prompt),
                                                    manifest.seller_backend.model_id,
                                                    manifest.temperature,
                                                    manifest.seller_backend.extra_params);
    }

    if (manifest.buyer_backend.kind == "scripted") {
        ConcessionBuyerParams params;
        params.open_ratio = sp.open_ratio;
        params.step = sp.step;
        params.accept_gap = ratio_of_spread(Money{}, spread, sp.accept_gap_ratio);
        params.susceptibility_coeff = sp.susceptibility_coeff;
        if (plan.condition == Condition::SellerAnchorBuyerInformed) {
            params.susceptibility_coeff *= sp.informed_coeff_factor;
        }
        agents.buyer = std::make_unique<ScriptedBuyer>(scenario, params);
    } else {
        RolePrompt prompt =
            build_role_prompt(Role::Buyer, scenario,
                              render_session_persona(manifest, inputs, plan, Role::Buyer),
                              plan.condition, inputs.templates);
        agents.buyer = std::make_unique<ChatAgent>(*backends.buyer_backend, Role::Buyer,
                                                   std::move(prompt),
                                                   manifest.buyer_backend.model_id,
                                                   manifest.temperature,
                                                   manifest.buyer_backend.extra_params);
    }
    return agents;
}

// A session file without an outcome is an abandoned partial (crash mid
// session). The store is append-only, so the partial is set aside untouched
// and the session regenerated.
void archive_partial_session(const std::filesystem::path& exp_dir, const std::string& session_id) {
    const auto file = exp_dir / "sessions" / (session_id + ".events");
    if (!std::filesystem::exists(file)) return;
    for (int n = 1;; ++n) {
        auto aside = exp_dir / "sessions" / (session_id + ".events.partial-" + std::to_string(n));
        if (!std::filesystem::exists(aside)) {
            std::filesystem::rename(file, aside);
            return;
        }
    }
}

}  // namespace

std::size_t plan_experiment(const PlanConfig& config, const std::filesystem::path& exp_dir) {
    Catalog catalog = load_catalog(config.catalog_path);
    const auto lexicon_path = config.data_dir / "lexicon.json";
    const auto questionnaire_path = config.data_dir / "questionnaire.json";
    const auto templates_dir = config.data_dir / "templates";

    // Validate the inputs before freezing anything.
    AdjectiveLexicon::load(lexicon_path);
    Questionnaire::load(questionnaire_path);
    PromptTemplates templates = PromptTemplates::load(templates_dir);

    std::filesystem::create_directories(exp_dir / "templates");
    auto copy_in = [&](const std::filesystem::path& src, const std::filesystem::path& dst) {
        if (std::filesystem::exists(dst)) {
            if (read_file(src) != read_file(dst)) {
                throw RunnerError("plan: " + dst.string() + " already exists with different content");
            }
            return;
        }
        write_file(dst, read_file(src));
    };
    copy_in(config.catalog_path, exp_dir / "catalog.json");
    copy_in(lexicon_path, exp_dir / "lexicon.json");
    copy_in(questionnaire_path, exp_dir / "questionnaire.json");
    for (const auto& entry : std::filesystem::directory_iterator(templates_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            copy_in(entry.path(), exp_dir / "templates" / entry.path().filename());
        }
    }

    RunManifest manifest;
    manifest.experiment_id =
        config.experiment_id.empty() ? exp_dir.filename().string() : config.experiment_id;
    manifest.master_seed = config.master_seed;
    manifest.per_product = config.per_product;
    manifest.t_max = config.t_max;
    manifest.n_adjectives = config.n_adjectives;
    manifest.temperature = config.temperature;
    manifest.conditions = config.conditions;
    manifest.catalog_digest = file_digest(exp_dir / "catalog.json");
    manifest.lexicon_digest = file_digest(exp_dir / "lexicon.json");
    manifest.questionnaire_digest = file_digest(exp_dir / "questionnaire.json");
    manifest.template_digests = templates.digests();
    manifest.seller_backend = config.seller_backend;
    manifest.buyer_backend = config.buyer_backend;
    manifest.scripted = config.scripted;

    ExperimentStore::create(exp_dir, manifest);
    return plan_sessions(catalog, config.per_product, config.conditions, config.master_seed).size();
}

RunSummary run_experiment(const std::filesystem::path& exp_dir, const RunOptions& options) {
    ExperimentStore store = ExperimentStore::open(exp_dir);
    const RunManifest& manifest = store.manifest();
    ExperimentInputs inputs = load_inputs(exp_dir);

    // The frozen inputs must still match the manifest.
    if (file_digest(exp_dir / "catalog.json") != manifest.catalog_digest) {
        throw RunnerError("run: catalog.json does not match the manifest digest");
    }
    if (inputs.templates.digests() != manifest.template_digests) {
        throw RunnerError("run: templates do not match the manifest digests");
    }

    auto plans =
        plan_sessions(inputs.catalog, manifest.per_product, manifest.conditions, manifest.master_seed);

    RunSummary summary;
    std::vector<const SessionPlan*> pending;
    for (const auto& plan : plans) {
        if (store.session_has_outcome(plan.session_id)) {
            ++summary.skipped;
        } else {
            archive_partial_session(exp_dir, plan.session_id);
            pending.push_back(&plan);
        }
    }
    if (options.max_sessions && static_cast<int>(pending.size()) > *options.max_sessions) {
        pending.resize(static_cast<std::size_t>(*options.max_sessions));
    }

    BackendPool backends;
    backends.seller_backend = make_remote_backend(manifest.seller_backend, exp_dir);
    backends.buyer_backend = make_remote_backend(manifest.buyer_backend, exp_dir);

    std::atomic<std::size_t> next{0};
    std::mutex summary_mutex;
    const int workers = std::max(1, std::min<int>(options.concurrency,
                                                  static_cast<int>(pending.size())));

    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= pending.size()) return;
            const SessionPlan& plan = *pending[i];
            const Scenario* scenario = inputs.catalog.find(plan.scenario_id);
            if (!scenario) {
                std::lock_guard lock(summary_mutex);
                summary.failed_sessions.push_back(plan.session_id + ": scenario missing from catalog");
                continue;
            }
            try {
                SessionAgents agents = make_agents(manifest, inputs, plan, *scenario, backends);
                SessionContext context{plan.session_id, plan.scenario_id, plan.condition,
                                       plan.seller_profile, plan.buyer_profile};
                SessionOptions session_options;
                session_options.t_max = manifest.t_max;

                SessionWriter writer = store.session_writer(plan.session_id);
                try {
                    Transcript transcript =
                        run_session(*agents.seller, *agents.buyer, context, session_options);
                    for (const auto& turn : transcript.turns) {
                        writer.append(EventKind::Turn, plan.session_id, turn_payload(turn));
                    }
                    std::optional<double> u_seller, u_buyer;
                    if (transcript.outcome.kind == OutcomeKind::Accepted) {
                        const PriceBounds bounds =
                            derive_price_bounds(scenario->seller_target, scenario->buyer_target);
                        u_seller = seller_utility(bounds, *transcript.outcome.final_price);
                        u_buyer = buyer_utility(bounds, *transcript.outcome.final_price);
                    }
                    writer.append(EventKind::Outcome, plan.session_id,
                                  outcome_payload(transcript.outcome, false, std::nullopt,
                                                  std::nullopt));
                    if (u_seller) {
                        std::ostringstream metric;
                        metric.precision(17);
                        metric << "{\"seller_utility\":" << *u_seller
                               << ",\"buyer_utility\":" << *u_buyer << "}";
                        writer.append(EventKind::Metric, plan.session_id, metric.str());
                    }
                    std::lock_guard lock(summary_mutex);
                    ++summary.executed;
                    if (options.verbose) {
                        std::fprintf(stderr, "session %s: %s\n", plan.session_id.c_str(),
                                     std::string(outcome_kind_name(transcript.outcome.kind)).c_str());
                    }
                } catch (const AgentFailure& failure) {
                    for (const auto& turn : failure.partial_turns) {
                        writer.append(EventKind::Turn, plan.session_id, turn_payload(turn));
                    }
                    writer.append(EventKind::Outcome, plan.session_id,
                                  outcome_payload(SessionOutcome{}, true, std::nullopt, std::nullopt));
                    std::lock_guard lock(summary_mutex);
                    summary.failed_sessions.push_back(plan.session_id + ": " + failure.what());
                }
            } catch (const std::exception& e) {
                std::lock_guard lock(summary_mutex);
                summary.failed_sessions.push_back(plan.session_id + ": " + e.what());
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int i = 0; i < workers; ++i) threads.emplace_back(work);
    for (auto& t : threads) t.join();
    return summary;
}

SurveySummary run_surveys(const std::filesystem::path& exp_dir, const RunOptions& options) {
    ExperimentStore store = ExperimentStore::open(exp_dir);
    const RunManifest& manifest = store.manifest();
    ExperimentInputs inputs = load_inputs(exp_dir);
    LoadedExperiment loaded = load_experiment(exp_dir);

    BackendPool backends;
    backends.seller_backend = make_remote_backend(manifest.seller_backend, exp_dir);
    backends.buyer_backend = make_remote_backend(manifest.buyer_backend, exp_dir);

    const std::string& instructions = inputs.templates.text("survey_instructions");

    SurveySummary summary;
    for (const auto& record : loaded.records) {
        if (!record.outcome || record.failed) continue;
        const bool eligible =
            record.accepted() || options.include_non_accepted_surveys;
        if (!eligible) continue;

        Transcript transcript = transcript_from_record(record);
        const Scenario* scenario = inputs.catalog.find(record.scenario_id);
        if (!scenario) continue;

        for (Role role : {Role::Seller, Role::Buyer}) {
            const bool have = role == Role::Seller ? record.seller_survey.has_value()
                                                   : record.buyer_survey.has_value();
            if (have || store.session_has_survey(record.session_id, role)) {
                ++summary.skipped;
                continue;
            }
            const auto& descriptor =
                role == Role::Seller ? manifest.seller_backend : manifest.buyer_backend;
            try {
                SurveyResponse response;
                if (descriptor.kind == "scripted") {
                    FixedSurveyAgent agent(role == Role::Seller ? kDefaultSellerSurveyAnswers
                                                                : kDefaultBuyerSurveyAnswers);
                    response = administer(transcript, role, agent, inputs.questionnaire, instructions);
                } else {
                    SessionPlan plan;
                    plan.scenario_id = record.scenario_id;
                    plan.iteration = record.iteration;
                    plan.seller_profile = record.seller_profile;
                    plan.buyer_profile = record.buyer_profile;
                    RolePrompt prompt = build_role_prompt(
                        role, *scenario, render_session_persona(manifest, inputs, plan, role),
                        record.condition, inputs.templates);
                    ChatBackend& backend = role == Role::Seller ? *backends.seller_backend
                                                                : *backends.buyer_backend;
                    ChatAgent agent(backend, role, std::move(prompt), descriptor.model_id,
                                    manifest.temperature, descriptor.extra_params);
                    response = administer(transcript, role, agent, inputs.questionnaire, instructions);
                }
                SessionWriter writer = store.session_writer(record.session_id);
                writer.append(EventKind::Survey, record.session_id, survey_payload(response));
                ++summary.administered;
            } catch (const std::exception& e) {
                summary.failed_sessions.push_back(record.session_id + " (" +
                                                  std::string(role_name(role)) + "): " + e.what());
            }
        }
    }
    return summary;
}

Transcript transcript_from_record(const RunRecord& record) {
    Transcript transcript;
    transcript.session_id = record.session_id;
    transcript.scenario_id = record.scenario_id;
    transcript.condition = record.condition;
    transcript.seller_persona = record.seller_profile;
    transcript.buyer_persona = record.buyer_profile;
    transcript.turns = record.turns;
    if (record.outcome) {
        transcript.outcome.kind = *record.outcome;
        transcript.outcome.final_price = record.final_price;
    }
    return transcript;
}

ResurveyStats resurvey_session(const std::filesystem::path& exp_dir, const std::string& session_id,
                               Role role, int times) {
    ExperimentStore store = ExperimentStore::open(exp_dir);
    const RunManifest& manifest = store.manifest();
    ExperimentInputs inputs = load_inputs(exp_dir);
    LoadedExperiment loaded = load_experiment(exp_dir);

    const RunRecord* record = nullptr;
    for (const auto& r : loaded.records) {
        if (r.session_id == session_id) {
            record = &r;
            break;
        }
    }
    if (!record || !record->outcome) {
        throw RunnerError("resurvey: session " + session_id + " not found or incomplete");
    }

    Transcript transcript = transcript_from_record(*record);
    const auto& descriptor = role == Role::Seller ? manifest.seller_backend : manifest.buyer_backend;
    const std::string& instructions_template = inputs.templates.text("resurvey_instructions");

    if (descriptor.kind == "scripted") {
        FixedSurveyAgent agent(role == Role::Seller ? kDefaultSellerSurveyAnswers
                                                    : kDefaultBuyerSurveyAnswers);
        return resurvey(transcript, role, agent, inputs.questionnaire, instructions_template, times);
    }
    BackendPool backends;
    backends.seller_backend = make_remote_backend(manifest.seller_backend, exp_dir);
    backends.buyer_backend = make_remote_backend(manifest.buyer_backend, exp_dir);
    ChatBackend& backend =
        role == Role::Seller ? *backends.seller_backend : *backends.buyer_backend;
    // Third-person evaluation: fresh context, no role system prompt.
    ChatAgent agent(backend, role, RolePrompt{role, ""}, descriptor.model_id, manifest.temperature,
                    descriptor.extra_params);
    return resurvey(transcript, role, agent, inputs.questionnaire, instructions_template, times);
}

namespace {

std::string fmt(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

void write_reports(const std::filesystem::path& report_dir, const RunManifest& manifest,
                   const std::vector<RunRecord>& records) {
    std::filesystem::create_directories(report_dir);
    std::span<const RunRecord> span(records);
    const ConditionTable table = condition_table(span);

    {
        std::ostringstream out;
        out << "role,condition,n,mean,sd\n";
        for (Role role : {Role::Seller, Role::Buyer}) {
            for (Condition condition : manifest.conditions) {
                out << role_name(role) << "," << condition_name(condition) << ",";
                auto it = table.utility.find({role, condition});
                if (it == table.utility.end()) {
                    out << "0,,\n";
                } else {
                    out << it->second.n << "," << fmt(it->second.mean) << ","
                        << (it->second.sd ? fmt(*it->second.sd) : std::string{}) << "\n";
                }
            }
        }
        write_file(report_dir / "utility_by_condition.csv", out.str());
    }

    {
        std::ostringstream out;
        out << "role,condition,n,outcome,self,process,relationship\n";
        for (Role role : {Role::Seller, Role::Buyer}) {
            for (Condition condition : manifest.conditions) {
                out << role_name(role) << "," << condition_name(condition) << ",";
                auto it = table.satisfaction.find({role, condition});
                if (it == table.satisfaction.end()) {
                    out << "0,,,,\n";
                } else {
                    const DimensionScores& d = it->second.dimensions;
                    out << it->second.n << "," << fmt(d.outcome) << "," << fmt(d.self) << ","
                        << fmt(d.process) << "," << fmt(d.relationship) << "\n";
                }
            }
        }
        write_file(report_dir / "satisfaction_by_condition.csv", out.str());
    }

    {
        // Per-item detail; reversed items are also shown as 7 - mean, the way
        // the per-question tables present them.
        std::ostringstream out;
        out << "role,condition,item,mean_raw,mean_display\n";
        for (Role role : {Role::Seller, Role::Buyer}) {
            for (Condition condition : manifest.conditions) {
                auto it = table.satisfaction.find({role, condition});
                if (it == table.satisfaction.end()) continue;
                for (int item = 1; item <= 16; ++item) {
                    const double raw = it->second.item_means[item - 1];
                    const double display = Questionnaire::is_reversed(item) ? 7.0 - raw : raw;
                    out << role_name(role) << "," << condition_name(condition) << "," << item << ","
                        << fmt(raw) << "," << fmt(display) << "\n";
                }
            }
        }
        write_file(report_dir / "satisfaction_items.csv", out.str());
    }

    {
        std::ostringstream out;
        out << "metric,role,condition_a,condition_b,n_pairs,excluded,mean_diff,t,dof,p,significant_at_05,note\n";
        auto emit = [&](const char* metric, Role role, Condition a, Condition b,
                        const MetricFn& fn) {
            out << metric << "," << role_name(role) << "," << condition_name(a) << ","
                << condition_name(b) << ",";
            try {
                const PairedRuns paired = pair_runs(span, a, b, fn);
                const TestResult result = paired_t_test(paired.sample);
                out << paired.sample.pairs.size() << "," << paired.excluded_cells << ","
                    << fmt(result.mean_diff) << "," << fmt(result.statistic) << "," << result.dof
                    << "," << fmt(result.p_value) << "," << (result.significant_at_05 ? "yes" : "no")
                    << ",\n";
            } catch (const Error& e) {
                out << ",,,,,,," << e.what() << "\n";
            }
        };
        for (Role role : {Role::Seller, Role::Buyer}) {
            for (std::size_t i = 0; i < manifest.conditions.size(); ++i) {
                for (std::size_t j = i + 1; j < manifest.conditions.size(); ++j) {
                    emit("utility", role, manifest.conditions[i], manifest.conditions[j],
                         utility_metric(role));
                }
            }
        }
        for (Role role : {Role::Seller, Role::Buyer}) {
            for (SurveyDimension dim : kSurveyDimensions) {
                const bool have_pair =
                    std::find(manifest.conditions.begin(), manifest.conditions.end(),
                              Condition::SellerAnchor) != manifest.conditions.end() &&
                    std::find(manifest.conditions.begin(), manifest.conditions.end(),
                              Condition::Baseline) != manifest.conditions.end();
                if (!have_pair) continue;
                const std::string metric = "satisfaction_" + std::string(survey_dimension_name(dim));
                emit(metric.c_str(), role, Condition::Baseline, Condition::SellerAnchor,
                     satisfaction_metric(role, dim));
            }
        }
        write_file(report_dir / "paired_tests.csv", out.str());
    }

    {
        std::ostringstream out;
        out << "dimension,n,rho,p,note\n";
        try {
            const auto correlations = susceptibility_correlations(span);
            for (Dimension dim : kDimensions) {
                const DimensionCorrelation& entry = correlations.at(dim);
                out << dimension_code(dim) << ",";
                if (entry.result) {
                    out << entry.result->n << "," << fmt(entry.result->rho) << ","
                        << fmt(entry.result->p_value) << ",\n";
                } else {
                    out << ",,," << entry.error << "\n";
                }
            }
        } catch (const Error& e) {
            for (Dimension dim : kDimensions) {
                out << dimension_code(dim) << ",,,," << e.what() << "\n";
            }
        }
        write_file(report_dir / "susceptibility_correlations.csv", out.str());
    }

    {
        std::ostringstream out;
        out << "experiment " << manifest.experiment_id << "\n";
        out << "seed " << manifest.master_seed << ", per_product " << manifest.per_product
            << ", t_max " << manifest.t_max << ", n_adjectives " << manifest.n_adjectives
            << ", temperature " << fmt(manifest.temperature) << "\n";
        out << "seller backend " << manifest.seller_backend.kind << " ("
            << manifest.seller_backend.model_id << "), buyer backend "
            << manifest.buyer_backend.kind << " (" << manifest.buyer_backend.model_id << ")\n\n";
        out << "sessions per condition (accepted/total):\n";
        for (Condition condition : manifest.conditions) {
            const int total = table.total_per_condition.count(condition)
                                  ? table.total_per_condition.at(condition)
                                  : 0;
            const int accepted = table.accepted_per_condition.count(condition)
                                     ? table.accepted_per_condition.at(condition)
                                     : 0;
            out << "  " << condition_name(condition) << ": " << accepted << "/" << total << "\n";
        }
        out << "\nmean utility (accepted runs):\n";
        for (Role role : {Role::Seller, Role::Buyer}) {
            for (Condition condition : manifest.conditions) {
                auto it = table.utility.find({role, condition});
                if (it == table.utility.end()) {
                    out << "  " << role_name(role) << " " << condition_name(condition)
                        << ": (no accepted runs)\n";
                } else {
                    out << "  " << role_name(role) << " " << condition_name(condition) << ": "
                        << fmt(it->second.mean)
                        << (it->second.sd ? " +/- " + fmt(*it->second.sd) : std::string{}) << "  (n="
                        << it->second.n << ")\n";
                }
            }
        }
        out << "\nstatistical tests are two-sided, alpha 0.05, no multiple-comparison "
               "correction; see paired_tests.csv and susceptibility_correlations.csv.\n";
        write_file(report_dir / "summary.txt", out.str());
    }
}

}  // namespace

AnalyzeSummary analyze_experiment(const std::filesystem::path& exp_dir) {
    LoadedExperiment loaded = load_experiment(exp_dir);
    AnalyzeSummary summary;
    summary.report_dir = exp_dir / "reports";
    summary.records = static_cast<int>(loaded.records.size());
    for (const auto& record : loaded.records) {
        if (record.accepted()) ++summary.accepted;
    }
    summary.torn_line_warnings = loaded.torn_line_warnings;
    write_reports(summary.report_dir, loaded.manifest, loaded.records);
    return summary;
}

}  // namespace anchorbench
