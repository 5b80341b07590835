#include <doctest.h>

#include <fstream>
#include <sstream>

#include "anchorbench/chat_agent.hpp"
#include "anchorbench/cli.hpp"
#include "anchorbench/runner.hpp"
#include "support.hpp"

using namespace anchorbench;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_catalog(const std::filesystem::path& path, int items, std::uint64_t seed) {
    std::ofstream out(path, std::ios::binary);
    out << catalog_to_json(test::synthetic_catalog(items, seed));
}

PlanConfig scripted_plan(const std::filesystem::path& catalog_path) {
    PlanConfig config;
    config.catalog_path = catalog_path;
    config.data_dir = test::data_dir();
    config.experiment_id = "exp";
    config.master_seed = 7;
    config.per_product = 2;
    return config;
}

int cli(std::initializer_list<const char*> args) {
    std::vector<const char*> argv = {"anchorbench"};
    argv.insert(argv.end(), args.begin(), args.end());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("plan + run + survey + analyze on a scripted experiment") {
    test::ScratchDir scratch("pipeline");
    const auto catalog_path = scratch.path() / "catalog.json";
    write_catalog(catalog_path, 6, 31);
    const auto exp = scratch.path() / "exp";

    const std::size_t planned = plan_experiment(scripted_plan(catalog_path), exp);
    CHECK(planned == 36);  // 6 items x 2 iterations x 3 conditions
    CHECK(std::filesystem::exists(exp / "manifest"));
    CHECK(std::filesystem::exists(exp / "catalog.json"));
    CHECK(std::filesystem::exists(exp / "templates" / "seller_setting.txt"));

    RunOptions options;
    options.concurrency = 3;
    const RunSummary run1 = run_experiment(exp, options);
    CHECK(run1.executed == 36);
    CHECK(run1.failed_sessions.empty());

    // run is idempotent over completed sessions
    const RunSummary run2 = run_experiment(exp, options);
    CHECK(run2.executed == 0);
    CHECK(run2.skipped == 36);

    const SurveySummary surveys = run_surveys(exp, options);
    CHECK(surveys.administered > 0);
    CHECK(surveys.failed_sessions.empty());

    const AnalyzeSummary analysis = analyze_experiment(exp);
    CHECK(analysis.records == 36);
    CHECK(analysis.accepted > 0);
    for (const char* report :
         {"utility_by_condition.csv", "satisfaction_by_condition.csv", "satisfaction_items.csv",
          "paired_tests.csv", "susceptibility_correlations.csv", "summary.txt"}) {
        CHECK(std::filesystem::exists(analysis.report_dir / report));
    }

    // analyze is a pure function of the store
    const std::string first = slurp(analysis.report_dir / "utility_by_condition.csv");
    analyze_experiment(exp);
    CHECK(slurp(analysis.report_dir / "utility_by_condition.csv") == first);
}

TEST_CASE("loaded experiment reconstructs outcomes, utilities, and surveys") {
    test::ScratchDir scratch("load");
    const auto catalog_path = scratch.path() / "catalog.json";
    write_catalog(catalog_path, 4, 8);
    const auto exp = scratch.path() / "exp";
    plan_experiment(scripted_plan(catalog_path), exp);
    run_experiment(exp, RunOptions{});
    run_surveys(exp, RunOptions{});

    const LoadedExperiment loaded = load_experiment(exp);
    CHECK(loaded.records.size() == 24);
    CHECK(loaded.torn_line_warnings == 0);
    int accepted = 0;
    for (const auto& record : loaded.records) {
        REQUIRE(record.outcome);
        if (record.accepted()) {
            ++accepted;
            REQUIRE(record.seller_utility);
            REQUIRE(record.buyer_utility);
            CHECK(*record.seller_utility + *record.buyer_utility ==
                  doctest::Approx(4.0 / 7.0).epsilon(1e-9));
            CHECK(record.final_price);
            CHECK(record.seller_survey);
            CHECK(record.buyer_survey);
            CHECK(!record.turns.empty());
        }
    }
    CHECK(accepted > 0);
}

TEST_CASE("interrupt and resume produce the same store as a straight run") {
    test::ScratchDir scratch("resume");
    const auto catalog_path = scratch.path() / "catalog.json";
    write_catalog(catalog_path, 5, 77);

    const auto straight = scratch.path() / "straight";
    const auto resumed = scratch.path() / "resumed";
    plan_experiment(scripted_plan(catalog_path), straight);
    plan_experiment(scripted_plan(catalog_path), resumed);

    run_experiment(straight, RunOptions{});

    RunOptions first_half;
    first_half.max_sessions = 11;
    const RunSummary partial = run_experiment(resumed, first_half);
    CHECK(partial.executed == 11);
    const RunSummary rest = run_experiment(resumed, RunOptions{});
    CHECK(rest.executed == 19);
    CHECK(rest.skipped == 11);

    analyze_experiment(straight);
    analyze_experiment(resumed);
    for (const char* report : {"utility_by_condition.csv", "paired_tests.csv", "summary.txt"}) {
        CHECK(slurp(straight / "reports" / report) == slurp(resumed / "reports" / report));
    }

    // session files themselves also match (deterministic scripted agents)
    ExperimentStore s1 = ExperimentStore::open(straight);
    for (const auto& id : s1.session_ids()) {
        CHECK(slurp(straight / "sessions" / (id + ".events")) ==
              slurp(resumed / "sessions" / (id + ".events")));
    }
}

TEST_CASE("seller and buyer backends are independently selectable") {
    test::ScratchDir scratch("mixed");
    const auto catalog_path = scratch.path() / "catalog.json";
    write_catalog(catalog_path, 2, 12);
    const auto exp = scratch.path() / "exp";

    PlanConfig config = scripted_plan(catalog_path);
    config.buyer_backend.kind = "replay";
    config.buyer_backend.model_id = "replayed-model";
    config.buyer_backend.fixture_path = "buyer_fixture.jsonl";
    plan_experiment(config, exp);
    std::ofstream(exp / "buyer_fixture.jsonl").close();  // empty fixture

    // every buyer call misses the fixture while the scripted seller side is
    // fine; sessions are marked failed, not silently MaxTurns
    const RunSummary summary = run_experiment(exp, RunOptions{});
    CHECK(summary.executed == 0);
    CHECK(summary.failed_sessions.size() == 12);

    const LoadedExperiment loaded = load_experiment(exp);
    for (const auto& record : loaded.records) CHECK(!record.accepted());

    // analysis over an all-failed experiment degrades to error notes, not a crash
    const AnalyzeSummary analysis = analyze_experiment(exp);
    CHECK(analysis.accepted == 0);
    CHECK(std::filesystem::exists(analysis.report_dir / "paired_tests.csv"));
}

TEST_CASE("cli: validate, plan, run, analyze round trip with exit codes") {
    test::ScratchDir scratch("cli");
    const auto catalog_path = scratch.path() / "catalog.json";
    write_catalog(catalog_path, 3, 3);
    const auto exp = (scratch.path() / "exp").string();
    const auto data = test::data_dir().string();

    CHECK(cli({"validate", catalog_path.c_str()}) == 0);
    CHECK(cli({"plan", "--catalog", catalog_path.c_str(), "--exp", exp.c_str(), "--data-dir",
               data.c_str(), "--seed", "9", "--per-product", "1"}) == 0);
    CHECK(cli({"run", "--exp", exp.c_str(), "--concurrency", "2"}) == 0);
    CHECK(cli({"survey", "--exp", exp.c_str()}) == 0);
    CHECK(cli({"analyze", "--exp", exp.c_str()}) == 0);

    // a resumed run performs zero new sessions
    CHECK(cli({"run", "--exp", exp.c_str()}) == 0);

    // resurvey emits a per-item table for a stored session
    ExperimentStore store = ExperimentStore::open(exp);
    const auto ids = store.session_ids();
    REQUIRE(!ids.empty());
    CHECK(cli({"resurvey", "--exp", exp.c_str(), "--session", ids.front().c_str(), "--times",
               "3"}) == 0);
}

TEST_CASE("cli: usage errors exit 1, runtime failures exit 2") {
    CHECK(cli({"no-such-subcommand"}) == 1);
    CHECK(cli({"plan", "--exp", "/tmp/x"}) == 1);                      // missing --catalog
    CHECK(cli({"validate", "/nonexistent/catalog.json"}) == 2);       // runtime failure
    CHECK(cli({"analyze", "--exp", "/nonexistent/experiment"}) == 2);
}

TEST_CASE("cli: validate rejects a bad catalog with a positioned message") {
    test::ScratchDir scratch("badcat");
    const auto bad = scratch.path() / "bad.json";
    std::ofstream(bad) << R"([{"id":"x","title":"T","description":"D","seller_target":5,"buyer_target":9}])";
    CHECK(cli({"validate", bad.string().c_str()}) == 2);
}

TEST_CASE("a session re-run against a replay backend reproduces its transcript byte-for-byte") {
    // a deterministic stand-in for a remote model: canned lines per role
    class CannedModel : public ChatBackend {
    public:
        ChatResponse chat(const ChatRequest& request) override {
            const bool seller = request.system_text.find("Act as a seller") == 0;
            int& calls = seller ? seller_calls_ : buyer_calls_;
            static const char* seller_lines[] = {
                "Thanks for asking! I'm asking $100 for it.\n<<state=offer price=100>>",
                "I could go to $90.\n<<state=offer price=90>>"};
            static const char* buyer_lines[] = {
                "Could you do $80?\n<<state=offer price=80>>",
                "Alright, $90 works. Deal.\n<<state=accept price=90>>"};
            const char* line = seller ? seller_lines[std::min(calls, 1)]
                                      : buyer_lines[std::min(calls, 1)];
            ++calls;
            return {line, 10, 10, {}};
        }

    private:
        int seller_calls_ = 0;
        int buyer_calls_ = 0;
    };

    test::ScratchDir scratch("replay-transcript");
    const auto fixture = scratch.path() / "fixture.jsonl";
    const PromptTemplates templates = PromptTemplates::load(test::data_dir() / "templates");
    Scenario scenario;
    scenario.id = "thing";
    scenario.title = "Old Thing";
    scenario.description = "A thing.";
    scenario.seller_target = Money::from_whole(100);
    scenario.buyer_target = Money::from_whole(60);
    PersonaText persona;
    persona.rendered = "calm, curious, kind";

    auto run_with = [&](ChatBackend& backend) {
        ChatAgent seller(backend, Role::Seller,
                         build_role_prompt(Role::Seller, scenario, persona, Condition::Baseline,
                                           templates),
                         "fake-model", 1.0);
        ChatAgent buyer(backend, Role::Buyer,
                        build_role_prompt(Role::Buyer, scenario, persona, Condition::Baseline,
                                          templates),
                        "fake-model", 1.0);
        SessionContext context{"replay-test", scenario.id, Condition::Baseline, {}, {}};
        return run_session(seller, buyer, context, SessionOptions{});
    };

    CannedModel model;
    Transcript recorded;
    {
        RecordReplayBackend recorder(RecordReplayBackend::Mode::Record, fixture, &model);
        recorded = run_with(recorder);
    }
    Transcript replayed;
    {
        RecordReplayBackend replayer(RecordReplayBackend::Mode::Replay, fixture);
        replayed = run_with(replayer);
    }
    REQUIRE(recorded.outcome.kind == OutcomeKind::Accepted);
    REQUIRE(recorded.turns.size() == replayed.turns.size());
    for (std::size_t i = 0; i < recorded.turns.size(); ++i) {
        CHECK(turn_payload(recorded.turns[i]) == turn_payload(replayed.turns[i]));
    }
    CHECK(recorded.outcome.final_price == replayed.outcome.final_price);
    CHECK(*recorded.outcome.final_price == Money::from_whole(90));
}

TEST_CASE("surveys default to accepted sessions only; --include-all widens the scope") {
    test::ScratchDir scratch("survey-scope");
    const auto catalog_path = scratch.path() / "catalog.json";
    write_catalog(catalog_path, 1, 64);
    const auto exp = scratch.path() / "exp";
    PlanConfig config = scripted_plan(catalog_path);
    config.per_product = 1;
    config.conditions = {Condition::Baseline};
    plan_experiment(config, exp);

    // hand-write a max_turns outcome instead of running the session
    ExperimentStore store = ExperimentStore::open(exp);
    const LoadedExperiment before = load_experiment(exp);
    CHECK(before.records.empty());
    const Catalog catalog = load_catalog(exp / "catalog.json");
    const auto plans = plan_sessions(catalog, 1, {Condition::Baseline}, config.master_seed);
    REQUIRE(plans.size() == 1);
    SessionWriter writer = store.session_writer(plans[0].session_id);
    writer.append(EventKind::Outcome, plans[0].session_id, R"({"kind":"max_turns"})");

    RunOptions options;
    const SurveySummary strict = run_surveys(exp, options);
    CHECK(strict.administered == 0);

    options.include_non_accepted_surveys = true;
    const SurveySummary wide = run_surveys(exp, options);
    CHECK(wide.administered == 2);  // both roles
}

TEST_CASE("cli: --conditions restricts the planned condition set") {
    test::ScratchDir scratch("conditions");
    const auto catalog_path = scratch.path() / "catalog.json";
    write_catalog(catalog_path, 2, 90);
    const auto exp = (scratch.path() / "exp").string();
    const auto data = test::data_dir().string();

    CHECK(cli({"plan", "--catalog", catalog_path.c_str(), "--exp", exp.c_str(), "--data-dir",
               data.c_str(), "--per-product", "1", "--conditions", "baseline,seller_anchor"}) == 0);
    ExperimentStore store = ExperimentStore::open(exp);
    CHECK(store.manifest().conditions ==
          std::vector<Condition>{Condition::Baseline, Condition::SellerAnchor});
    CHECK(cli({"run", "--exp", exp.c_str()}) == 0);
    const LoadedExperiment loaded = load_experiment(exp);
    CHECK(loaded.records.size() == 4);  // 2 items x 1 iteration x 2 conditions

    // unknown condition name is a usage error
    const auto exp2 = (scratch.path() / "exp2").string();
    CHECK(cli({"plan", "--catalog", catalog_path.c_str(), "--exp", exp2.c_str(), "--data-dir",
               data.c_str(), "--conditions", "baseline,bogus"}) == 1);
}
