#include "anchorbench/cli.hpp"

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anchorbench/catalog.hpp"
#include "anchorbench/runner.hpp"

namespace anchorbench {

namespace {

std::vector<Condition> parse_conditions_flag(const std::string& csv) {
    std::vector<Condition> conditions;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const std::size_t comma = csv.find(',', start);
        const std::string name =
            csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!name.empty()) {
            auto condition = parse_condition(name);
            if (!condition) throw CLI::ValidationError("--conditions", "unknown condition: " + name);
            conditions.push_back(*condition);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (conditions.empty()) throw CLI::ValidationError("--conditions", "no conditions given");
    return conditions;
}

void configure_backend_flags(CLI::App* cmd, BackendDescriptor& backend, const std::string& role) {
    cmd->add_option("--" + role + "-backend", backend.kind,
                    "Backend kind for the " + role + ": scripted | http | replay")
        ->check(CLI::IsMember({"scripted", "http", "replay"}));
    cmd->add_option("--" + role + "-model", backend.model_id, "Model id sent on the wire");
    cmd->add_option("--" + role + "-base-url", backend.base_url, "HTTP backend base URL");
    cmd->add_option("--" + role + "-auth-env", backend.auth_env_var,
                    "Env var holding the API key (default ANCHORBENCH_API_KEY)");
    cmd->add_option("--" + role + "-path", backend.path, "HTTP endpoint path");
    cmd->add_option("--" + role + "-rpm", backend.rate_limit_per_min,
                    "Requests per minute for this backend");
    cmd->add_option("--" + role + "-timeout-ms", backend.timeout_ms, "Request timeout");
    cmd->add_option("--" + role + "-max-retries", backend.max_retries,
                    "Retry budget for transient failures");
    cmd->add_option("--" + role + "-fixture", backend.fixture_path,
                    "Replay fixture file (relative paths resolve inside the experiment dir)");
}

int failure_summary(const std::vector<std::string>& failed) {
    if (failed.empty()) return 0;
    std::cerr << failed.size() << " session(s) failed:\n";
    for (const auto& line : failed) std::cerr << "  " << line << "\n";
    return 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"anchorbench: price-negotiation simulation harness"};
    app.require_subcommand(1);

    // validate
    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Validate a catalog file");
    validate_cmd->add_option("catalog", validate_path, "Catalog JSON file")->required();

    // plan
    PlanConfig plan_config;
    std::string plan_exp_dir;
    std::string plan_conditions = "baseline,seller_anchor,seller_anchor_buyer_informed";
    std::string reasoning_effort;
    std::vector<std::string> extra_params;
    auto* plan_cmd = app.add_subcommand("plan", "Freeze an experiment manifest and input copies");
    plan_cmd->add_option("--catalog", plan_config.catalog_path, "Catalog JSON file")->required();
    plan_cmd->add_option("--exp", plan_exp_dir, "Experiment directory to create")->required();
    plan_cmd->add_option("--data-dir", plan_config.data_dir,
                         "Directory with lexicon.json, questionnaire.json, templates/")
        ->default_val("data");
    plan_cmd->add_option("--id", plan_config.experiment_id, "Experiment id (default: dir name)");
    plan_cmd->add_option("--seed", plan_config.master_seed, "Master seed")->default_val(7);
    plan_cmd->add_option("--per-product", plan_config.per_product, "Iterations per product")
        ->default_val(2);
    plan_cmd->add_option("--t-max", plan_config.t_max, "Maximum utterances per session")
        ->default_val(20);
    plan_cmd->add_option("--n-adjectives", plan_config.n_adjectives, "Adjectives per dimension")
        ->default_val(3);
    plan_cmd->add_option("--temperature", plan_config.temperature, "Sampling temperature")
        ->default_val(1.0);
    plan_cmd->add_option("--conditions", plan_conditions, "Comma-separated condition list");
    configure_backend_flags(plan_cmd, plan_config.seller_backend, "seller");
    configure_backend_flags(plan_cmd, plan_config.buyer_backend, "buyer");
    plan_cmd->add_option("--reasoning-effort", reasoning_effort,
                         "Adds reasoning_effort to the buyer backend's request params");
    plan_cmd->add_option("--extra-param", extra_params,
                         "key=value request parameter for both backends (repeatable)");
    plan_cmd->add_option("--anchor-multiplier", plan_config.scripted.anchor_multiplier,
                         "Scripted seller opening multiplier under anchor conditions");
    plan_cmd->add_option("--concession-rate", plan_config.scripted.concession_rate,
                         "Scripted seller concession rate");
    plan_cmd->add_option("--susceptibility", plan_config.scripted.susceptibility_coeff,
                         "Scripted buyer susceptibility coefficient");
    plan_cmd->add_option("--accept-gap-ratio", plan_config.scripted.accept_gap_ratio,
                         "Scripted buyer accept gap as a fraction of the target spread");

    // run
    std::string run_exp_dir;
    RunOptions run_options;
    int max_sessions = -1;
    auto* run_cmd = app.add_subcommand("run", "Execute pending sessions (resumable)");
    run_cmd->add_option("--exp", run_exp_dir, "Experiment directory")->required();
    run_cmd->add_option("--concurrency", run_options.concurrency, "In-flight session ceiling")
        ->default_val(4);
    run_cmd->add_option("--max-sessions", max_sessions, "Stop after this many sessions");
    run_cmd->add_flag("--verbose", run_options.verbose, "Log each session outcome");

    // survey
    std::string survey_exp_dir;
    bool survey_include_all = false;
    auto* survey_cmd = app.add_subcommand("survey", "Administer pending questionnaires");
    survey_cmd->add_option("--exp", survey_exp_dir, "Experiment directory")->required();
    survey_cmd->add_flag("--include-all", survey_include_all,
                         "Survey non-accepted sessions too (default: accepted only)");

    // analyze
    std::string analyze_exp_dir;
    auto* analyze_cmd = app.add_subcommand("analyze", "Emit report tables and test results");
    analyze_cmd->add_option("--exp", analyze_exp_dir, "Experiment directory")->required();

    // resurvey
    std::string resurvey_exp_dir, resurvey_session_id, resurvey_role = "buyer";
    int resurvey_times = 5;
    auto* resurvey_cmd =
        app.add_subcommand("resurvey", "Re-administer the questionnaire against a fixed transcript");
    resurvey_cmd->add_option("--exp", resurvey_exp_dir, "Experiment directory")->required();
    resurvey_cmd->add_option("--session", resurvey_session_id, "Session id")->required();
    resurvey_cmd->add_option("--role", resurvey_role, "seller | buyer")
        ->check(CLI::IsMember({"seller", "buyer"}));
    resurvey_cmd->add_option("--times", resurvey_times, "Repetitions")->default_val(5);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (validate_cmd->parsed()) {
            Catalog catalog = load_catalog(validate_path);
            std::cout << "ok: " << catalog.scenarios.size() << " scenarios\n";
            return 0;
        }
        if (plan_cmd->parsed()) {
            plan_config.conditions = parse_conditions_flag(plan_conditions);
            if (!reasoning_effort.empty()) {
                plan_config.buyer_backend.extra_params["reasoning_effort"] = reasoning_effort;
            }
            for (const auto& kv : extra_params) {
                const std::size_t eq = kv.find('=');
                if (eq == std::string::npos) {
                    std::cerr << "--extra-param expects key=value, got: " << kv << "\n";
                    return 1;
                }
                const std::string key = kv.substr(0, eq);
                const std::string value = kv.substr(eq + 1);
                plan_config.seller_backend.extra_params[key] = value;
                plan_config.buyer_backend.extra_params[key] = value;
            }
            const std::size_t sessions = plan_experiment(plan_config, plan_exp_dir);
            std::cout << "planned " << sessions << " sessions in " << plan_exp_dir << "\n";
            return 0;
        }
        if (run_cmd->parsed()) {
            if (max_sessions >= 0) run_options.max_sessions = max_sessions;
            const RunSummary summary = run_experiment(run_exp_dir, run_options);
            std::cout << "executed " << summary.executed << ", skipped " << summary.skipped
                      << " already-complete session(s)\n";
            return failure_summary(summary.failed_sessions);
        }
        if (survey_cmd->parsed()) {
            RunOptions options;
            options.include_non_accepted_surveys = survey_include_all;
            const SurveySummary summary = run_surveys(survey_exp_dir, options);
            std::cout << "administered " << summary.administered << ", skipped " << summary.skipped
                      << "\n";
            return failure_summary(summary.failed_sessions);
        }
        if (analyze_cmd->parsed()) {
            const AnalyzeSummary summary = analyze_experiment(analyze_exp_dir);
            std::cout << "analyzed " << summary.records << " session(s), " << summary.accepted
                      << " accepted; reports in " << summary.report_dir.string() << "\n";
            if (summary.torn_line_warnings > 0) {
                std::cerr << "warning: tolerated " << summary.torn_line_warnings
                          << " torn trailing line(s)\n";
            }
            return 0;
        }
        if (resurvey_cmd->parsed()) {
            const Role role = *parse_role(resurvey_role);
            const ResurveyStats stats =
                resurvey_session(resurvey_exp_dir, resurvey_session_id, role, resurvey_times);
            std::cout << "item,mean,sd\n";
            for (int item = 1; item <= 16; ++item) {
                std::printf("%d,%.4f,", item, stats.mean[item - 1]);
                if (stats.sd) {
                    std::printf("%.4f\n", (*stats.sd)[item - 1]);
                } else {
                    std::printf("\n");
                }
            }
            return 0;
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace anchorbench
