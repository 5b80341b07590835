#pragma once
// Experiment orchestration on top of the store: plan (freeze manifest and
// input copies), run (execute pending sessions, resumable), survey, analyze
// (emit report files), resurvey.
//
// plan copies the catalog, lexicon, questionnaire, and templates into the
// experiment directory and pins their digests in the manifest, so every later
// stage works from the frozen inputs and a run is reproducible from the
// directory alone.

#include <filesystem>
#include <optional>
#include <vector>

#include "anchorbench/analysis.hpp"
#include "anchorbench/catalog.hpp"
#include "anchorbench/store.hpp"
#include "anchorbench/types.hpp"

namespace anchorbench {

struct RunnerError : Error {
    using Error::Error;
};

struct PlanConfig {
    std::filesystem::path catalog_path;
    std::filesystem::path data_dir;  // holds lexicon.json, questionnaire.json, templates/
    std::string experiment_id;
    std::uint64_t master_seed = 7;
    int per_product = 2;
    int t_max = 20;
    int n_adjectives = 3;
    double temperature = 1.0;
    std::vector<Condition> conditions = {Condition::Baseline, Condition::SellerAnchor,
                                         Condition::SellerAnchorBuyerInformed};
    BackendDescriptor seller_backend;
    BackendDescriptor buyer_backend;
    ScriptedParams scripted;
};

// Writes the manifest and input copies; returns the number of planned
// sessions. Re-planning an existing experiment with identical inputs is a
// no-op; with different inputs it fails (manifests are immutable).
std::size_t plan_experiment(const PlanConfig& config, const std::filesystem::path& exp_dir);

struct RunOptions {
    int concurrency = 4;
    std::optional<int> max_sessions;  // stop after this many executions (resume later)
    bool include_non_accepted_surveys = false;
    bool verbose = false;
};

struct RunSummary {
    int executed = 0;
    int skipped = 0;  // sessions that already had an outcome
    std::vector<std::string> failed_sessions;
};

RunSummary run_experiment(const std::filesystem::path& exp_dir, const RunOptions& options);

struct SurveySummary {
    int administered = 0;
    int skipped = 0;
    std::vector<std::string> failed_sessions;
};

// Administers the questionnaire to both roles of every session that has an
// eligible outcome (Accepted by default) and no stored response yet.
SurveySummary run_surveys(const std::filesystem::path& exp_dir, const RunOptions& options);

struct AnalyzeSummary {
    std::filesystem::path report_dir;
    int records = 0;
    int accepted = 0;
    int torn_line_warnings = 0;
};

// Pure function of the store: repeated invocations produce byte-identical
// reports under <exp>/reports/.
AnalyzeSummary analyze_experiment(const std::filesystem::path& exp_dir);

ResurveyStats resurvey_session(const std::filesystem::path& exp_dir, const std::string& session_id,
                               Role role, int times);

// Rebuilds the in-memory transcript of a stored session.
Transcript transcript_from_record(const RunRecord& record);

}  // namespace anchorbench
