#include "anchorbench/survey.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "anchorbench/agents.hpp"

namespace anchorbench {

Questionnaire Questionnaire::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SurveyError("questionnaire: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

Questionnaire Questionnaire::parse(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw SurveyError(std::string("questionnaire: ") + e.what());
    }
    if (!doc.is_array() || doc.size() != 16) {
        throw SurveyError("questionnaire: expected an array of exactly 16 items");
    }
    Questionnaire q;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& rec = doc[i];
        QuestionItem item;
        item.id = rec.value("id", 0);
        if (item.id != static_cast<int>(i) + 1) {
            throw SurveyError("questionnaire: item " + std::to_string(i) + " has id " +
                              std::to_string(item.id) + ", expected " + std::to_string(i + 1));
        }
        item.text = rec.value("text", std::string{});
        if (item.text.empty()) throw SurveyError("questionnaire: item " + std::to_string(item.id) +
                                                 " has empty text");
        if (rec.contains("scale")) {
            for (const auto& [key, value] : rec["scale"].items()) {
                item.scale_anchors[std::stoi(key)] = value.get<std::string>();
            }
        }
        q.items.push_back(std::move(item));
    }
    return q;
}

std::string_view survey_dimension_name(SurveyDimension dim) {
    switch (dim) {
        case SurveyDimension::Outcome: return "outcome";
        case SurveyDimension::Self: return "self";
        case SurveyDimension::Process: return "process";
        case SurveyDimension::Relationship: return "relationship";
    }
    return "outcome";
}

double DimensionScores::get(SurveyDimension dim) const {
    switch (dim) {
        case SurveyDimension::Outcome: return outcome;
        case SurveyDimension::Self: return self;
        case SurveyDimension::Process: return process;
        case SurveyDimension::Relationship: return relationship;
    }
    return outcome;
}

namespace {

double block_mean(const std::array<int, 16>& scores, int first_item) {
    double sum = 0.0;
    for (int item = first_item; item < first_item + 4; ++item) {
        const int raw = scores[item - 1];
        sum += Questionnaire::is_reversed(item) ? (7 - raw) : raw;
    }
    return sum / 4.0;
}

}  // namespace

DimensionScores aggregate_response(const SurveyResponse& response) {
    for (int score : response.scores) {
        if (score < 1 || score > 7) {
            throw SurveyError("aggregate_response: score out of range: " + std::to_string(score));
        }
    }
    DimensionScores out;
    out.outcome = block_mean(response.scores, 1);
    out.self = block_mean(response.scores, 5);
    out.process = block_mean(response.scores, 9);
    out.relationship = block_mean(response.scores, 13);
    return out;
}

double aggregate_over_runs(std::span<const SurveyResponse> responses, int item) {
    if (responses.empty()) throw EmptySet("aggregate_over_runs: no responses");
    if (item < 1 || item > 16) throw SurveyError("aggregate_over_runs: item out of range");
    double sum = 0.0;
    for (const auto& r : responses) sum += r.scores[item - 1];
    return sum / static_cast<double>(responses.size());
}

DimensionScores aggregate_dimensions_over_runs(std::span<const SurveyResponse> responses) {
    std::array<double, 16> item_means{};
    for (int item = 1; item <= 16; ++item) item_means[item - 1] = aggregate_over_runs(responses, item);
    auto block = [&](int first_item) {
        double sum = 0.0;
        for (int item = first_item; item < first_item + 4; ++item) {
            const double m = item_means[item - 1];
            sum += Questionnaire::is_reversed(item) ? (7.0 - m) : m;
        }
        return sum / 4.0;
    };
    DimensionScores out;
    out.outcome = block(1);
    out.self = block(5);
    out.process = block(9);
    out.relationship = block(13);
    return out;
}

std::optional<std::array<int, 16>> parse_survey_reply(std::string_view reply) {
    // Collect integers left to right, skipping "N." item labels that
    // immediately precede an answer on numbered lines.
    std::vector<int> values;
    std::size_t i = 0;
    bool line_start = true;
    while (i < reply.size()) {
        const char c = reply[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            long v = 0;
            while (j < reply.size() && std::isdigit(static_cast<unsigned char>(reply[j]))) {
                v = v * 10 + (reply[j] - '0');
                if (v > 1000) return std::nullopt;
                ++j;
            }
            const bool label = line_start && j < reply.size() &&
                               (reply[j] == '.' || reply[j] == ':' || reply[j] == ')');
            if (label) {
                i = j + 1;
                line_start = false;
                continue;
            }
            values.push_back(static_cast<int>(v));
            i = j;
            line_start = false;
        } else {
            line_start = c == '\n' ? true : (line_start && std::isspace(static_cast<unsigned char>(c)));
            ++i;
        }
    }
    if (values.size() != 16) return std::nullopt;
    std::array<int, 16> out{};
    for (std::size_t k = 0; k < 16; ++k) {
        if (values[k] < 1 || values[k] > 7) return std::nullopt;
        out[k] = values[k];
    }
    return out;
}

std::string build_survey_prompt(const Questionnaire& questionnaire,
                                const std::string& instructions) {
    std::string out = instructions;
    out += "\n\n";
    for (const auto& item : questionnaire.items) {
        out += std::to_string(item.id) + ". " + item.text + "\n";
        if (!item.scale_anchors.empty()) {
            out += "   Scale:";
            bool first = true;
            for (const auto& [value, label] : item.scale_anchors) {
                out += (first ? " " : ", ") + std::to_string(value) + " = " + label;
                first = false;
            }
            out += "\n";
        }
    }
    out +=
        "\nAnswer with exactly 16 integers between 1 and 7, comma-separated, in "
        "question order, and nothing else.";
    return out;
}

std::string transcript_log(const Transcript& transcript) {
    std::string out;
    for (const auto& turn : transcript.turns) {
        out += std::string(role_name(turn.role)) + ": " + turn.text + "\n";
    }
    return out;
}

SurveyResponse administer(const Transcript& transcript, Role role, Agent& agent,
                          const Questionnaire& questionnaire, const std::string& instructions) {
    const std::string prompt = build_survey_prompt(questionnaire, instructions);
    std::string ask = prompt;
    for (int attempt = 0; attempt < 3; ++attempt) {
        const std::string reply = agent.survey_reply(transcript.turns, ask);
        if (auto scores = parse_survey_reply(reply)) {
            SurveyResponse response;
            response.session_id = transcript.session_id;
            response.role = role;
            response.scores = *scores;
            return response;
        }
        ask = prompt +
              "\n\nYour previous reply could not be parsed. Reply with exactly 16 "
              "comma-separated integers between 1 and 7, and nothing else.";
    }
    throw SurveyParseFailure("survey: unusable reply after 3 attempts for session " +
                             transcript.session_id + " (" + std::string(role_name(role)) + ")");
}

}  // namespace anchorbench
