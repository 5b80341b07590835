#include "anchorbench/persona.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace anchorbench {

std::string_view dimension_code(Dimension dim) {
    switch (dim) {
        case Dimension::Ope: return "OPE";
        case Dimension::Con: return "CON";
        case Dimension::Ext: return "EXT";
        case Dimension::Agr: return "AGR";
        case Dimension::Neu: return "NEU";
    }
    return "OPE";
}

std::optional<Dimension> parse_dimension(std::string_view s) {
    for (Dimension dim : kDimensions) {
        if (s == dimension_code(dim)) return dim;
    }
    return std::nullopt;
}

int setting_index(TraitSetting setting) {
    for (std::size_t i = 0; i < kTraitSettings.size(); ++i) {
        if (kTraitSettings[i] == setting) return static_cast<int>(i);
    }
    return -1;
}

std::size_t AdjectiveLexicon::slot(Dimension dim, Polarity polarity) {
    return static_cast<std::size_t>(dim) * 2 + (polarity == Polarity::Plus ? 1 : 0);
}

AdjectiveLexicon AdjectiveLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LexiconError("lexicon: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

AdjectiveLexicon AdjectiveLexicon::parse(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw LexiconError(std::string("lexicon: ") + e.what());
    }
    if (!doc.is_object()) throw LexiconError("lexicon: top level must be an object");

    AdjectiveLexicon lexicon;
    for (Dimension dim : kDimensions) {
        for (Polarity polarity : {Polarity::Minus, Polarity::Plus}) {
            std::string key = std::string(dimension_code(dim)) + "." +
                              (polarity == Polarity::Plus ? "+" : "-");
            auto it = doc.find(key);
            if (it == doc.end() || !it->is_array()) {
                throw LexiconError("lexicon: missing key \"" + key + "\"");
            }
            std::vector<std::string> words;
            std::set<std::string> seen;
            for (const auto& entry : *it) {
                if (!entry.is_string()) throw LexiconError("lexicon: non-string entry under " + key);
                std::string word = entry.get<std::string>();
                if (word.empty()) throw LexiconError("lexicon: empty adjective under " + key);
                if (!seen.insert(word).second) {
                    throw LexiconError("lexicon: duplicate adjective \"" + word + "\" under " + key);
                }
                words.push_back(std::move(word));
            }
            if (words.empty()) throw LexiconError("lexicon: empty list under " + key);
            lexicon.lists_[slot(dim, polarity)] = std::move(words);
        }
    }
    return lexicon;
}

const std::vector<std::string>& AdjectiveLexicon::adjectives(Dimension dim, Polarity polarity) const {
    return lists_[slot(dim, polarity)];
}

std::string_view intensity_modifier(Intensity intensity) {
    switch (intensity) {
        case Intensity::Low: return "a bit ";
        case Intensity::Moderate: return "";
        case Intensity::High: return "very ";
    }
    return "";
}

PersonalityProfile sample_profile(Rng& rng) {
    PersonalityProfile profile;
    for (Dimension dim : kDimensions) {
        profile.at(dim) = kTraitSettings[rng.uniform_below(kTraitSettings.size())];
    }
    return profile;
}

PersonaText render_persona_text(const PersonalityProfile& profile, const AdjectiveLexicon& lexicon,
                                int n, Rng& rng) {
    if (n <= 0) throw std::invalid_argument("render_persona_text: n must be positive");
    PersonaText out;
    for (Dimension dim : kDimensions) {
        const TraitSetting setting = profile.at(dim);
        const auto& words = lexicon.adjectives(dim, setting.polarity);
        if (words.size() < static_cast<std::size_t>(n)) {
            throw LexiconTooSmall("lexicon list " + std::string(dimension_code(dim)) + "." +
                                  (setting.polarity == Polarity::Plus ? "+" : "-") + " has " +
                                  std::to_string(words.size()) + " entries, need " + std::to_string(n));
        }
        for (std::size_t idx : rng.sample_indices(words.size(), static_cast<std::size_t>(n))) {
            out.phrases.push_back(std::string(intensity_modifier(setting.intensity)) + words[idx]);
        }
    }
    rng.shuffle(out.phrases);
    std::string joined;
    for (std::size_t i = 0; i < out.phrases.size(); ++i) {
        if (i) joined += ", ";
        joined += out.phrases[i];
    }
    out.rendered = std::move(joined);
    return out;
}

int trait_score(const PersonalityProfile& profile, Dimension dim) {
    const TraitSetting setting = profile.at(dim);
    int rank = 1 + static_cast<int>(setting.intensity);
    return setting.polarity == Polarity::Plus ? rank : -rank;
}

std::string profile_notation(const PersonalityProfile& profile) {
    std::string out = "(";
    bool first = true;
    for (Dimension dim : kDimensions) {
        if (!first) out += ", ";
        first = false;
        const TraitSetting setting = profile.at(dim);
        out += intensity_modifier(setting.intensity);
        out += setting.polarity == Polarity::Plus ? "+" : "-";
    }
    out += ")";
    return out;
}

}  // namespace anchorbench
