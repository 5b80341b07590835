#pragma once
// Big Five personality profiles and the adjective-based persona text that
// gets injected into agent prompts.
//
// Each dimension carries one of six settings: polarity (-, +) crossed with
// intensity (Low, Moderate, High). Rendering picks n adjectives per dimension
// from the profile's polarity list, prefixes them with the intensity modifier
// ("a bit " / nothing / "very "), and shuffles the 5n phrases into one line.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "anchorbench/rng.hpp"
#include "anchorbench/types.hpp"

namespace anchorbench {

enum class Dimension { Ope, Con, Ext, Agr, Neu };

inline constexpr std::array<Dimension, 5> kDimensions = {
    Dimension::Ope, Dimension::Con, Dimension::Ext, Dimension::Agr, Dimension::Neu};

std::string_view dimension_code(Dimension dim);               // "OPE" .. "NEU"
std::optional<Dimension> parse_dimension(std::string_view s);

enum class Polarity { Minus, Plus };
enum class Intensity { Low, Moderate, High };

struct TraitSetting {
    Polarity polarity = Polarity::Plus;
    Intensity intensity = Intensity::Moderate;
    auto operator<=>(const TraitSetting&) const = default;
};

// The six (polarity, intensity) combinations in a fixed order, so that
// setting_index/kTraitSettings round-trip.
inline constexpr std::array<TraitSetting, 6> kTraitSettings = {{
    {Polarity::Minus, Intensity::Low},
    {Polarity::Minus, Intensity::Moderate},
    {Polarity::Minus, Intensity::High},
    {Polarity::Plus, Intensity::Low},
    {Polarity::Plus, Intensity::Moderate},
    {Polarity::Plus, Intensity::High},
}};

int setting_index(TraitSetting setting);

struct PersonalityProfile {
    std::array<TraitSetting, 5> settings{};  // canonical OPE..NEU order

    TraitSetting& at(Dimension dim) { return settings[static_cast<std::size_t>(dim)]; }
    const TraitSetting& at(Dimension dim) const { return settings[static_cast<std::size_t>(dim)]; }
    bool operator==(const PersonalityProfile&) const = default;
};

struct LexiconError : Error {
    using Error::Error;
};
struct LexiconTooSmall : Error {
    using Error::Error;
};

// Ten adjective lists keyed by (dimension, polarity). Loaded from a UTF-8
// JSON file with keys "OPE.+", "OPE.-", ..., "NEU.-"; multi-word entries
// ("adventurous and daring") are single entries.
class AdjectiveLexicon {
public:
    static AdjectiveLexicon load(const std::filesystem::path& path);
    static AdjectiveLexicon parse(std::string_view json_text);

    const std::vector<std::string>& adjectives(Dimension dim, Polarity polarity) const;

private:
    std::array<std::vector<std::string>, 10> lists_;
    static std::size_t slot(Dimension dim, Polarity polarity);
};

struct PersonaText {
    std::vector<std::string> phrases;  // modifier-prefixed adjectives, shuffled
    std::string rendered;              // comma-joined
};

// "a bit " for Low, "" for Moderate, "very " for High.
std::string_view intensity_modifier(Intensity intensity);

// Each dimension independently gets one of the six settings, uniformly.
PersonalityProfile sample_profile(Rng& rng);

// n adjectives per dimension, sampled without replacement from the matching
// polarity list; throws LexiconTooSmall when a list has fewer than n entries.
PersonaText render_persona_text(const PersonalityProfile& profile, const AdjectiveLexicon& lexicon,
                                int n, Rng& rng);

// polarity * intensity rank (Low=1, Moderate=2, High=3); never zero.
int trait_score(const PersonalityProfile& profile, Dimension dim);

// "(a bit +, -, very +, +, a bit +)" style caption, canonical OPE..NEU order.
std::string profile_notation(const PersonalityProfile& profile);

}  // namespace anchorbench
