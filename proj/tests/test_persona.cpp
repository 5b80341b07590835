#include <doctest.h>

#include <set>

#include "anchorbench/persona.hpp"
#include "support.hpp"

using namespace anchorbench;

namespace {

AdjectiveLexicon shipped_lexicon() { return AdjectiveLexicon::load(test::data_dir() / "lexicon.json"); }

}  // namespace

TEST_CASE("sample_profile is deterministic under a fixed seed") {
    Rng a(1001), b(1001);
    for (int i = 0; i < 20; ++i) CHECK(sample_profile(a) == sample_profile(b));
}

TEST_CASE("sample_profile is uniform over the six settings per dimension") {
    // counting oracle: frequency of each setting within 1/6 +/- 0.02
    Rng rng(42);
    const int samples = 6000;
    int counts[5][6] = {};
    for (int i = 0; i < samples; ++i) {
        const PersonalityProfile profile = sample_profile(rng);
        for (Dimension dim : kDimensions) {
            ++counts[static_cast<int>(dim)][setting_index(profile.at(dim))];
        }
    }
    for (int d = 0; d < 5; ++d) {
        for (int s = 0; s < 6; ++s) {
            const double freq = static_cast<double>(counts[d][s]) / samples;
            CHECK(freq > 1.0 / 6.0 - 0.02);
            CHECK(freq < 1.0 / 6.0 + 0.02);
        }
    }
}

TEST_CASE("the reference profile notation is representable") {
    // (a bit +, -, very +, +, a bit +)
    PersonalityProfile profile;
    profile.at(Dimension::Ope) = {Polarity::Plus, Intensity::Low};
    profile.at(Dimension::Con) = {Polarity::Minus, Intensity::Moderate};
    profile.at(Dimension::Ext) = {Polarity::Plus, Intensity::High};
    profile.at(Dimension::Agr) = {Polarity::Plus, Intensity::Moderate};
    profile.at(Dimension::Neu) = {Polarity::Plus, Intensity::Low};
    CHECK(profile_notation(profile) == "(a bit +, -, very +, +, a bit +)");
}

TEST_CASE("modifiers follow intensity") {
    CHECK(intensity_modifier(Intensity::Low) == "a bit ");
    CHECK(intensity_modifier(Intensity::Moderate) == "");
    CHECK(intensity_modifier(Intensity::High) == "very ");
}

TEST_CASE("render uses the profile polarity list and the intensity modifier") {
    const auto lexicon = AdjectiveLexicon::parse(R"({
        "OPE.+": ["curious"], "OPE.-": ["conventional"],
        "CON.+": ["organized"], "CON.-": ["careless"],
        "EXT.+": ["bold"], "EXT.-": ["quiet"],
        "AGR.+": ["unselfish"], "AGR.-": ["cold"],
        "NEU.+": ["nervous"], "NEU.-": ["calm"]
    })");
    PersonalityProfile profile;
    profile.at(Dimension::Ope) = {Polarity::Minus, Intensity::Moderate};
    profile.at(Dimension::Con) = {Polarity::Minus, Intensity::High};
    profile.at(Dimension::Ext) = {Polarity::Plus, Intensity::High};
    profile.at(Dimension::Agr) = {Polarity::Plus, Intensity::Moderate};
    profile.at(Dimension::Neu) = {Polarity::Plus, Intensity::Low};

    Rng rng(5);
    const PersonaText text = render_persona_text(profile, lexicon, 1, rng);
    REQUIRE(text.phrases.size() == 5);
    const std::set<std::string> phrases(text.phrases.begin(), text.phrases.end());
    CHECK(phrases.count("a bit nervous"));      // (NEU, +, Low)
    CHECK(phrases.count("very bold"));          // (EXT, +, High)
    CHECK(phrases.count("unselfish"));          // Moderate, no prefix
    CHECK(phrases.count("conventional"));
    CHECK(phrases.count("very careless"));
}

TEST_CASE("render is deterministic and duplicate-free") {
    const auto lexicon = shipped_lexicon();
    Rng seeder(77);
    for (int trial = 0; trial < 25; ++trial) {
        Rng profile_rng(seeder.next_u64());
        const PersonalityProfile profile = sample_profile(profile_rng);
        const std::uint64_t seed = seeder.next_u64();
        Rng r1(seed), r2(seed);
        const PersonaText t1 = render_persona_text(profile, lexicon, 3, r1);
        const PersonaText t2 = render_persona_text(profile, lexicon, 3, r2);
        CHECK(t1.rendered == t2.rendered);
        CHECK(t1.phrases.size() == 15);

        std::set<std::string> seen(t1.phrases.begin(), t1.phrases.end());
        CHECK(seen.size() == t1.phrases.size());
        for (const auto& phrase : t1.phrases) {
            const bool low = phrase.rfind("a bit ", 0) == 0;
            const bool high = phrase.rfind("very ", 0) == 0;
            CHECK((low || high || (!low && !high)));
        }
    }
}

TEST_CASE("render throws LexiconTooSmall when a list is shorter than n") {
    const auto lexicon = AdjectiveLexicon::parse(R"({
        "OPE.+": ["curious", "deep"], "OPE.-": ["conventional"],
        "CON.+": ["organized"], "CON.-": ["careless"],
        "EXT.+": ["bold"], "EXT.-": ["quiet"],
        "AGR.+": ["kind"], "AGR.-": ["cold"],
        "NEU.+": ["nervous"], "NEU.-": ["calm"]
    })");
    PersonalityProfile profile;  // all (+, Moderate)
    Rng rng(1);
    CHECK_THROWS_AS(render_persona_text(profile, lexicon, 2, rng), LexiconTooSmall);
}

TEST_CASE("trait_score maps the six settings onto {-3..3} \\ {0} bijectively") {
    PersonalityProfile profile;
    std::set<int> seen;
    for (const TraitSetting& setting : kTraitSettings) {
        profile.at(Dimension::Ext) = setting;
        seen.insert(trait_score(profile, Dimension::Ext));
    }
    CHECK(seen == std::set<int>{-3, -2, -1, 1, 2, 3});

    profile.at(Dimension::Ope) = {Polarity::Plus, Intensity::High};
    CHECK(trait_score(profile, Dimension::Ope) == 3);
    profile.at(Dimension::Ope) = {Polarity::Minus, Intensity::Low};
    CHECK(trait_score(profile, Dimension::Ope) == -1);
    profile.at(Dimension::Ope) = {Polarity::Minus, Intensity::High};
    CHECK(trait_score(profile, Dimension::Ope) == -3);
}

TEST_CASE("shipped lexicon satisfies the size and uniqueness contract") {
    const auto lexicon = shipped_lexicon();
    for (Dimension dim : kDimensions) {
        for (Polarity polarity : {Polarity::Minus, Polarity::Plus}) {
            const auto& words = lexicon.adjectives(dim, polarity);
            CHECK(words.size() >= 10);
            CHECK(std::set<std::string>(words.begin(), words.end()).size() == words.size());
        }
    }
}

TEST_CASE("lexicon loader rejects missing keys and duplicates") {
    CHECK_THROWS_AS(AdjectiveLexicon::parse(R"({"OPE.+": ["a"]})"), LexiconError);
    CHECK_THROWS_AS(AdjectiveLexicon::parse(R"({
        "OPE.+": ["a", "a"], "OPE.-": ["b"],
        "CON.+": ["c"], "CON.-": ["d"],
        "EXT.+": ["e"], "EXT.-": ["f"],
        "AGR.+": ["g"], "AGR.-": ["h"],
        "NEU.+": ["i"], "NEU.-": ["j"]
    })"),
                    LexiconError);
}
