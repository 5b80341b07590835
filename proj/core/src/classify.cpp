#include <algorithm>
#include <array>
#include <cctype>

#include "anchorbench/dialogue.hpp"

// Fallback utterance classification. The reference transcripts annotate every
// utterance with a state and an optional price but never explain how those
// were extracted; the declared-trailer protocol is the authoritative path and
// this classifier covers agents that omit it.

namespace anchorbench {

std::string_view negotiation_state_name(NegotiationState state) {
    switch (state) {
        case NegotiationState::Offer: return "offer";
        case NegotiationState::Pondering: return "pondering";
        case NegotiationState::Accept: return "accept";
        case NegotiationState::Breakdown: return "breakdown";
        case NegotiationState::ChitChat: return "chit-chat";
    }
    return "chit-chat";
}

std::optional<NegotiationState> parse_negotiation_state(std::string_view name) {
    for (NegotiationState s : {NegotiationState::Offer, NegotiationState::Pondering,
                               NegotiationState::Accept, NegotiationState::Breakdown,
                               NegotiationState::ChitChat}) {
        if (name == negotiation_state_name(s)) return s;
    }
    if (name == "chitchat" || name == "chit_chat") return NegotiationState::ChitChat;
    return std::nullopt;
}

namespace {

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '\'';
}

// Substring match with word boundaries on both ends.
bool contains_phrase(const std::string& haystack, std::string_view phrase) {
    std::size_t pos = 0;
    while ((pos = haystack.find(phrase, pos)) != std::string::npos) {
        const bool left_ok = pos == 0 || !is_word_char(haystack[pos - 1]);
        const std::size_t end = pos + phrase.size();
        const bool right_ok = end >= haystack.size() || !is_word_char(haystack[end]);
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

bool contains_any(const std::string& haystack, std::span<const std::string_view> phrases) {
    return std::any_of(phrases.begin(), phrases.end(),
                       [&](std::string_view p) { return contains_phrase(haystack, p); });
}

constexpr std::string_view kAcceptPhrases[] = {
    "i accept",        "deal",           "it's a deal",   "we have a deal",
    "i'll take it",    "i'll take them", "sounds good",   "that works for me",
    "works for me",    "agreed",         "sold",          "you've got a deal",
    "you have a deal", "i'm in",         "let's do it",   "i'll go with that",
};

constexpr std::string_view kBreakdownPhrases[] = {
    "no deal",           "not interested",     "walk away",       "walking away",
    "i'll pass",         "have to pass",       "can't accept",    "cannot accept",
    "have to decline",   "must decline",       "deal's off",      "deal is off",
    "too far apart",     "look elsewhere",     "no thanks, i'm out",
};

// Negation immediately before an acceptance phrase ("no deal", "can't accept
// that") must not count as acceptance.
constexpr std::string_view kNegations[] = {"no", "not", "can't", "cannot", "won't", "never"};

bool accepts(const std::string& lower) {
    for (std::string_view phrase : kAcceptPhrases) {
        std::size_t pos = 0;
        while ((pos = lower.find(phrase, pos)) != std::string::npos) {
            const bool left_ok = pos == 0 || !is_word_char(lower[pos - 1]);
            const std::size_t end = pos + phrase.size();
            const bool right_ok = end >= lower.size() || !is_word_char(lower[end]);
            if (left_ok && right_ok) {
                // look one word back for a negation
                std::size_t back = pos;
                while (back > 0 && !is_word_char(lower[back - 1])) --back;
                std::size_t word_end = back;
                while (back > 0 && is_word_char(lower[back - 1])) --back;
                std::string_view prev(lower.data() + back, word_end - back);
                const bool negated = std::any_of(std::begin(kNegations), std::end(kNegations),
                                                 [&](std::string_view n) { return prev == n; });
                if (!negated) return true;
            }
            ++pos;
        }
    }
    return false;
}

constexpr std::string_view kOfferCues[] = {
    "offer",       "asking",        "price is",     "i can do",     "could you do",
    "can you do",  "how about",     "what about",   "would you consider",
    "i can go",    "i'll go",       "i could",      "come down to", "go down to",
    "meet you",    "in the middle", "willing to pay", "give you",   "let's say",
    "final price", "my best",       "settle",       "available for", "sell it for",
    "take it for", "do it for",     "budget is",    "i'm thinking", "lowest i can",
    "most i can",  "stretch to",
};

constexpr std::string_view kPonderingPhrases[] = {
    "let me think",    "think it over",  "think about it",  "need to consider",
    "i'm not sure",    "not sure",       "sleep on it",     "hmm",
    "let me see",      "a bit steep",    "bit much",        "quite expensive",
    "out of my range", "need some time", "have to check",   "weigh my options",
    "on the fence",    "tempting, but",  "i wonder",        "hard to justify",
};

// amount preceded by a word that places a price on the table: "for $2,750",
// "at $2,350", "to $1,800", "around $1,800", "is $2550"
bool amount_has_placing_preposition(const std::string& lower) {
    static constexpr std::string_view preps[] = {"for", "at", "to", "around", "is"};
    for (std::string_view prep : preps) {
        std::size_t pos = 0;
        while ((pos = lower.find(prep, pos)) != std::string::npos) {
            const bool left_ok = pos == 0 || !is_word_char(lower[pos - 1]);
            std::size_t after = pos + prep.size();
            const bool right_ok = after >= lower.size() || !is_word_char(lower[after]);
            if (left_ok && right_ok) {
                while (after < lower.size() && lower[after] == ' ') ++after;
                if (after < lower.size() &&
                    (lower[after] == '$' || std::isdigit(static_cast<unsigned char>(lower[after])))) {
                    return true;
                }
            }
            ++pos;
        }
    }
    return false;
}

}  // namespace

std::optional<Money> find_last_price_mention(std::string_view text) {
    std::optional<Money> last;
    const std::string lower = to_lower(text);
    for (std::size_t i = 0; i < text.size(); ++i) {
        const bool dollar = text[i] == '$';
        const bool digit_start = std::isdigit(static_cast<unsigned char>(text[i])) &&
                                 (i == 0 || (!is_word_char(text[i - 1]) && text[i - 1] != '$' &&
                                             text[i - 1] != '.' && text[i - 1] != ','));
        if (!dollar && !digit_start) continue;

        std::size_t start = i;
        std::size_t j = dollar ? i + 1 : i;
        while (j < text.size() && text[j] == ' ' && dollar) ++j;
        std::size_t num_start = j;
        while (j < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == ',' || text[j] == '.')) {
            ++j;
        }
        // trim trailing punctuation that is not part of the number
        while (j > num_start && (text[j - 1] == '.' || text[j - 1] == ',')) --j;
        if (j == num_start) continue;

        std::string token(text.substr(num_start, j - num_start));
        auto parsed = Money::parse(token, 2);
        if (parsed && *parsed > Money{}) {
            if (dollar) {
                last = parsed;
                i = j - 1;
                continue;
            }
            // bare number: only a price when followed by a currency word
            std::size_t k = j;
            while (k < lower.size() && lower[k] == ' ') ++k;
            static constexpr std::string_view currency_words[] = {"dollars", "dollar", "usd", "bucks"};
            for (std::string_view w : currency_words) {
                if (lower.compare(k, w.size(), w) == 0) {
                    const std::size_t end = k + w.size();
                    if (end >= lower.size() || !is_word_char(lower[end])) {
                        last = parsed;
                        break;
                    }
                }
            }
            i = j - 1;
        }
        (void)start;
    }
    return last;
}

std::pair<std::string, std::optional<ControlTrailer>> strip_control_trailer(std::string_view text) {
    // locate the last non-whitespace segment; a trailer must be its own line
    std::size_t end = text.size();
    while (end > 0 && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    if (end < 4 || text.substr(end - 2, 2) != ">>") return {std::string(text), std::nullopt};
    const std::size_t open = text.rfind("<<", end - 2);
    if (open == std::string_view::npos) return {std::string(text), std::nullopt};

    std::string_view body = text.substr(open + 2, end - 2 - (open + 2));
    // parse "state=NAME" and optional "price=AMOUNT"
    std::optional<NegotiationState> state;
    std::optional<Money> price;
    bool malformed = false;
    std::size_t pos = 0;
    while (pos < body.size()) {
        while (pos < body.size() && std::isspace(static_cast<unsigned char>(body[pos]))) ++pos;
        if (pos >= body.size()) break;
        std::size_t eq = body.find('=', pos);
        if (eq == std::string_view::npos) {
            malformed = true;
            break;
        }
        std::string_view key = body.substr(pos, eq - pos);
        std::size_t vstart = eq + 1;
        std::size_t vend = vstart;
        while (vend < body.size() && !std::isspace(static_cast<unsigned char>(body[vend]))) ++vend;
        std::string_view value = body.substr(vstart, vend - vstart);
        if (key == "state") {
            state = parse_negotiation_state(value);
            if (!state) malformed = true;
        } else if (key == "price") {
            price = Money::parse(value, 2);
            if (!price) malformed = true;
        } else {
            malformed = true;
        }
        pos = vend;
    }
    if (malformed || !state) return {std::string(text), std::nullopt};

    std::string stripped(text.substr(0, open));
    while (!stripped.empty() && std::isspace(static_cast<unsigned char>(stripped.back()))) {
        stripped.pop_back();
    }
    return {std::move(stripped), ControlTrailer{*state, price}};
}

std::pair<NegotiationState, std::optional<Money>> classify_utterance(
    const AgentUtterance& utterance, std::optional<Money> previous_price_on_table) {
    if (utterance.control) {
        const ControlTrailer& trailer = *utterance.control;
        if (trailer.state == NegotiationState::Accept && !trailer.price) {
            return {NegotiationState::Accept, previous_price_on_table};
        }
        if (trailer.state == NegotiationState::Offer && !trailer.price) {
            // a declared offer needs an amount; fish one out of the text or
            // downgrade, so Offer turns always carry a price
            auto amount = find_last_price_mention(utterance.text);
            if (amount) return {NegotiationState::Offer, amount};
            return {NegotiationState::Pondering, std::nullopt};
        }
        return {trailer.state, trailer.price};
    }

    const std::string lower = to_lower(utterance.text);
    const std::optional<Money> amount = find_last_price_mention(utterance.text);

    if (accepts(lower)) {
        return {NegotiationState::Accept, amount ? amount : previous_price_on_table};
    }
    if (contains_any(lower, kBreakdownPhrases)) {
        return {NegotiationState::Breakdown, std::nullopt};
    }
    if (amount) {
        const bool offer_cue = contains_any(lower, kOfferCues) ||
                               amount_has_placing_preposition(lower) ||
                               lower.find('?') != std::string::npos;
        if (offer_cue) return {NegotiationState::Offer, amount};
        // amount without proposal phrasing reads as deliberation about it
        return {NegotiationState::Pondering, std::nullopt};
    }
    if (contains_any(lower, kPonderingPhrases)) {
        return {NegotiationState::Pondering, std::nullopt};
    }
    return {NegotiationState::ChitChat, std::nullopt};
}

}  // namespace anchorbench
