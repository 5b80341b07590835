#include <benchmark/benchmark.h>

#include <vector>

#include "anchorbench/agents.hpp"
#include "anchorbench/dialogue.hpp"
#include "anchorbench/metrics.hpp"
#include "anchorbench/persona.hpp"
#include "anchorbench/rng.hpp"
#include "anchorbench/stats.hpp"
#include "anchorbench/store.hpp"

using namespace anchorbench;

namespace {

const char* kUtterances[] = {
    "Hi, how can I help you?",
    "The price for this kind of unique experience is $2550.",
    "That's a bit steep for me. Let me think it over.",
    "I can come down to $2,400 if you can commit today.",
    "Deal! $2,450 works for me.",
    "Unfortunately we're too far apart. I'm walking away.",
};

void BM_classify_fallback(benchmark::State& state) {
    std::size_t i = 0;
    for (auto _ : state) {
        AgentUtterance utt;
        utt.text = kUtterances[i++ % std::size(kUtterances)];
        benchmark::DoNotOptimize(classify_utterance(utt, Money::from_whole(2550)));
    }
}
BENCHMARK(BM_classify_fallback);

void BM_price_scan(benchmark::State& state) {
    const std::string text =
        "I saw it listed at $2,750 elsewhere, but my budget is around $1,800. Could you do $1,950?";
    for (auto _ : state) benchmark::DoNotOptimize(find_last_price_mention(text));
}
BENCHMARK(BM_price_scan);

void BM_bounds_and_utilities(benchmark::State& state) {
    Rng rng(1);
    for (auto _ : state) {
        const Money buyer = Money::from_cents(1 + static_cast<std::int64_t>(rng.uniform_below(100000)));
        const Money seller = buyer + Money::from_cents(10 + static_cast<std::int64_t>(
                                                                rng.uniform_below(100000)));
        const PriceBounds bounds = derive_price_bounds(seller, buyer);
        benchmark::DoNotOptimize(seller_utility(bounds, buyer) + buyer_utility(bounds, seller));
    }
}
BENCHMARK(BM_bounds_and_utilities);

void BM_spearman_n322(benchmark::State& state) {
    Rng rng(7);
    std::vector<double> xs, ys;
    for (int i = 0; i < 322; ++i) {
        xs.push_back(static_cast<double>(1 + rng.uniform_below(6)));  // trait-score-like ties
        ys.push_back(rng.uniform01());
    }
    for (auto _ : state) benchmark::DoNotOptimize(spearman(xs, ys));
}
BENCHMARK(BM_spearman_n322);

void BM_paired_t_n322(benchmark::State& state) {
    Rng rng(8);
    PairedSample sample;
    for (int i = 0; i < 322; ++i) sample.pairs.emplace_back(rng.uniform01(), rng.uniform01());
    for (auto _ : state) benchmark::DoNotOptimize(paired_t_test(sample));
}
BENCHMARK(BM_paired_t_n322);

void BM_render_persona(benchmark::State& state) {
    const AdjectiveLexicon lexicon = AdjectiveLexicon::load(ANCHORBENCH_DATA_DIR "/lexicon.json");
    Rng rng(9);
    const PersonalityProfile profile = sample_profile(rng);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        Rng render_rng(seed++);
        benchmark::DoNotOptimize(render_persona_text(profile, lexicon, 3, render_rng));
    }
}
BENCHMARK(BM_render_persona);

void BM_scripted_session(benchmark::State& state) {
    Scenario scenario;
    scenario.id = "apt";
    scenario.title = "Single-story Apartment";
    scenario.description = "Bright one-bedroom apartment.";
    scenario.seller_target = Money::from_whole(2550);
    scenario.buyer_target = Money::from_whole(1530);
    for (auto _ : state) {
        ScriptedSeller seller(scenario, {1.6, 0.25, Money::from_whole(1836)},
                              Condition::SellerAnchor);
        ScriptedBuyer buyer(scenario, {1.0, 0.5, Money::from_whole(204), 0.5});
        SessionContext context{"bench", scenario.id, Condition::SellerAnchor, {}, {}};
        benchmark::DoNotOptimize(run_session(seller, buyer, context, SessionOptions{}));
    }
}
BENCHMARK(BM_scripted_session);

void BM_event_encode_decode(benchmark::State& state) {
    AnnotatedTurn turn;
    turn.index = 7;
    turn.role = Role::Buyer;
    turn.text = "I saw it listed at $2,750 elsewhere. Could you do $1,950?";
    turn.state = NegotiationState::Offer;
    turn.price = Money::from_whole(1950);
    EventLine event;
    event.kind = EventKind::Turn;
    event.session_id = "bench-session";
    event.sequence = 7;
    event.payload_json = turn_payload(turn);
    for (auto _ : state) benchmark::DoNotOptimize(decode_event(encode_event(event)));
}
BENCHMARK(BM_event_encode_decode);

}  // namespace

BENCHMARK_MAIN();
