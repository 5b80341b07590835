#include <doctest.h>

#include <fstream>
#include <sstream>

#include "anchorbench/agents.hpp"
#include "anchorbench/dialogue.hpp"
#include "support.hpp"

using namespace anchorbench;

namespace {

PromptTemplates shipped_templates() { return PromptTemplates::load(test::data_dir() / "templates"); }

Scenario apartment() {
    Scenario s;
    s.id = "apt";
    s.title = "Single-story Apartment";
    s.description = "Bright one-bedroom apartment with hardwood floors.";
    s.seller_target = Money::from_whole(2550);
    s.buyer_target = Money::from_whole(1530);
    return s;
}

PersonaText persona_stub() {
    PersonaText p;
    p.phrases = {"a bit nervous", "very bold", "unselfish"};
    p.rendered = "a bit nervous, very bold, unselfish";
    return p;
}

std::string read_template(const char* name) {
    std::ifstream in(test::data_dir() / "templates" / name, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (!text.empty() && text.back() == '\n') text.pop_back();
    return text;
}

}  // namespace

TEST_CASE("prompts substitute scenario, price, and persona text") {
    const auto templates = shipped_templates();
    const RolePrompt seller = build_role_prompt(Role::Seller, apartment(), persona_stub(),
                                                Condition::Baseline, templates, false);
    CHECK(seller.system_text.find("Single-story Apartment") != std::string::npos);
    CHECK(seller.system_text.find("2550") != std::string::npos);
    CHECK(seller.system_text.find("hardwood floors") != std::string::npos);
    CHECK(seller.system_text.find("a bit nervous, very bold, unselfish") != std::string::npos);
    CHECK(seller.system_text.find("$PRODUCT") == std::string::npos);
    CHECK(seller.system_text.find("$TARGET_PRICE") == std::string::npos);
    CHECK(seller.system_text.find("$PERSONA_TEXT") == std::string::npos);

    const RolePrompt buyer = build_role_prompt(Role::Buyer, apartment(), persona_stub(),
                                               Condition::Baseline, templates, false);
    CHECK(buyer.system_text.find("1530") != std::string::npos);
    CHECK(buyer.system_text.find("You can accept a higher price though") != std::string::npos);
}

TEST_CASE("condition blocks appear verbatim for the right role only") {
    const auto templates = shipped_templates();
    const std::string anchor_block = read_template("seller_anchor.txt");
    const std::string informed_block = read_template("seller_anchor_buyer_informed.txt");

    const auto assembled = [&](Role role, Condition condition) {
        return build_role_prompt(role, apartment(), persona_stub(), condition, templates, false)
            .system_text;
    };

    // golden-file containment: the blocks are byte-identical template text
    CHECK(assembled(Role::Seller, Condition::SellerAnchor).find(anchor_block) != std::string::npos);
    CHECK(assembled(Role::Seller, Condition::SellerAnchorBuyerInformed).find(anchor_block) !=
          std::string::npos);
    CHECK(assembled(Role::Seller, Condition::Baseline).find("anchoring effect") == std::string::npos);

    CHECK(assembled(Role::Buyer, Condition::SellerAnchorBuyerInformed).find(informed_block) !=
          std::string::npos);
    CHECK(assembled(Role::Buyer, Condition::SellerAnchorBuyerInformed)
              .find("Set a Counter-Anchor if Needed") != std::string::npos);
    CHECK(assembled(Role::Buyer, Condition::SellerAnchorBuyerInformed)
              .find("Stay Focused on Your Target Price") != std::string::npos);
    CHECK(assembled(Role::Buyer, Condition::SellerAnchor).find("anchoring effect") ==
          std::string::npos);
    CHECK(assembled(Role::Buyer, Condition::Baseline).find("anchoring effect") == std::string::npos);
}

TEST_CASE("the trailer instruction is appended only when requested") {
    const auto templates = shipped_templates();
    const auto with = build_role_prompt(Role::Seller, apartment(), persona_stub(),
                                        Condition::Baseline, templates, true);
    const auto without = build_role_prompt(Role::Seller, apartment(), persona_stub(),
                                           Condition::Baseline, templates, false);
    CHECK(with.system_text.find("<<state=STATE price=PRICE>>") != std::string::npos);
    CHECK(without.system_text.find("<<state=") == std::string::npos);
}

TEST_CASE("scripted seller opens at multiplier x target under anchor conditions") {
    const Scenario scenario = apartment();
    AnchorSellerParams params{1.10, 0.25, Money::from_whole(1836)};

    ScriptedSeller anchored(scenario, params, Condition::SellerAnchor);
    std::vector<AnnotatedTurn> history;
    const AgentUtterance opening = anchored.next_utterance(history);
    REQUIRE(opening.control);
    CHECK(opening.control->state == NegotiationState::Offer);
    CHECK(*opening.control->price == Money::from_whole(2805));  // 2550 x 1.10
    CHECK(*opening.control->price >= scenario.seller_target);

    ScriptedSeller plain(scenario, params, Condition::Baseline);
    const AgentUtterance base_open = plain.next_utterance(history);
    CHECK(*base_open.control->price == Money::from_whole(2550));
}

TEST_CASE("scripted buyer with accept_gap 0 accepts an offer at its target") {
    const Scenario scenario = apartment();
    ConcessionBuyerParams params{1.0, 0.5, Money{}, 0.5};
    ScriptedBuyer buyer(scenario, params);

    std::vector<AnnotatedTurn> history;
    AnnotatedTurn offer;
    offer.index = 1;
    offer.role = Role::Seller;
    offer.text = "Asking $1,530.";
    offer.state = NegotiationState::Offer;
    offer.price = Money::from_whole(1530);
    history.push_back(offer);

    const AgentUtterance reply = buyer.next_utterance(history);
    REQUIRE(reply.control);
    CHECK(reply.control->state == NegotiationState::Accept);
    CHECK(*reply.control->price == Money::from_whole(1530));
}

TEST_CASE("with susceptibility 0 the final price does not depend on the anchor multiplier") {
    // open_ratio 1 pins the buyer's counters to its target; the crossing
    // happens on the seller side, so only the turn count moves.
    const Scenario scenario = apartment();
    auto final_price = [&](double multiplier) {
        AnchorSellerParams seller_params{multiplier, 0.5, Money::from_whole(1400)};
        ConcessionBuyerParams buyer_params{1.0, 0.5, Money{}, 0.0};
        ScriptedSeller seller(scenario, seller_params, Condition::SellerAnchor);
        ScriptedBuyer buyer(scenario, buyer_params);
        SessionContext ctx;
        ctx.session_id = "m";
        ctx.scenario_id = scenario.id;
        ctx.condition = Condition::SellerAnchor;
        const Transcript t = run_session(seller, buyer, ctx, SessionOptions{});
        REQUIRE(t.outcome.kind == OutcomeKind::Accepted);
        return *t.outcome.final_price;
    };
    CHECK(final_price(1.0) == final_price(1.4));
    CHECK(final_price(1.0) == Money::from_whole(1530));
}

TEST_CASE("with susceptibility > 0 the anchored agreement is at least the baseline one") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const Catalog catalog = test::synthetic_catalog(6, seed);
        for (const auto& scenario : catalog.scenarios) {
            const Money spread = scenario.seller_target - scenario.buyer_target;
            AnchorSellerParams seller_params{1.6, 0.25, scenario.buyer_target};
            ConcessionBuyerParams buyer_params{1.0, 0.5, Money::from_units(spread.units() / 5), 0.5};
            auto agreed = [&](Condition condition) {
                ScriptedSeller seller(scenario, seller_params, condition);
                ScriptedBuyer buyer(scenario, buyer_params);
                SessionContext ctx;
                ctx.session_id = "x";
                ctx.scenario_id = scenario.id;
                ctx.condition = condition;
                const Transcript t = run_session(seller, buyer, ctx, SessionOptions{});
                REQUIRE(t.outcome.kind == OutcomeKind::Accepted);
                return *t.outcome.final_price;
            };
            CHECK(agreed(Condition::SellerAnchor) >= agreed(Condition::Baseline));
        }
    }
}

TEST_CASE("scripted agents are deterministic and refuse to continue past acceptance") {
    const Scenario scenario = apartment();
    AnchorSellerParams seller_params{1.0, 0.25, Money::from_whole(1836)};
    ConcessionBuyerParams buyer_params{1.0, 0.5, Money::from_whole(200), 0.5};
    auto run_once = [&]() {
        ScriptedSeller seller(scenario, seller_params, Condition::Baseline);
        ScriptedBuyer buyer(scenario, buyer_params);
        SessionContext ctx;
        ctx.session_id = "d";
        ctx.scenario_id = scenario.id;
        return run_session(seller, buyer, ctx, SessionOptions{});
    };
    const Transcript a = run_once();
    const Transcript b = run_once();
    REQUIRE(a.turns.size() == b.turns.size());
    for (std::size_t i = 0; i < a.turns.size(); ++i) CHECK(a.turns[i].text == b.turns[i].text);

    ScriptedBuyer spent(scenario, buyer_params);
    std::vector<AnnotatedTurn> history;
    AnnotatedTurn offer;
    offer.index = 1;
    offer.role = Role::Seller;
    offer.state = NegotiationState::Offer;
    offer.price = scenario.buyer_target;
    offer.text = "ok";
    history.push_back(offer);
    (void)spent.next_utterance(history);  // accepts
    CHECK_THROWS_AS(spent.next_utterance(history), PolicyExhausted);
}

TEST_CASE("parameter ranges are enforced") {
    const Scenario scenario = apartment();
    CHECK_THROWS(ScriptedSeller(scenario, {0.9, 0.25, Money{}}, Condition::Baseline));
    CHECK_THROWS(ScriptedSeller(scenario, {1.0, 1.0, Money{}}, Condition::Baseline));
    CHECK_THROWS(ScriptedBuyer(scenario, {0.0, 0.5, Money{}, 0.5}));
    CHECK_THROWS(ScriptedBuyer(scenario, {1.0, 0.5, Money{}, 1.5}));
    CHECK_THROWS(ScriptedBuyer(scenario, {1.0, 0.5, Money::from_whole(-1), 0.5}));
}

TEST_CASE("missing template directory or file is reported") {
    CHECK_THROWS_AS(PromptTemplates::load("/nonexistent/dir"), TemplateError);
    test::ScratchDir scratch("templates");
    std::ofstream(scratch.path() / "seller_setting.txt") << "x";
    CHECK_THROWS_AS(PromptTemplates::load(scratch.path()), TemplateError);
}
