#include "reltax/curation.hpp"
#include "support/test_support.hpp"

#include <gtest/gtest.h>

using namespace reltax;
using namespace reltax::testing;

namespace {

Bucket B(const char* name) { return *parse_bucket(name); }

CurationDecision decision(std::uint64_t seq, CurationAction a) { return {seq, "2020-01-01T00:00:00Z", "tester", std::move(a)}; }

std::string replayed(const CurationScenario& s, std::size_t prefix) {
    std::span<const CurationDecision> log(s.log.data(), prefix);
    return serialize(replay_decisions(s.base, s.filtered, s.canonical, log).hierarchy());
}

/// Small state: spouse placed in per-per, three pending relations.
CurationState small_state() {
    Hierarchy h;
    h.place("spouse", "per-per", SourceSet{Source::DBPEDIA});
    std::vector<RelationRecord> filtered{pending("formerSpouse", Source::DBPEDIA, "per-per", 410),
                                         pending("exSpouse", Source::WIKIDATA, "per-per", 140),
                                         pending("honoraryCitizenOf", Source::INFOBOX, "per-loc", 120)};
    std::vector<RelationRecord> canonical{pending("relative", Source::WIKIDATA, "per-per", 30)};
    return CurationState(std::move(h), filtered, canonical);
}

std::optional<HierarchyError::Kind> replay_kind(CurationState& s, const CurationDecision& d) {
    try {
        s.apply(d);
    } catch (const ReplayError& e) {
        EXPECT_EQ(e.sequence(), d.sequence);
        return e.kind();
    }
    ADD_FAILURE() << "expected ReplayError";
    return std::nullopt;
}

} // namespace

// ---------------------------------------------------------------------------
// Log format

TEST(DecisionLog, FieldOrderAndRoundTrip) {
    auto d = decision(3, PlaceAction{"father", "parent"});
    EXPECT_EQ(to_jsonl(d),
              R"({"seq":3,"timestamp":"2020-01-01T00:00:00Z","actor":"tester","action":"PLACE","name":"father","parent":"parent"})"
              "\n");
    std::vector<CurationAction> actions{PlaceAction{"father", "parent"},
                                        IntroduceAction{"familyMember", B("per-per"), std::nullopt},
                                        IntroduceAction{"sibling", B("per-per"), std::string("familyMember")},
                                        ResolveConflictAction{"father", "familyMember"},
                                        ChooseAliasAction{{"a", "b"}, ""}};
    for (const auto& a : actions) {
        auto once = to_jsonl(decision(1, a));
        auto back = decision_from_json(nlohmann::json::parse(once));
        EXPECT_EQ(to_jsonl(back), once);
    }
}

TEST(DecisionLog, ReadsFixtureWithSortedKeys) {
    auto log = read_decision_log(fixture("hierarchy/curation_H.jsonl"));
    ASSERT_EQ(log.size(), 47u);
    EXPECT_EQ(log[0].sequence, 1u);
    EXPECT_EQ(log[0].actor, "fixture");
    ASSERT_TRUE(std::holds_alternative<IntroduceAction>(log[0].action));
    EXPECT_EQ(std::get<IntroduceAction>(log[0].action).name, "administrativeParent");
    EXPECT_EQ(action_name(log[1].action), "RESOLVE_CONFLICT");
}

TEST(DecisionLog, MalformedLinesNameTheLine) {
    std::istringstream in("{\"seq\":1,\"action\":\"PLACE\",\"name\":\"a\",\"parent\":\"per-per\"}\n\n{\"seq\":2,\"action\":\"JUMP\"}\n");
    try {
        read_decision_log(in, "log");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("log:3"), std::string::npos) << e.what();
    }
    for (const char* bad : {R"({"action":"PLACE","name":"a","parent":"b"})", R"({"seq":1,"action":"PLACE","name":"a"})",
                            R"({"seq":1,"action":"INTRODUCE","name":"a","bucket":"x-y"})",
                            R"({"seq":1,"action":"CHOOSE_ALIAS","group":["a"]})", R"({"seq":-1,"action":"PLACE"})", "[1]",
                            "{not json"}) {
        std::istringstream one(bad);
        EXPECT_THROW(read_decision_log(one), ConfigError) << bad;
    }
}

// ---------------------------------------------------------------------------
// Single decisions

TEST(Apply, PlaceUsesCandidateSupportForBucket) {
    auto s = small_state();
    EXPECT_EQ(s.unplaced().size(), 3u);
    s.apply(decision(1, PlaceAction{"formerSpouse", "spouse"}));
    EXPECT_EQ(s.hierarchy().depth("formerSpouse"), 4);
    EXPECT_EQ(s.hierarchy().at("formerSpouse").sources, SourceSet{Source::DBPEDIA});
    EXPECT_EQ(s.unplaced().size(), 2u);
    EXPECT_EQ(s.last_sequence(), 1u);
}

TEST(Apply, RejectionsCarryKindAndLeaveStateUntouched) {
    auto s = small_state();
    auto before = serialize(s.hierarchy());
    EXPECT_EQ(replay_kind(s, decision(1, PlaceAction{"honoraryCitizenOf", "spouse"})), HierarchyError::Kind::CrossBucket);
    EXPECT_EQ(replay_kind(s, decision(2, PlaceAction{"unknownThing", "per-per"})), HierarchyError::Kind::UnknownName);
    EXPECT_EQ(replay_kind(s, decision(3, IntroduceAction{"exSpouse", B("per-per"), std::nullopt})),
              HierarchyError::Kind::DuplicateName);
    EXPECT_EQ(replay_kind(s, decision(4, ResolveConflictAction{"spouse", "spouse"})), HierarchyError::Kind::Cycle);
    EXPECT_EQ(replay_kind(s, decision(5, ChooseAliasAction{{"a", "b"}, "c"})), std::nullopt);
    EXPECT_EQ(serialize(s.hierarchy()), before);
    EXPECT_EQ(s.last_sequence(), 0u);
}

TEST(Apply, SequenceNumbersMustIncrease) {
    auto s = small_state();
    s.apply(decision(5, IntroduceAction{"familyMember", B("per-per"), std::nullopt}));
    EXPECT_THROW(s.apply(decision(5, PlaceAction{"relative", "familyMember"})), ReplayError);
    EXPECT_THROW(s.apply(decision(4, PlaceAction{"relative", "familyMember"})), ReplayError);
    s.apply(decision(9, PlaceAction{"relative", "familyMember"}));
    EXPECT_EQ(s.hierarchy().depth("relative"), 4);
}

TEST(Apply, IntroducedParentThenReparent) {
    auto s = small_state();
    s.apply(decision(1, IntroduceAction{"partner", B("per-per"), std::nullopt}));
    s.apply(decision(2, ResolveConflictAction{"spouse", "partner"}));
    EXPECT_EQ(s.hierarchy().ancestors("spouse"), std::vector<std::string>{"partner"});
    EXPECT_TRUE(s.hierarchy().at("partner").introduced);
    EXPECT_TRUE(validate(s.hierarchy()).empty());
}

TEST(Apply, ChooseAliasMergesCandidates) {
    auto s = small_state();
    s.apply(decision(1, ChooseAliasAction{{"exSpouse", "formerSpouse"}, ""}));
    // The DBpedia-sourced name wins.
    EXPECT_EQ(s.alias_choices().lookup("exSpouse"), "formerSpouse");
    EXPECT_EQ(s.candidate("exSpouse"), nullptr);
    const Candidate* c = s.candidate("formerSpouse");
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->support_total(), 550u);
    EXPECT_EQ(c->sources, (SourceSet{Source::DBPEDIA, Source::WIKIDATA}));
    EXPECT_TRUE(c->aliases.contains("exSpouse"));
    EXPECT_EQ(s.unplaced().size(), 2u);
}

TEST(Apply, ChooseAliasRenamesPlacedMember) {
    auto s = small_state();
    s.apply(decision(1, PlaceAction{"exSpouse", "spouse"}));
    s.apply(decision(2, ChooseAliasAction{{"exSpouse", "formerSpouse"}, "formerSpouse"}));
    EXPECT_FALSE(s.hierarchy().contains("exSpouse"));
    EXPECT_EQ(s.hierarchy().ancestors("formerSpouse"), std::vector<std::string>{"spouse"});
    EXPECT_EQ(s.hierarchy().at("formerSpouse").sources, (SourceSet{Source::DBPEDIA, Source::WIKIDATA}));

    auto t = small_state();
    t.apply(decision(1, PlaceAction{"exSpouse", "spouse"}));
    t.apply(decision(2, PlaceAction{"formerSpouse", "spouse"}));
    EXPECT_THROW(t.apply(decision(3, ChooseAliasAction{{"exSpouse", "formerSpouse"}, "formerSpouse"})), ReplayError);
}

// ---------------------------------------------------------------------------
// Replay

TEST(Replay, FixtureLogRebuildsPublishedHierarchy) {
    auto s = curation_scenario();
    std::span<const CurationDecision> fixture_log(s.log.data(), 47);
    auto state = replay_decisions(s.base, {}, {}, fixture_log);
    EXPECT_EQ(serialize(state.hierarchy()), slurp(fixture("hierarchy/H.json")));
}

TEST(Replay, FiftyDecisionsTwiceAreByteIdentical) {
    auto s = curation_scenario();
    ASSERT_EQ(s.log.size(), 50u);
    auto first = replayed(s, 50), second = replayed(s, 50);
    EXPECT_EQ(first, second);
    auto h = hierarchy_from_json(nlohmann::json::parse(first));
    EXPECT_EQ(h.size(), 623u + 2u);
    EXPECT_EQ(h.ancestors("formerSpouse"), std::vector<std::string>{"formerPartner"});
}

TEST(Replay, EveryPrefixReplays) {
    auto s = curation_scenario();
    for (std::size_t n = 0; n <= s.log.size(); ++n) {
        std::string out;
        ASSERT_NO_THROW(out = replayed(s, n)) << "prefix " << n;
        EXPECT_TRUE(validate(hierarchy_from_json(nlohmann::json::parse(out))).empty()) << "prefix " << n;
    }
}

TEST(Replay, LogSurvivesJsonlRoundTrip) {
    auto s = curation_scenario();
    std::string text;
    for (const auto& d : s.log) text += to_jsonl(d);
    std::istringstream in(text);
    auto back = read_decision_log(in);
    ASSERT_EQ(back.size(), s.log.size());
    auto a = replay_decisions(s.base, s.filtered, s.canonical, s.log);
    auto b = replay_decisions(s.base, s.filtered, s.canonical, back);
    EXPECT_EQ(serialize(a.hierarchy()), serialize(b.hierarchy()));
}

TEST(Replay, BadDecisionReportsItsSequence) {
    auto s = curation_scenario();
    s.log[20].action = PlaceAction{"neverHeardOf", "per-per"};
    try {
        replay_decisions(s.base, s.filtered, s.canonical, s.log);
        FAIL();
    } catch (const ReplayError& e) {
        EXPECT_EQ(e.sequence(), 21u);
    }
}

TEST(Replay, RandomLogsAreDeterministicAndPrefixClosed) {
    std::mt19937_64 rng(44);
    for (int round = 0; round < 30; ++round) {
        RandomTree t = random_tree(rng, 15, 3);
        std::vector<RelationRecord> filtered;
        for (int i = 0; i < 8; ++i)
            filtered.push_back(pending("pending" + std::to_string(i), Source::WIKIDATA,
                                       all_buckets()[static_cast<std::size_t>(i) % 3].name().c_str(), 100 + i));
        // Build a log by trying random actions against a live state, keeping the accepted ones.
        CurationState live(t.h, filtered);
        std::vector<CurationDecision> log;
        std::vector<std::string> names = t.names;
        for (int step = 0; step < 60 && log.size() < 50; ++step) {
            auto pick = [&](const std::vector<std::string>& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };
            std::vector<std::string> targets = names;
            for (const auto& b : all_buckets()) targets.push_back(b.name());
            CurationAction a;
            switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
            case 0: a = PlaceAction{"pending" + std::to_string(step % 8), pick(targets)}; break;
            case 1: a = IntroduceAction{"group" + std::to_string(step), all_buckets()[static_cast<std::size_t>(step) % 3], std::nullopt}; break;
            default: a = ResolveConflictAction{pick(names), pick(targets)}; break;
            }
            CurationDecision d = decision(log.size() + 1, a);
            try {
                live.apply(d);
            } catch (const ReplayError&) {
                continue;
            }
            log.push_back(d);
            if (auto* p = std::get_if<PlaceAction>(&a)) names.push_back(p->name);
            if (auto* in = std::get_if<IntroduceAction>(&a)) names.push_back(in->name);
        }
        for (std::size_t n = 0; n <= log.size(); ++n) {
            std::span<const CurationDecision> prefix(log.data(), n);
            auto x = replay_decisions(t.h, filtered, {}, prefix);
            auto y = replay_decisions(t.h, filtered, {}, prefix);
            ASSERT_EQ(serialize(x.hierarchy()), serialize(y.hierarchy()));
            EXPECT_TRUE(validate(x.hierarchy()).empty());
        }
        EXPECT_EQ(serialize(replay_decisions(t.h, filtered, {}, log).hierarchy()), serialize(live.hierarchy()));
    }
}
