#include "reltax/config.hpp"
#include "reltax/ingest.hpp"
#include "reltax/analysis.hpp"
#include "support/test_support.hpp"

#include <gtest/gtest.h>

using namespace reltax;
using namespace reltax::testing;

namespace {

const std::string kRes = "http://dbpedia.org/resource/";
const std::string kOnt = "http://dbpedia.org/ontology/";

std::string wikidata_line(const std::string& id, const std::vector<std::pair<std::string, std::string>>& claims) {
    nlohmann::json c = nlohmann::json::object();
    for (const auto& [p, target] : claims) c[p].push_back(nlohmann::json::parse(wikidata_snak(p, target)));
    return nlohmann::json({{"type", "item"}, {"id", id}, {"claims", c}}).dump();
}

TypeConfig simple_types() {
    TypeConfig c;
    c.roots = {{EntityType::PER, {"Person"}}, {EntityType::ORG, {"Organisation"}}, {EntityType::LOC, {"Place"}}};
    return c;
}

} // namespace

// ---------------------------------------------------------------------------
// Wikidata lines

TEST(WikidataParser, EntityWithClassAndStatement) {
    auto e = parse_wikidata_entity(wikidata_line("Q1", {{"P31", "Q5"}, {"P22", "Q2"}}), 1);
    ASSERT_TRUE(e);
    EXPECT_EQ(e->id, "Q1");
    EXPECT_EQ(e->classes, std::vector<std::string>{"Q5"});
    ASSERT_EQ(e->statements.size(), 1u);
    EXPECT_EQ(e->statements[0], (std::pair<std::string, std::string>{"P22", "Q2"}));
}

TEST(WikidataParser, WrapperAndBlankLinesAreSkipped) {
    EXPECT_FALSE(parse_wikidata_entity("[", 1));
    EXPECT_FALSE(parse_wikidata_entity("]", 2));
    EXPECT_FALSE(parse_wikidata_entity("   ", 3));
}

TEST(WikidataParser, TrailingCommaIsAccepted) {
    auto e = parse_wikidata_entity(wikidata_line("Q7", {{"P279", "Q5"}}) + ",", 1);
    ASSERT_TRUE(e);
    EXPECT_EQ(e->superclasses, std::vector<std::string>{"Q5"});
    EXPECT_TRUE(e->statements.empty());
}

TEST(WikidataParser, TruncatedLineRaisesWithLineNumber) {
    std::string line = wikidata_line("Q1", {{"P22", "Q2"}});
    try {
        parse_wikidata_entity(line.substr(0, line.size() / 2), 42);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 42u);
    }
}

TEST(WikidataParser, MissingIdIsAnError) {
    EXPECT_THROW(parse_wikidata_entity(R"({"type":"item","claims":{}})", 1), ParseError);
    EXPECT_THROW(parse_wikidata_entity(R"([1,2])", 1), ParseError);
}

TEST(WikidataParser, NonEntityValuesAreIgnored) {
    std::string line = R"({"id":"Q1","claims":{
        "P569":[{"mainsnak":{"snaktype":"value","datavalue":{"type":"time","value":{"time":"+1879-03-14"}}}}],
        "P22":[{"mainsnak":{"snaktype":"somevalue"}}],
        "P25":[{"mainsnak":{"snaktype":"value","datavalue":{"type":"wikibase-entityid","value":{"entity-type":"item","numeric-id":9}}}}]}})";
    line.erase(std::remove(line.begin(), line.end(), '\n'), line.end());
    auto e = parse_wikidata_entity(line, 1);
    ASSERT_TRUE(e);
    ASSERT_EQ(e->statements.size(), 1u);
    EXPECT_EQ(e->statements[0].first, "P25");
    EXPECT_EQ(e->statements[0].second, "Q9");
}

TEST(WikidataParser, LabelInConfiguredLanguage) {
    std::string line = R"({"id":"P22","labels":{"en":{"language":"en","value":"father"},"de":{"language":"de","value":"Vater"}}})";
    EXPECT_EQ(parse_wikidata_entity(line, 1)->label, "father");
    WikidataVocabulary de;
    de.label_language = "de";
    EXPECT_EQ(parse_wikidata_entity(line, 1, de)->label, "Vater");
}

// ---------------------------------------------------------------------------
// N-Triples lines

TEST(NTriplesParser, RelationStatement) {
    PrefixTable p;
    auto t = parse_ntriples_line("<" + kRes + "A> <" + kOnt + "birthPlace> <" + kRes + "B> .", 1, p);
    ASSERT_TRUE(t);
    EXPECT_EQ(t->subject, "A");
    EXPECT_EQ(t->predicate, "birthPlace");
    EXPECT_EQ(t->object, "B");
    EXPECT_EQ(t->kind, StatementKind::Relation);
}

TEST(NTriplesParser, CommentsBlankLinesAndLiteralsAreSkipped) {
    PrefixTable p;
    EXPECT_FALSE(parse_ntriples_line("# comment", 1, p));
    EXPECT_FALSE(parse_ntriples_line("", 2, p));
    EXPECT_FALSE(parse_ntriples_line("<" + kRes + "A> <" + kOnt + "name> \"Albert \\\"A\\\" E.\"@en .", 3, p));
    EXPECT_FALSE(parse_ntriples_line("<" + kRes + "A> <" + kOnt + "height> \"1.7\"^^<http://www.w3.org/2001/XMLSchema#double> .", 4, p));
    EXPECT_FALSE(parse_ntriples_line("<" + kRes + "A> <" + kOnt + "x> _:b0 .", 5, p));
}

TEST(NTriplesParser, TypeAndSubclassStatements) {
    PrefixTable p;
    auto t = parse_ntriples_line("<" + kRes + "A> " + kRdfType + " <" + kOnt + "Person> .", 1, p);
    ASSERT_TRUE(t);
    EXPECT_EQ(t->kind, StatementKind::TypeAssertion);
    EXPECT_EQ(t->object, "Person");
    auto s = parse_ntriples_line("<" + kOnt + "Athlete> " + kRdfsSubClassOf + " <" + kOnt + "Person> .", 2, p);
    ASSERT_TRUE(s);
    EXPECT_EQ(s->kind, StatementKind::SubclassEdge);
    EXPECT_EQ(s->subject, "Athlete");
}

TEST(NTriplesParser, UnicodeEscapesInIris) {
    PrefixTable p;
    auto t = parse_ntriples_line("<" + kRes + "Z\\u00FCrich> <" + kOnt + "country> <" + kRes + "Switzerland> .", 1, p);
    ASSERT_TRUE(t);
    EXPECT_EQ(t->subject, "Z\xC3\xBCrich");
}

TEST(NTriplesParser, MalformedLinesRaise) {
    PrefixTable p;
    EXPECT_THROW(parse_ntriples_line("<" + kRes + "A> <" + kOnt + "r> <" + kRes + "B>", 7, p), ParseError);
    EXPECT_THROW(parse_ntriples_line("<" + kRes + "A <" + kOnt + "r> <" + kRes + "B> .", 7, p), ParseError);
    EXPECT_THROW(parse_ntriples_line("<" + kRes + "A> <" + kOnt + "r> <" + kRes + "B> . junk", 7, p), ParseError);
    try {
        parse_ntriples_line("<a> <b>", 9, p);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 9u);
    }
}

TEST(NTriplesParser, UnmatchedPrefixKeepsWholeIri) {
    PrefixTable p;
    auto t = parse_ntriples_line("<http://example.org/a> <http://example.org/r> <http://example.org/b> .", 1, p);
    ASSERT_TRUE(t);
    EXPECT_EQ(t->predicate, "http://example.org/r");
}

// ---------------------------------------------------------------------------
// Type index

TEST(TypeIndex, RootClassItselfResolves) {
    std::vector<std::pair<std::string, std::string>> classes{{"e", "Person"}};
    auto idx = build_type_index(classes, {}, simple_types());
    EXPECT_EQ(idx.lookup("e"), EntityType::PER);
    EXPECT_EQ(idx.lookup("unknown"), EntityType::OTHER);
}

TEST(TypeIndex, ChainDepthBound) {
    std::vector<std::pair<std::string, std::string>> classes{{"e", "Airline"}};
    std::vector<std::pair<std::string, std::string>> edges{{"Airline", "Company"}, {"Company", "Organisation"}};
    auto cfg = simple_types();
    cfg.max_chain_depth = 1;
    EXPECT_EQ(build_type_index(classes, edges, cfg).lookup("e"), EntityType::OTHER);
    cfg.max_chain_depth = 2;
    EXPECT_EQ(build_type_index(classes, edges, cfg).lookup("e"), EntityType::ORG);
}

TEST(TypeIndex, PrecedenceResolvesConflicts) {
    // Saint -> Person and Saint -> City -> Place
    std::vector<std::pair<std::string, std::string>> classes{{"e", "Saint"}};
    std::vector<std::pair<std::string, std::string>> edges{{"Saint", "Person"}, {"Saint", "City"}, {"City", "Place"}};
    EXPECT_EQ(build_type_index(classes, edges, simple_types()).lookup("e"), EntityType::PER);
    auto cfg = simple_types();
    cfg.precedence = {EntityType::LOC, EntityType::PER, EntityType::ORG};
    EXPECT_EQ(build_type_index(classes, edges, cfg).lookup("e"), EntityType::LOC);
}

TEST(TypeIndex, SubclassCyclesTerminate) {
    std::vector<std::pair<std::string, std::string>> classes{{"e", "A"}, {"f", "C"}};
    std::vector<std::pair<std::string, std::string>> edges{{"A", "B"}, {"B", "A"}, {"B", "Person"}, {"C", "D"}, {"D", "C"}};
    auto idx = build_type_index(classes, edges, simple_types());
    EXPECT_EQ(idx.lookup("e"), EntityType::PER);
    EXPECT_EQ(idx.lookup("f"), EntityType::OTHER);
}

TEST(TypeIndex, NegativeDepthIsAConfigError) {
    auto cfg = simple_types();
    cfg.max_chain_depth = -1;
    EXPECT_THROW(build_type_index({}, {}, cfg), ConfigError);
}

// ---------------------------------------------------------------------------
// Typed triples and support

TEST(TypedTriples, TypedEndpointsKeptOthersDropped) {
    std::vector<std::pair<std::string, std::string>> classes{{"A", "Person"}, {"B", "Place"}, {"C", "Album"}};
    auto idx = build_type_index(classes, {}, simple_types());
    std::vector<RawStatement> st{{"A", "birthPlace", "B"}, {"A", "spouse", "C"}};
    std::size_t dropped = 0;
    auto out = extract_typed_triples(st, idx, Source::DBPEDIA, &dropped);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].head_type, EntityType::PER);
    EXPECT_EQ(out[0].tail_type, EntityType::LOC);
    EXPECT_EQ(dropped, 1u);
}

TEST(TypedTriples, TenStatementsFourTypedInOrder) {
    std::vector<std::pair<std::string, std::string>> classes{{"p1", "Person"}, {"p2", "Person"}, {"o1", "Organisation"},
                                                             {"l1", "Place"}, {"x1", "Album"}};
    auto idx = build_type_index(classes, {}, simple_types());
    std::vector<RawStatement> st{
        {"p1", "r1", "x1"}, {"p1", "r2", "l1"}, {"x1", "r3", "p1"}, {"o1", "r4", "p2"}, {"zz", "r5", "p1"},
        {"p2", "r6", "p1"}, {"x1", "r7", "x1"}, {"l1", "r8", "zz"}, {"l1", "r9", "o1"}, {"o1", "r10", "x1"},
    };
    auto out = extract_typed_triples(st, idx, Source::WIKIDATA);
    ASSERT_EQ(out.size(), 4u);
    EXPECT_EQ(out[0].relation, "r2");
    EXPECT_EQ(out[1].relation, "r4");
    EXPECT_EQ(out[2].relation, "r6");
    EXPECT_EQ(out[3].relation, "r9");
}

TEST(SupportCounting, EmptyStreamCountsNothing) {
    std::vector<Triple> none;
    auto idx = count_support(none);
    EXPECT_TRUE(idx.empty());
    EXPECT_EQ(idx.total(Source::DBPEDIA, "r"), 0u);
}

TEST(SupportCounting, BucketArithmetic) {
    std::vector<Triple> ts;
    for (int i = 0; i < 3; ++i) ts.push_back({"h" + std::to_string(i), "r", "t", EntityType::PER, EntityType::LOC, Source::DBPEDIA});
    for (int i = 0; i < 2; ++i) ts.push_back({"l" + std::to_string(i), "r", "t", EntityType::LOC, EntityType::LOC, Source::DBPEDIA});
    auto idx = count_support(ts);
    EXPECT_EQ(idx.total(Source::DBPEDIA, "r"), 5u);
    EXPECT_EQ(idx.count(Source::DBPEDIA, "r", *parse_bucket("per-loc")), 3u);
    EXPECT_EQ(idx.count(Source::DBPEDIA, "r", *parse_bucket("loc-loc")), 2u);
}

TEST(SupportCounting, MatchesSinglePassTally) {
    std::mt19937_64 rng(7);
    std::vector<Triple> ts;
    std::map<std::tuple<int, std::string, std::string>, std::uint64_t> tally;
    const std::array<EntityType, 4> types{EntityType::PER, EntityType::ORG, EntityType::LOC, EntityType::OTHER};
    const std::array<const char*, 4> type_names{"per", "org", "loc", ""};
    for (int i = 0; i < 1000; ++i) {
        int h = static_cast<int>(rng() % 4), t = static_cast<int>(rng() % 4), s = static_cast<int>(rng() % 3);
        std::string rel = "r" + std::to_string(rng() % 12);
        ts.push_back({"h", rel, "t", types[h], types[t], static_cast<Source>(s)});
        if (h != 3 && t != 3) ++tally[{s, rel, std::string(type_names[h]) + "-" + type_names[t]}];
    }
    auto idx = count_support(ts);
    std::uint64_t seen = 0;
    for (const auto& [key, counts] : idx.entries())
        for (std::size_t b = 0; b < counts.size(); ++b) {
            if (!counts[b]) continue;
            auto it = tally.find({static_cast<int>(key.first), key.second, all_buckets()[b].name()});
            ASSERT_NE(it, tally.end());
            EXPECT_EQ(it->second, counts[b]);
            seen += counts[b];
        }
    std::uint64_t expected = 0;
    for (const auto& [k, n] : tally) expected += n;
    EXPECT_EQ(seen, expected);
}

TEST(SupportCounting, MergeIsCommutativeAndAssociative) {
    std::mt19937_64 rng(11);
    auto random_index = [&] {
        SupportIndex idx;
        for (int i = 0; i < 30; ++i)
            idx.add(static_cast<Source>(rng() % 3), "r" + std::to_string(rng() % 5), all_buckets()[rng() % 9], rng() % 7 + 1);
        return idx;
    };
    for (int round = 0; round < 20; ++round) {
        auto a = random_index(), b = random_index(), c = random_index();
        SupportIndex ab = a;
        ab.merge(b);
        SupportIndex ba = b;
        ba.merge(a);
        EXPECT_EQ(ab, ba);
        SupportIndex ab_c = ab;
        ab_c.merge(c);
        SupportIndex bc = b;
        bc.merge(c);
        SupportIndex a_bc = a;
        a_bc.merge(bc);
        EXPECT_EQ(ab_c, a_bc);
    }
}

// ---------------------------------------------------------------------------
// File formats

TEST(IngestFiles, SupportTsvRoundTrip) {
    SupportIndex idx;
    idx.add(Source::DBPEDIA, "birthPlace", *parse_bucket("per-loc"), 120);
    idx.add(Source::DBPEDIA, "birthPlace", *parse_bucket("org-loc"), 3);
    idx.add(Source::WIKIDATA, "P22", *parse_bucket("per-per"), 9);
    std::stringstream s;
    write_support_tsv(s, idx);
    EXPECT_EQ(read_support_tsv(s), idx);
}

TEST(IngestFiles, SupportTsvRejectsInconsistentTotal) {
    std::stringstream s("source\trelation\ttotal\tloc-loc\tloc-org\tloc-per\torg-loc\torg-org\torg-per\tper-loc\tper-org\tper-per\n"
                        "dbpedia\tr\t5\t1\t0\t0\t0\t0\t0\t0\t0\t0\n");
    EXPECT_THROW(read_support_tsv(s), ConfigError);
}

TEST(IngestFiles, TriplesTsvRoundTrip) {
    std::vector<Triple> ts{{"A", "birthPlace", "B", EntityType::PER, EntityType::LOC, Source::DBPEDIA},
                           {"Q1", "P22", "Q2", EntityType::PER, EntityType::PER, Source::WIKIDATA}};
    std::stringstream s;
    write_triples_tsv(s, ts);
    EXPECT_EQ(read_triples_tsv(s), ts);
}

// ---------------------------------------------------------------------------
// End-to-end ingestion against the hand-typed synthetic KB

class SyntheticIngest : public ::testing::Test {
protected:
    TempDir dir;
    Config config = default_config();
};

TEST_F(SyntheticIngest, WikidataMatchesTallyOracle) {
    auto kb = synthetic_kb(1, 985, 1500);
    auto lines = render_wikidata(kb);
    ASSERT_EQ(lines.size(), 1000u);
    write_file(dir / "dump.json", join_lines(lines, 0, lines.size()));
    std::vector<std::filesystem::path> in{dir / "dump.json"};
    auto r = ingest_wikidata(in, config);
    EXPECT_TRUE(r.issues.empty());
    EXPECT_EQ(r.lines, 1000u);

    auto expected = tally_oracle(kb, synthetic_wikidata_properties());
    std::map<std::pair<std::string, std::string>, std::uint64_t> actual;
    for (const auto& [key, counts] : r.support.entries())
        for (std::size_t b = 0; b < counts.size(); ++b)
            if (counts[b]) actual[{key.second, all_buckets()[b].name()}] = counts[b];
    EXPECT_EQ(actual, expected);
}

TEST_F(SyntheticIngest, DbpediaMatchesTallyOracle) {
    auto kb = synthetic_kb(2, 400, 600);
    auto lines = render_ntriples(kb);
    write_file(dir / "objects.nt", join_lines(lines, 0, lines.size()));
    std::vector<std::filesystem::path> in{dir / "objects.nt"};
    auto r = ingest_dbpedia(in, config);
    EXPECT_TRUE(r.issues.empty());
    auto expected = tally_oracle(kb, synthetic_dbpedia_properties());
    std::map<std::pair<std::string, std::string>, std::uint64_t> actual;
    for (const auto& [key, counts] : r.support.entries())
        for (std::size_t b = 0; b < counts.size(); ++b)
            if (counts[b]) actual[{key.second, all_buckets()[b].name()}] = counts[b];
    EXPECT_EQ(actual, expected);
}

TEST_F(SyntheticIngest, ShardOrderDoesNotChangeOutput) {
    auto kb = synthetic_kb(3, 300, 500);
    auto lines = render_ntriples(kb);
    std::string whole = join_lines(lines, 0, lines.size());
    write_file(dir / "all.nt", whole);
    std::vector<std::filesystem::path> one{dir / "all.nt"};
    std::ostringstream expected;
    write_triples_tsv(expected, ingest_dbpedia(one, config).triples);

    // Three shards, one of them gzip-compressed, in every order.
    std::size_t a = lines.size() / 3, b = 2 * lines.size() / 3;
    write_file(dir / "s0.nt", join_lines(lines, 0, a));
    write_gzip(dir / "s1.nt.gz", join_lines(lines, a, b));
    write_file(dir / "s2.nt", join_lines(lines, b, lines.size()));
    std::vector<std::filesystem::path> shards{dir / "s0.nt", dir / "s1.nt.gz", dir / "s2.nt"};
    std::sort(shards.begin(), shards.end());
    do {
        std::ostringstream got;
        write_triples_tsv(got, ingest_dbpedia(shards, config).triples);
        EXPECT_EQ(got.str(), expected.str());
    } while (std::next_permutation(shards.begin(), shards.end()));
}

TEST_F(SyntheticIngest, MalformedLinesAreReportedAndSkipped) {
    std::string content = "[\n" + wikidata_line("Q1", {{"P31", "Q5"}, {"P22", "Q2"}}) + ",\n" + "{\"id\":\"Q2\",\"claims\":{\n" +
                          wikidata_line("Q2", {{"P31", "Q5"}}) + "\n]\n";
    write_file(dir / "d.json", content);
    std::vector<std::filesystem::path> in{dir / "d.json"};
    auto r = ingest_wikidata(in, config);
    ASSERT_EQ(r.issues.size(), 1u);
    EXPECT_EQ(r.issues[0].line, 3u);
    ASSERT_EQ(r.triples.size(), 1u);
    EXPECT_EQ(r.triples[0].relation, "P22");
}

TEST_F(SyntheticIngest, RelationRecordsCarryLabels) {
    std::string content = wikidata_line("Q1", {{"P31", "Q5"}, {"P22", "Q2"}}) + "\n" + wikidata_line("Q2", {{"P31", "Q5"}}) + "\n" +
                          R"({"id":"P22","type":"property","labels":{"en":{"language":"en","value":"father"}}})" + "\n";
    write_file(dir / "d.json", content);
    std::vector<std::filesystem::path> in{dir / "d.json"};
    auto records = relation_records(ingest_wikidata(in, config));
    ASSERT_EQ(records.size(), 1u);
    EXPECT_EQ(records[0].raw_name, "P22");
    EXPECT_EQ(records[0].label, "father");
    EXPECT_EQ(records[0].support_total(), 1u);
}

// ---------------------------------------------------------------------------
// Completeness

TEST(Completeness, QuarterOfPersons) {
    std::vector<Triple> ts;
    for (int i = 0; i < 25; ++i)
        for (int k = 0; k < 2; ++k) // a second birth place must not count twice
            ts.push_back({"p" + std::to_string(i), "P19", "l" + std::to_string(k), EntityType::PER, EntityType::LOC, Source::WIKIDATA});
    ts.push_back({"o1", "P19", "l1", EntityType::ORG, EntityType::LOC, Source::WIKIDATA});
    EXPECT_EQ(kb_completeness(ts, {{"P19"}, EntityType::PER, 100}), Fraction(1, 4));
}

TEST(Completeness, NoTriplesIsZeroAndZeroPopulationIsAnError) {
    std::vector<Triple> none;
    EXPECT_EQ(kb_completeness(none, {{"P19"}, EntityType::PER, 10}), Fraction(0));
    EXPECT_THROW(kb_completeness(none, {{"P19"}, EntityType::PER, 0}), ConfigError);
}

TEST(Completeness, MatchesDistinctHeadTally) {
    std::mt19937_64 rng(5);
    std::vector<Triple> ts;
    std::set<std::string> heads;
    for (int i = 0; i < 3000; ++i) {
        std::string h = "p" + std::to_string(rng() % 1000);
        bool rel = rng() % 3 == 0;
        ts.push_back({h, rel ? "birthPlace" : "spouse", "x", EntityType::PER, EntityType::LOC, Source::DBPEDIA});
        if (rel) heads.insert(h);
    }
    EXPECT_EQ(kb_completeness(ts, {{"birthPlace"}, EntityType::PER, 1000}),
              Fraction(static_cast<long long>(heads.size()), 1000));
}

// ---------------------------------------------------------------------------
// Configuration

TEST(Configuration, DefaultsAndOverrides) {
    auto d = default_config();
    EXPECT_TRUE(d.wikidata_types.roots.at(EntityType::PER).contains("Q5"));
    EXPECT_EQ(d.threshold, 100u);
    auto c = config_from_json(nlohmann::json::parse(R"({"threshold": 50, "max_chain_depth": 1,
        "dbpedia": {"roots": {"PER": ["Agent"]}}})"));
    EXPECT_EQ(c.threshold, 50u);
    EXPECT_EQ(c.dbpedia_types.max_chain_depth, 1);
    EXPECT_EQ(c.dbpedia_types.roots.at(EntityType::PER), std::set<std::string>{"Agent"});
    EXPECT_FALSE(c.dbpedia_types.roots.contains(EntityType::ORG));
}

TEST(Configuration, BadValuesAreConfigErrors) {
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"dbpedia": {"roots": {"XYZ": ["A"]}}})")), ConfigError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"max_chain_depth": -2})")), ConfigError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"threshold": "many"})")), ConfigError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"threshold": -1})")), ConfigError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"([1])")), ConfigError);
}
