#pragma once

// Shard-parallel ingestion drivers and the triple / support file formats.

#include "reltax/config.hpp"
#include "reltax/line_reader.hpp"
#include "reltax/relation_record.hpp"

#include <future>

namespace reltax {

struct IngestIssue {
    std::string file;
    std::size_t line = 0;
    std::string message;
};

struct IngestResult {
    std::vector<Triple> triples; // typed, deduplicated, sorted
    SupportIndex support;
    std::map<std::string, std::string> labels; // raw relation id -> label
    std::map<EntityType, std::size_t> type_counts;
    std::vector<IngestIssue> issues;
    std::size_t lines = 0;
    std::size_t statements = 0;
    std::size_t dropped_untyped = 0;
    std::size_t duplicates = 0;
};

namespace detail {

struct Shard {
    std::vector<std::pair<std::string, std::string>> class_assertions;
    std::vector<std::pair<std::string, std::string>> subclass_edges;
    std::vector<RawStatement> statements;
    std::map<std::string, std::string> labels;
    std::vector<IngestIssue> issues;
    std::size_t lines = 0;
};

inline Shard parse_wikidata_shard(const std::filesystem::path& path, const WikidataVocabulary& vocab) {
    Shard shard;
    for_each_line(path, [&](std::string_view line, std::size_t n) {
        ++shard.lines;
        try {
            auto e = parse_wikidata_entity(line, n, vocab);
            if (!e) return;
            for (auto& c : e->classes) shard.class_assertions.emplace_back(e->id, std::move(c));
            for (auto& s : e->superclasses) shard.subclass_edges.emplace_back(e->id, std::move(s));
            for (auto& [p, target] : e->statements) shard.statements.push_back({e->id, p, std::move(target)});
            if (!e->label.empty() && !e->id.empty() && e->id.front() == 'P') shard.labels[e->id] = e->label;
        } catch (const ParseError& err) {
            shard.issues.push_back({path.string(), err.line(), err.what()});
        }
    });
    return shard;
}

inline Shard parse_ntriples_shard(const std::filesystem::path& path, const PrefixTable& prefixes) {
    Shard shard;
    for_each_line(path, [&](std::string_view line, std::size_t n) {
        ++shard.lines;
        try {
            auto t = parse_ntriples_line(line, n, prefixes);
            if (!t) return;
            switch (t->kind) {
            case StatementKind::TypeAssertion: shard.class_assertions.emplace_back(t->subject, t->object); break;
            case StatementKind::SubclassEdge: shard.subclass_edges.emplace_back(t->subject, t->object); break;
            case StatementKind::Relation:
                shard.statements.push_back({std::move(t->subject), std::move(t->predicate), std::move(t->object)});
                break;
            }
        } catch (const ParseError& err) {
            shard.issues.push_back({path.string(), err.line(), err.what()});
        }
    });
    return shard;
}

template <typename ParseFn>
IngestResult run_ingest(std::span<const std::filesystem::path> inputs, const TypeConfig& types, Source source,
                        ParseFn parse) {
    std::vector<std::future<Shard>> pending;
    for (const auto& p : inputs) pending.push_back(std::async(std::launch::async, parse, p));
    std::vector<Shard> shards;
    for (auto& f : pending) shards.push_back(f.get());

    IngestResult result;
    std::vector<std::pair<std::string, std::string>> classes, edges;
    for (auto& s : shards) {
        classes.insert(classes.end(), s.class_assertions.begin(), s.class_assertions.end());
        edges.insert(edges.end(), s.subclass_edges.begin(), s.subclass_edges.end());
        result.labels.insert(s.labels.begin(), s.labels.end());
        result.issues.insert(result.issues.end(), s.issues.begin(), s.issues.end());
        result.lines += s.lines;
        result.statements += s.statements.size();
    }
    TypeIndex index = build_type_index(classes, edges, types);
    result.type_counts = index.counts();

    for (const auto& s : shards) {
        std::size_t dropped = 0;
        auto typed = extract_typed_triples(s.statements, index, source, &dropped);
        result.dropped_untyped += dropped;
        result.triples.insert(result.triples.end(), std::make_move_iterator(typed.begin()),
                              std::make_move_iterator(typed.end()));
    }
    std::size_t before = result.triples.size();
    dedupe_triples(result.triples);
    result.duplicates = before - result.triples.size();
    result.support = count_support(result.triples);
    return result;
}

} // namespace detail

/// Parses Wikidata JSON dump shards in parallel, types entities, and returns
/// the deduplicated typed triples with their support counts.
inline IngestResult ingest_wikidata(std::span<const std::filesystem::path> inputs, const Config& config) {
    return detail::run_ingest(inputs, config.wikidata_types, Source::WIKIDATA,
                              [vocab = config.wikidata](const std::filesystem::path& p) {
                                  return detail::parse_wikidata_shard(p, vocab);
                              });
}

/// Same for DBpedia N-Triples files. rdf:type lines supply class assertions
/// and rdfs:subClassOf lines the class hierarchy, so instance-type and
/// ontology files are passed alongside the mapping-based property files.
inline IngestResult ingest_dbpedia(std::span<const std::filesystem::path> inputs, const Config& config) {
    return detail::run_ingest(inputs, config.dbpedia_types, Source::DBPEDIA,
                              [prefixes = config.prefixes](const std::filesystem::path& p) {
                                  return detail::parse_ntriples_shard(p, prefixes);
                              });
}

/// RAW relation records, one per relation with support.
inline std::vector<RelationRecord> relation_records(const IngestResult& r) {
    std::vector<RelationRecord> out;
    for (const auto& [key, counts] : r.support.entries()) {
        RelationRecord rec;
        rec.source = key.first;
        rec.raw_name = key.second;
        if (auto it = r.labels.find(key.second); it != r.labels.end()) rec.label = it->second;
        rec.support = counts;
        rec.aliases.insert(key.second);
        out.push_back(std::move(rec));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Files

inline void write_triples_tsv(std::ostream& out, std::span<const Triple> triples) {
    out << "head\trelation\ttail\theadType\ttailType\tsource\n";
    for (const auto& t : triples)
        out << t.head << '\t' << t.relation << '\t' << t.tail << '\t' << to_string(t.head_type) << '\t'
            << to_string(t.tail_type) << '\t' << to_string(t.source) << '\n';
}

inline std::vector<Triple> read_triples_tsv(std::istream& in, const std::string& name = "triples") {
    std::vector<Triple> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && text::starts_with(line, "head\t")) continue;
        if (text::trim(line).empty()) continue;
        auto cols = text::split(line, '\t');
        std::string where = name + ":" + std::to_string(line_no);
        if (cols.size() < 6) throw ConfigError(where + ": expected 6 columns");
        auto ht = parse_entity_type(cols[3]);
        auto tt = parse_entity_type(cols[4]);
        auto src = parse_source(cols[5]);
        if (!ht || !tt || !src) throw ConfigError(where + ": bad type or source column");
        out.push_back({cols[0], cols[1], cols[2], *ht, *tt, *src});
    }
    return out;
}

inline std::vector<Triple> read_triples_tsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open triples file " + path.string());
    return read_triples_tsv(in, path.string());
}

/// One record per (source, relation): total then the nine bucket counts.
inline void write_support_tsv(std::ostream& out, const SupportIndex& index) {
    out << "source\trelation\ttotal";
    for (const Bucket& b : all_buckets()) out << '\t' << b.name();
    out << '\n';
    for (const auto& [key, counts] : index.entries()) {
        out << to_string(key.first) << '\t' << key.second << '\t' << total(counts);
        for (auto c : counts) out << '\t' << c;
        out << '\n';
    }
}

inline SupportIndex read_support_tsv(std::istream& in, const std::string& name = "support index") {
    SupportIndex index;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && text::starts_with(line, "source\t")) continue;
        if (text::trim(line).empty()) continue;
        auto cols = text::split(line, '\t');
        std::string where = name + ":" + std::to_string(line_no);
        if (cols.size() != 12) throw ConfigError(where + ": expected 12 columns");
        auto src = parse_source(cols[0]);
        if (!src) throw ConfigError(where + ": unknown source");
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < 9; ++i) {
            auto n = detail::parse_count(cols[3 + i], where);
            sum += n;
            if (n > 0) index.add(*src, cols[1], all_buckets()[i], n);
        }
        if (sum != detail::parse_count(cols[2], where)) throw ConfigError(where + ": total does not match buckets");
    }
    return index;
}

inline SupportIndex read_support_tsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open support index " + path.string());
    return read_support_tsv(in, path.string());
}

inline void write_type_counts_tsv(std::ostream& out, const std::map<EntityType, std::size_t>& counts) {
    out << "type\tentities\n";
    for (const auto& [t, n] : counts) out << to_string(t) << '\t' << n << '\n';
}

inline std::map<EntityType, std::uint64_t> read_type_counts_tsv(std::istream& in) {
    std::map<EntityType, std::uint64_t> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && text::starts_with(line, "type\t")) continue;
        if (text::trim(line).empty()) continue;
        auto cols = text::split(line, '\t');
        auto t = cols.size() == 2 ? parse_entity_type(cols[0]) : std::nullopt;
        if (!t) throw ConfigError("type counts:" + std::to_string(line_no) + ": expected type and count");
        out[*t] = detail::parse_count(cols[1], "type counts");
    }
    return out;
}

} // namespace reltax
