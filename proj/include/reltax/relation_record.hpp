#pragma once

#include "reltax/kb_ingest.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace reltax {

enum class Stage { RAW, CANONICAL, FILTERED };

inline std::string_view to_string(Stage s) {
    switch (s) {
    case Stage::RAW: return "raw";
    case Stage::CANONICAL: return "canonical";
    case Stage::FILTERED: return "filtered";
    }
    return "raw";
}

inline std::optional<Stage> parse_stage(std::string_view s) {
    if (s == "raw") return Stage::RAW;
    if (s == "canonical") return Stage::CANONICAL;
    if (s == "filtered") return Stage::FILTERED;
    return std::nullopt;
}

/// One relation of a source list as it moves through the pipeline.
///
/// `raw_name` is the identifier used in the dump (P19, birthPlace,
/// birth_place); `label` is the human-readable name that canonicalization
/// normalizes (a Wikidata property label, otherwise the raw name).
/// Support that cannot be attributed to a bucket (infobox usage counts with no
/// declared bucket) is kept in `unbucketed`.
struct RelationRecord {
    std::string raw_name;
    std::string label;
    std::string canonical_name;
    Source source = Source::WIKIDATA;
    std::set<std::string> aliases;
    BucketCounts support{};
    std::uint64_t unbucketed = 0;
    std::optional<Bucket> declared_bucket;
    Stage stage = Stage::RAW;

    std::uint64_t support_total() const { return total(support) + unbucketed; }

    /// Name used before canonicalization: the label if present, else the raw name.
    const std::string& display_name() const { return label.empty() ? raw_name : label; }

    /// Bucket with the largest support; ties go to the lexicographically
    /// smaller bucket name. Falls back to the declared bucket when no bucket
    /// has support.
    std::optional<Bucket> dominant_bucket() const {
        const auto& buckets = all_buckets();
        std::size_t best = buckets.size();
        for (std::size_t i = 0; i < buckets.size(); ++i)
            if (support[i] > 0 && (best == buckets.size() || support[i] > support[best])) best = i;
        if (best != buckets.size()) return buckets[best];
        return declared_bucket;
    }

    /// Head entity type of the dominant bucket, OTHER when unknown.
    EntityType head_type() const {
        auto b = dominant_bucket();
        return b ? b->head : EntityType::OTHER;
    }
};

// ---------------------------------------------------------------------------
// Relation list file (TSV)
//
// raw_name  label  canonical_name  source  stage  aliases  support_total
// bucket_support  declared_bucket
//
// aliases are '|'-separated; bucket_support is "loc-loc=3;per-loc=2";
// unbucketed support appears as "*=N".

inline const char* kRelationListHeader =
    "raw_name\tlabel\tcanonical_name\tsource\tstage\taliases\tsupport_total\tbucket_support\tdeclared_bucket";

inline std::string format_bucket_support(const RelationRecord& r) {
    std::vector<std::string> parts;
    const auto& buckets = all_buckets();
    for (std::size_t i = 0; i < buckets.size(); ++i)
        if (r.support[i] > 0) parts.push_back(buckets[i].name() + "=" + std::to_string(r.support[i]));
    if (r.unbucketed > 0) parts.push_back("*=" + std::to_string(r.unbucketed));
    return text::join(parts, ";");
}

inline void write_relation_list(std::ostream& out, std::span<const RelationRecord> records) {
    out << kRelationListHeader << '\n';
    for (const auto& r : records) {
        out << r.raw_name << '\t' << r.label << '\t' << r.canonical_name << '\t' << to_string(r.source) << '\t'
            << to_string(r.stage) << '\t' << text::join(r.aliases, "|") << '\t' << r.support_total() << '\t'
            << format_bucket_support(r) << '\t' << (r.declared_bucket ? r.declared_bucket->name() : "") << '\n';
    }
}

inline void write_relation_list(const std::filesystem::path& path, std::span<const RelationRecord> records) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    write_relation_list(out, records);
}

namespace detail {

inline std::uint64_t parse_count(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        auto v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": not a non-negative integer: '" + s + "'");
    }
}

} // namespace detail

inline std::vector<RelationRecord> read_relation_list(std::istream& in, const std::string& name = "relation list") {
    std::vector<RelationRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && text::starts_with(line, "raw_name\t")) continue;
        if (text::trim(line).empty()) continue;
        auto cols = text::split(line, '\t');
        std::string where = name + ":" + std::to_string(line_no);
        if (cols.size() < 9) throw ConfigError(where + ": expected 9 columns, got " + std::to_string(cols.size()));
        RelationRecord r;
        r.raw_name = cols[0];
        r.label = cols[1];
        r.canonical_name = cols[2];
        auto src = parse_source(cols[3]);
        if (!src) throw ConfigError(where + ": unknown source '" + cols[3] + "'");
        r.source = *src;
        auto stage = parse_stage(cols[4]);
        if (!stage) throw ConfigError(where + ": unknown stage '" + cols[4] + "'");
        r.stage = *stage;
        if (!cols[5].empty())
            for (auto& a : text::split(cols[5], '|')) r.aliases.insert(a);
        if (!cols[7].empty()) {
            for (const auto& part : text::split(cols[7], ';')) {
                auto eq = part.find('=');
                if (eq == std::string::npos) throw ConfigError(where + ": bad bucket support '" + part + "'");
                auto key = part.substr(0, eq);
                auto n = detail::parse_count(part.substr(eq + 1), where);
                if (key == "*") {
                    r.unbucketed += n;
                    continue;
                }
                auto b = parse_bucket(key);
                if (!b) throw ConfigError(where + ": unknown bucket '" + key + "'");
                r.support[bucket_index(*b)] += n;
            }
        }
        if (detail::parse_count(cols[6], where) != r.support_total())
            throw ConfigError(where + ": support_total does not equal the bucket support sum");
        if (!cols[8].empty()) {
            auto b = parse_bucket(cols[8]);
            if (!b) throw ConfigError(where + ": unknown bucket '" + cols[8] + "'");
            r.declared_bucket = *b;
        }
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<RelationRecord> read_relation_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open relation list " + path.string());
    return read_relation_list(in, path.string());
}

/// Reads the curated infobox relation list: `relation  template  usage_count`
/// with an optional fourth `bucket` column. Rows for the same relation are
/// summed; the relation becomes one RAW record with usage as support.
inline std::vector<RelationRecord> read_infobox_tsv(std::istream& in, const std::string& name = "infobox list") {
    std::map<std::string, RelationRecord> by_name;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && text::starts_with(line, "relation\t")) continue;
        if (text::trim(line).empty()) continue;
        auto cols = text::split(line, '\t');
        std::string where = name + ":" + std::to_string(line_no);
        if (cols.size() < 3) throw ConfigError(where + ": expected relation, template, usage_count");
        auto usage = detail::parse_count(std::string(text::trim(cols[2])), where);
        std::optional<Bucket> bucket;
        if (cols.size() >= 4 && !text::trim(cols[3]).empty()) {
            bucket = parse_bucket(text::trim(cols[3]));
            if (!bucket) throw ConfigError(where + ": unknown bucket '" + cols[3] + "'");
        }
        std::string rel(text::trim(cols[0]));
        if (rel.empty()) throw ConfigError(where + ": empty relation name");
        auto& r = by_name[rel];
        r.raw_name = rel;
        r.label = rel;
        r.source = Source::INFOBOX;
        r.aliases.insert(rel);
        if (bucket) {
            r.support[bucket_index(*bucket)] += usage;
            if (!r.declared_bucket) r.declared_bucket = bucket;
        } else {
            r.unbucketed += usage;
        }
    }
    std::vector<RelationRecord> out;
    for (auto& [n, r] : by_name) out.push_back(std::move(r));
    return out;
}

inline std::vector<RelationRecord> read_infobox_tsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open infobox list " + path.string());
    return read_infobox_tsv(in, path.string());
}

} // namespace reltax
