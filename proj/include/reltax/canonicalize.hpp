#pragma once

// Relation name canonicalization, alias grouping, support filtering.

#include "reltax/relation_record.hpp"

#include <iomanip>

namespace reltax {

class InvalidNameError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline bool is_separator(char c) {
    return c == '_' || c == '-' || std::isspace(static_cast<unsigned char>(c));
}

inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

// An uppercase letter not preceded by another uppercase letter, past the
// first character: the token was already written in camel case.
inline bool has_camel_hump(std::string_view token) {
    for (std::size_t i = 1; i < token.size(); ++i)
        if (is_upper(token[i]) && !is_upper(token[i - 1])) return true;
    return false;
}

inline char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }
inline char upper(char c) { return static_cast<char>(std::toupper(static_cast<unsigned char>(c))); }

} // namespace detail

/// Camel-cases a relation name: "place of birth" -> "placeOfBirth",
/// "birth_place" -> "birthPlace", "Founder" -> "founder".
///
/// Tokens split on whitespace, '_' and '-'. The first token is lowercased and
/// every later token is capitalized with its remainder lowercased. Tokens that
/// already contain a camel hump keep their inner capitals, so canonical names
/// such as "birthPlace" are fixed points.
inline std::string normalize_name(std::string_view raw) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < raw.size()) {
        while (i < raw.size() && detail::is_separator(raw[i])) ++i;
        std::size_t start = i;
        while (i < raw.size() && !detail::is_separator(raw[i])) ++i;
        if (i > start) tokens.push_back(raw.substr(start, i - start));
    }
    if (tokens.empty()) throw InvalidNameError("relation name is empty: '" + std::string(raw) + "'");

    std::string out;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        std::string_view tok = tokens[t];
        bool keep_inner = detail::has_camel_hump(tok);
        out += t == 0 ? detail::lower(tok[0]) : detail::upper(tok[0]);
        for (std::size_t k = 1; k < tok.size(); ++k) out += keep_inner ? tok[k] : detail::lower(tok[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Alias map

enum class Provenance { AUTOMATIC, MANUAL };

inline std::string_view to_string(Provenance p) { return p == Provenance::AUTOMATIC ? "automatic" : "manual"; }

/// Normalized name -> representative canonical name.
class AliasMap {
public:
    struct Entry {
        std::string representative;
        Provenance provenance = Provenance::MANUAL;
    };

    /// Adds or replaces a mapping. Manual entries are never replaced by
    /// automatic ones.
    void set(const std::string& alias, const std::string& representative, Provenance provenance) {
        auto it = entries_.find(alias);
        if (it != entries_.end() && it->second.provenance == Provenance::MANUAL &&
            provenance == Provenance::AUTOMATIC)
            return;
        entries_[alias] = Entry{representative, provenance};
    }

    bool empty() const { return entries_.empty(); }
    const std::map<std::string, Entry>& entries() const { return entries_; }

    /// Follows mappings to the final representative. Throws ConfigError when
    /// the chain loops.
    std::string lookup(const std::string& name) const {
        std::string cur = name;
        std::vector<std::string> path{cur};
        while (true) {
            auto it = entries_.find(cur);
            if (it == entries_.end() || it->second.representative == cur) return cur;
            cur = it->second.representative;
            if (std::find(path.begin(), path.end(), cur) != path.end()) {
                path.push_back(cur);
                throw ConfigError("alias cycle: " + text::join(path, " -> "));
            }
            path.push_back(cur);
        }
    }

    /// Throws ConfigError naming the first cycle found.
    void check_acyclic() const {
        for (const auto& [alias, entry] : entries_) (void)lookup(alias);
    }

private:
    std::map<std::string, Entry> entries_;
};

/// Picks a group representative: a DBpedia-sourced name first, then the
/// shortest, then the lexicographically least.
inline std::string choose_representative(std::span<const std::pair<std::string, SourceSet>> group) {
    if (group.empty()) throw ConfigError("empty alias group");
    auto better = [](const std::pair<std::string, SourceSet>& a, const std::pair<std::string, SourceSet>& b) {
        bool da = a.second.contains(Source::DBPEDIA), db = b.second.contains(Source::DBPEDIA);
        if (da != db) return da;
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        return a.first < b.first;
    };
    return std::min_element(group.begin(), group.end(), better)->first;
}

/// Alias file: `alias  representative  provenance` (header optional).
inline AliasMap read_alias_file(std::istream& in, const std::string& name = "alias file") {
    AliasMap map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && text::starts_with(line, "alias\t")) continue;
        if (text::trim(line).empty() || line.front() == '#') continue;
        auto cols = text::split(line, '\t');
        std::string where = name + ":" + std::to_string(line_no);
        if (cols.size() < 2) throw ConfigError(where + ": expected alias and representative");
        Provenance p = Provenance::MANUAL;
        if (cols.size() >= 3 && !cols[2].empty()) {
            if (cols[2] == "automatic") p = Provenance::AUTOMATIC;
            else if (cols[2] != "manual") throw ConfigError(where + ": unknown provenance '" + cols[2] + "'");
        }
        map.set(normalize_name(cols[0]), normalize_name(cols[1]), p);
    }
    map.check_acyclic();
    return map;
}

inline AliasMap read_alias_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open alias file " + path.string());
    return read_alias_file(in, path.string());
}

inline void write_alias_file(std::ostream& out, const AliasMap& map) {
    out << "alias\trepresentative\tprovenance\n";
    for (const auto& [alias, e] : map.entries())
        out << alias << '\t' << e.representative << '\t' << to_string(e.provenance) << '\n';
}

// ---------------------------------------------------------------------------
// Pipeline steps

/// RAW -> CANONICAL: normalizes each record's label, keeping the raw
/// identifier and label as aliases.
inline std::vector<RelationRecord> canonicalize_records(std::vector<RelationRecord> records) {
    for (auto& r : records) {
        r.canonical_name = normalize_name(r.display_name());
        r.aliases.insert(r.raw_name);
        if (!r.label.empty()) r.aliases.insert(r.label);
        r.stage = Stage::CANONICAL;
    }
    return records;
}

/// Merges records that share a source and a representative. Alias sets are
/// unioned and support is summed per bucket. Output is sorted by
/// (source, canonical name).
inline std::vector<RelationRecord> apply_alias_map(std::span<const RelationRecord> records, const AliasMap& aliases) {
    aliases.check_acyclic();
    std::map<std::pair<Source, std::string>, std::vector<const RelationRecord*>> groups;
    for (const auto& r : records) {
        if (r.stage != Stage::CANONICAL)
            throw ConfigError("apply_alias_map expects canonical records; '" + r.raw_name + "' is " +
                              std::string(to_string(r.stage)));
        groups[{r.source, aliases.lookup(r.canonical_name)}].push_back(&r);
    }
    std::vector<RelationRecord> out;
    out.reserve(groups.size());
    for (const auto& [key, members] : groups) {
        const std::string& rep = key.second;
        // The member already named like the representative supplies raw/label.
        auto primary = std::find_if(members.begin(), members.end(),
                                    [&](const RelationRecord* r) { return r->canonical_name == rep; });
        RelationRecord m = primary == members.end() ? *members.front() : **primary;
        m.canonical_name = rep;
        m.support = {};
        m.unbucketed = 0;
        for (const RelationRecord* r : members) {
            m.aliases.insert(r->aliases.begin(), r->aliases.end());
            m.aliases.insert(r->raw_name);
            if (r->canonical_name != rep) m.aliases.insert(r->canonical_name);
            for (std::size_t i = 0; i < m.support.size(); ++i) m.support[i] += r->support[i];
            m.unbucketed += r->unbucketed;
            if (!m.declared_bucket) m.declared_bucket = r->declared_bucket;
        }
        out.push_back(std::move(m));
    }
    return out;
}

/// Refreshes a record's bucket support from the index by summing over its
/// raw identifier and aliases. Infobox records keep their usage counts.
inline void refresh_support(RelationRecord& r, const SupportIndex& index) {
    if (r.source == Source::INFOBOX) return;
    std::set<std::string> ids(r.aliases.begin(), r.aliases.end());
    ids.insert(r.raw_name);
    BucketCounts counts{};
    for (const auto& id : ids)
        if (const auto* c = index.find(r.source, id))
            for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += (*c)[i];
    r.support = counts;
    r.unbucketed = 0;
}

/// Keeps records with support_total >= threshold. With an index, KB-sourced
/// records take their support from it first.
inline std::vector<RelationRecord> filter_by_support(std::span<const RelationRecord> records,
                                                     const SupportIndex* index, std::uint64_t threshold = 100) {
    std::vector<RelationRecord> out;
    for (RelationRecord r : records) {
        if (index) refresh_support(r, *index);
        if (r.support_total() < threshold) continue;
        r.stage = Stage::FILTERED;
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Before/after report

struct CanonicalizationCell {
    std::size_t before = 0;
    std::size_t after = 0;
};

/// (source, head type) -> counts before and after canonicalization. Records
/// whose head type cannot be determined land in the OTHER column.
using CanonicalizationReport = std::map<std::pair<Source, EntityType>, CanonicalizationCell>;

inline CanonicalizationReport canonicalization_report(std::span<const RelationRecord> before,
                                                      std::span<const RelationRecord> after) {
    CanonicalizationReport report;
    for (const auto& r : before) ++report[{r.source, r.head_type()}].before;
    for (const auto& r : after) ++report[{r.source, r.head_type()}].after;
    return report;
}

inline void write_canonicalization_tsv(std::ostream& out, const CanonicalizationReport& report) {
    out << "source\thead_type\tbefore\tafter\n";
    for (const auto& [key, cell] : report)
        out << to_string(key.first) << '\t' << to_string(key.second) << '\t' << cell.before << '\t' << cell.after
            << '\n';
}

inline void write_canonicalization_text(std::ostream& out, const CanonicalizationReport& report) {
    out << std::left << std::setw(10) << "source" << std::setw(8) << "type" << std::right << std::setw(8) << "B"
        << std::setw(8) << "A" << '\n';
    for (const auto& [key, cell] : report)
        out << std::left << std::setw(10) << to_string(key.first) << std::setw(8) << to_string(key.second)
            << std::right << std::setw(8) << cell.before << std::setw(8) << cell.after << '\n';
}

} // namespace reltax
