#pragma once

// Shared vocabulary: entity types, knowledge sources, buckets, errors and
// small text helpers used by every other header.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reltax {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Recoverable per-line parse failure. Ingestion records it and moves on.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Bad configuration or input files that reference things that do not exist.
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class EntityType : std::uint8_t { PER, ORG, LOC, OTHER };

inline constexpr std::array<EntityType, 3> kTypedEntityTypes{EntityType::PER, EntityType::ORG,
                                                             EntityType::LOC};

inline bool is_typed(EntityType t) { return t != EntityType::OTHER; }

inline std::string_view to_string(EntityType t) {
    switch (t) {
    case EntityType::PER: return "PER";
    case EntityType::ORG: return "ORG";
    case EntityType::LOC: return "LOC";
    case EntityType::OTHER: return "OTHER";
    }
    return "OTHER";
}

/// Short lowercase form used in bucket names ("per", "org", "loc").
inline std::string_view short_name(EntityType t) {
    switch (t) {
    case EntityType::PER: return "per";
    case EntityType::ORG: return "org";
    case EntityType::LOC: return "loc";
    case EntityType::OTHER: return "other";
    }
    return "other";
}

inline std::optional<EntityType> parse_entity_type(std::string_view s) {
    std::string up(s);
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (up == "PER") return EntityType::PER;
    if (up == "ORG") return EntityType::ORG;
    if (up == "LOC") return EntityType::LOC;
    if (up == "OTHER") return EntityType::OTHER;
    return std::nullopt;
}

enum class Source : std::uint8_t { WIKIDATA, DBPEDIA, INFOBOX };

inline constexpr std::array<Source, 3> kAllSources{Source::DBPEDIA, Source::INFOBOX,
                                                   Source::WIKIDATA};

inline std::string_view to_string(Source s) {
    switch (s) {
    case Source::WIKIDATA: return "wikidata";
    case Source::DBPEDIA: return "dbpedia";
    case Source::INFOBOX: return "infobox";
    }
    return "wikidata";
}

inline std::optional<Source> parse_source(std::string_view s) {
    std::string low(s);
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (low == "wikidata") return Source::WIKIDATA;
    if (low == "dbpedia") return Source::DBPEDIA;
    if (low == "infobox") return Source::INFOBOX;
    return std::nullopt;
}

/// Small set over the three sources. Iteration order is alphabetical by name.
class SourceSet {
public:
    SourceSet() = default;
    SourceSet(std::initializer_list<Source> init) {
        for (Source s : init) insert(s);
    }

    void insert(Source s) { bits_ |= bit(s); }
    bool contains(Source s) const { return (bits_ & bit(s)) != 0; }
    bool empty() const { return bits_ == 0; }
    std::size_t size() const {
        return static_cast<std::size_t>(__builtin_popcount(bits_));
    }
    SourceSet& operator|=(SourceSet o) {
        bits_ |= o.bits_;
        return *this;
    }
    std::uint8_t mask() const { return bits_; }
    static SourceSet from_mask(std::uint8_t m) {
        SourceSet s;
        s.bits_ = m & 0x7;
        return s;
    }

    std::vector<Source> items() const {
        std::vector<Source> out;
        for (Source s : kAllSources)
            if (contains(s)) out.push_back(s);
        return out;
    }

    friend bool operator==(SourceSet, SourceSet) = default;

private:
    static std::uint8_t bit(Source s) { return static_cast<std::uint8_t>(1u << static_cast<int>(s)); }
    std::uint8_t bits_ = 0;
};

/// (head type, tail type) pair over PER/ORG/LOC; the nine depth-2 nodes.
struct Bucket {
    EntityType head = EntityType::PER;
    EntityType tail = EntityType::PER;

    std::string name() const {
        return std::string(short_name(head)) + "-" + std::string(short_name(tail));
    }

    // Lexicographic by name, so loc-loc < loc-org < ... < per-per.
    friend bool operator<(const Bucket& a, const Bucket& b) { return a.name() < b.name(); }
    friend bool operator==(const Bucket&, const Bucket&) = default;
};

/// All nine buckets, sorted by name.
inline const std::array<Bucket, 9>& all_buckets() {
    static const std::array<Bucket, 9> buckets = [] {
        std::array<Bucket, 9> out{};
        std::size_t i = 0;
        for (EntityType h : kTypedEntityTypes)
            for (EntityType t : kTypedEntityTypes) out[i++] = Bucket{h, t};
        std::sort(out.begin(), out.end());
        return out;
    }();
    return buckets;
}

/// Position of a bucket in all_buckets(); used as an array index.
inline std::size_t bucket_index(const Bucket& b) {
    const auto& all = all_buckets();
    for (std::size_t i = 0; i < all.size(); ++i)
        if (all[i] == b) return i;
    throw Error("not a relation bucket: " + b.name());
}

inline std::optional<Bucket> parse_bucket(std::string_view s) {
    for (const Bucket& b : all_buckets())
        if (b.name() == s) return b;
    return std::nullopt;
}

inline std::optional<Bucket> make_bucket(EntityType head, EntityType tail) {
    if (!is_typed(head) || !is_typed(tail)) return std::nullopt;
    return Bucket{head, tail};
}

namespace text {

inline std::string_view trim(std::string_view s) {
    auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            return out;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

template <typename Range>
std::string join(const Range& items, std::string_view sep) {
    std::string out;
    bool first = true;
    for (const auto& item : items) {
        if (!first) out += sep;
        out += item;
        first = false;
    }
    return out;
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

} // namespace text
} // namespace reltax
