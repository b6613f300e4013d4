#pragma once

// Knowledge-base dump ingestion: line parsers for Wikidata JSON and N-Triples
// dumps, entity typing through instance-of / subclass-of chains, typed triple
// extraction, and support counting per (source, relation, bucket).

#include "reltax/core.hpp"

#include <nlohmann/json.hpp>

#include <deque>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace reltax {

/// An entity-to-entity statement before typing.
struct RawStatement {
    std::string head;
    std::string relation;
    std::string tail;

    friend bool operator==(const RawStatement&, const RawStatement&) = default;
};

struct Triple {
    std::string head;
    std::string relation;
    std::string tail;
    EntityType head_type = EntityType::OTHER;
    EntityType tail_type = EntityType::OTHER;
    Source source = Source::WIKIDATA;

    bool typed() const { return is_typed(head_type) && is_typed(tail_type); }
    std::optional<Bucket> bucket() const { return make_bucket(head_type, tail_type); }

    friend auto operator<=>(const Triple& a, const Triple& b) {
        return std::tie(a.head, a.relation, a.tail, a.head_type, a.tail_type, a.source) <=>
               std::tie(b.head, b.relation, b.tail, b.head_type, b.tail_type, b.source);
    }
    friend bool operator==(const Triple&, const Triple&) = default;
};

// ---------------------------------------------------------------------------
// Wikidata

struct WikidataVocabulary {
    std::string instance_of = "P31";
    std::string subclass_of = "P279";
    std::string label_language = "en";
};

struct WikidataEntity {
    std::string id;
    std::string label;                     // empty when absent
    std::vector<std::string> classes;      // instance-of targets
    std::vector<std::string> superclasses; // subclass-of targets
    std::vector<std::pair<std::string, std::string>> statements; // (property, target)
};

namespace detail {

inline std::optional<std::string> entity_reference(const nlohmann::json& snak) {
    if (!snak.is_object()) return std::nullopt;
    auto st = snak.find("snaktype");
    if (st != snak.end() && *st != "value") return std::nullopt;
    auto dv = snak.find("datavalue");
    if (dv == snak.end() || !dv->is_object()) return std::nullopt;
    if (dv->value("type", std::string{}) != "wikibase-entityid") return std::nullopt;
    auto value = dv->find("value");
    if (value == dv->end() || !value->is_object()) return std::nullopt;
    if (auto id = value->find("id"); id != value->end() && id->is_string())
        return id->get<std::string>();
    auto num = value->find("numeric-id");
    if (num == value->end() || !num->is_number_integer()) return std::nullopt;
    std::string kind = value->value("entity-type", std::string{"item"});
    char prefix = kind == "property" ? 'P' : kind == "lexeme" ? 'L' : 'Q';
    return prefix + std::to_string(num->get<long long>());
}

} // namespace detail

/// Parses one line of a Wikidata JSON entity dump. Returns nullopt for the
/// array wrapper lines and blank lines. Throws ParseError for anything that
/// is not a well-formed entity record.
inline std::optional<WikidataEntity> parse_wikidata_entity(std::string_view line, std::size_t line_no,
                                                           const WikidataVocabulary& vocab = {}) {
    std::string_view body = text::trim(line);
    if (!body.empty() && body.back() == ',') body.remove_suffix(1);
    body = text::trim(body);
    if (body.empty() || body == "[" || body == "]") return std::nullopt;

    nlohmann::json record;
    try {
        record = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(line_no, std::string("malformed entity record: ") + e.what());
    }
    if (!record.is_object()) throw ParseError(line_no, "entity record is not an object");
    auto id = record.find("id");
    if (id == record.end() || !id->is_string() || id->get_ref<const std::string&>().empty())
        throw ParseError(line_no, "entity record has no id");

    WikidataEntity entity;
    entity.id = id->get<std::string>();

    if (auto labels = record.find("labels"); labels != record.end() && labels->is_object()) {
        if (auto lang = labels->find(vocab.label_language); lang != labels->end() && lang->is_object())
            entity.label = lang->value("value", std::string{});
    }

    auto claims = record.find("claims");
    if (claims == record.end()) return entity;
    if (!claims->is_object()) {
        // Empty claim sets are serialized as [] in some dumps.
        if (claims->is_array() && claims->empty()) return entity;
        throw ParseError(line_no, "claims is not an object");
    }
    for (const auto& [property, statements] : claims->items()) {
        if (!statements.is_array()) throw ParseError(line_no, "claims for " + property + " is not an array");
        for (const auto& statement : statements) {
            auto snak = statement.find("mainsnak");
            if (snak == statement.end()) continue;
            auto target = detail::entity_reference(*snak);
            if (!target) continue;
            if (property == vocab.instance_of)
                entity.classes.push_back(std::move(*target));
            else if (property == vocab.subclass_of)
                entity.superclasses.push_back(std::move(*target));
            else
                entity.statements.emplace_back(property, std::move(*target));
        }
    }
    return entity;
}

// ---------------------------------------------------------------------------
// N-Triples

enum class StatementKind { Relation, TypeAssertion, SubclassEdge };

struct NTriple {
    std::string subject;
    std::string predicate;
    std::string object;
    StatementKind kind = StatementKind::Relation;
};

/// Namespace prefixes stripped from IRIs. The longest matching prefix wins;
/// IRIs with no matching prefix are kept whole.
struct PrefixTable {
    std::vector<std::string> prefixes{
        "http://dbpedia.org/resource/",     "http://dbpedia.org/ontology/",
        "http://dbpedia.org/property/",     "http://www.wikidata.org/entity/",
        "http://www.w3.org/2002/07/owl#",   "http://schema.org/",
    };
    std::string type_predicate = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    std::string subclass_predicate = "http://www.w3.org/2000/01/rdf-schema#subClassOf";

    std::string local(std::string_view iri) const {
        std::size_t best = 0;
        for (const auto& p : prefixes)
            if (p.size() > best && text::starts_with(iri, p)) best = p.size();
        return std::string(iri.substr(best));
    }
};

namespace detail {

inline void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

enum class TermKind { Iri, Blank, Literal };

struct Term {
    TermKind kind;
    std::string value;
};

class NTriplesCursor {
public:
    NTriplesCursor(std::string_view s, std::size_t line_no) : s_(s), line_(line_no) {}

    void skip_ws() {
        while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
    }
    bool at_end() const { return i_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[i_]; }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(line_, what + " at column " + std::to_string(i_ + 1));
    }

    Term term() {
        skip_ws();
        switch (peek()) {
        case '<': return {TermKind::Iri, iri()};
        case '_': return {TermKind::Blank, blank()};
        case '"': return {TermKind::Literal, literal()};
        default: fail("expected IRI, blank node or literal");
        }
    }

    void expect_end_of_statement() {
        skip_ws();
        if (peek() != '.') fail("expected '.'");
        ++i_;
        skip_ws();
        if (!at_end() && peek() != '#') fail("unexpected text after '.'");
    }

private:
    std::uint32_t hex(std::size_t digits) {
        if (i_ + digits > s_.size()) fail("truncated escape");
        std::uint32_t v = 0;
        for (std::size_t k = 0; k < digits; ++k) {
            char c = s_[i_++];
            v <<= 4;
            if (c >= '0' && c <= '9') v |= static_cast<std::uint32_t>(c - '0');
            else if (c >= 'a' && c <= 'f') v |= static_cast<std::uint32_t>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') v |= static_cast<std::uint32_t>(c - 'A' + 10);
            else fail("bad hex digit in escape");
        }
        return v;
    }

    std::string iri() {
        ++i_; // '<'
        std::string out;
        while (true) {
            if (at_end()) fail("unterminated IRI");
            char c = s_[i_++];
            if (c == '>') break;
            if (c == ' ' || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`')
                fail("illegal character in IRI");
            if (c == '\\') {
                if (at_end()) fail("truncated escape");
                char e = s_[i_++];
                if (e == 'u') append_utf8(out, hex(4));
                else if (e == 'U') append_utf8(out, hex(8));
                else fail("illegal escape in IRI");
                continue;
            }
            out += c;
        }
        if (out.empty()) fail("empty IRI");
        return out;
    }

    std::string blank() {
        if (s_.substr(i_, 2) != "_:") fail("expected blank node label");
        std::size_t start = i_;
        i_ += 2;
        while (!at_end() && s_[i_] != ' ' && s_[i_] != '\t') ++i_;
        if (i_ == start + 2) fail("empty blank node label");
        return std::string(s_.substr(start, i_ - start));
    }

    std::string literal() {
        ++i_; // '"'
        std::string out;
        while (true) {
            if (at_end()) fail("unterminated literal");
            char c = s_[i_++];
            if (c == '"') break;
            if (c == '\\') {
                if (at_end()) fail("truncated escape");
                char e = s_[i_++];
                switch (e) {
                case 't': out += '\t'; break;
                case 'b': out += '\b'; break;
                case 'n': out += '\n'; break;
                case 'r': out += '\r'; break;
                case 'f': out += '\f'; break;
                case '"': out += '"'; break;
                case '\'': out += '\''; break;
                case '\\': out += '\\'; break;
                case 'u': append_utf8(out, hex(4)); break;
                case 'U': append_utf8(out, hex(8)); break;
                default: fail("illegal escape in literal");
                }
                continue;
            }
            out += c;
        }
        if (peek() == '@') {
            ++i_;
            std::size_t start = i_;
            while (!at_end() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '-')) ++i_;
            if (i_ == start) fail("empty language tag");
        } else if (s_.substr(i_, 2) == "^^") {
            i_ += 2;
            if (peek() != '<') fail("expected datatype IRI");
            iri();
        }
        return out;
    }

    std::string_view s_;
    std::size_t line_;
    std::size_t i_ = 0;
};

} // namespace detail

/// Parses one N-Triples line. Returns nullopt for blank lines, comments, and
/// statements that do not connect two IRIs (literal or blank-node objects).
inline std::optional<NTriple> parse_ntriples_line(std::string_view line, std::size_t line_no,
                                                  const PrefixTable& prefixes = {}) {
    std::string_view body = text::trim(line);
    if (body.empty() || body.front() == '#') return std::nullopt;

    detail::NTriplesCursor cur(body, line_no);
    detail::Term subject = cur.term();
    if (subject.kind == detail::TermKind::Literal) cur.fail("subject cannot be a literal");
    detail::Term predicate = cur.term();
    if (predicate.kind != detail::TermKind::Iri) cur.fail("predicate must be an IRI");
    detail::Term object = cur.term();
    cur.expect_end_of_statement();

    if (subject.kind != detail::TermKind::Iri || object.kind != detail::TermKind::Iri) return std::nullopt;

    NTriple out;
    if (predicate.value == prefixes.type_predicate)
        out.kind = StatementKind::TypeAssertion;
    else if (predicate.value == prefixes.subclass_predicate)
        out.kind = StatementKind::SubclassEdge;
    out.subject = prefixes.local(subject.value);
    out.predicate = prefixes.local(predicate.value);
    out.object = prefixes.local(object.value);
    return out;
}

// ---------------------------------------------------------------------------
// Entity typing

struct TypeConfig {
    std::map<EntityType, std::set<std::string>> roots;
    int max_chain_depth = 3;
    std::vector<EntityType> precedence{EntityType::PER, EntityType::ORG, EntityType::LOC};
};

/// Immutable entity -> type map. Unknown entities are OTHER.
class TypeIndex {
public:
    TypeIndex() = default;

    EntityType lookup(const std::string& entity) const {
        auto it = types_.find(entity);
        return it == types_.end() ? EntityType::OTHER : it->second;
    }

    std::size_t size() const { return types_.size(); }

    /// Number of entities resolved to each of PER/ORG/LOC.
    std::map<EntityType, std::size_t> counts() const {
        std::map<EntityType, std::size_t> out;
        for (EntityType t : kTypedEntityTypes) out[t] = 0;
        for (const auto& [entity, type] : types_) ++out[type];
        return out;
    }

    const std::unordered_map<std::string, EntityType>& entries() const { return types_; }

private:
    friend TypeIndex build_type_index(std::span<const std::pair<std::string, std::string>>,
                                      std::span<const std::pair<std::string, std::string>>,
                                      const TypeConfig&);
    std::unordered_map<std::string, EntityType> types_;
};

/// Resolves each asserted entity to PER/ORG/LOC when one of its classes lies
/// within max_chain_depth subclass edges of a configured root. Conflicts are
/// resolved by config.precedence. Cycles in the subclass graph are harmless.
inline TypeIndex build_type_index(std::span<const std::pair<std::string, std::string>> class_assertions,
                                  std::span<const std::pair<std::string, std::string>> subclass_edges,
                                  const TypeConfig& config) {
    if (config.max_chain_depth < 0) throw ConfigError("max_chain_depth must be >= 0");

    std::unordered_map<std::string, std::vector<std::string>> subclasses_of;
    for (const auto& [sub, super] : subclass_edges) subclasses_of[super].push_back(sub);

    // Reverse BFS from each type's roots: classes within depth bound.
    std::map<EntityType, std::unordered_set<std::string>> reach;
    for (const auto& [type, roots] : config.roots) {
        auto& seen = reach[type];
        std::deque<std::pair<std::string, int>> queue;
        for (const auto& r : roots)
            if (seen.insert(r).second) queue.emplace_back(r, 0);
        while (!queue.empty()) {
            auto [cls, dist] = queue.front();
            queue.pop_front();
            if (dist == config.max_chain_depth) continue;
            auto it = subclasses_of.find(cls);
            if (it == subclasses_of.end()) continue;
            for (const auto& sub : it->second)
                if (seen.insert(sub).second) queue.emplace_back(sub, dist + 1);
        }
    }

    std::unordered_map<std::string, std::set<EntityType>> reachable;
    for (const auto& [entity, cls] : class_assertions) {
        auto& types = reachable[entity];
        for (const auto& [type, classes] : reach)
            if (classes.contains(cls)) types.insert(type);
    }

    TypeIndex index;
    for (const auto& [entity, types] : reachable) {
        for (EntityType t : config.precedence) {
            if (types.contains(t)) {
                index.types_.emplace(entity, t);
                break;
            }
        }
    }
    return index;
}

/// Keeps statements whose endpoints both type to PER/ORG/LOC, in input order.
inline std::vector<Triple> extract_typed_triples(std::span<const RawStatement> statements, const TypeIndex& index,
                                                 Source source, std::size_t* dropped = nullptr) {
    std::vector<Triple> out;
    std::size_t drop = 0;
    for (const auto& st : statements) {
        EntityType h = index.lookup(st.head);
        EntityType t = index.lookup(st.tail);
        if (!is_typed(h) || !is_typed(t)) {
            ++drop;
            continue;
        }
        out.push_back(Triple{st.head, st.relation, st.tail, h, t, source});
    }
    if (dropped) *dropped = drop;
    return out;
}

/// Sorts and removes exact (head, relation, tail, source) duplicates.
inline void dedupe_triples(std::vector<Triple>& triples) {
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end(),
                              [](const Triple& a, const Triple& b) {
                                  return a.head == b.head && a.relation == b.relation && a.tail == b.tail &&
                                         a.source == b.source;
                              }),
                  triples.end());
}

// ---------------------------------------------------------------------------
// Support counting

using BucketCounts = std::array<std::uint64_t, 9>;

inline std::uint64_t total(const BucketCounts& c) {
    std::uint64_t sum = 0;
    for (auto v : c) sum += v;
    return sum;
}

/// Typed-triple counts per (source, raw relation, bucket).
class SupportIndex {
public:
    using Key = std::pair<Source, std::string>;

    void add(const Triple& t, std::uint64_t n = 1) {
        auto bucket = t.bucket();
        if (!bucket) return;
        counts_[{t.source, t.relation}][bucket_index(*bucket)] += n;
    }

    void add(Source source, const std::string& relation, const Bucket& bucket, std::uint64_t n) {
        counts_[{source, relation}][bucket_index(bucket)] += n;
    }

    /// Commutative, associative merge.
    void merge(const SupportIndex& other) {
        for (const auto& [key, counts] : other.counts_) {
            auto& mine = counts_[key];
            for (std::size_t i = 0; i < mine.size(); ++i) mine[i] += counts[i];
        }
    }

    std::uint64_t count(Source source, const std::string& relation, const Bucket& bucket) const {
        auto it = counts_.find({source, relation});
        return it == counts_.end() ? 0 : it->second[bucket_index(bucket)];
    }

    std::uint64_t total(Source source, const std::string& relation) const {
        auto it = counts_.find({source, relation});
        return it == counts_.end() ? 0 : reltax::total(it->second);
    }

    const BucketCounts* find(Source source, const std::string& relation) const {
        auto it = counts_.find({source, relation});
        return it == counts_.end() ? nullptr : &it->second;
    }

    const std::map<Key, BucketCounts>& entries() const { return counts_; }
    bool empty() const { return counts_.empty(); }

    friend bool operator==(const SupportIndex&, const SupportIndex&) = default;

private:
    std::map<Key, BucketCounts> counts_;
};

/// Counts typed triples. Untyped triples contribute nothing.
template <typename Range>
SupportIndex count_support(const Range& triples) {
    SupportIndex index;
    for (const Triple& t : triples) index.add(t);
    return index;
}

} // namespace reltax
