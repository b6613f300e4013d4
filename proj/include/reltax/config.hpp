#pragma once

#include "reltax/kb_ingest.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>

namespace reltax {

/// Toolkit configuration: entity-type roots per knowledge base, chain depth,
/// type precedence, IRI prefixes and the support threshold.
///
/// File layout (every field optional; defaults below):
///
///     {
///       "max_chain_depth": 3,
///       "precedence": ["PER", "ORG", "LOC"],
///       "threshold": 100,
///       "wikidata": {"instance_of": "P31", "subclass_of": "P279", "label_language": "en",
///                    "roots": {"PER": ["Q5"], "ORG": ["Q43229"], "LOC": ["Q2221906"]}},
///       "dbpedia": {"roots": {"PER": ["Person"], "ORG": ["Organisation"], "LOC": ["Place"]},
///                   "prefixes": ["http://dbpedia.org/resource/", ...],
///                   "type_predicate": "...#type", "subclass_predicate": "...#subClassOf"}
///     }
struct Config {
    TypeConfig wikidata_types;
    TypeConfig dbpedia_types;
    WikidataVocabulary wikidata;
    PrefixTable prefixes;
    std::uint64_t threshold = 100;
};

inline Config default_config() {
    Config c;
    c.wikidata_types.roots = {
        {EntityType::PER, {"Q5"}},                                      // human
        {EntityType::ORG, {"Q43229"}},                                  // organization
        {EntityType::LOC, {"Q2221906", "Q17334923", "Q486972", "Q6256"}}, // geographic location, location, human settlement, country
    };
    c.dbpedia_types.roots = {
        {EntityType::PER, {"Person"}},
        {EntityType::ORG, {"Organisation"}},
        {EntityType::LOC, {"Place", "Location"}},
    };
    return c;
}

namespace detail {

inline std::map<EntityType, std::set<std::string>> parse_roots(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("roots must be an object of type -> class list");
    std::map<EntityType, std::set<std::string>> out;
    for (const auto& [key, value] : j.items()) {
        auto t = parse_entity_type(key);
        if (!t || !is_typed(*t)) throw ConfigError("roots: unknown entity type '" + key + "'");
        if (!value.is_array()) throw ConfigError("roots." + key + " must be an array");
        for (const auto& cls : value) {
            if (!cls.is_string()) throw ConfigError("roots." + key + " entries must be strings");
            out[*t].insert(cls.get<std::string>());
        }
    }
    return out;
}

} // namespace detail

inline Config config_from_json(const nlohmann::json& j) {
    Config c = default_config();
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    try {
        if (j.contains("max_chain_depth")) {
            int d = j.at("max_chain_depth").get<int>();
            if (d < 0) throw ConfigError("max_chain_depth must be >= 0");
            c.wikidata_types.max_chain_depth = c.dbpedia_types.max_chain_depth = d;
        }
        if (j.contains("precedence")) {
            std::vector<EntityType> order;
            for (const auto& t : j.at("precedence")) {
                auto parsed = parse_entity_type(t.get<std::string>());
                if (!parsed || !is_typed(*parsed)) throw ConfigError("precedence: unknown entity type");
                order.push_back(*parsed);
            }
            c.wikidata_types.precedence = c.dbpedia_types.precedence = order;
        }
        if (j.contains("threshold")) {
            if (!j.at("threshold").is_number_unsigned()) throw ConfigError("threshold must be a non-negative integer");
            c.threshold = j.at("threshold").get<std::uint64_t>();
        }
        if (auto w = j.find("wikidata"); w != j.end()) {
            if (w->contains("roots")) c.wikidata_types.roots = detail::parse_roots(w->at("roots"));
            c.wikidata.instance_of = w->value("instance_of", c.wikidata.instance_of);
            c.wikidata.subclass_of = w->value("subclass_of", c.wikidata.subclass_of);
            c.wikidata.label_language = w->value("label_language", c.wikidata.label_language);
        }
        if (auto d = j.find("dbpedia"); d != j.end()) {
            if (d->contains("roots")) c.dbpedia_types.roots = detail::parse_roots(d->at("roots"));
            if (d->contains("prefixes")) c.prefixes.prefixes = d->at("prefixes").get<std::vector<std::string>>();
            c.prefixes.type_predicate = d->value("type_predicate", c.prefixes.type_predicate);
            c.prefixes.subclass_predicate = d->value("subclass_predicate", c.prefixes.subclass_predicate);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("configuration: ") + e.what());
    }
    return c;
}

inline Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration " + path.string());
    try {
        return config_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

} // namespace reltax
