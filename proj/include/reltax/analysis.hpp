#pragma once

// Read-only statistics over hierarchies, RE dataset relation lists and typed
// triples.

#include "reltax/canonicalize.hpp"
#include "reltax/hierarchy.hpp"
#include "reltax/inference.hpp"

#include <iomanip>
#include <unordered_set>

namespace reltax {

struct DepthHistogram {
    std::size_t total = 0;
    std::size_t depth3 = 0;
    std::size_t depth4 = 0;
    std::size_t depth5 = 0;
    Fraction mean_depth{0}; // 0 for an empty hierarchy

    double mean() const { return boost::rational_cast<double>(mean_depth); }
};

inline DepthHistogram depth_histogram(const Hierarchy& h) {
    DepthHistogram out;
    long long depth_sum = 0;
    for (const auto& [name, node] : h.nodes()) {
        int d = h.depth(name);
        ++out.total;
        depth_sum += d;
        if (d == 3) ++out.depth3;
        else if (d == 4) ++out.depth4;
        else if (d == 5) ++out.depth5;
    }
    if (out.total > 0) out.mean_depth = Fraction(depth_sum, static_cast<long long>(out.total));
    return out;
}

/// Relation count per bucket. All nine buckets are present in the result.
inline std::map<std::string, std::size_t> bucket_distribution(const Hierarchy& h) {
    std::map<std::string, std::size_t> out;
    for (const Bucket& b : all_buckets()) out[b.name()] = 0;
    for (const auto& [name, node] : h.nodes()) ++out[node.bucket.name()];
    return out;
}

/// Per-source relation count per bucket; a node counts once for each source
/// it carries. Introduced nodes appear under the pseudo-source "introduced".
inline std::map<std::string, std::map<std::string, std::size_t>> bucket_distribution_by_source(const Hierarchy& h) {
    std::map<std::string, std::map<std::string, std::size_t>> out;
    for (const Bucket& b : all_buckets()) {
        auto& row = out[b.name()];
        for (Source s : kAllSources) row[std::string(to_string(s))] = 0;
        row["introduced"] = 0;
    }
    for (const auto& [name, node] : h.nodes()) {
        auto& row = out[node.bucket.name()];
        if (node.introduced) ++row["introduced"];
        for (Source s : node.sources.items()) ++row[std::string(to_string(s))];
    }
    return out;
}

struct OverlapRegion {
    SourceSet sources;
    std::size_t count = 0;
    Fraction fraction{0};

    std::string name() const {
        std::vector<std::string> parts;
        for (Source s : sources.items()) parts.emplace_back(to_string(s));
        return text::join(parts, "+");
    }
};

struct OverlapReport {
    std::vector<OverlapRegion> regions; // the 7 nonempty subsets, by mask
    std::size_t considered = 0;         // non-introduced nodes
    std::size_t unsourced = 0;          // non-introduced nodes with no source tag

    const OverlapRegion& region(SourceSet s) const {
        for (const auto& r : regions)
            if (r.sources == s) return r;
        throw Error("no such overlap region");
    }
    const OverlapRegion& all_three() const {
        return region(SourceSet{Source::WIKIDATA, Source::DBPEDIA, Source::INFOBOX});
    }
};

/// Splits non-introduced nodes by their exact source set.
inline OverlapReport source_overlap(const Hierarchy& h) {
    OverlapReport out;
    std::array<std::size_t, 8> counts{};
    for (const auto& [name, node] : h.nodes()) {
        if (node.introduced) continue;
        ++out.considered;
        if (node.sources.empty()) ++out.unsourced;
        else ++counts[node.sources.mask()];
    }
    for (std::uint8_t m = 1; m < 8; ++m) {
        OverlapRegion r{SourceSet::from_mask(m), counts[m], Fraction(0)};
        if (out.considered > 0) r.fraction = Fraction(static_cast<long long>(counts[m]), static_cast<long long>(out.considered));
        out.regions.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// RE dataset coverage

struct DatasetRelation {
    std::string name;
    bool restricted = false; // head and tail within PER/ORG/LOC
};

struct Dataset {
    std::string name;
    std::vector<DatasetRelation> relations;
};

struct DatasetCoverage {
    std::string name;
    std::size_t total_relations = 0;
    std::size_t restricted_relations = 0;
    std::size_t subsumed = 0; // restricted relations that hit a hierarchy node
    std::vector<std::pair<std::string, std::string>> matched; // (dataset relation, hierarchy node)
};

struct CoverageReport {
    std::vector<DatasetCoverage> datasets;
    std::optional<Fraction> micro_average_restricted; // absent when the denominator is 0
    std::optional<Fraction> micro_average_all;
};

/// dataset relation -> hierarchy node. Every target must exist in `h`.
using ManualMapping = std::map<std::string, std::string>;

/// A dataset relation is subsumed when its normalized (and alias-resolved)
/// name is a hierarchy node, or when the manual mapping sends it to one.
/// Only restricted relations count. Averages pool counts across datasets.
inline CoverageReport coverage_report(std::span<const Dataset> datasets, const Hierarchy& h,
                                      const ManualMapping& mapping, const AliasMap& aliases = {}) {
    for (const auto& [rel, target] : mapping)
        if (!h.contains(target))
            throw ConfigError("mapping sends '" + rel + "' to '" + target + "', which is not in the hierarchy");

    CoverageReport out;
    std::size_t sum_subsumed = 0, sum_restricted = 0, sum_total = 0;
    for (const auto& ds : datasets) {
        DatasetCoverage c;
        c.name = ds.name;
        for (const auto& rel : ds.relations) {
            ++c.total_relations;
            if (!rel.restricted) continue;
            ++c.restricted_relations;
            std::optional<std::string> hit;
            if (auto it = mapping.find(rel.name); it != mapping.end()) {
                hit = it->second;
            } else {
                try {
                    std::string canonical = aliases.lookup(normalize_name(rel.name));
                    if (h.contains(canonical)) hit = canonical;
                } catch (const InvalidNameError&) {
                }
            }
            if (hit) {
                ++c.subsumed;
                c.matched.emplace_back(rel.name, *hit);
            }
        }
        sum_subsumed += c.subsumed;
        sum_restricted += c.restricted_relations;
        sum_total += c.total_relations;
        out.datasets.push_back(std::move(c));
    }
    if (sum_restricted > 0)
        out.micro_average_restricted =
            Fraction(static_cast<long long>(sum_subsumed), static_cast<long long>(sum_restricted));
    if (sum_total > 0)
        out.micro_average_all = Fraction(static_cast<long long>(sum_subsumed), static_cast<long long>(sum_total));
    return out;
}

/// Dataset file: `relation  restricted{0|1}` with a header line.
inline Dataset read_dataset(std::istream& in, std::string name) {
    Dataset ds{std::move(name), {}};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && text::starts_with(line, "relation\t")) continue;
        if (text::trim(line).empty()) continue;
        auto cols = text::split(line, '\t');
        std::string where = ds.name + ":" + std::to_string(line_no);
        if (cols.size() < 2 || (cols[1] != "0" && cols[1] != "1"))
            throw ConfigError(where + ": expected relation and restricted flag 0/1");
        ds.relations.push_back({cols[0], cols[1] == "1"});
    }
    return ds;
}

/// Manual mapping file: `dataset_relation  hierarchy_relation`.
inline ManualMapping read_mapping(std::istream& in, const std::string& name = "mapping") {
    ManualMapping out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && text::starts_with(line, "dataset_relation\t")) continue;
        if (text::trim(line).empty()) continue;
        auto cols = text::split(line, '\t');
        if (cols.size() < 2) throw ConfigError(name + ":" + std::to_string(line_no) + ": expected two columns");
        out[cols[0]] = cols[1];
    }
    return out;
}

// ---------------------------------------------------------------------------
// KB completeness

struct CompletenessQuery {
    std::set<std::string> relation_ids; // raw identifiers of the relation in the triples
    EntityType head_type = EntityType::PER;
    std::uint64_t population = 0;       // entities of head_type in the KB
};

/// Fraction of head-type entities that have at least one triple of the
/// relation. Each entity counts once.
template <typename Range>
Fraction kb_completeness(const Range& triples, const CompletenessQuery& q) {
    if (q.population == 0) throw ConfigError("population of " + std::string(to_string(q.head_type)) + " is zero");
    std::unordered_set<std::string> heads;
    for (const Triple& t : triples)
        if (t.head_type == q.head_type && q.relation_ids.contains(t.relation)) heads.insert(t.head);
    if (heads.size() > q.population)
        throw ConfigError("more distinct heads than the stated population");
    return Fraction(static_cast<long long>(heads.size()), static_cast<long long>(q.population));
}

// ---------------------------------------------------------------------------
// Report writers: TSV for machines, aligned text for people.

inline void write_stats_text(std::ostream& out, const Hierarchy& h, const DepthHistogram& d) {
    out << "hierarchy   " << h.tag() << '\n'
        << "relations   " << d.total << '\n'
        << "depth 3     " << d.depth3 << '\n'
        << "depth 4     " << d.depth4 << '\n'
        << "depth 5     " << d.depth5 << '\n'
        << "mean depth  " << (d.total ? format_fraction(d.mean_depth, 3) : "-") << '\n';
}

inline void write_stats_tsv(std::ostream& out, const Hierarchy& h, const DepthHistogram& d) {
    out << "tag\ttotal\tdepth3\tdepth4\tdepth5\tmean_depth\n"
        << h.tag() << '\t' << d.total << '\t' << d.depth3 << '\t' << d.depth4 << '\t' << d.depth5 << '\t'
        << (d.total ? format_fraction(d.mean_depth, 4) : "") << '\n';
}

inline void write_overlap_text(std::ostream& out, const OverlapReport& r) {
    out << std::left << std::setw(28) << "sources" << std::right << std::setw(8) << "count" << std::setw(10)
        << "share" << '\n';
    for (const auto& reg : r.regions)
        out << std::left << std::setw(28) << reg.name() << std::right << std::setw(8) << reg.count << std::setw(10)
            << format_fraction(reg.fraction, 2, true) << '\n';
    out << std::left << std::setw(28) << "total (non-introduced)" << std::right << std::setw(8) << r.considered << '\n';
}

inline void write_overlap_tsv(std::ostream& out, const OverlapReport& r) {
    out << "sources\tcount\tfraction\n";
    for (const auto& reg : r.regions)
        out << reg.name() << '\t' << reg.count << '\t' << format_fraction(reg.fraction, 6) << '\n';
}

inline void write_coverage_text(std::ostream& out, const CoverageReport& r) {
    out << std::left << std::setw(16) << "dataset" << std::right << std::setw(8) << "total" << std::setw(12)
        << "restricted" << std::setw(10) << "subsumed" << '\n';
    for (const auto& d : r.datasets)
        out << std::left << std::setw(16) << d.name << std::right << std::setw(8) << d.total_relations
            << std::setw(12) << d.restricted_relations << std::setw(10) << d.subsumed << '\n';
    auto pct = [](const std::optional<Fraction>& f) { return f ? format_fraction(*f, 2, true) : std::string("n/a"); };
    out << "micro-average (restricted)  " << pct(r.micro_average_restricted) << '\n'
        << "micro-average (all)         " << pct(r.micro_average_all) << '\n';
}

inline void write_coverage_tsv(std::ostream& out, const CoverageReport& r) {
    out << "dataset\ttotal\trestricted\tsubsumed\n";
    for (const auto& d : r.datasets)
        out << d.name << '\t' << d.total_relations << '\t' << d.restricted_relations << '\t' << d.subsumed << '\n';
    auto frac = [](const std::optional<Fraction>& f) { return f ? format_fraction(*f, 6) : std::string(); };
    out << "#micro_average_restricted\t" << frac(r.micro_average_restricted) << '\n'
        << "#micro_average_all\t" << frac(r.micro_average_all) << '\n';
}

} // namespace reltax
