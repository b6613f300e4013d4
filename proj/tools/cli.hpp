#pragma once

// Command implementations for the reltax executable. Kept separate from main()
// so the test suites can drive the same code in-process.

#include "reltax/analysis.hpp"
#include "reltax/canonicalize.hpp"
#include "reltax/config.hpp"
#include "reltax/curation.hpp"
#include "reltax/hierarchy.hpp"
#include "reltax/inference.hpp"
#include "reltax/ingest.hpp"
#include "reltax/service.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

namespace reltax::cli {

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    return out;
}

inline std::ifstream open_in(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + p.string());
    return in;
}

/// Writes to `path`, or to `fallback` when the path is empty or "-".
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn fn) {
    if (path.empty() || path == "-") return fn(fallback);
    auto out = open_out(path);
    fn(out);
}

inline std::vector<RelationRecord> read_lists(const std::vector<std::string>& paths) {
    std::vector<RelationRecord> all;
    for (const auto& p : paths) {
        auto part = read_relation_list(std::filesystem::path(p));
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;
}

inline SupportIndex read_support_files(const std::vector<std::string>& paths) {
    SupportIndex index;
    for (const auto& p : paths) index.merge(read_support_tsv(std::filesystem::path(p)));
    return index;
}

} // namespace detail

struct Options {
    std::string config;

    // ingest
    std::string ingest_source;
    std::vector<std::string> inputs;
    std::string out_dir;

    // canon / filter / build
    std::vector<std::string> relations;
    std::vector<std::string> canonical;
    std::string aliases;
    std::vector<std::string> support;
    std::string out;
    std::string report;
    std::string aliases_out;
    std::optional<std::uint64_t> threshold;
    std::string base;
    std::string log;
    std::string tag = "H";
    std::string conflicts_out;

    // analysis
    std::string hierarchy;
    std::string triples;
    std::string format = "text";
    bool buckets = false;
    bool by_source = false;
    std::vector<std::string> datasets;
    std::string mapping;
    std::string counts;
    std::vector<std::string> relation_ids;
    std::string head_type = "PER";
    std::optional<std::uint64_t> population;
    std::string type_counts;
    int digits = 2;

    // serve
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string conflicts_in;
};

inline Config load_options_config(const Options& o) { return o.config.empty() ? default_config() : load_config(o.config); }

// ---------------------------------------------------------------------------
// Commands

inline int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
    auto source = parse_source(o.ingest_source);
    if (!source) throw ConfigError("--source must be wikidata, dbpedia or infobox");
    std::filesystem::path dir(o.out_dir);
    std::filesystem::create_directories(dir);

    if (*source == Source::INFOBOX) {
        std::vector<RelationRecord> records;
        for (const auto& p : o.inputs) {
            auto part = read_infobox_tsv(std::filesystem::path(p));
            records.insert(records.end(), part.begin(), part.end());
        }
        // The same relation may appear in several input files.
        std::map<std::string, RelationRecord> merged;
        for (auto& r : records) {
            auto [it, fresh] = merged.try_emplace(r.raw_name, r);
            if (fresh) continue;
            for (std::size_t i = 0; i < r.support.size(); ++i) it->second.support[i] += r.support[i];
            it->second.unbucketed += r.unbucketed;
            if (!it->second.declared_bucket) it->second.declared_bucket = r.declared_bucket;
        }
        records.clear();
        for (auto& [name, r] : merged) records.push_back(std::move(r));
        write_relation_list(dir / "relations.tsv", records);
        out << "infobox: " << records.size() << " relations -> " << (dir / "relations.tsv").string() << '\n';
        return 0;
    }

    Config config = load_options_config(o);
    std::vector<std::filesystem::path> paths(o.inputs.begin(), o.inputs.end());
    IngestResult r = *source == Source::WIKIDATA ? ingest_wikidata(paths, config) : ingest_dbpedia(paths, config);
    {
        auto f = detail::open_out(dir / "triples.tsv");
        write_triples_tsv(f, r.triples);
    }
    {
        auto f = detail::open_out(dir / "support.tsv");
        write_support_tsv(f, r.support);
    }
    {
        auto f = detail::open_out(dir / "types.tsv");
        write_type_counts_tsv(f, r.type_counts);
    }
    write_relation_list(dir / "relations.tsv", relation_records(r));
    for (const auto& issue : r.issues) err << issue.file << ':' << issue.line << ": " << issue.message << '\n';
    out << to_string(*source) << ": " << r.lines << " lines, " << r.statements << " statements, "
        << r.triples.size() << " typed triples (" << r.dropped_untyped << " untyped dropped, " << r.duplicates
        << " duplicates), " << r.support.entries().size() << " relations, " << r.issues.size()
        << " malformed lines\n";
    return 0;
}

inline int cmd_canon(const Options& o, std::ostream& out, std::ostream&) {
    auto raw = detail::read_lists(o.relations);
    AliasMap aliases;
    if (!o.aliases.empty()) aliases = read_alias_file(std::filesystem::path(o.aliases));
    auto canonical = apply_alias_map(canonicalize_records(raw), aliases);
    if (!o.support.empty()) {
        SupportIndex index = detail::read_support_files(o.support);
        for (auto& r : canonical) refresh_support(r, index);
    }
    detail::emit(o.out, out, [&](std::ostream& s) { write_relation_list(s, canonical); });
    if (!o.aliases_out.empty()) {
        AliasMap derived = aliases;
        for (const auto& r : canonical)
            for (const auto& a : r.aliases) {
                std::string n;
                try {
                    n = normalize_name(a);
                } catch (const InvalidNameError&) {
                    continue;
                }
                if (n != r.canonical_name && !derived.entries().contains(n)) derived.set(n, r.canonical_name, Provenance::AUTOMATIC);
            }
        auto f = detail::open_out(o.aliases_out);
        write_alias_file(f, derived);
    }
    if (!o.report.empty()) {
        auto report = canonicalization_report(raw, canonical);
        detail::emit(o.report, out, [&](std::ostream& s) {
            if (o.format == "tsv") write_canonicalization_tsv(s, report);
            else write_canonicalization_text(s, report);
        });
    }
    return 0;
}

inline int cmd_filter(const Options& o, std::ostream& out, std::ostream& err) {
    auto records = detail::read_lists(o.relations);
    std::uint64_t threshold = o.threshold ? *o.threshold : load_options_config(o).threshold;
    std::optional<SupportIndex> index;
    if (!o.support.empty()) index = detail::read_support_files(o.support);
    auto kept = filter_by_support(records, index ? &*index : nullptr, threshold);
    detail::emit(o.out, out, [&](std::ostream& s) { write_relation_list(s, kept); });
    err << "kept " << kept.size() << " of " << records.size() << " relations at threshold " << threshold << '\n';
    return 0;
}

inline int cmd_build(const Options& o, std::ostream& out, std::ostream& err) {
    Hierarchy base = o.base.empty() ? Hierarchy(o.tag) : load_hierarchy(o.base);
    auto filtered = detail::read_lists(o.relations);
    auto canonical = detail::read_lists(o.canonical);
    std::vector<CurationDecision> log;
    if (!o.log.empty()) log = read_decision_log(std::filesystem::path(o.log));
    CurationState state = replay_decisions(std::move(base), filtered, canonical, log);
    detail::emit(o.out, out, [&](std::ostream& s) { s << serialize(state.hierarchy()); });
    auto unplaced = state.unplaced();
    err << state.hierarchy().size() << " relations placed from " << log.size() << " decisions, " << unplaced.size()
        << " unplaced\n";
    return 0;
}

inline int cmd_merge(const Options& o, std::ostream& out, std::ostream& err) {
    std::vector<Hierarchy> inputs;
    for (const auto& p : o.inputs) inputs.push_back(load_hierarchy(p));
    MergeResult m = merge_hierarchies(inputs, o.tag);
    detail::emit(o.out, out, [&](std::ostream& s) { s << serialize(m.hierarchy); });
    if (!o.conflicts_out.empty()) {
        auto f = detail::open_out(o.conflicts_out);
        f << conflicts_to_json(m.conflicts).dump(2) << '\n';
    }
    err << m.hierarchy.size() << " relations, " << m.conflicts.size() << " conflicts\n";
    return 0;
}

inline int cmd_validate(const Options& o, std::ostream& out, std::ostream&) {
    int status = 0;
    for (const auto& p : o.inputs) {
        Hierarchy h = load_hierarchy(p); // structural checks are left to validate()
        auto violations = validate(h);
        if (violations.empty()) {
            out << p << ": ok (" << h.size() << " relations)\n";
            continue;
        }
        status = 1;
        for (const auto& v : violations) out << p << ": " << v.kind << ' ' << v.node << ": " << v.detail << '\n';
    }
    return status;
}

inline int cmd_infer(const Options& o, std::ostream& out, std::ostream& err) {
    Hierarchy h = load_hierarchy(o.hierarchy);
    auto in = detail::open_in(o.triples);
    auto triples = read_labeled_triples(in, o.triples);
    TripleSet closed = infer_closure(triples, h);
    detail::emit(o.out, out, [&](std::ostream& s) { write_labeled_triples(s, closed); });
    err << triples.size() << " asserted, " << closed.size() << " after closure\n";
    return 0;
}

inline int cmd_stats(const Options& o, std::ostream& out, std::ostream&) {
    bool tsv = o.format == "tsv";
    bool first = true;
    for (const auto& p : o.inputs) {
        Hierarchy h = load_hierarchy(p);
        auto d = depth_histogram(h);
        if (tsv) {
            std::ostringstream s;
            write_stats_tsv(s, h, d);
            std::string text = s.str();
            out << (first ? text : text.substr(text.find('\n') + 1));
        } else {
            if (!first) out << '\n';
            write_stats_text(out, h, d);
        }
        if (o.buckets) {
            if (tsv) out << "#bucket\tcount\n";
            for (const auto& [b, n] : bucket_distribution(h))
                out << (tsv ? "#" + b + "\t" : "bucket " + b + "  ") << n << '\n';
        }
        if (o.by_source) {
            for (const auto& [b, row] : bucket_distribution_by_source(h)) {
                out << (tsv ? "#" : "bucket ") << b;
                for (const auto& [s, n] : row) out << (tsv ? "\t" : "  ") << s << '=' << n;
                out << '\n';
            }
        }
        first = false;
    }
    return 0;
}

inline int cmd_overlap(const Options& o, std::ostream& out, std::ostream&) {
    Hierarchy h = load_hierarchy(o.hierarchy);
    auto r = source_overlap(h);
    if (o.format == "tsv") write_overlap_tsv(out, r);
    else write_overlap_text(out, r);
    return 0;
}

inline int cmd_coverage(const Options& o, std::ostream& out, std::ostream&) {
    Hierarchy h = load_hierarchy(o.hierarchy);
    std::vector<Dataset> datasets;
    for (const auto& spec : o.datasets) {
        auto eq = spec.find('=');
        std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
        std::string name = eq == std::string::npos ? std::filesystem::path(spec).stem().string() : spec.substr(0, eq);
        auto in = detail::open_in(path);
        datasets.push_back(read_dataset(in, name));
    }
    ManualMapping mapping;
    if (!o.mapping.empty()) {
        auto in = detail::open_in(o.mapping);
        mapping = read_mapping(in, o.mapping);
    }
    AliasMap aliases;
    if (!o.aliases.empty()) aliases = read_alias_file(std::filesystem::path(o.aliases));
    auto r = coverage_report(datasets, h, mapping, aliases);
    if (o.format == "tsv") write_coverage_tsv(out, r);
    else write_coverage_text(out, r);
    return 0;
}

/// Counts file: `relation  value`, values as "0.12%", "3/4" or plain numbers.
inline int cmd_aggregate(const Options& o, std::ostream& out, std::ostream&) {
    Hierarchy h = load_hierarchy(o.hierarchy);
    auto in = detail::open_in(o.counts);
    std::map<std::string, Fraction> values;
    std::string line;
    std::size_t line_no = 0;
    bool percent = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && text::starts_with(line, "relation\t")) continue;
        if (text::trim(line).empty()) continue;
        auto cols = text::split(line, '\t');
        if (cols.size() != 2) throw ConfigError(o.counts + ":" + std::to_string(line_no) + ": expected relation and value");
        percent = percent || text::trim(cols[1]).ends_with('%');
        values[cols[0]] += parse_fraction(cols[1]);
    }
    auto agg = aggregate_instance_counts(values, h);
    out << "node\tvalue\texact\n";
    for (const auto& [name, v] : agg) {
        if (v.numerator() == 0 && !values.contains(name)) continue;
        out << name << '\t' << format_fraction(v, o.digits, percent) << '\t' << v << '\n';
    }
    return 0;
}

inline int cmd_completeness(const Options& o, std::ostream& out, std::ostream&) {
    auto triples = read_triples_tsv(std::filesystem::path(o.triples));
    auto type = parse_entity_type(o.head_type);
    if (!type || !is_typed(*type)) throw ConfigError("--head-type must be PER, ORG or LOC");
    CompletenessQuery q{std::set<std::string>(o.relation_ids.begin(), o.relation_ids.end()), *type, 0};
    if (o.population) {
        q.population = *o.population;
    } else if (!o.type_counts.empty()) {
        auto in = detail::open_in(o.type_counts);
        auto counts = read_type_counts_tsv(in);
        q.population = counts[*type];
    } else {
        throw ConfigError("give --population or --types");
    }
    Fraction f = kb_completeness(triples, q);
    out << format_fraction(f, o.digits, true) << '\t' << f << '\n';
    return 0;
}

inline int cmd_serve(const Options& o, std::ostream& out, std::ostream&) {
    ServiceInputs inputs;
    inputs.base = o.base.empty() ? Hierarchy(o.tag) : load_hierarchy(o.base);
    inputs.filtered = detail::read_lists(o.relations);
    inputs.canonical = detail::read_lists(o.canonical);
    if (!o.conflicts_in.empty()) {
        auto in = detail::open_in(o.conflicts_in);
        inputs.conflicts = conflicts_from_json(nlohmann::json::parse(in));
    }
    if (!o.triples.empty())
        for (const auto& t : read_triples_tsv(std::filesystem::path(o.triples))) inputs.samples.add(t);
    if (o.log.empty()) throw ConfigError("--log is required: the decision log is the service's only state");
    inputs.log_path = o.log;

    CurationService service(std::move(inputs));
    httplib::Server server;
    service.bind(server);
    static httplib::Server* running = nullptr;
    running = &server;
    std::signal(SIGINT, [](int) {
        if (running) running->stop();
    });
    std::signal(SIGTERM, [](int) {
        if (running) running->stop();
    });
    if (!server.bind_to_port(o.host, o.port)) throw Error("cannot bind " + o.host + ":" + std::to_string(o.port));
    out << "serving on http://" << o.host << ':' << o.port << " (log " << o.log << ", "
        << service.snapshot()->log.size() << " decisions replayed)" << std::endl;
    server.listen_after_bind();
    running = nullptr;
    return 0;
}

// ---------------------------------------------------------------------------
// Entry point

/// Runs one command line (without the program name).
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Relation taxonomy toolkit: ingest, canonicalize, build, curate and analyse relation hierarchies."};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    Options o;
    app.add_option("--config", o.config, "JSON configuration (type roots, threshold, prefixes)")->check(CLI::ExistingFile);

    auto* ingest = app.add_subcommand("ingest", "Parse KB dumps into typed triples, support counts and a raw relation list");
    ingest->add_option("--source", o.ingest_source, "wikidata | dbpedia | infobox")->required();
    ingest->add_option("inputs", o.inputs, "Input files (plain or gzip)")->required()->check(CLI::ExistingFile);
    ingest->add_option("-o,--out-dir", o.out_dir, "Output directory")->required();

    auto* canon = app.add_subcommand("canon", "Normalize names and merge aliases");
    canon->add_option("relations", o.relations, "Raw relation lists")->required()->check(CLI::ExistingFile);
    canon->add_option("--aliases", o.aliases, "Alias file (alias<TAB>canonical)")->check(CLI::ExistingFile);
    canon->add_option("--support", o.support, "Support index files used to recount merged relations")->check(CLI::ExistingFile);
    canon->add_option("-o,--out", o.out, "Canonical relation list (default stdout)");
    canon->add_option("--aliases-out", o.aliases_out, "Write the effective alias map");
    canon->add_option("--report", o.report, "Write the before/after count report ('-' for stdout)");
    canon->add_option("--format", o.format, "Report format: text | tsv")->check(CLI::IsMember({"text", "tsv"}));

    auto* filter = app.add_subcommand("filter", "Drop relations below the support threshold");
    filter->add_option("relations", o.relations, "Canonical relation lists")->required()->check(CLI::ExistingFile);
    filter->add_option("--threshold", o.threshold, "Minimum support (default from config, 100)");
    filter->add_option("--support", o.support, "Support index files")->check(CLI::ExistingFile);
    filter->add_option("-o,--out", o.out, "Filtered relation list (default stdout)");

    auto* build = app.add_subcommand("build", "Replay a decision log over filtered relations into a hierarchy");
    build->add_option("relations", o.relations, "Filtered relation lists")->check(CLI::ExistingFile);
    build->add_option("--canonical", o.canonical, "Unfiltered canonical lists (extra placeable relations)")->check(CLI::ExistingFile);
    build->add_option("--log", o.log, "Decision log (JSONL)")->check(CLI::ExistingFile);
    build->add_option("--base", o.base, "Starting hierarchy (default empty)")->check(CLI::ExistingFile);
    build->add_option("--tag", o.tag, "Tag of a new hierarchy");
    build->add_option("-o,--out", o.out, "Hierarchy JSON (default stdout)");

    auto* merge = app.add_subcommand("merge", "Merge per-source hierarchies; the first input wins conflicts");
    merge->add_option("inputs", o.inputs, "Hierarchy files in priority order")->required()->check(CLI::ExistingFile);
    merge->add_option("--tag", o.tag, "Tag of the merged hierarchy");
    merge->add_option("-o,--out", o.out, "Merged hierarchy (default stdout)");
    merge->add_option("--conflicts", o.conflicts_out, "Write merge conflicts as JSON");

    auto* val = app.add_subcommand("validate", "Check hierarchy invariants; exit status 1 on violations");
    val->add_option("inputs", o.inputs, "Hierarchy files")->required()->check(CLI::ExistingFile);

    auto* infer = app.add_subcommand("infer", "Extend triples with every is-a ancestor relation");
    infer->add_option("--hierarchy", o.hierarchy, "Hierarchy JSON")->required()->check(CLI::ExistingFile);
    infer->add_option("triples", o.triples, "Triples TSV (head, relation, tail)")->required()->check(CLI::ExistingFile);
    infer->add_option("-o,--out", o.out, "Closed triples (default stdout)");

    auto* stats = app.add_subcommand("stats", "Relation count and depth histogram");
    stats->add_option("inputs", o.inputs, "Hierarchy files")->required()->check(CLI::ExistingFile);
    stats->add_option("--format", o.format, "text | tsv")->check(CLI::IsMember({"text", "tsv"}));
    stats->add_flag("--buckets", o.buckets, "Also print relations per bucket");
    stats->add_flag("--by-source", o.by_source, "Also print relations per bucket and source");

    auto* overlap = app.add_subcommand("overlap", "Relations shared between sources");
    overlap->add_option("hierarchy", o.hierarchy, "Merged hierarchy")->required()->check(CLI::ExistingFile);
    overlap->add_option("--format", o.format, "text | tsv")->check(CLI::IsMember({"text", "tsv"}));

    auto* coverage = app.add_subcommand("coverage", "How many RE dataset relations the hierarchy subsumes");
    coverage->add_option("--hierarchy", o.hierarchy, "Hierarchy JSON")->required()->check(CLI::ExistingFile);
    coverage->add_option("datasets", o.datasets, "Dataset relation lists as name=path or path")->required();
    coverage->add_option("--mapping", o.mapping, "Manual mapping (dataset_relation<TAB>hierarchy_relation)")->check(CLI::ExistingFile);
    coverage->add_option("--aliases", o.aliases, "Alias file")->check(CLI::ExistingFile);
    coverage->add_option("--format", o.format, "text | tsv")->check(CLI::IsMember({"text", "tsv"}));

    auto* aggregate = app.add_subcommand("aggregate", "Sum instance counts up the hierarchy with exact fractions");
    aggregate->add_option("--hierarchy", o.hierarchy, "Hierarchy JSON")->required()->check(CLI::ExistingFile);
    aggregate->add_option("counts", o.counts, "Counts TSV (relation, value)")->required()->check(CLI::ExistingFile);
    aggregate->add_option("--digits", o.digits, "Fractional digits in the decimal column");

    auto* completeness = app.add_subcommand("completeness", "Share of head-type entities that have a relation");
    completeness->add_option("triples", o.triples, "Typed triples TSV from ingest")->required()->check(CLI::ExistingFile);
    completeness->add_option("--relation", o.relation_ids, "Raw relation identifier(s)")->required();
    completeness->add_option("--head-type", o.head_type, "PER | ORG | LOC");
    completeness->add_option("--population", o.population, "Number of head-type entities");
    completeness->add_option("--types", o.type_counts, "Type counts TSV from ingest")->check(CLI::ExistingFile);
    completeness->add_option("--digits", o.digits, "Fractional digits");

    auto* serve = app.add_subcommand("serve", "Run the HTTP curation service");
    serve->add_option("relations", o.relations, "Filtered relation lists awaiting placement")->check(CLI::ExistingFile);
    serve->add_option("--canonical", o.canonical, "Unfiltered canonical lists")->check(CLI::ExistingFile);
    serve->add_option("--base", o.base, "Starting hierarchy (e.g. a merge result)")->check(CLI::ExistingFile);
    serve->add_option("--tag", o.tag, "Tag of a new hierarchy");
    serve->add_option("--log", o.log, "Decision log; replayed on start, appended on every accepted decision")->required();
    serve->add_option("--triples", o.triples, "Typed triples TSV for support previews")->check(CLI::ExistingFile);
    serve->add_option("--conflicts", o.conflicts_in, "Merge conflicts JSON")->check(CLI::ExistingFile);
    serve->add_option("--host", o.host, "Bind address");
    serve->add_option("--port", o.port, "Port")->check(CLI::Range(1, 65535));

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    using Handler = int (*)(const Options&, std::ostream&, std::ostream&);
    const std::vector<std::pair<CLI::App*, Handler>> handlers = {
        {ingest, cmd_ingest},     {canon, cmd_canon},       {filter, cmd_filter},     {build, cmd_build},
        {merge, cmd_merge},       {val, cmd_validate},      {infer, cmd_infer},       {stats, cmd_stats},
        {overlap, cmd_overlap},   {coverage, cmd_coverage}, {aggregate, cmd_aggregate}, {completeness, cmd_completeness},
        {serve, cmd_serve},
    };
    try {
        for (const auto& [sub, handler] : handlers)
            if (sub->parsed()) return handler(o, out, err);
    } catch (const ReplayError& e) {
        err << "reltax: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "reltax: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

} // namespace reltax::cli
