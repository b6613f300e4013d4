#pragma once

// Curation decisions and their replay. The decision log (JSONL, append-only)
// is the source of truth for a curated hierarchy: the same base and the same
// log always rebuild the same hierarchy.

#include "reltax/canonicalize.hpp"
#include "reltax/hierarchy.hpp"

#include <nlohmann/json.hpp>

#include <variant>

namespace reltax {

struct PlaceAction {
    std::string name;
    std::string parent; // bucket name or relation name
};

struct IntroduceAction {
    std::string name;
    Bucket bucket;
    std::optional<std::string> parent;
};

/// Sets the parent of an already placed node. Used to settle merge conflicts
/// and to move nodes under introduced parents.
struct ResolveConflictAction {
    std::string name;
    std::string chosen_parent;
};

/// Declares an alias group. An empty representative is chosen by rule.
struct ChooseAliasAction {
    std::vector<std::string> group;
    std::string representative;
};

using CurationAction = std::variant<PlaceAction, IntroduceAction, ResolveConflictAction, ChooseAliasAction>;

struct CurationDecision {
    std::uint64_t sequence = 0;
    std::string timestamp;
    std::string actor;
    CurationAction action;
};

class ReplayError : public Error {
public:
    ReplayError(std::uint64_t sequence, const std::string& what,
                std::optional<HierarchyError::Kind> kind = std::nullopt)
        : Error("decision " + std::to_string(sequence) + ": " + what), sequence_(sequence), kind_(kind) {}
    std::uint64_t sequence() const noexcept { return sequence_; }
    /// Set when a hierarchy invariant rejected the decision.
    std::optional<HierarchyError::Kind> kind() const noexcept { return kind_; }

private:
    std::uint64_t sequence_;
    std::optional<HierarchyError::Kind> kind_;
};

// ---------------------------------------------------------------------------
// JSON form

inline std::string_view action_name(const CurationAction& a) {
    return std::visit(
        [](const auto& act) -> std::string_view {
            using T = std::decay_t<decltype(act)>;
            if constexpr (std::is_same_v<T, PlaceAction>) return "PLACE";
            else if constexpr (std::is_same_v<T, IntroduceAction>) return "INTRODUCE";
            else if constexpr (std::is_same_v<T, ResolveConflictAction>) return "RESOLVE_CONFLICT";
            else return "CHOOSE_ALIAS";
        },
        a);
}

inline nlohmann::ordered_json to_json(const CurationDecision& d) {
    nlohmann::ordered_json j;
    j["seq"] = d.sequence;
    j["timestamp"] = d.timestamp;
    j["actor"] = d.actor;
    j["action"] = std::string(action_name(d.action));
    std::visit(
        [&](const auto& act) {
            using T = std::decay_t<decltype(act)>;
            if constexpr (std::is_same_v<T, PlaceAction>) {
                j["name"] = act.name;
                j["parent"] = act.parent;
            } else if constexpr (std::is_same_v<T, IntroduceAction>) {
                j["name"] = act.name;
                j["bucket"] = act.bucket.name();
                if (act.parent) j["parent"] = *act.parent;
            } else if constexpr (std::is_same_v<T, ResolveConflictAction>) {
                j["name"] = act.name;
                j["chosenParent"] = act.chosen_parent;
            } else {
                j["group"] = act.group;
                j["representative"] = act.representative;
            }
        },
        d.action);
    return j;
}

namespace detail {

inline std::string required_string(const nlohmann::json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end() || !it->is_string() || it->get_ref<const std::string&>().empty())
        throw ConfigError(std::string("decision is missing string field '") + field + "'");
    return it->get<std::string>();
}

} // namespace detail

/// Parses the action part of a decision (everything except seq/timestamp/actor).
inline CurationAction action_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("decision is not an object");
    std::string kind = detail::required_string(j, "action");
    if (kind == "PLACE") return PlaceAction{detail::required_string(j, "name"), detail::required_string(j, "parent")};
    if (kind == "INTRODUCE") {
        auto bucket = parse_bucket(detail::required_string(j, "bucket"));
        if (!bucket) throw ConfigError("INTRODUCE has an unknown bucket");
        IntroduceAction a{detail::required_string(j, "name"), *bucket, std::nullopt};
        if (auto p = j.find("parent"); p != j.end() && !p->is_null()) {
            if (!p->is_string()) throw ConfigError("INTRODUCE parent is not a string");
            if (p->get<std::string>() != bucket->name()) a.parent = p->get<std::string>();
        }
        return a;
    }
    if (kind == "RESOLVE_CONFLICT")
        return ResolveConflictAction{detail::required_string(j, "name"), detail::required_string(j, "chosenParent")};
    if (kind == "CHOOSE_ALIAS") {
        auto g = j.find("group");
        if (g == j.end() || !g->is_array() || g->size() < 2) throw ConfigError("CHOOSE_ALIAS needs a group of two or more names");
        ChooseAliasAction a;
        for (const auto& n : *g) {
            if (!n.is_string() || n.get_ref<const std::string&>().empty())
                throw ConfigError("CHOOSE_ALIAS group entries must be names");
            a.group.push_back(n.get<std::string>());
        }
        a.representative = j.value("representative", std::string{});
        return a;
    }
    throw ConfigError("unknown decision action '" + kind + "'");
}

inline CurationDecision decision_from_json(const nlohmann::json& j) {
    CurationDecision d;
    d.action = action_from_json(j);
    auto seq = j.find("seq");
    if (seq == j.end() || !seq->is_number_unsigned()) throw ConfigError("decision is missing 'seq'");
    d.sequence = seq->get<std::uint64_t>();
    d.timestamp = j.value("timestamp", std::string{});
    d.actor = j.value("actor", std::string{});
    return d;
}

inline std::string to_jsonl(const CurationDecision& d) { return to_json(d).dump() + "\n"; }

inline std::vector<CurationDecision> read_decision_log(std::istream& in, const std::string& name = "decision log") {
    std::vector<CurationDecision> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(decision_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(name + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const ConfigError& e) {
            throw ConfigError(name + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

inline std::vector<CurationDecision> read_decision_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open decision log " + path.string());
    return read_decision_log(in, path.string());
}

// ---------------------------------------------------------------------------
// State

/// A relation that may be placed: merged over all input records sharing a
/// canonical name.
struct Candidate {
    std::string name;
    SourceSet sources;
    BucketCounts support{};
    std::uint64_t unbucketed = 0;
    std::optional<Bucket> declared_bucket;
    std::set<std::string> aliases;
    bool filtered = false; // from a filtered list (must eventually be placed)

    std::uint64_t support_total() const { return total(support) + unbucketed; }

    RelationRecord as_record() const {
        RelationRecord r;
        r.canonical_name = name;
        r.raw_name = name;
        r.support = support;
        r.unbucketed = unbucketed;
        r.declared_bucket = declared_bucket;
        r.aliases = aliases;
        r.stage = filtered ? Stage::FILTERED : Stage::CANONICAL;
        return r;
    }

    std::optional<Bucket> bucket() const { return as_record().dominant_bucket(); }
};

class CurationState {
public:
    CurationState() = default;

    /// `filtered` relations are the ones awaiting placement; `canonical`
    /// relations may additionally be placed as parents.
    CurationState(Hierarchy base, std::span<const RelationRecord> filtered,
                  std::span<const RelationRecord> canonical = {})
        : hierarchy_(std::move(base)) {
        for (const auto& r : filtered) add_candidate(r, true);
        for (const auto& r : canonical) add_candidate(r, false);
    }

    const Hierarchy& hierarchy() const { return hierarchy_; }
    const std::map<std::string, Candidate>& candidates() const { return candidates_; }
    const AliasMap& alias_choices() const { return alias_choices_; }
    std::uint64_t last_sequence() const { return last_sequence_; }

    const Candidate* candidate(const std::string& name) const {
        auto it = candidates_.find(name);
        return it == candidates_.end() ? nullptr : &it->second;
    }

    /// Filtered relations not yet in the hierarchy, by name.
    std::vector<const Candidate*> unplaced() const {
        std::vector<const Candidate*> out;
        for (const auto& [name, c] : candidates_)
            if (c.filtered && !hierarchy_.contains(name)) out.push_back(&c);
        return out;
    }

    /// Applies one action or throws, leaving the state unchanged.
    void apply(const CurationAction& action) {
        CurationState next = *this;
        std::visit([&](const auto& a) { next.apply_one(a); }, action);
        *this = std::move(next);
    }

    /// Applies a decision, enforcing increasing sequence numbers.
    void apply(const CurationDecision& d) {
        if (d.sequence <= last_sequence_)
            throw ReplayError(d.sequence, "sequence numbers must increase (previous " + std::to_string(last_sequence_) + ")");
        try {
            apply(d.action);
        } catch (const HierarchyError& e) {
            throw ReplayError(d.sequence, e.what(), e.kind());
        } catch (const Error& e) {
            throw ReplayError(d.sequence, e.what());
        }
        last_sequence_ = d.sequence;
    }

    /// Fills in an empty CHOOSE_ALIAS representative using the group rule.
    CurationAction resolve(CurationAction action) const {
        if (auto* a = std::get_if<ChooseAliasAction>(&action); a && a->representative.empty()) {
            std::vector<std::pair<std::string, SourceSet>> group;
            for (const auto& m : a->group) group.emplace_back(m, sources_of(m));
            a->representative = choose_representative(group);
        }
        return action;
    }

private:
    void add_candidate(const RelationRecord& r, bool filtered) {
        const std::string& name = r.canonical_name.empty() ? r.raw_name : r.canonical_name;
        auto& c = candidates_[name];
        c.name = name;
        c.sources.insert(r.source);
        for (std::size_t i = 0; i < c.support.size(); ++i) c.support[i] += r.support[i];
        c.unbucketed += r.unbucketed;
        if (!c.declared_bucket) c.declared_bucket = r.declared_bucket;
        c.aliases.insert(r.aliases.begin(), r.aliases.end());
        c.filtered = c.filtered || filtered;
    }

    SourceSet sources_of(const std::string& name) const {
        SourceSet s;
        if (const auto* c = candidate(name)) s |= c->sources;
        if (const auto* n = hierarchy_.find(name)) s |= n->sources;
        return s;
    }

    void apply_one(const PlaceAction& a) {
        const Candidate* c = candidate(a.name);
        if (!c)
            throw HierarchyError(HierarchyError::Kind::UnknownName,
                                 "'" + a.name + "' is not in the filtered or canonical relation lists; introduce it instead");
        hierarchy_.place(a.name, a.parent, c->sources, assign_bucket(c->as_record()));
    }

    void apply_one(const IntroduceAction& a) {
        if (candidate(a.name))
            throw HierarchyError(HierarchyError::Kind::DuplicateName,
                                 "'" + a.name + "' exists in the relation lists; place it instead of introducing it");
        hierarchy_.introduce(a.name, a.bucket, a.parent);
    }

    void apply_one(const ResolveConflictAction& a) { hierarchy_.reparent(a.name, a.chosen_parent); }

    void apply_one(const ChooseAliasAction& in) {
        ChooseAliasAction a = std::get<ChooseAliasAction>(resolve(in));
        const std::string& rep = a.representative;
        if (std::find(a.group.begin(), a.group.end(), rep) == a.group.end())
            throw ConfigError("representative '" + rep + "' is not a member of the alias group");
        for (const auto& m : a.group) {
            if (m == rep) continue;
            if (hierarchy_.contains(m)) {
                if (hierarchy_.contains(rep))
                    throw HierarchyError(HierarchyError::Kind::DuplicateName,
                                         "both '" + m + "' and '" + rep + "' are placed; move or keep one first");
                hierarchy_.rename(m, rep);
            }
            if (auto it = candidates_.find(m); it != candidates_.end()) {
                Candidate moved = std::move(it->second);
                candidates_.erase(it);
                auto& target = candidates_[rep];
                target.name = rep;
                target.sources |= moved.sources;
                for (std::size_t i = 0; i < target.support.size(); ++i) target.support[i] += moved.support[i];
                target.unbucketed += moved.unbucketed;
                if (!target.declared_bucket) target.declared_bucket = moved.declared_bucket;
                target.aliases.insert(moved.aliases.begin(), moved.aliases.end());
                target.aliases.insert(m);
                target.filtered = target.filtered || moved.filtered;
            }
            if (hierarchy_.contains(rep) && candidates_.contains(rep))
                hierarchy_.add_sources(rep, candidates_[rep].sources);
            alias_choices_.set(m, rep, Provenance::MANUAL);
        }
        alias_choices_.check_acyclic();
    }

    Hierarchy hierarchy_;
    std::map<std::string, Candidate> candidates_;
    AliasMap alias_choices_;
    std::uint64_t last_sequence_ = 0;
};

/// Rebuilds a curated hierarchy from a base and a decision log. Throws
/// ReplayError carrying the sequence number of the first bad decision.
inline CurationState replay_decisions(Hierarchy base, std::span<const RelationRecord> filtered,
                                      std::span<const RelationRecord> canonical,
                                      std::span<const CurationDecision> log) {
    CurationState state(std::move(base), filtered, canonical);
    for (const auto& d : log) state.apply(d);
    return state;
}

} // namespace reltax
