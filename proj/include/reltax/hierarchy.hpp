#pragma once

// The relation taxonomy: root `rel` (depth 0), head-type nodes (depth 1),
// nine buckets (depth 2), relation nodes at depths 3..5. Relation nodes form a
// single-parent tree inside one bucket.

#include "reltax/relation_record.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace reltax {

inline constexpr int kBucketDepth = 2;
inline constexpr int kMinRelationDepth = 3;
inline constexpr int kMaxDepth = 5;
inline constexpr std::string_view kRootName = "rel";

class HierarchyError : public Error {
public:
    enum class Kind { DepthOverflow, CrossBucket, DuplicateName, UnknownName, UnknownParent, Cycle, Unassignable };

    HierarchyError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

inline std::string_view to_string(HierarchyError::Kind k) {
    using K = HierarchyError::Kind;
    switch (k) {
    case K::DepthOverflow: return "depth-overflow";
    case K::CrossBucket: return "cross-bucket";
    case K::DuplicateName: return "duplicate-name";
    case K::UnknownName: return "unknown-name";
    case K::UnknownParent: return "unknown-parent";
    case K::Cycle: return "cycle";
    case K::Unassignable: return "unassignable";
    }
    return "invalid";
}

struct RelationNode {
    std::string name;
    Bucket bucket;
    std::optional<std::string> parent; // nullopt: directly under the bucket
    SourceSet sources;
    bool introduced = false;

    /// Parent as written in files: the parent node's name or the bucket name.
    std::string parent_key() const { return parent ? *parent : bucket.name(); }
};

/// Bucket with maximal support (ties: smaller bucket name), or the declared
/// bucket of an infobox record without triple support.
inline Bucket assign_bucket(const RelationRecord& record) {
    auto b = record.dominant_bucket();
    if (!b)
        throw HierarchyError(HierarchyError::Kind::Unassignable,
                             "relation '" + record.canonical_name + "' has no bucket support and no declared bucket");
    return *b;
}

class Hierarchy {
public:
    explicit Hierarchy(std::string tag = "custom") : tag_(std::move(tag)) {}

    const std::string& tag() const { return tag_; }
    void set_tag(std::string tag) { tag_ = std::move(tag); }

    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    bool contains(const std::string& name) const { return nodes_.contains(name); }
    const std::map<std::string, RelationNode>& nodes() const { return nodes_; }

    const RelationNode* find(const std::string& name) const {
        auto it = nodes_.find(name);
        return it == nodes_.end() ? nullptr : &it->second;
    }

    const RelationNode& at(const std::string& name) const {
        if (const auto* n = find(name)) return *n;
        throw HierarchyError(HierarchyError::Kind::UnknownName, "no relation named '" + name + "' in hierarchy");
    }

    /// Depth of a relation node, or nullopt when its parent chain is broken
    /// (missing parent or cycle). Only loaded, unvalidated data can be broken.
    std::optional<int> try_depth(const std::string& name) const {
        const RelationNode* n = find(name);
        if (!n) return std::nullopt;
        int d = kMinRelationDepth;
        std::size_t steps = 0;
        while (n->parent) {
            n = find(*n->parent);
            if (!n || ++steps > nodes_.size()) return std::nullopt;
            ++d;
        }
        return d;
    }

    int depth(const std::string& name) const {
        at(name);
        auto d = try_depth(name);
        if (!d) throw HierarchyError(HierarchyError::Kind::Cycle, "parent chain of '" + name + "' is broken");
        return *d;
    }

    /// Relation-node ancestors from the parent upward; buckets excluded.
    std::vector<std::string> ancestors(const std::string& name) const {
        depth(name);
        std::vector<std::string> out;
        const RelationNode* n = &at(name);
        while (n->parent) {
            out.push_back(*n->parent);
            n = &at(*n->parent);
        }
        return out;
    }

    /// Children of a node or of a bucket (by bucket name), sorted.
    std::vector<std::string> children(const std::string& parent_key) const {
        auto it = children_.find(parent_key);
        if (it == children_.end()) return {};
        return {it->second.begin(), it->second.end()};
    }

    /// Height of the subtree below `name` (0 for a leaf).
    int height(const std::string& name) const {
        int h = 0;
        for (const auto& c : children(name)) h = std::max(h, 1 + height(c));
        return h;
    }

    bool in_subtree(const std::string& root, const std::string& name) const {
        if (root == name) return true;
        for (const auto& c : children(root))
            if (in_subtree(c, name)) return true;
        return false;
    }

    /// Places an existing relation under a bucket (by name) or a relation node
    /// of the same bucket. When the relation's own bucket is known, pass it
    /// as `expected` so a mismatching parent is rejected.
    void place(const std::string& name, const std::string& parent_key, SourceSet sources,
               std::optional<Bucket> expected = std::nullopt) {
        require_absent(name);
        auto [bucket, parent] = resolve_parent(parent_key);
        if (expected && !(*expected == bucket))
            throw HierarchyError(HierarchyError::Kind::CrossBucket,
                                 "'" + name + "' belongs to bucket " + expected->name() + " but parent '" + parent_key +
                                     "' is in " + bucket.name());
        check_depth(name, parent, 0);
        insert(RelationNode{name, bucket, parent, sources, false});
    }

    /// Adds a curator-introduced grouping node with no source.
    void introduce(const std::string& name, Bucket bucket, const std::optional<std::string>& parent = std::nullopt) {
        require_absent(name);
        std::string key = parent ? *parent : bucket.name();
        auto [pbucket, p] = resolve_parent(key);
        if (!(pbucket == bucket))
            throw HierarchyError(HierarchyError::Kind::CrossBucket,
                                 "introduced node '" + name + "' is in " + bucket.name() + " but parent '" + key +
                                     "' is in " + pbucket.name());
        check_depth(name, p, 0);
        insert(RelationNode{name, bucket, p, SourceSet{}, true});
    }

    /// Moves a node (with its subtree) under a new parent in the same bucket.
    void reparent(const std::string& name, const std::string& parent_key) {
        const RelationNode& node = at(name);
        auto [bucket, parent] = resolve_parent(parent_key);
        if (!(bucket == node.bucket))
            throw HierarchyError(HierarchyError::Kind::CrossBucket, "cannot move '" + name + "' from " +
                                                                        node.bucket.name() + " to " + bucket.name());
        if (parent && in_subtree(name, *parent))
            throw HierarchyError(HierarchyError::Kind::Cycle,
                                 "cannot move '" + name + "' under its own descendant '" + *parent + "'");
        check_depth(name, parent, height(name));
        children_[node.parent_key()].erase(name);
        nodes_[name].parent = parent;
        children_[nodes_[name].parent_key()].insert(name);
    }

    void add_sources(const std::string& name, SourceSet sources) {
        at(name);
        auto& n = nodes_[name];
        n.sources |= sources;
        if (!sources.empty()) n.introduced = false;
    }

    /// Renames a node; children follow.
    void rename(const std::string& from, const std::string& to) {
        at(from);
        require_absent(to);
        RelationNode node = nodes_[from];
        auto kids = children(from);
        children_[node.parent_key()].erase(from);
        children_.erase(from);
        nodes_.erase(from);
        node.name = to;
        insert(node);
        for (const auto& k : kids) {
            nodes_[k].parent = to;
            children_[to].insert(k);
        }
    }

    /// Inserts without checks. Used by the loader so that validate() can
    /// report problems in hand-edited files. Duplicates are remembered.
    void insert_unchecked(RelationNode node) {
        if (nodes_.contains(node.name)) {
            duplicates_.push_back(node.name);
            return;
        }
        insert(std::move(node));
    }

    const std::vector<std::string>& duplicates() const { return duplicates_; }

    /// Depth-first order: buckets by name, children lexicographic. Nodes not
    /// reachable from a bucket (broken files) follow in name order.
    std::vector<std::string> canonical_order() const {
        std::vector<std::string> out;
        out.reserve(nodes_.size());
        std::set<std::string> seen;
        auto walk = [&](auto&& self, const std::string& key) -> void {
            for (const auto& c : children(key)) {
                if (!seen.insert(c).second) continue;
                out.push_back(c);
                self(self, c);
            }
        };
        for (const Bucket& b : all_buckets()) walk(walk, b.name());
        for (const auto& [name, node] : nodes_)
            if (!seen.contains(name)) out.push_back(name);
        return out;
    }

    friend bool operator==(const Hierarchy& a, const Hierarchy& b) {
        if (a.tag_ != b.tag_ || a.nodes_.size() != b.nodes_.size()) return false;
        for (const auto& [name, n] : a.nodes_) {
            const RelationNode* m = b.find(name);
            if (!m || !(m->bucket == n.bucket) || m->parent != n.parent || !(m->sources == n.sources) ||
                m->introduced != n.introduced)
                return false;
        }
        return true;
    }

private:
    void require_absent(const std::string& name) const {
        if (name.empty()) throw HierarchyError(HierarchyError::Kind::UnknownName, "relation name is empty");
        if (contains(name))
            throw HierarchyError(HierarchyError::Kind::DuplicateName, "relation '" + name + "' is already placed");
        if (parse_bucket(name) || name == kRootName)
            throw HierarchyError(HierarchyError::Kind::DuplicateName, "'" + name + "' is a reserved node name");
    }

    std::pair<Bucket, std::optional<std::string>> resolve_parent(const std::string& key) const {
        if (auto b = parse_bucket(key)) return {*b, std::nullopt};
        const RelationNode* p = find(key);
        if (!p) throw HierarchyError(HierarchyError::Kind::UnknownParent, "no parent named '" + key + "'");
        return {p->bucket, key};
    }

    void check_depth(const std::string& name, const std::optional<std::string>& parent, int subtree_height) const {
        int d = parent ? depth(*parent) + 1 : kMinRelationDepth;
        if (d + subtree_height > kMaxDepth)
            throw HierarchyError(HierarchyError::Kind::DepthOverflow,
                                 "placing '" + name + "' under '" + (parent ? *parent : std::string("bucket")) +
                                     "' would reach depth " + std::to_string(d + subtree_height) + " (max " +
                                     std::to_string(kMaxDepth) + ")");
    }

    void insert(RelationNode node) {
        std::string key = node.parent_key();
        std::string name = node.name;
        nodes_.emplace(name, std::move(node));
        children_[key].insert(name);
    }

    std::string tag_;
    std::map<std::string, RelationNode> nodes_;
    std::map<std::string, std::set<std::string>> children_;
    std::vector<std::string> duplicates_;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
    std::string kind; // depth-overflow, cross-bucket, orphan, cycle, duplicate, introduced-with-sources
    std::string node;
    std::string detail;
};

inline std::vector<Violation> validate(const Hierarchy& h) {
    std::vector<Violation> out;
    for (const auto& name : h.duplicates()) out.push_back({"duplicate", name, "name appears more than once"});
    for (const auto& [name, node] : h.nodes()) {
        if (node.parent && parse_bucket(*node.parent)) {
            out.push_back({"cross-bucket", name, "in " + node.bucket.name() + " but attached to bucket " + *node.parent});
            continue;
        }
        if (node.parent) {
            const RelationNode* p = h.find(*node.parent);
            if (!p) {
                out.push_back({"orphan", name, "parent '" + *node.parent + "' does not exist"});
                continue;
            }
            if (!(p->bucket == node.bucket))
                out.push_back({"cross-bucket", name,
                               "in " + node.bucket.name() + " but parent '" + p->name + "' is in " + p->bucket.name()});
        }
        auto d = h.try_depth(name);
        if (!d) {
            // A missing ancestor is reported as an orphan on that ancestor's child.
            bool orphaned_above = false;
            const RelationNode* n = &node;
            std::set<std::string> seen;
            while (n->parent && seen.insert(n->name).second) {
                const RelationNode* p = h.find(*n->parent);
                if (!p) {
                    orphaned_above = true;
                    break;
                }
                n = p;
            }
            if (!orphaned_above) out.push_back({"cycle", name, "parent chain loops"});
        } else if (*d > kMaxDepth) {
            out.push_back({"depth-overflow", name, "depth " + std::to_string(*d) + " exceeds " + std::to_string(kMaxDepth)});
        }
        if (node.introduced && !node.sources.empty())
            out.push_back({"introduced-with-sources", name, "introduced nodes carry no source"});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Merging

struct MergeConflict {
    struct Proposal {
        std::string hierarchy;
        std::string parent;
    };
    std::string name;
    Proposal kept;
    std::vector<Proposal> alternatives;
};

struct MergeResult {
    Hierarchy hierarchy;
    std::vector<MergeConflict> conflicts;
};

/// Unifies same-named nodes (sources unioned). When inputs disagree on a
/// node's parent, the earliest input wins and a conflict is recorded. A parent
/// that cannot be used in the result (other bucket, or too deep) sends the node
/// to its bucket, also recorded as a conflict.
inline MergeResult merge_hierarchies(std::span<const Hierarchy> inputs, std::string tag = "H") {
    MergeResult result{Hierarchy(std::move(tag)), {}};
    Hierarchy& out = result.hierarchy;
    std::map<std::string, std::size_t> conflict_index;
    std::map<std::string, std::string> origin; // name -> tag that inserted it

    auto note = [&](const std::string& name, const MergeConflict::Proposal& alt) {
        auto it = conflict_index.find(name);
        if (it == conflict_index.end()) {
            const RelationNode& n = out.at(name);
            conflict_index[name] = result.conflicts.size();
            result.conflicts.push_back({name, {origin[name], n.parent_key()}, {alt}});
            return;
        }
        auto& c = result.conflicts[it->second];
        for (const auto& a : c.alternatives)
            if (a.parent == alt.parent) return;
        c.alternatives.push_back(alt);
    };

    for (const Hierarchy& h : inputs) {
        for (const auto& name : h.canonical_order()) {
            const RelationNode& node = h.at(name);
            std::string key = node.parent_key();
            if (const RelationNode* existing = out.find(name)) {
                out.add_sources(name, node.sources);
                if (existing->parent_key() != key || !(existing->bucket == node.bucket)) note(name, {h.tag(), key});
                continue;
            }
            origin[name] = h.tag();
            bool usable = true;
            if (node.parent) {
                const RelationNode* p = out.find(*node.parent);
                usable = p && p->bucket == node.bucket && out.depth(*node.parent) + 1 <= kMaxDepth;
            }
            RelationNode copy = node;
            if (!usable) copy.parent.reset();
            out.insert_unchecked(copy);
            if (!usable) note(name, {h.tag(), key});
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// JSON form

inline nlohmann::ordered_json to_json(const Hierarchy& h) {
    nlohmann::ordered_json doc;
    doc["tag"] = h.tag();
    auto nodes = nlohmann::ordered_json::array();
    for (const auto& name : h.canonical_order()) {
        const RelationNode& n = h.at(name);
        nlohmann::ordered_json j;
        j["name"] = n.name;
        j["bucket"] = n.bucket.name();
        j["parent"] = n.parent_key();
        auto sources = nlohmann::ordered_json::array();
        for (Source s : n.sources.items()) sources.push_back(std::string(to_string(s)));
        j["sources"] = std::move(sources);
        j["introduced"] = n.introduced;
        nodes.push_back(std::move(j));
    }
    doc["nodes"] = std::move(nodes);
    return doc;
}

/// Canonical byte-stable text of a hierarchy file.
inline std::string serialize(const Hierarchy& h) { return to_json(h).dump(2) + "\n"; }

inline Hierarchy hierarchy_from_json(const nlohmann::json& doc, const std::string& where = "hierarchy") {
    if (!doc.is_object()) throw ConfigError(where + ": document is not an object");
    Hierarchy h(doc.value("tag", std::string{"custom"}));
    auto nodes = doc.find("nodes");
    if (nodes == doc.end() || !nodes->is_array()) throw ConfigError(where + ": missing nodes array");
    std::size_t i = 0;
    for (const auto& j : *nodes) {
        std::string at = where + ": node " + std::to_string(i++);
        if (!j.is_object()) throw ConfigError(at + " is not an object");
        RelationNode n;
        n.name = j.value("name", std::string{});
        if (n.name.empty()) throw ConfigError(at + " has no name");
        auto bucket = parse_bucket(j.value("bucket", std::string{}));
        if (!bucket) throw ConfigError(at + " ('" + n.name + "') has an unknown bucket");
        n.bucket = *bucket;
        std::string parent = j.value("parent", n.bucket.name());
        if (parse_bucket(parent)) {
            if (parent != n.bucket.name()) {
                // Directly under a different bucket: keep it visible to validate().
                n.parent = parent;
            }
        } else {
            n.parent = parent;
        }
        if (auto s = j.find("sources"); s != j.end()) {
            if (!s->is_array()) throw ConfigError(at + " sources is not an array");
            for (const auto& src : *s) {
                auto parsed = src.is_string() ? parse_source(src.get<std::string>()) : std::nullopt;
                if (!parsed) throw ConfigError(at + " has an unknown source");
                n.sources.insert(*parsed);
            }
        }
        n.introduced = j.value("introduced", false);
        h.insert_unchecked(std::move(n));
    }
    return h;
}

inline Hierarchy load_hierarchy(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open hierarchy " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return hierarchy_from_json(doc, path.string());
}

inline void save_hierarchy(const std::filesystem::path& path, const Hierarchy& h) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << serialize(h);
}

inline nlohmann::ordered_json conflicts_to_json(std::span<const MergeConflict> conflicts) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : conflicts) {
        nlohmann::ordered_json j;
        j["name"] = c.name;
        j["kept"] = {{"hierarchy", c.kept.hierarchy}, {"parent", c.kept.parent}};
        auto alts = nlohmann::ordered_json::array();
        for (const auto& a : c.alternatives) alts.push_back({{"hierarchy", a.hierarchy}, {"parent", a.parent}});
        j["alternatives"] = std::move(alts);
        arr.push_back(std::move(j));
    }
    return arr;
}

inline std::vector<MergeConflict> conflicts_from_json(const nlohmann::json& doc) {
    if (!doc.is_array()) throw ConfigError("conflicts: expected an array");
    auto proposal = [](const nlohmann::json& j) {
        if (!j.is_object()) throw ConfigError("conflicts: proposal is not an object");
        return MergeConflict::Proposal{j.value("hierarchy", std::string{}), j.value("parent", std::string{})};
    };
    std::vector<MergeConflict> out;
    try {
        for (const auto& j : doc) {
            MergeConflict c;
            c.name = j.at("name").get<std::string>();
            c.kept = proposal(j.at("kept"));
            for (const auto& a : j.value("alternatives", nlohmann::json::array())) c.alternatives.push_back(proposal(a));
            out.push_back(std::move(c));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("conflicts: ") + e.what());
    }
    return out;
}

} // namespace reltax
