#pragma once

// HTTP curation service. Reads are served from immutable snapshots; all
// mutations go through one writer that appends the decision to the log file
// before the new snapshot becomes visible.

#include "reltax/analysis.hpp"
#include "reltax/curation.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <ctime>
#include <mutex>

namespace reltax {

/// Sample support triples per raw relation identifier.
class SupportSamples {
public:
    explicit SupportSamples(std::size_t per_relation_cap = 1000) : cap_(per_relation_cap) {}

    void add(const Triple& t) {
        auto& v = by_relation_[t.relation];
        if (v.size() < cap_) v.push_back(t);
    }

    /// Up to `limit` triples for any of `names`, in the order given.
    std::vector<Triple> sample(const std::vector<std::string>& names, std::size_t limit) const {
        std::vector<Triple> out;
        for (const auto& n : names) {
            auto it = by_relation_.find(n);
            if (it == by_relation_.end()) continue;
            for (const auto& t : it->second) {
                if (out.size() >= limit) return out;
                out.push_back(t);
            }
        }
        return out;
    }

private:
    std::size_t cap_;
    std::map<std::string, std::vector<Triple>> by_relation_;
};

struct ServiceInputs {
    Hierarchy base;
    std::vector<RelationRecord> filtered;
    std::vector<RelationRecord> canonical;
    std::vector<MergeConflict> conflicts;
    SupportSamples samples;
    std::filesystem::path log_path; // created on first append when missing
};

/// Outcome of a submitted decision, mapped to an HTTP status by the routes.
struct SubmitResult {
    int status = 200;
    nlohmann::ordered_json body;
};

class CurationService {
public:
    static constexpr std::size_t kDefaultSupportLimit = 20;

    /// Boots by replaying the existing log, if any.
    explicit CurationService(ServiceInputs inputs)
        : base_(std::move(inputs.base)),
          filtered_(std::move(inputs.filtered)),
          canonical_(std::move(inputs.canonical)),
          conflicts_(std::move(inputs.conflicts)),
          samples_(std::move(inputs.samples)),
          log_path_(std::move(inputs.log_path)) {
        std::vector<CurationDecision> log;
        if (!log_path_.empty() && std::filesystem::exists(log_path_)) log = read_decision_log(log_path_);
        auto snap = std::make_shared<Snapshot>();
        snap->state = replay_decisions(base_, filtered_, canonical_, log);
        snap->log = std::move(log);
        publish(std::move(snap));
    }

    struct Snapshot {
        CurationState state;
        std::vector<CurationDecision> log;
    };

    std::shared_ptr<const Snapshot> snapshot() const {
        std::lock_guard lock(snapshot_mutex_);
        return snapshot_;
    }

    // -- read views ---------------------------------------------------------

    nlohmann::ordered_json buckets() const {
        auto snap = snapshot();
        const Hierarchy& h = snap->state.hierarchy();
        std::map<std::string, std::size_t> unplaced;
        for (const Candidate* c : snap->state.unplaced())
            if (auto b = c->bucket()) ++unplaced[b->name()];
        auto out = nlohmann::ordered_json::array();
        for (const auto& [name, count] : bucket_distribution(h)) {
            auto b = *parse_bucket(name);
            out.push_back({{"name", name},
                           {"head", to_string(b.head)},
                           {"tail", to_string(b.tail)},
                           {"placed", count},
                           {"unplaced", unplaced[name]}});
        }
        return out;
    }

    /// status: "", "placed" or "unplaced"; bucket: "" or a bucket name.
    nlohmann::ordered_json relations(const std::string& status, const std::string& bucket) const {
        if (!status.empty() && status != "placed" && status != "unplaced")
            throw ConfigError("status must be 'placed' or 'unplaced'");
        if (!bucket.empty() && !parse_bucket(bucket)) throw ConfigError("unknown bucket '" + bucket + "'");
        auto snap = snapshot();
        const Hierarchy& h = snap->state.hierarchy();
        auto out = nlohmann::ordered_json::array();
        if (status != "unplaced") {
            for (const auto& name : h.canonical_order()) {
                const RelationNode& n = h.at(name);
                if (!bucket.empty() && n.bucket.name() != bucket) continue;
                out.push_back(relation_json(name, "placed", n.bucket, n.sources, snap->state.candidate(name), &h));
            }
        }
        if (status != "placed") {
            for (const Candidate* c : snap->state.unplaced()) {
                auto b = c->bucket();
                if (!bucket.empty() && (!b || b->name() != bucket)) continue;
                out.push_back(relation_json(c->name, "unplaced", b, c->sources, c, nullptr));
            }
        }
        return out;
    }

    /// Returns nullopt when the relation is unknown.
    std::optional<nlohmann::ordered_json> support(const std::string& name, std::size_t limit) const {
        auto snap = snapshot();
        const Candidate* c = snap->state.candidate(name);
        if (!c && !snap->state.hierarchy().contains(name)) return std::nullopt;
        std::vector<std::string> keys{name};
        if (c) keys.insert(keys.end(), c->aliases.begin(), c->aliases.end());
        std::sort(keys.begin() + 1, keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        auto triples = nlohmann::ordered_json::array();
        for (const auto& t : samples_.sample(keys, limit))
            triples.push_back({{"head", t.head},
                               {"relation", t.relation},
                               {"tail", t.tail},
                               {"headType", to_string(t.head_type)},
                               {"tailType", to_string(t.tail_type)},
                               {"source", to_string(t.source)}});
        return nlohmann::ordered_json{{"name", name}, {"supportTotal", c ? c->support_total() : 0}, {"samples", triples}};
    }

    std::string hierarchy_document() const { return serialize(snapshot()->state.hierarchy()); }

    nlohmann::ordered_json stats() const {
        auto snap = snapshot();
        const Hierarchy& h = snap->state.hierarchy();
        DepthHistogram d = depth_histogram(h);
        nlohmann::ordered_json buckets;
        for (const auto& [name, count] : bucket_distribution(h)) buckets[name] = count;
        return {{"tag", h.tag()},
                {"total", d.total},
                {"depth3", d.depth3},
                {"depth4", d.depth4},
                {"depth5", d.depth5},
                {"meanDepth", d.total ? d.mean() : 0.0},
                {"buckets", buckets},
                {"unplaced", snap->state.unplaced().size()},
                {"lastSequence", snap->state.last_sequence()}};
    }

    nlohmann::ordered_json decisions_since(std::uint64_t since) const {
        auto snap = snapshot();
        auto out = nlohmann::ordered_json::array();
        for (const auto& d : snap->log)
            if (d.sequence > since) out.push_back(to_json(d));
        return out;
    }

    /// Merge conflicts not yet settled by a RESOLVE_CONFLICT decision.
    nlohmann::ordered_json open_conflicts() const {
        auto snap = snapshot();
        std::set<std::string> resolved;
        for (const auto& d : snap->log)
            if (auto* a = std::get_if<ResolveConflictAction>(&d.action)) resolved.insert(a->name);
        std::vector<MergeConflict> open;
        for (const auto& c : conflicts_)
            if (!resolved.contains(c.name)) open.push_back(c);
        return conflicts_to_json(open);
    }

    // -- the single writer ----------------------------------------------------

    /// Validates and applies one decision. The body carries the action and,
    /// optionally, `actor`, `timestamp` and `expectedSeq` (the last sequence
    /// number the client saw; a mismatch is rejected as stale).
    SubmitResult submit(const std::string& body) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::parse_error& e) {
            return error(400, "malformed", std::string("request body is not JSON: ") + e.what());
        }
        CurationDecision d;
        try {
            d.action = action_from_json(j);
            d.actor = j.value("actor", std::string("anonymous"));
            d.timestamp = j.value("timestamp", std::string{});
        } catch (const Error& e) {
            return error(400, "malformed", e.what());
        } catch (const nlohmann::json::exception& e) {
            return error(400, "malformed", e.what());
        }
        if (d.timestamp.empty()) d.timestamp = now_utc();

        std::lock_guard lock(writer_mutex_);
        auto current = snapshot();
        std::uint64_t last = current->state.last_sequence();
        if (auto e = j.find("expectedSeq"); e != j.end() && !e->is_null()) {
            if (!e->is_number_unsigned()) return error(400, "malformed", "expectedSeq must be a non-negative integer");
            if (e->get<std::uint64_t>() != last)
                return error(409, "stale", "log has advanced to sequence " + std::to_string(last));
        }
        d.sequence = last + 1;
        d.action = current->state.resolve(d.action);

        auto next = std::make_shared<Snapshot>(*current);
        try {
            next->state.apply(d);
        } catch (const ReplayError& e) {
            if (!e.kind()) return error(422, "violation", e.what());
            int status = *e.kind() == HierarchyError::Kind::DuplicateName ? 409 : 422;
            auto r = error(status, status == 409 ? "conflict" : "violation", e.what());
            r.body["violation"] = std::string(to_string(*e.kind()));
            return r;
        }
        try {
            append_to_log(d);
        } catch (const Error& e) {
            return error(500, "log_write_failed", e.what());
        }
        next->log.push_back(d);
        publish(std::move(next));
        return {201, to_json(d)};
    }

    /// Registers all routes on `server`.
    void bind(httplib::Server& server) {
        auto send = [](httplib::Response& res, int status, const nlohmann::ordered_json& body) {
            res.status = status;
            res.set_content(body.dump(), "application/json");
        };
        auto guarded = [send](auto handler) {
            return [handler, send](const httplib::Request& req, httplib::Response& res) {
                try {
                    handler(req, res);
                } catch (const ConfigError& e) {
                    send(res, 400, error(400, "malformed", e.what()).body);
                } catch (const std::exception& e) {
                    send(res, 500, error(500, "internal", e.what()).body);
                }
            };
        };

        server.Get("/buckets", guarded([this, send](const httplib::Request&, httplib::Response& res) {
            send(res, 200, buckets());
        }));
        server.Get("/relations", guarded([this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, 200, relations(req.get_param_value("status"), req.get_param_value("bucket")));
        }));
        server.Get("/relations/:name/support", guarded([this, send](const httplib::Request& req, httplib::Response& res) {
            std::size_t limit = kDefaultSupportLimit;
            if (req.has_param("limit")) limit = parse_limit(req.get_param_value("limit"));
            std::string name = httplib::detail::decode_url(req.path_params.at("name"), false);
            auto body = support(name, limit);
            if (!body) return send(res, 404, error(404, "not_found", "unknown relation '" + name + "'").body);
            send(res, 200, *body);
        }));
        server.Get("/hierarchy", guarded([this](const httplib::Request&, httplib::Response& res) {
            res.set_content(hierarchy_document(), "application/json");
        }));
        server.Get("/stats", guarded([this, send](const httplib::Request&, httplib::Response& res) {
            send(res, 200, stats());
        }));
        server.Get("/conflicts", guarded([this, send](const httplib::Request&, httplib::Response& res) {
            send(res, 200, open_conflicts());
        }));
        server.Get("/decisions", guarded([this, send](const httplib::Request& req, httplib::Response& res) {
            std::uint64_t since = req.has_param("since") ? parse_limit(req.get_param_value("since")) : 0;
            send(res, 200, decisions_since(since));
        }));
        server.Post("/decisions", guarded([this, send](const httplib::Request& req, httplib::Response& res) {
            auto r = submit(req.body);
            send(res, r.status, r.body);
        }));
    }

private:
    static SubmitResult error(int status, const std::string& kind, const std::string& message) {
        return {status, nlohmann::ordered_json{{"error", kind}, {"message", message}}};
    }

    static std::size_t parse_limit(const std::string& s) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || s.front() == '-') throw ConfigError("expected a non-negative integer, got '" + s + "'");
        return static_cast<std::size_t>(v);
    }

    static std::string now_utc() {
        std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    static nlohmann::ordered_json relation_json(const std::string& name, const char* status,
                                                std::optional<Bucket> bucket, SourceSet sources, const Candidate* c,
                                                const Hierarchy* h) {
        nlohmann::ordered_json j;
        j["name"] = name;
        j["status"] = status;
        j["bucket"] = bucket ? nlohmann::ordered_json(bucket->name()) : nlohmann::ordered_json();
        auto src = nlohmann::ordered_json::array();
        for (Source s : sources.items()) src.push_back(to_string(s));
        j["sources"] = src;
        if (h) {
            const RelationNode& n = h->at(name);
            j["parent"] = n.parent_key();
            j["depth"] = h->depth(name);
            j["introduced"] = n.introduced;
        }
        j["supportTotal"] = c ? c->support_total() : 0;
        j["aliases"] = c ? c->aliases : std::set<std::string>{};
        return j;
    }

    void append_to_log(const CurationDecision& d) {
        if (log_path_.empty()) return;
        std::ofstream out(log_path_, std::ios::app | std::ios::binary);
        if (!out) throw Error("cannot open decision log " + log_path_.string() + " for appending");
        out << to_jsonl(d);
        out.flush();
        if (!out) throw Error("failed to append to decision log " + log_path_.string());
    }

    void publish(std::shared_ptr<const Snapshot> snap) {
        std::lock_guard lock(snapshot_mutex_);
        snapshot_ = std::move(snap);
    }

    Hierarchy base_;
    std::vector<RelationRecord> filtered_;
    std::vector<RelationRecord> canonical_;
    std::vector<MergeConflict> conflicts_;
    SupportSamples samples_;
    std::filesystem::path log_path_;

    std::mutex writer_mutex_;
    mutable std::mutex snapshot_mutex_;
    std::shared_ptr<const Snapshot> snapshot_;
};

} // namespace reltax
