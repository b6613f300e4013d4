#pragma once

// Taxonomic closure over labeled triples and instance-count aggregation.

#include "reltax/hierarchy.hpp"

#include <boost/rational.hpp>

#include <tuple>

namespace reltax {

struct LabeledTriple {
    std::string head;
    std::string relation;
    std::string tail;
    bool derived = false;

    auto key() const { return std::tie(head, relation, tail); }
};

/// Set ordering ignores `derived`: one triple per (head, relation, tail).
struct TripleKeyLess {
    bool operator()(const LabeledTriple& a, const LabeledTriple& b) const { return a.key() < b.key(); }
};

using TripleSet = std::set<LabeledTriple, TripleKeyLess>;

/// Adds (head, ancestor, tail) for every ancestor of each triple's relation.
/// Asserted triples win over derived duplicates. Argument order is kept.
inline TripleSet infer_closure(std::span<const LabeledTriple> triples, const Hierarchy& h) {
    TripleSet out;
    for (const auto& t : triples) {
        if (!h.contains(t.relation))
            throw HierarchyError(HierarchyError::Kind::UnknownName,
                                 "triple relation '" + t.relation + "' is not in the hierarchy");
        auto [it, fresh] = out.insert(t);
        if (!fresh && it->derived && !t.derived) {
            out.erase(it);
            out.insert(t);
        }
    }
    std::vector<LabeledTriple> derived;
    for (const auto& t : out)
        for (const auto& a : h.ancestors(t.relation)) derived.push_back({t.head, a, t.tail, true});
    for (auto& d : derived) out.insert(std::move(d)); // never displaces an existing entry
    return out;
}

inline TripleSet infer_closure(const TripleSet& triples, const Hierarchy& h) {
    std::vector<LabeledTriple> v(triples.begin(), triples.end());
    return infer_closure(v, h);
}

using Fraction = boost::rational<long long>;

/// Parses "0.12%", "0.12", "3/4" or "17" into an exact fraction. A trailing
/// '%' divides by 100.
inline Fraction parse_fraction(std::string_view s) {
    s = text::trim(s);
    bool percent = !s.empty() && s.back() == '%';
    if (percent) s.remove_suffix(1);
    if (s.empty()) throw ConfigError("empty number");
    Fraction value;
    auto slash = s.find('/');
    auto parse_int = [](std::string_view v) -> long long {
        if (v.empty()) throw ConfigError("malformed number");
        std::size_t used = 0;
        long long n = std::stoll(std::string(v), &used);
        if (used != v.size()) throw ConfigError("malformed number '" + std::string(v) + "'");
        return n;
    };
    try {
        if (slash != std::string_view::npos) {
            value = Fraction(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
        } else {
            auto dot = s.find('.');
            if (dot == std::string_view::npos) {
                value = Fraction(parse_int(s));
            } else {
                std::string_view whole = s.substr(0, dot), frac = s.substr(dot + 1);
                bool negative = !whole.empty() && whole.front() == '-';
                long long scale = 1;
                for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
                long long w = whole.empty() || whole == "-" ? 0 : parse_int(whole);
                long long f = frac.empty() ? 0 : parse_int(frac);
                if (f < 0) throw ConfigError("malformed number");
                value = Fraction(w * scale + (negative ? -f : f), scale);
            }
        }
    } catch (const std::invalid_argument&) {
        throw ConfigError("malformed number '" + std::string(s) + "'");
    } catch (const std::out_of_range&) {
        throw ConfigError("number out of range '" + std::string(s) + "'");
    } catch (const boost::bad_rational&) {
        throw ConfigError("zero denominator in '" + std::string(s) + "'");
    }
    return percent ? value / 100 : value;
}

/// Decimal text with `digits` fractional digits, rounded half away from zero.
inline std::string format_fraction(const Fraction& f, int digits, bool percent = false) {
    Fraction v = percent ? f * 100 : f;
    long long scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    Fraction scaled = v * scale;
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    long long q = scaled.numerator() / scaled.denominator();
    long long r = scaled.numerator() % scaled.denominator();
    if (2 * r >= scaled.denominator()) ++q;
    std::string digits_str = std::to_string(q);
    if (digits > 0) {
        if (digits_str.size() <= static_cast<std::size_t>(digits))
            digits_str.insert(0, static_cast<std::size_t>(digits) + 1 - digits_str.size(), '0');
        digits_str.insert(digits_str.size() - static_cast<std::size_t>(digits), ".");
    }
    return (negative && q != 0 ? "-" : "") + digits_str + (percent ? "%" : "");
}

/// Value of every node = own value + sum of its children. Keys of the result
/// are relation names, bucket names, head-type names (per/org/loc) and "rel".
inline std::map<std::string, Fraction> aggregate_instance_counts(const std::map<std::string, Fraction>& leaf_values,
                                                                 const Hierarchy& h) {
    for (const auto& [name, v] : leaf_values)
        if (!h.contains(name))
            throw HierarchyError(HierarchyError::Kind::UnknownName,
                                 "count given for '" + name + "', which is not in the hierarchy");

    std::map<std::string, Fraction> out;
    auto visit = [&](auto&& self, const std::string& name) -> Fraction {
        Fraction v;
        if (auto it = leaf_values.find(name); it != leaf_values.end()) v = it->second;
        for (const auto& c : h.children(name)) v += self(self, c);
        out[name] = v;
        return v;
    };
    Fraction root;
    for (EntityType head : kTypedEntityTypes) {
        Fraction head_total;
        for (EntityType tail : kTypedEntityTypes) {
            Bucket b{head, tail};
            Fraction bucket_total;
            for (const auto& c : h.children(b.name())) bucket_total += visit(visit, c);
            out[b.name()] = bucket_total;
            head_total += bucket_total;
        }
        out[std::string(short_name(head))] = head_total;
        root += head_total;
    }
    out[std::string(kRootName)] = root;
    return out;
}

// Triples TSV for the infer command: head, relation, tail [, derived].
inline std::vector<LabeledTriple> read_labeled_triples(std::istream& in, const std::string& name = "triples") {
    std::vector<LabeledTriple> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && text::starts_with(line, "head\t")) continue;
        if (text::trim(line).empty()) continue;
        auto cols = text::split(line, '\t');
        if (cols.size() < 3) throw ConfigError(name + ":" + std::to_string(line_no) + ": expected head, relation, tail");
        bool derived = cols.size() >= 4 && cols[3] == "1";
        out.push_back({cols[0], cols[1], cols[2], derived});
    }
    return out;
}

inline void write_labeled_triples(std::ostream& out, const TripleSet& triples) {
    out << "head\trelation\ttail\tderived\n";
    for (const auto& t : triples) out << t.head << '\t' << t.relation << '\t' << t.tail << '\t' << (t.derived ? 1 : 0) << '\n';
}

} // namespace reltax
