#!/usr/bin/env python3
"""Regenerate the hierarchy and coverage fixtures under tests/fixtures/.

The fixtures are a synthetic stand-in for the published relation hierarchy.
They are constructed so that their aggregate statistics match the published
ones (relation counts per depth for H, Hi, Hd, Hw; bucket extremes; three-way
source overlap; RE dataset coverage counts). Node names are partly real
relation names and partly generated from a small vocabulary.

Construction:
  1. Build the common hierarchy H as a tree (depth 3..5 within 9 buckets).
  2. Assign source sets to the non-introduced nodes with fixed region sizes.
  3. Project H onto each source: a node's parent in Hs is its nearest
     ancestor in H that carries source s (or the bucket).
  4. Hill-climb over source assignments until every projected depth
     histogram matches the targets.
  5. Emit the curation log that turns merge(Hi, Hd, Hw) back into H.

Usage: python3 tools/fixtures/make_fixtures.py [out_dir]
"""

import json
import random
import sys
from pathlib import Path

SEED = 20191103

BUCKETS = ["loc-loc", "loc-org", "loc-per", "org-loc", "org-org", "org-per",
           "per-loc", "per-org", "per-per"]
BUCKET_SIZES = {"per-per": 95, "per-org": 66, "per-loc": 82, "org-per": 58,
                "org-org": 75, "org-loc": 24, "loc-per": 42, "loc-org": 68,
                "loc-loc": 113}
DEPTH_TARGET_H = {3: 357, 4: 247, 5: 19}
DEPTH_TARGET = {
    "infobox": {3: 177, 4: 168, 5: 6},
    "dbpedia": {3: 162, 4: 110, 5: 10},
    "wikidata": {3: 209, 4: 52, 5: 6},
}
# Region sizes over the 611 non-introduced nodes. Three-way = 61 (9.98%).
REGIONS = [
    (("infobox",), 178), (("dbpedia",), 96), (("wikidata",), 109),
    (("dbpedia", "infobox"), 70), (("infobox", "wikidata"), 42),
    (("dbpedia", "wikidata"), 55), (("dbpedia", "infobox", "wikidata"), 61),
]
SOURCES = ["infobox", "dbpedia", "wikidata"]  # merge order

# (name, bucket, parent-or-None). Parents precede children.
SEEDS = [
    ("parent", "per-per", None), ("father", "per-per", "parent"),
    ("mother", "per-per", "parent"), ("spouse", "per-per", None),
    ("sibling", "per-per", None), ("brother", "per-per", "sibling"),
    ("sister", "per-per", "sibling"), ("child", "per-per", None),
    ("son", "per-per", "child"), ("daughter", "per-per", "child"),
    ("relative", "per-per", None), ("doctoralAdvisor", "per-per", None),
    ("placeOfBirth", "per-loc", None), ("cityOfBirth", "per-loc", "placeOfBirth"),
    ("countryOfBirth", "per-loc", "placeOfBirth"),
    ("stateorprovinceOfBirth", "per-loc", "placeOfBirth"),
    ("placeOfDeath", "per-loc", None), ("cityOfDeath", "per-loc", "placeOfDeath"),
    ("countryOfDeath", "per-loc", "placeOfDeath"),
    ("stateorprovinceOfDeath", "per-loc", "placeOfDeath"),
    ("residence", "per-loc", None), ("cityOfResidence", "per-loc", "residence"),
    ("countryOfResidence", "per-loc", "residence"),
    ("stateorprovinceOfResidence", "per-loc", "residence"),
    ("placeOfBurial", "per-loc", None), ("nationality", "per-loc", None),
    ("employer", "per-org", None), ("memberOf", "per-org", None),
    ("politicalParty", "per-org", "memberOf"), ("educatedAt", "per-org", None),
    ("founder", "org-per", None), ("keyPerson", "org-per", None),
    ("chiefExecutiveOfficer", "org-per", "keyPerson"),
    ("chairperson", "org-per", "keyPerson"), ("shareholder", "org-per", None),
    ("parentOrganization", "org-org", None), ("subsidiary", "org-org", None),
    ("memberOrganization", "org-org", None), ("affiliation", "org-org", None),
    ("headquarters", "org-loc", None),
    ("cityOfHeadquarters", "org-loc", "headquarters"),
    ("countryOfHeadquarters", "org-loc", "headquarters"),
    ("stateorprovinceOfHeadquarters", "org-loc", "headquarters"),
    ("country", "loc-loc", None), ("locatedIn", "loc-loc", None),
    ("capital", "loc-loc", None), ("twinTown", "loc-loc", None),
    ("headOfGovernment", "loc-per", None), ("mayor", "loc-per", "headOfGovernment"),
    ("governingBody", "loc-org", None),
]

INTRODUCED = [
    ("familyMember", "per-per"), ("professionalAssociate", "per-per"),
    ("placeOfActivity", "per-loc"), ("educationalAffiliation", "per-org"),
    ("organizationalLeader", "org-per"), ("corporateRelation", "org-org"),
    ("operatingLocation", "org-loc"), ("administrativeParent", "loc-loc"),
    ("geographicNeighbor", "loc-loc"), ("notablePerson", "loc-per"),
    ("localInstitution", "loc-org"), ("sportsAffiliation", "per-org"),
]

STEMS = {
    "per-per": ["partner", "colleague", "mentor", "student", "rival", "successor",
                "predecessor", "friend", "teammate", "employee", "coach",
                "patron", "guardian", "godparent", "cousin", "nephew", "niece",
                "uncle", "aunt", "grandparent", "grandchild", "inLaw",
                "stepParent", "stepChild", "influence", "collaborator",
                "bandMember", "opponent", "spokesperson", "assistant"],
    "per-org": ["club", "team", "party", "union", "label", "studio", "company",
                "agency", "academy", "school", "college", "university", "army",
                "navy", "court", "council", "board", "committee", "church",
                "order", "lodge", "institute", "museum", "orchestra",
                "ensemble", "laboratory", "hospital", "league"],
    "per-loc": ["birthRegion", "hometown", "domicile", "workplace", "exile",
                "deathRegion", "restingPlace", "constituency", "diocese",
                "jurisdiction", "stateOfOrigin", "homeland", "venue",
                "trainingGround", "studyPlace", "ancestralHome", "office",
                "estate", "countryOfCitizenship", "district", "ward", "parish",
                "province", "region", "territory", "village"],
    "org-per": ["owner", "director", "president", "treasurer", "secretary",
                "editor", "publisher", "manager", "headCoach", "captain",
                "principal", "dean", "chancellor", "rector", "conductor",
                "architect", "designer", "patron", "leader", "spokesperson",
                "trustee", "auditor", "producer", "composer", "curator"],
    "org-org": ["division", "branch", "sponsor", "partnerOrganization",
                "successorOrganization", "predecessorOrganization", "owner",
                "publisher", "distributor", "recordLabel", "network",
                "broadcaster", "league", "conference", "federation",
                "operator", "manufacturer", "supplier", "client", "investor",
                "accreditor", "regulator", "alliance", "consortium",
                "franchise", "rival"],
    "org-loc": ["location", "foundingPlace", "servedArea", "campus",
                "branchLocation", "registeredCountry", "homeGround",
                "operatingArea"],
    "loc-loc": ["province", "district", "county", "municipality", "region",
                "neighbor", "border", "riverMouth", "source", "basin",
                "island", "archipelago", "continent", "territory", "enclave",
                "exclave", "suburb", "borough", "parish", "canton",
                "prefecture", "oblast", "arrondissement", "commune",
                "subdivision", "metropolitanArea", "catchment", "tributary",
                "peak", "range", "lake", "coast", "harbour", "airport",
                "station", "terminus", "crossing", "bridge", "seat"],
    "loc-per": ["leader", "governor", "founder", "namesake", "patronSaint",
                "monarch", "resident", "architect", "owner", "designer",
                "ambassador", "representative", "senator", "councillor",
                "chiefOfPolice", "bishop"],
    "loc-org": ["operator", "owner", "council", "legislature", "university",
                "hospital", "airline", "broadcaster", "newspaper", "club",
                "team", "police", "fireService", "court", "utility", "port",
                "museum", "library", "school", "company", "bank", "church",
                "military", "agency", "ministry", "embassy"],
}
QUALIFIERS = ["former", "current", "official", "honorary", "primary",
              "secondary", "interim", "acting", "founding", "principal",
              "regional", "national", "local", "historic", "deputy",
              "assistant", "associate", "senior", "junior", "chief"]

BUCKET_PREFIX = {"per-per": "person", "per-org": "", "per-loc": "",
                 "org-per": "", "org-org": "", "org-loc": "org",
                 "loc-per": "", "loc-org": "", "loc-loc": ""}


def cap(word):
    return word[0].upper() + word[1:]


class Node:
    __slots__ = ("name", "bucket", "parent", "sources", "introduced", "children")

    def __init__(self, name, bucket, parent, introduced=False):
        self.name = name
        self.bucket = bucket
        self.parent = parent
        self.sources = ()
        self.introduced = introduced
        self.children = []


def build_tree(rng):
    nodes = {}
    order = []

    def add(name, bucket, parent, introduced=False):
        assert name not in nodes, name
        n = Node(name, bucket, parent, introduced)
        nodes[name] = n
        order.append(name)
        if parent:
            nodes[parent].children.append(name)
        return n

    def depth(name):
        d, p = 3, nodes[name].parent
        while p:
            d, p = d + 1, nodes[p].parent
        return d

    for name, bucket, parent in SEEDS:
        add(name, bucket, parent)
    for name, bucket in INTRODUCED:
        add(name, bucket, None, introduced=True)

    used = set(nodes)

    def fresh(bucket, parent):
        if parent is None:
            stems = STEMS[bucket][:]
            rng.shuffle(stems)
            for s in stems:
                cand = s
                if cand in used:
                    cand = BUCKET_PREFIX[bucket] + cap(s) if BUCKET_PREFIX[bucket] else None
                if cand and cand not in used:
                    used.add(cand)
                    return cand
            for q in QUALIFIERS:
                for s in stems:
                    cand = q + cap(s)
                    if cand not in used:
                        used.add(cand)
                        return cand
            raise RuntimeError("vocabulary exhausted for " + bucket)
        quals = QUALIFIERS[:]
        rng.shuffle(quals)
        for q in quals:
            cand = q + cap(parent)
            if cand not in used:
                used.add(cand)
                return cand
        raise RuntimeError("qualifiers exhausted for " + parent)

    def count_depth(d):
        return sum(1 for n in nodes if depth(n) == d)

    # Top up each bucket with depth-3 nodes first, then children.
    per_bucket = {b: sum(1 for n in nodes.values() if n.bucket == b) for b in BUCKETS}
    remaining = {b: BUCKET_SIZES[b] - per_bucket[b] for b in BUCKETS}
    need = {d: DEPTH_TARGET_H[d] - count_depth(d) for d in (3, 4, 5)}

    # Introduced parents each get at least two children.
    for name, bucket in INTRODUCED:
        for _ in range(2):
            add(fresh(bucket, name), bucket, name)
            remaining[bucket] -= 1
            need[4] -= 1

    total_left = sum(remaining.values())
    assert total_left == need[3] + need[4] + need[5], (total_left, need)

    # Distribute the remaining depth counts over buckets proportionally.
    alloc = {b: {3: 0, 4: 0, 5: 0} for b in BUCKETS}
    pool = []
    for d in (3, 4, 5):
        pool += [d] * need[d]
    rng.shuffle(pool)
    # Each bucket needs at least some depth-3 nodes before children.
    bucket_slots = []
    for b in BUCKETS:
        bucket_slots += [b] * remaining[b]
    rng.shuffle(bucket_slots)
    d3_pool = [d for d in pool if d == 3]
    d45_pool = [d for d in pool if d != 3]
    # give every bucket a floor of depth-3 nodes proportional to its size
    for b in BUCKETS:
        floor = max(1, int(remaining[b] * 0.5))
        for _ in range(floor):
            if d3_pool:
                d3_pool.pop()
                alloc[b][3] += 1
                remaining[b] -= 1
    rest = d3_pool + d45_pool
    rng.shuffle(rest)
    bucket_slots = []
    for b in BUCKETS:
        bucket_slots += [b] * remaining[b]
    rng.shuffle(bucket_slots)
    # depth-5 nodes need a depth-4 node; keep them in buckets with room.
    for b, d in zip(bucket_slots, rest):
        alloc[b][d] += 1

    for b in BUCKETS:
        for _ in range(alloc[b][3]):
            add(fresh(b, None), b, None)
    # Children concentrate under a few parents per bucket.
    for b in BUCKETS:
        d3 = [n for n in order if nodes[n].bucket == b and depth(n) == 3
              and not nodes[n].introduced]
        seeded = [n for n in d3 if nodes[n].children]
        others = [n for n in d3 if not nodes[n].children]
        rng.shuffle(others)
        parents = seeded + others[:max(1, alloc[b][4] // 5)]
        for _ in range(alloc[b][4]):
            p = rng.choice(parents)
            add(fresh(b, p), b, p)
    for b in BUCKETS:
        d4 = [n for n in order if nodes[n].bucket == b and depth(n) == 4]
        if not d4 and alloc[b][5]:
            raise RuntimeError("no depth-4 parent in " + b)
        d4 = d4[:max(1, len(d4) // 4)]
        for _ in range(alloc[b][5]):
            p = rng.choice(d4)
            add(fresh(b, p), b, p)

    for d in (3, 4, 5):
        assert count_depth(d) == DEPTH_TARGET_H[d], (d, count_depth(d))
    for b in BUCKETS:
        assert sum(1 for n in nodes.values() if n.bucket == b) == BUCKET_SIZES[b], b
    return nodes, order, depth


def projected_parent(nodes, name, source):
    p = nodes[name].parent
    while p is not None and source not in nodes[p].sources:
        p = nodes[p].parent
    return p


def projected_hist(nodes, source):
    hist = {3: 0, 4: 0, 5: 0}
    for n in nodes.values():
        if source not in n.sources:
            continue
        d, p = 3, projected_parent(nodes, n.name, source)
        while p is not None:
            d, p = d + 1, projected_parent(nodes, p, source)
        hist[d] += 1
    return hist


def cost(nodes):
    c = 0
    for s in SOURCES:
        h = projected_hist(nodes, s)
        c += sum(abs(h[d] - DEPTH_TARGET[s][d]) for d in (3, 4, 5))
    return c


def descendants(nodes, name):
    out, stack = [], [name]
    while stack:
        cur = stack.pop()
        out.append(cur)
        stack.extend(nodes[cur].children)
    return out


def contributions(nodes, name):
    n = nodes[name]
    out = []
    for s in n.sources:
        d, p = 3, n.parent
        while p is not None:
            if s in nodes[p].sources:
                d += 1
            p = nodes[p].parent
        out.append((s, d))
    return out


def hist_cost(hist):
    return sum(abs(hist[s][d] - DEPTH_TARGET[s][d]) for s in SOURCES for d in (3, 4, 5))


def assign_sources(nodes, rng):
    labels = []
    for region, size in REGIONS:
        labels += [region] * size
    sourced = sorted(n for n in nodes if not nodes[n].introduced)
    assert len(sourced) == len(labels), (len(sourced), len(labels))
    rng.shuffle(labels)
    for n, lab in zip(sourced, labels):
        nodes[n].sources = lab
    pinned = {"placeOfBirth", "placeOfDeath", "parent", "founder"}
    three = ("dbpedia", "infobox", "wikidata")
    for name in sorted(pinned):
        other = next(o for o in sourced if o not in pinned and nodes[o].sources == three)
        nodes[name].sources, nodes[other].sources = three, nodes[name].sources
    free = [n for n in sourced if n not in pinned]
    desc = {n: descendants(nodes, n) for n in sourced}

    hist = {s: {3: 0, 4: 0, 5: 0} for s in SOURCES}
    for n in sourced:
        for s, d in contributions(nodes, n):
            hist[s][d] += 1
    current = hist_cost(hist)
    temp = 2.0
    for step in range(2000000):
        if current == 0:
            break
        a, b = rng.sample(free, 2)
        if nodes[a].sources == nodes[b].sources:
            continue
        affected = set(desc[a]) | set(desc[b])
        for n in affected:
            for s, d in contributions(nodes, n):
                hist[s][d] -= 1
        nodes[a].sources, nodes[b].sources = nodes[b].sources, nodes[a].sources
        for n in affected:
            for s, d in contributions(nodes, n):
                hist[s][d] += 1
        new = hist_cost(hist)
        temp = max(0.05, temp * 0.99999)
        if new <= current or rng.random() < pow(2.718, (current - new) / temp):
            current = new
        else:
            for n in affected:
                for s, d in contributions(nodes, n):
                    hist[s][d] -= 1
            nodes[a].sources, nodes[b].sources = nodes[b].sources, nodes[a].sources
            for n in affected:
                for s, d in contributions(nodes, n):
                    hist[s][d] += 1
    if current != 0:
        raise RuntimeError("source assignment did not converge (cost %d)" % current)
    return sourced


def canonical_order(nodes, names):
    """Depth-first, buckets in order, children lexicographic."""
    out = []
    kids = {}
    for n in names:
        kids.setdefault(nodes[n]["parent"], []).append(n)
    for k in kids:
        kids[k].sort()

    def walk(key):
        for c in kids.get(key, []):
            out.append(c)
            walk(c)
    for b in BUCKETS:
        walk(b)
    return out


def to_doc(tag, table):
    order = canonical_order(table, list(table))
    return {
        "tag": tag,
        "nodes": [
            {"name": n, "bucket": table[n]["bucket"], "parent": table[n]["parent"],
             "sources": table[n]["sources"], "introduced": table[n]["introduced"]}
            for n in order
        ],
    }


def hierarchy_table(nodes):
    return {
        n.name: {"bucket": n.bucket, "parent": n.parent or n.bucket,
                 "sources": sorted(n.sources), "introduced": n.introduced}
        for n in nodes.values()
    }


def projected_table(nodes, source):
    out = {}
    for n in nodes.values():
        if source not in n.sources:
            continue
        p = projected_parent(nodes, n.name, source)
        out[n.name] = {"bucket": n.bucket, "parent": p or n.bucket,
                       "sources": [source], "introduced": False}
    return out


def merged_parents(projections):
    """First-wins parent per name over projections given in merge order."""
    parent = {}
    for table in projections:
        for n, row in table.items():
            parent.setdefault(n, row["parent"])
    return parent


def curation_log(nodes, h_table, projections):
    merged = merged_parents(projections)
    h_doc = to_doc("H", h_table)
    log = []
    seq = 0
    ts = "2019-06-01T00:00:00Z"
    for row in h_doc["nodes"]:
        name = row["name"]
        if row["introduced"]:
            seq += 1
            entry = {"seq": seq, "timestamp": ts, "actor": "fixture",
                     "action": "INTRODUCE", "name": name, "bucket": row["bucket"]}
            if row["parent"] != row["bucket"]:
                entry["parent"] = row["parent"]
            log.append(entry)
        elif merged[name] != row["parent"]:
            seq += 1
            log.append({"seq": seq, "timestamp": ts, "actor": "fixture",
                        "action": "RESOLVE_CONFLICT", "name": name,
                        "chosenParent": row["parent"]})
    return log


def write_json(path, doc):
    path.write_text(json.dumps(doc, indent=2) + "\n")


def label_form(name):
    """placeOfBirth -> place of birth"""
    out = []
    for ch in name:
        if ch.isupper():
            out.append(" " + ch.lower())
        else:
            out.append(ch)
    return "".join(out)


def coverage_fixtures(out, nodes, rng):
    names = sorted(n for n in nodes if not nodes[n].introduced)
    cov = out / "coverage"
    cov.mkdir(parents=True, exist_ok=True)
    mapping = []

    # TACRED: 41 relations, 29 restricted, 27 subsumed.
    tacred = [
        ("per:alternate_names", 0, None), ("per:cause_of_death", 0, None),
        ("per:charges", 0, None), ("per:children", 1, "child"),
        ("per:cities_of_residence", 1, "cityOfResidence"),
        ("per:city_of_birth", 1, "cityOfBirth"),
        ("per:city_of_death", 1, "cityOfDeath"),
        ("per:countries_of_residence", 1, "countryOfResidence"),
        ("per:country_of_birth", 1, "countryOfBirth"),
        ("per:country_of_death", 1, "countryOfDeath"),
        ("per:date_of_birth", 0, None), ("per:date_of_death", 0, None),
        ("per:employee_of", 1, "employer"), ("per:origin", 1, "nationality"),
        ("per:other_family", 1, "relative"), ("per:parents", 1, "parent"),
        ("per:religion", 1, None), ("per:schools_attended", 1, "educatedAt"),
        ("per:siblings", 1, "sibling"), ("per:spouse", 1, "spouse"),
        ("per:stateorprovince_of_birth", 1, "stateorprovinceOfBirth"),
        ("per:stateorprovince_of_death", 1, "stateorprovinceOfDeath"),
        ("per:stateorprovinces_of_residence", 1, "stateorprovinceOfResidence"),
        ("per:title", 0, None), ("per:age", 0, None),
        ("org:alternate_names", 0, None),
        ("org:city_of_headquarters", 1, "cityOfHeadquarters"),
        ("org:country_of_headquarters", 1, "countryOfHeadquarters"),
        ("org:dissolved", 0, None), ("org:founded", 0, None),
        ("org:founded_by", 1, "founder"), ("org:member_of", 1, "affiliation"),
        ("org:members", 1, "memberOrganization"),
        ("org:number_of_employees/members", 0, None),
        ("org:parents", 1, "parentOrganization"),
        ("org:political/religious_affiliation", 1, None),
        ("org:shareholders", 1, "shareholder"),
        ("org:stateorprovince_of_headquarters", 1, "stateorprovinceOfHeadquarters"),
        ("org:subsidiaries", 1, "subsidiary"),
        ("org:top_members/employees", 1, "keyPerson"),
        ("org:website", 0, None),
    ]
    assert len(tacred) == 41
    assert sum(r for _, r, _ in tacred) == 29
    assert sum(1 for _, r, m in tacred if r and m) == 27
    rows = []
    for rel, restricted, target in tacred:
        rows.append((rel, restricted))
        if target:
            mapping.append(("tacred", rel, target))
    write_tsv(cov / "tacred.tsv", rows)

    # Other datasets: relations named after hierarchy nodes in label form
    # (subsumed through normalization), plus unmatched names.
    specs = [("ace2004", 24, 17, 11, "ace"), ("nyt2010", 51, 47, 35, "nyt"),
             ("fewrel", 100, 64, 61, "fewrel")]
    pool = [n for n in names if n not in {t for _, _, t in tacred if t}]
    for ds, total, restricted, subsumed, prefix in specs:
        picks = rng.sample(pool, subsumed)
        rows = []
        # subsumed, restricted: half by normalization, half via mapping
        for i, node in enumerate(picks):
            if i % 2 == 0:
                rows.append((label_form(node), 1))
            else:
                rel = "%s_rel_%02d" % (prefix, i)
                rows.append((rel, 1))
                mapping.append((ds, rel, node))
        for i in range(restricted - subsumed):
            rows.append(("%s unmatched restricted %d" % (prefix, i), 1))
        for i in range(total - restricted):
            rows.append(("%s attribute %d" % (prefix, i), 0))
        rng.shuffle(rows)
        write_tsv(cov / (ds + ".tsv"), rows)

    with open(cov / "mapping.tsv", "w") as f:
        f.write("dataset_relation\thierarchy_relation\n")
        for ds, rel, target in mapping:
            f.write("%s\t%s\n" % (rel, target))


def write_tsv(path, rows):
    with open(path, "w") as f:
        f.write("relation\trestricted\n")
        for rel, restricted in rows:
            f.write("%s\t%d\n" % (rel, restricted))


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[2] / "tests" / "fixtures"
    rng = random.Random(SEED)
    nodes, order, depth = build_tree(rng)
    assign_sources(nodes, rng)

    for s in SOURCES:
        assert projected_hist(nodes, s) == DEPTH_TARGET[s], s

    hdir = out / "hierarchy"
    hdir.mkdir(parents=True, exist_ok=True)
    h_table = hierarchy_table(nodes)
    write_json(hdir / "H.json", to_doc("H", h_table))
    tags = {"infobox": "Hi", "dbpedia": "Hd", "wikidata": "Hw"}
    projections = []
    for s in SOURCES:
        t = projected_table(nodes, s)
        projections.append(t)
        write_json(hdir / (tags[s] + ".json"), to_doc(tags[s], t))
    with open(hdir / "curation_H.jsonl", "w") as f:
        for entry in curation_log(nodes, h_table, projections):
            f.write(json.dumps(entry, sort_keys=True) + "\n")

    coverage_fixtures(out, nodes, rng)


if __name__ == "__main__":
    main()
