#include "vigil/sim/topology.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "vigil/prefix.hpp"

namespace vigil::sim {

const char* to_string(NeighborRel rel) {
    switch (rel) {
        case NeighborRel::Customer: return "customer";
        case NeighborRel::Peer: return "peer";
        case NeighborRel::Provider: return "provider";
        case NeighborRel::Local: return "local";
    }
    return "?";
}

void Topology::add_node(uint32_t asn) {
    adjacency_.try_emplace(asn);
}

void Topology::add_edge(uint32_t a, uint32_t b, bool p2c, std::optional<DelaySpec> delay) {
    if (a == b)
        throw std::invalid_argument("self-loop on AS " + std::to_string(a));
    add_node(a);
    add_node(b);
    DelaySpec d = delay.value_or(default_delay_);
    d.validate();

    auto find = [&](uint32_t from, uint32_t to) -> Neighbor* {
        for (auto& n : adjacency_[from])
            if (n.asn == to) return &n;
        return nullptr;
    };
    NeighborRel b_role_for_a = p2c ? NeighborRel::Customer : NeighborRel::Peer;
    NeighborRel a_role_for_b = p2c ? NeighborRel::Provider : NeighborRel::Peer;
    if (Neighbor* existing = find(a, b)) {
        if (existing->rel != b_role_for_a)
            throw std::invalid_argument("conflicting relationship for edge " +
                                        std::to_string(a) + "-" + std::to_string(b));
        return;  // duplicate, idempotent
    }
    if (Neighbor* reverse = find(b, a)) {
        // the same unordered pair declared the other way around
        if (reverse->rel != a_role_for_b)
            throw std::invalid_argument("conflicting relationship for edge " +
                                        std::to_string(a) + "-" + std::to_string(b));
        return;
    }
    adjacency_[a].push_back(Neighbor{b, b_role_for_a, d});
    adjacency_[b].push_back(Neighbor{a, a_role_for_b, d});
    ++edge_count_;
}

void Topology::bind_vantage(uint32_t asn, const std::string& source_id) {
    if (!has_node(asn))
        throw std::invalid_argument("vantage binding for unknown AS " +
                                    std::to_string(asn));
    vantages_[asn].push_back(source_id);
}

void Topology::add_source(SourceDescriptor descriptor) {
    for (const auto& s : sources_)
        if (s.source_id == descriptor.source_id)
            throw std::invalid_argument("duplicate source '" + descriptor.source_id + "'");
    sources_.push_back(std::move(descriptor));
}

void Topology::finalize() {
    if (finalized_) return;
    // vantage lists flow from the bindings, keeping binding order
    std::set<std::string> known;
    for (auto& s : sources_) {
        s.vantage_asns.clear();
        known.insert(s.source_id);
    }
    for (const auto& [asn, ids] : vantages_) {
        for (const auto& id : ids) {
            if (!known.count(id)) {
                // sources may be implied by vantage lines alone: default push
                SourceDescriptor d;
                d.source_id = id;
                sources_.push_back(d);
                known.insert(id);
            }
            for (auto& s : sources_)
                if (s.source_id == id) s.vantage_asns.push_back(asn);
        }
    }
    for (auto& s : sources_) s.validate();

    node_list_.clear();
    node_list_.reserve(adjacency_.size());
    for (auto& [asn, nbrs] : adjacency_) {
        std::sort(nbrs.begin(), nbrs.end(),
                  [](const Neighbor& x, const Neighbor& y) { return x.asn < y.asn; });
        node_list_.push_back(asn);
    }
    finalized_ = true;
}

const std::vector<Topology::Neighbor>& Topology::neighbors(uint32_t asn) const {
    auto it = adjacency_.find(asn);
    if (it == adjacency_.end())
        throw std::invalid_argument("unknown AS " + std::to_string(asn));
    return it->second;
}

bool Topology::has_edge(uint32_t a, uint32_t b) const {
    auto it = adjacency_.find(a);
    if (it == adjacency_.end()) return false;
    for (const auto& nbr : it->second)
        if (nbr.asn == b) return true;
    return false;
}

size_t Topology::provider_count(uint32_t asn) const {
    size_t n = 0;
    for (const auto& nbr : neighbors(asn))
        if (nbr.rel == NeighborRel::Provider) ++n;
    return n;
}

namespace {

DelaySpec parse_delay_spec(std::istringstream& in, const std::string& where) {
    std::string kind;
    if (!(in >> kind)) throw ParseError(where + ": missing delay kind");
    if (kind == "fixed") {
        int64_t ms;
        if (!(in >> ms)) throw ParseError(where + ": fixed delay needs <ms>");
        auto d = DelaySpec::fixed(ms);
        d.validate();
        return d;
    }
    if (kind == "uniform") {
        int64_t lo, hi;
        if (!(in >> lo >> hi)) throw ParseError(where + ": uniform delay needs <lo> <hi>");
        auto d = DelaySpec::uniform(lo, hi);
        d.validate();
        return d;
    }
    throw ParseError(where + ": unknown delay kind '" + kind + "'");
}

}  // namespace

Topology parse_topology(std::istream& in, const std::string& name) {
    Topology topo;
    struct PendingEdgeDelay {
        uint32_t a, b;
        DelaySpec delay;
    };
    std::vector<std::tuple<uint32_t, uint32_t, bool>> edges;
    std::vector<PendingEdgeDelay> edge_delays;
    std::vector<std::pair<uint32_t, std::string>> vantage_lines;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string where = name + ":" + std::to_string(lineno);
        std::string kw;
        ls >> kw;
        if (kw == "node") {
            uint32_t asn;
            if (!(ls >> asn)) throw ParseError(where + ": node needs <asn>");
            topo.add_node(asn);
        } else if (kw == "edge") {
            uint32_t a, b;
            std::string rel;
            if (!(ls >> a >> b >> rel)) throw ParseError(where + ": edge needs <a> <b> <rel>");
            if (rel != "p2c" && rel != "p2p")
                throw ParseError(where + ": relationship must be p2c or p2p");
            edges.emplace_back(a, b, rel == "p2c");
        } else if (kw == "vantage") {
            uint32_t asn;
            std::string id;
            if (!(ls >> asn >> id)) throw ParseError(where + ": vantage needs <asn> <id>");
            vantage_lines.emplace_back(asn, id);
        } else if (kw == "delay") {
            std::string scope;
            if (!(ls >> scope)) throw ParseError(where + ": delay needs a scope");
            if (scope == "default") {
                topo.set_default_delay(parse_delay_spec(ls, where));
            } else if (scope == "edge") {
                uint32_t a, b;
                if (!(ls >> a >> b)) throw ParseError(where + ": delay edge needs <a> <b>");
                edge_delays.push_back({a, b, parse_delay_spec(ls, where)});
            } else {
                throw ParseError(where + ": delay scope must be default or edge");
            }
        } else if (kw == "source") {
            std::string id, kind;
            if (!(ls >> id >> kind)) throw ParseError(where + ": source needs <id> <kind>");
            SourceDescriptor d;
            d.source_id = id;
            if (kind == "push") {
                d.archetype = SourceArchetype::PushStream;
            } else if (kind == "poll") {
                d.archetype = SourceArchetype::PollingSnapshot;
                if (!(ls >> d.poll_interval_s))
                    throw ParseError(where + ": source poll needs <interval_s>");
                d.per_event_latency = DelaySpec::uniform(500, 2000);
            } else {
                throw ParseError(where + ": source kind must be push or poll");
            }
            std::string rest, probe;
            std::getline(ls, rest);
            if (std::istringstream(rest) >> probe) {
                std::istringstream spec_in(rest);
                d.per_event_latency = parse_delay_spec(spec_in, where);
            }
            topo.add_source(std::move(d));
        } else if (kw == "seed") {
            uint64_t s;
            if (!(ls >> s)) throw ParseError(where + ": seed needs <n>");
            topo.set_seed(s);
        } else {
            throw ParseError(where + ": unknown keyword '" + kw + "'");
        }
    }

    auto delay_for = [&](uint32_t a, uint32_t b) -> std::optional<DelaySpec> {
        for (const auto& d : edge_delays) {
            if ((d.a == a && d.b == b) || (d.a == b && d.b == a)) return d.delay;
        }
        return std::nullopt;
    };
    for (const auto& [a, b, p2c] : edges) topo.add_edge(a, b, p2c, delay_for(a, b));
    for (const auto& [asn, id] : vantage_lines) topo.bind_vantage(asn, id);
    topo.finalize();
    return topo;
}

Topology load_topology(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open topology: " + path);
    return parse_topology(in, path);
}

namespace {

// Deterministic pick of `count` distinct elements of `pool` using draw stream
// (key, i). Pool must have at least `count` elements.
std::vector<uint32_t> pick_distinct(const std::vector<uint32_t>& pool, size_t count,
                                    uint64_t seed, uint64_t key) {
    std::vector<uint32_t> picked;
    std::set<uint32_t> used;
    uint64_t i = 0;
    while (picked.size() < count && used.size() < pool.size()) {
        uint32_t candidate = pool[mix64(seed, key, i++) % pool.size()];
        if (used.insert(candidate).second) picked.push_back(candidate);
    }
    return picked;
}

}  // namespace

Topology generate_topology(const GeneratorParams& params) {
    if (params.total_nodes < 20)
        throw std::invalid_argument("generator needs at least 20 nodes");
    const uint64_t seed = params.seed;
    Topology topo;
    topo.set_seed(seed);

    int tier1_n = std::max(3, params.total_nodes / 60);
    int tier2_n = std::max(8, params.total_nodes * 15 / 100);
    int tier3_n = params.total_nodes - tier1_n - tier2_n - 2;

    std::vector<uint32_t> tier1, tier2, tier3;
    for (int i = 0; i < tier1_n; ++i) tier1.push_back(10 + i);
    for (int i = 0; i < tier2_n; ++i) tier2.push_back(1000 + i);
    for (int i = 0; i < tier3_n; ++i) tier3.push_back(10000 + i);

    // tier-1 clique peers with itself
    for (size_t i = 0; i < tier1.size(); ++i)
        for (size_t j = i + 1; j < tier1.size(); ++j)
            topo.add_edge(tier1[i], tier1[j], /*p2c=*/false);

    // tier-2: 1..3 tier-1 providers each, sparse peering among themselves
    for (size_t i = 0; i < tier2.size(); ++i) {
        size_t providers = 1 + mix64(seed, 0x7432, i) % std::min<size_t>(3, tier1.size());
        for (uint32_t p : pick_distinct(tier1, providers, seed, 0x7432'0000 + i))
            topo.add_edge(p, tier2[i], /*p2c=*/true);
    }
    const auto density_cut =
        static_cast<uint64_t>(params.tier2_peer_density * 1000000.0);
    for (size_t i = 0; i < tier2.size(); ++i) {
        for (size_t j = i + 1; j < tier2.size(); ++j) {
            if (mix64(seed, 0x7070, i * 100000 + j) % 1000000 < density_cut)
                topo.add_edge(tier2[i], tier2[j], /*p2c=*/false);
        }
    }

    // tier-3 stubs: 1..2 tier-2 providers each
    for (size_t i = 0; i < tier3.size(); ++i) {
        size_t providers = 1 + mix64(seed, 0x7433, i) % 2;
        for (uint32_t p : pick_distinct(tier2, providers, seed, 0x7433'0000 + i))
            topo.add_edge(p, tier3[i], /*p2c=*/true);
    }

    // experiment subjects
    for (uint32_t p : pick_distinct(tier2, static_cast<size_t>(params.legit_provider_count),
                                    seed, 0x6c65'6769))
        topo.add_edge(p, kLegitimateAsn, /*p2c=*/true);

    if (params.hijacker_profile == GeneratorParams::HijackerProfile::Stub) {
        // GAT-like: 4 providers, 2 peers
        for (uint32_t p : pick_distinct(tier2, std::min<size_t>(4, tier2.size()), seed,
                                        0x686a'0001))
            topo.add_edge(p, kHijackerAsn, /*p2c=*/true);
        for (uint32_t p : pick_distinct(tier3, 2, seed, 0x686a'0002))
            topo.add_edge(kHijackerAsn, p, /*p2c=*/false);
    } else {
        // IXP-like: a couple of transits plus a large peering fan
        for (uint32_t p : pick_distinct(tier2, 2, seed, 0x686a'0003))
            topo.add_edge(p, kHijackerAsn, /*p2c=*/true);
        std::vector<uint32_t> pool = tier2;
        pool.insert(pool.end(), tier3.begin(), tier3.end());
        size_t peers = std::min(static_cast<size_t>(params.hijacker_peer_count), pool.size());
        for (uint32_t p : pick_distinct(pool, peers, seed, 0x686a'0004)) {
            if (p != kHijackerAsn && !topo.has_edge(kHijackerAsn, p))
                topo.add_edge(kHijackerAsn, p, /*p2c=*/false);
        }
    }

    // vantages by degree rank, subjects excluded: two push feeds on the
    // best-connected ASes, one polling pool spread further down
    std::vector<uint32_t> ranked;
    for (uint32_t asn : tier1) ranked.push_back(asn);
    for (uint32_t asn : tier2) ranked.push_back(asn);
    for (uint32_t asn : tier3) ranked.push_back(asn);
    std::stable_sort(ranked.begin(), ranked.end(), [&](uint32_t a, uint32_t b) {
        size_t da = topo.degree(a), db = topo.degree(b);
        return da != db ? da > db : a < b;
    });

    SourceDescriptor stream_a;
    stream_a.source_id = "stream-a";
    SourceDescriptor stream_b;
    stream_b.source_id = "stream-b";
    SourceDescriptor lg;
    lg.source_id = "lg-pool";
    lg.archetype = SourceArchetype::PollingSnapshot;
    lg.poll_interval_s = 60;
    lg.per_event_latency = DelaySpec::uniform(500, 2000);
    topo.add_source(stream_a);
    topo.add_source(stream_b);
    topo.add_source(lg);

    size_t a_count = std::min<size_t>(20, ranked.size());
    for (size_t i = 0; i < a_count; ++i) topo.bind_vantage(ranked[i], "stream-a");
    size_t b_count = std::min<size_t>(4, ranked.size() - a_count);
    for (size_t i = 0; i < b_count; ++i) topo.bind_vantage(ranked[a_count + i], "stream-b");
    size_t lg_target = 18;
    size_t start = a_count + b_count;
    if (ranked.size() > start) {
        size_t step = std::max<size_t>(1, (ranked.size() - start) / lg_target);
        for (size_t i = start, n = 0; i < ranked.size() && n < lg_target; i += step, ++n)
            topo.bind_vantage(ranked[i], "lg-pool");
    }

    topo.finalize();
    return topo;
}

}  // namespace vigil::sim
