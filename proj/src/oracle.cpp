#include "vigil/sim/oracle.hpp"

#include <algorithm>

#include "vigil/forwarding.hpp"

namespace vigil::sim {

RibSnapshot fixpoint_oracle(const Topology& topology,
                            const std::vector<OriginAnnouncement>& announcements,
                            int floor_length) {
    std::set<IpPrefix> prefixes;
    std::map<uint32_t, std::map<IpPrefix, Route>> locals;
    for (const auto& ann : announcements) {
        if (!topology.has_node(ann.asn))
            throw std::invalid_argument("announcement from unknown AS " +
                                        std::to_string(ann.asn));
        prefixes.insert(ann.prefix);
        locals[ann.asn].emplace(
            ann.prefix, Route{ann.prefix, {ann.asn}, ann.asn, NeighborRel::Local});
    }

    RibSnapshot bests;
    for (uint32_t asn : topology.nodes()) bests[asn] = {};
    for (const auto& [asn, routes] : locals)
        for (const auto& [prefix, route] : routes) bests[asn].emplace(prefix, route);

    const size_t bound =
        std::max<size_t>(8, topology.node_count() * std::max<size_t>(1, prefixes.size()) * 32);
    for (size_t round = 0; round < bound; ++round) {
        RibSnapshot next;
        for (uint32_t asn : topology.nodes()) {
            std::map<IpPrefix, std::map<uint32_t, Route>> candidates;
            if (auto it = locals.find(asn); it != locals.end()) {
                for (const auto& [prefix, route] : it->second)
                    candidates[prefix].emplace(asn, route);
            }
            for (const auto& nbr : topology.neighbors(asn)) {
                // the neighbor's role for itself looking back at us
                NeighborRel our_role = nbr.rel == NeighborRel::Customer
                                           ? NeighborRel::Provider
                                       : nbr.rel == NeighborRel::Provider
                                           ? NeighborRel::Customer
                                           : NeighborRel::Peer;
                auto bit = bests.find(nbr.asn);
                if (bit == bests.end()) continue;
                for (const auto& [prefix, route] : bit->second) {
                    if (!exportable(route, our_role)) continue;
                    if (prefix.length > floor_length) continue;
                    auto path = export_path(route, nbr.asn);
                    if (std::find(path.begin(), path.end(), asn) != path.end()) continue;
                    candidates[prefix].emplace(
                        nbr.asn, Route{prefix, std::move(path), nbr.asn, nbr.rel});
                }
            }
            auto& mine = next[asn];
            for (const auto& [prefix, cands] : candidates) {
                if (const Route* best = decide(cands)) mine.emplace(prefix, *best);
            }
        }
        if (next == bests) return bests;
        bests = std::move(next);
    }
    throw std::runtime_error("fixpoint oracle did not converge within bound");
}

double infected_fraction(const RibSnapshot& ribs, const Topology& topology,
                         const IpPrefix& prefix, uint32_t offending_origin,
                         const std::optional<std::set<uint32_t>>& universe) {
    size_t infected = 0, total = 0;
    for (uint32_t asn : topology.nodes()) {
        if (universe && !universe->count(asn)) continue;
        ++total;
        std::map<IpPrefix, uint32_t> origins;
        if (auto it = ribs.find(asn); it != ribs.end()) {
            for (const auto& [p, route] : it->second) origins[p] = route.origin();
        }
        if (resolve_forwarding(origins, prefix).reaches(offending_origin)) ++infected;
    }
    return total == 0 ? 0.0 : static_cast<double>(infected) / static_cast<double>(total);
}

InfectionTimeline::InfectionTimeline(const EventTrace& trace, const Topology& topology,
                                     const IpPrefix& hijacked_prefix,
                                     uint32_t offending_origin,
                                     const std::optional<std::set<uint32_t>>& universe) {
    size_t total = 0;
    std::set<uint32_t> in_universe;
    for (uint32_t asn : topology.nodes()) {
        if (universe && !universe->count(asn)) continue;
        in_universe.insert(asn);
        ++total;
    }

    std::map<uint32_t, std::map<IpPrefix, uint32_t>> origins;  // per relevant AS
    std::set<uint32_t> infected;
    series_.emplace_back(0, 0.0);

    auto relevant = [&](const IpPrefix& p) {
        return contains(hijacked_prefix, p) || contains(p, hijacked_prefix);
    };

    size_t i = 0;
    const auto& changes = trace.route_changes;
    while (i < changes.size()) {
        int64_t t = changes[i].time_ms;
        bool touched = false;
        for (; i < changes.size() && changes[i].time_ms == t; ++i) {
            const auto& ch = changes[i];
            if (!relevant(ch.prefix) || !in_universe.count(ch.asn)) continue;
            auto& mine = origins[ch.asn];
            if (ch.best)
                mine[ch.prefix] = ch.best->origin();
            else
                mine.erase(ch.prefix);
            bool now_infected =
                resolve_forwarding(mine, hijacked_prefix).reaches(offending_origin);
            if (now_infected)
                touched |= infected.insert(ch.asn).second;
            else
                touched |= infected.erase(ch.asn) > 0;
        }
        if (touched) {
            double fraction =
                total == 0 ? 0.0 : static_cast<double>(infected.size()) / total;
            series_.emplace_back(t, fraction);
            if (infected.empty())
                recovered_at_ = t;
            else
                recovered_at_.reset();
        }
    }
}

double InfectionTimeline::fraction_at(int64_t t_ms) const {
    if (t_ms < 0) throw std::invalid_argument("time before trace start");
    double value = 0.0;
    for (const auto& [t, fraction] : series_) {
        if (t > t_ms) break;
        value = fraction;
    }
    return value;
}

}  // namespace vigil::sim
