#pragma once

#include <map>
#include <set>

#include "vigil/prefix.hpp"

namespace vigil {

/// Longest-match resolution of a whole address block against a route table.
/// `origins` collects the origin chosen for each sub-region of the query;
/// `full_coverage` is false when some addresses have no route at all.
struct ForwardingResolution {
    std::set<uint32_t> origins;
    bool full_coverage = true;

    bool reaches(uint32_t origin) const { return origins.count(origin) != 0; }
    bool all_within(const std::set<uint32_t>& allowed) const {
        if (!full_coverage) return false;
        for (uint32_t o : origins)
            if (!allowed.count(o)) return false;
        return !origins.empty();
    }
};

/// Forwarding is decided per address by the most specific route; a query
/// block splits wherever a more specific route punches a hole in a covering
/// one. `routes` maps each prefix with a selected route to its origin.
ForwardingResolution resolve_forwarding(const std::map<IpPrefix, uint32_t>& routes,
                                        const IpPrefix& query);

}  // namespace vigil
