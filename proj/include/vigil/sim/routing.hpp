#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "vigil/prefix.hpp"
#include "vigil/sim/topology.hpp"

namespace vigil::sim {

/// One candidate path. `as_path` runs from the advertising side to the
/// origin; a locally originated route is just [self]. `learned_from` is the
/// advertising neighbor (self for Local).
struct Route {
    IpPrefix prefix;
    std::vector<uint32_t> as_path;
    uint32_t learned_from = 0;
    NeighborRel rel = NeighborRel::Local;

    uint32_t origin() const { return as_path.back(); }
    bool operator==(const Route&) const = default;
};

/// Local-preference class: Local > Customer > Peer > Provider.
int preference_class(NeighborRel rel);

/// True iff `a` ranks strictly above `b`: higher class, then shorter path,
/// then lowest advertising neighbor ASN (the deterministic tie-break).
bool better_route(const Route& a, const Route& b);

/// BGP decision over same-prefix candidates keyed by advertising neighbor;
/// nullptr when empty.
const Route* decide(const std::map<uint32_t, Route>& candidates);

/// Valley-free export: routes learned from a customer (or originated
/// locally) go to everyone; peer- and provider-learned routes go only to
/// customers. `neighbor_rel` is the receiving neighbor's role for us.
bool exportable(const Route& route, NeighborRel neighbor_rel);

/// Path as advertised by `self`: prepend self unless the stored path already
/// starts with it (locally originated routes do).
std::vector<uint32_t> export_path(const Route& route, uint32_t self);

}  // namespace vigil::sim
