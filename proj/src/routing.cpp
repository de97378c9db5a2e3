#include "vigil/sim/routing.hpp"

namespace vigil::sim {

int preference_class(NeighborRel rel) {
    switch (rel) {
        case NeighborRel::Local: return 3;
        case NeighborRel::Customer: return 2;
        case NeighborRel::Peer: return 1;
        case NeighborRel::Provider: return 0;
    }
    return -1;
}

bool better_route(const Route& a, const Route& b) {
    int ca = preference_class(a.rel), cb = preference_class(b.rel);
    if (ca != cb) return ca > cb;
    if (a.as_path.size() != b.as_path.size()) return a.as_path.size() < b.as_path.size();
    return a.learned_from < b.learned_from;
}

const Route* decide(const std::map<uint32_t, Route>& candidates) {
    const Route* best = nullptr;
    for (const auto& [from, route] : candidates) {
        if (!best || better_route(route, *best)) best = &route;
    }
    return best;
}

bool exportable(const Route& route, NeighborRel neighbor_rel) {
    if (route.rel == NeighborRel::Local || route.rel == NeighborRel::Customer)
        return true;
    return neighbor_rel == NeighborRel::Customer;
}

std::vector<uint32_t> export_path(const Route& route, uint32_t self) {
    if (!route.as_path.empty() && route.as_path.front() == self) return route.as_path;
    std::vector<uint32_t> path;
    path.reserve(route.as_path.size() + 1);
    path.push_back(self);
    path.insert(path.end(), route.as_path.begin(), route.as_path.end());
    return path;
}

}  // namespace vigil::sim
