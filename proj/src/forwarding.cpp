#include "vigil/forwarding.hpp"

namespace vigil {

namespace {

void resolve(const std::map<IpPrefix, uint32_t>& routes, const IpPrefix& query,
             ForwardingResolution& out) {
    bool split = false;
    for (const auto& [p, origin] : routes) {
        if (p.length > query.length && contains(query, p)) {
            split = true;
            break;
        }
    }
    if (!split) {
        const IpPrefix* best = nullptr;
        for (const auto& [p, origin] : routes) {
            if (contains(p, query) && (!best || p.length > best->length)) best = &p;
        }
        if (best)
            out.origins.insert(routes.at(*best));
        else
            out.full_coverage = false;
        return;
    }
    // a /32 cannot have a more specific route inside it, so this terminates
    auto halves = deaggregate(query, 33);
    resolve(routes, halves.halves[0], out);
    resolve(routes, halves.halves[1], out);
}

}  // namespace

ForwardingResolution resolve_forwarding(const std::map<IpPrefix, uint32_t>& routes,
                                        const IpPrefix& query) {
    ForwardingResolution out;
    resolve(routes, query, out);
    return out;
}

}  // namespace vigil
