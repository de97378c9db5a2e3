#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "vigil/sim/engine.hpp"
#include "vigil/sim/routing.hpp"
#include "vigil/sim/topology.hpp"

namespace vigil::sim {

struct OriginAnnouncement {
    uint32_t asn = 0;
    IpPrefix prefix;
};

/// Converged selected routes, asn -> prefix -> best.
using RibSnapshot = std::map<uint32_t, std::map<IpPrefix, Route>>;

/// Timing-free verification oracle: synchronous rounds of export+decide over
/// the whole graph until nothing changes. Shares the decision and export
/// policy with the event engine but none of its propagation machinery.
/// Throws if the bound (nodes * prefixes * 32 rounds) is exceeded, which
/// would indicate a policy-model bug.
RibSnapshot fixpoint_oracle(const Topology& topology,
                            const std::vector<OriginAnnouncement>& announcements,
                            int floor_length = 24);

/// Fraction of ASes whose forwarding for any address in `prefix` reaches
/// `offending_origin`. `universe` defaults to all topology nodes; pass the
/// vantage set to match a "seen by the control-plane sources" view.
double infected_fraction(const RibSnapshot& ribs, const Topology& topology,
                         const IpPrefix& prefix, uint32_t offending_origin,
                         const std::optional<std::set<uint32_t>>& universe = std::nullopt);

/// Piecewise-constant infected fraction over time, reconstructed from a
/// trace's best-route changes.
class InfectionTimeline {
public:
    InfectionTimeline(const EventTrace& trace, const Topology& topology,
                      const IpPrefix& hijacked_prefix, uint32_t offending_origin,
                      const std::optional<std::set<uint32_t>>& universe = std::nullopt);

    /// Fraction at time t; throws std::invalid_argument for t before trace
    /// start (time 0).
    double fraction_at(int64_t t_ms) const;

    /// (time, fraction) at every change, plus the initial point (0, 0).
    const std::vector<std::pair<int64_t, double>>& series() const { return series_; }

    /// Last time the infected set became empty and stayed empty; nullopt if
    /// it never emptied after first becoming non-empty.
    std::optional<int64_t> recovered_at() const { return recovered_at_; }

private:
    std::vector<std::pair<int64_t, double>> series_;
    std::optional<int64_t> recovered_at_;
};

}  // namespace vigil::sim
