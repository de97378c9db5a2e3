#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vigil/delay.hpp"
#include "vigil/feed.hpp"

namespace vigil::sim {

/// Business relationship of a neighbor, seen from the local AS. Routes
/// learned from a Customer are preferred over Peer over Provider, and only
/// Local/Customer routes are exported beyond one's own customers.
enum class NeighborRel { Customer, Peer, Provider, Local };

const char* to_string(NeighborRel rel);

/// AS-level graph with business relationships, per-edge delay descriptors,
/// vantage bindings and monitoring-source descriptors.
class Topology {
public:
    struct Neighbor {
        uint32_t asn;
        NeighborRel rel;  // the neighbor's role relative to this AS
        DelaySpec delay;
    };

    void add_node(uint32_t asn);
    /// p2c: `provider` transits for `customer`. Re-adding an identical edge
    /// is idempotent; the same pair with a different relationship is an error.
    void add_edge(uint32_t provider_or_a, uint32_t customer_or_b, bool p2c,
                  std::optional<DelaySpec> delay = std::nullopt);
    void bind_vantage(uint32_t asn, const std::string& source_id);
    void add_source(SourceDescriptor descriptor);
    void set_default_delay(DelaySpec d) { d.validate(); default_delay_ = d; }
    void set_seed(uint64_t seed) { seed_ = seed; }

    /// Resolve vantage lists into source descriptors and validate. Must be
    /// called once after construction; parse/generate do it for you.
    void finalize();

    bool has_node(uint32_t asn) const { return adjacency_.count(asn) != 0; }
    bool has_edge(uint32_t a, uint32_t b) const;
    size_t node_count() const { return adjacency_.size(); }
    size_t edge_count() const { return edge_count_; }
    uint64_t seed() const { return seed_; }
    const DelaySpec& default_delay() const { return default_delay_; }

    const std::vector<Neighbor>& neighbors(uint32_t asn) const;
    const std::vector<uint32_t>& nodes() const { return node_list_; }
    const std::vector<SourceDescriptor>& sources() const { return sources_; }
    const std::map<uint32_t, std::vector<std::string>>& vantage_bindings() const {
        return vantages_;
    }

    size_t degree(uint32_t asn) const { return neighbors(asn).size(); }
    size_t provider_count(uint32_t asn) const;

private:
    std::map<uint32_t, std::vector<Neighbor>> adjacency_;
    std::vector<uint32_t> node_list_;
    std::map<uint32_t, std::vector<std::string>> vantages_;
    std::vector<SourceDescriptor> sources_;
    DelaySpec default_delay_ = DelaySpec::uniform(10, 1000);
    uint64_t seed_ = 0;
    size_t edge_count_ = 0;
    bool finalized_ = false;
};

/// Line-oriented topology format ('#' comments allowed):
///   node <asn>
///   edge <asn> <asn> <p2c|p2p>            # p2c: first is provider
///   vantage <asn> <source_id>
///   delay default <uniform|fixed> <ms...>
///   delay edge <asn> <asn> <uniform|fixed> <ms...>
///   source <id> push [<uniform|fixed> <ms...>]
///   source <id> poll <interval_s> [<uniform|fixed> <ms...>]
///   seed <n>
/// Edges implicitly declare their nodes; vantage lines must name known ASes.
Topology parse_topology(std::istream& in, const std::string& name);
Topology load_topology(const std::string& path);

/// Synthetic hierarchy: a tier-1 clique, transit tier-2 with sparse peering,
/// stub tier-3, plus the two experiment subjects (legitimate AS 61574 and
/// hijacker AS 61575) attached per profile. Vantages are chosen by degree
/// rank and bound to two push sources and one polling pool.
struct GeneratorParams {
    int total_nodes = 500;
    double tier2_peer_density = 0.06;
    enum class HijackerProfile { HighDegree, Stub };
    HijackerProfile hijacker_profile = HijackerProfile::Stub;
    int hijacker_peer_count = 100;  // HighDegree profile
    int legit_provider_count = 1;
    uint64_t seed = 1;
};

inline constexpr uint32_t kLegitimateAsn = 61574;
inline constexpr uint32_t kHijackerAsn = 61575;

Topology generate_topology(const GeneratorParams& params);

}  // namespace vigil::sim
