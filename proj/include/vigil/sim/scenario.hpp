#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vigil/prefix.hpp"
#include "vigil/sim/oracle.hpp"

namespace vigil::sim {

/// One hijack experiment: who announces what, when the hijack fires and how
/// mitigation reacts. File format, '#' comments allowed:
///   legitimate <asn> <prefix> <origin>[,<origin>...]
///   hijacker <asn> <prefix>
///   hijack_at <ms|auto>
///   mitigation <immediate|defer <ms>|off>
///   floor <len>
struct Scenario {
    struct LegitimateEntry {
        uint32_t asn = 0;
        IpPrefix prefix;
        std::vector<uint32_t> origins;  // first = mitigation announce origin
    };
    enum class MitigationMode { Immediate, Defer, Off };

    std::vector<LegitimateEntry> legitimate;
    uint32_t hijacker_asn = 0;
    IpPrefix hijack_prefix;
    std::optional<int64_t> hijack_at_ms;  // nullopt = after convergence + margin
    MitigationMode mitigation = MitigationMode::Immediate;
    int64_t defer_ms = 0;
    int floor_length = 24;

    /// Announcement set before mitigation (oracle input).
    std::vector<OriginAnnouncement> base_announcements() const;
};

Scenario parse_scenario(std::istream& in, const std::string& name);
Scenario load_scenario(const std::string& path);

}  // namespace vigil::sim
