#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vigil/delay.hpp"
#include "vigil/prefix.hpp"

namespace vigil {

enum class FeedEventKind { Announce, Withdraw };

/// One normalized BGP update observation. `as_path` runs from the AS
/// adjacent to the vantage (leftmost) to the origin (rightmost); it is empty
/// for withdraws. `timestamp_ms` is when the source observed the update.
struct FeedEvent {
    int64_t timestamp_ms = 0;
    std::string source_id;
    uint32_t vantage_asn = 0;
    FeedEventKind kind = FeedEventKind::Announce;
    IpPrefix prefix;
    std::vector<uint32_t> as_path;
    bool late = false;  // set by the mux when the event missed the reorder window

    uint32_t origin() const { return as_path.empty() ? 0 : as_path.back(); }

    bool operator==(const FeedEvent& o) const {
        return timestamp_ms == o.timestamp_ms && source_id == o.source_id &&
               vantage_asn == o.vantage_asn && kind == o.kind &&
               prefix == o.prefix && as_path == o.as_path;
    }
};

/// Parse one record line:
///   <timestamp_ms> <source_id> <vantage_asn> <A|W> <prefix> [<as_path>]
/// Announces need a non-empty path with no loop (an ASN recurring after the
/// run of its own prepends); withdraws carry no path. Throws ParseError.
FeedEvent normalize(const std::string& line);

/// Inverse of normalize (the `late` flag is transport state, not serialized).
std::string format_record(const FeedEvent& event);

/// Source archetypes. Push streams deliver each update after a per-event
/// latency; polling snapshots see only what changed between ticks.
enum class SourceArchetype { PushStream, PollingSnapshot };

struct SourceDescriptor {
    std::string source_id;
    SourceArchetype archetype = SourceArchetype::PushStream;
    std::vector<uint32_t> vantage_asns;
    int64_t poll_interval_s = 60;  // PollingSnapshot only
    DelaySpec per_event_latency = DelaySpec::uniform(200, 800);

    void validate() const;
};

}  // namespace vigil
