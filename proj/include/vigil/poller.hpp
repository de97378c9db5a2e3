#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "vigil/feed.hpp"

namespace vigil {

/// Best route visible at a vantage for one prefix, as the vantage would
/// export it (path starts at the vantage AS).
struct SnapshotEntry {
    IpPrefix prefix;
    std::vector<uint32_t> as_path;
};

/// Current best-route table of one vantage; nullopt signals a provider
/// failure for this tick (previous state is kept, retried next tick).
using SnapshotProvider =
    std::function<std::optional<std::vector<SnapshotEntry>>(uint32_t vantage_asn)>;

/// Models a looking-glass style source: periodically snapshots each vantage's
/// best routes and emits synthetic events only for what changed since the
/// previous successful snapshot. A changed path re-announces even when the
/// origin is unchanged; disappeared routes withdraw. All emitted timestamps
/// are the tick time, which is where the polling detection-delay
/// quantization comes from.
class PollingSource {
public:
    explicit PollingSource(SourceDescriptor descriptor);

    /// At most one snapshot round per poll_interval slot: a second call in
    /// the same slot returns nothing. `now_ms` is the time the snapshot
    /// responses are in hand (tick time plus provider response delay).
    std::vector<FeedEvent> poll_tick(int64_t now_ms, const SnapshotProvider& provider);

    const SourceDescriptor& descriptor() const { return desc_; }

private:
    SourceDescriptor desc_;
    std::optional<int64_t> last_tick_ms_;  // last served interval slot
    // previous snapshot per (vantage, prefix)
    std::map<std::pair<uint32_t, IpPrefix>, std::vector<uint32_t>> seen_;
};

}  // namespace vigil
