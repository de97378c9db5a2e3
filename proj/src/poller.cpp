#include "vigil/poller.hpp"

#include <set>

namespace vigil {

PollingSource::PollingSource(SourceDescriptor descriptor) : desc_(std::move(descriptor)) {
    desc_.archetype = SourceArchetype::PollingSnapshot;
    desc_.validate();
}

std::vector<FeedEvent> PollingSource::poll_tick(int64_t now_ms,
                                                const SnapshotProvider& provider) {
    // rate limit by interval slot, so response-latency jitter between
    // consecutive ticks cannot drop a round
    const int64_t slot = now_ms / (desc_.poll_interval_s * 1000);
    if (last_tick_ms_ && *last_tick_ms_ == slot) return {};
    last_tick_ms_ = slot;

    std::vector<FeedEvent> out;
    for (uint32_t vantage : desc_.vantage_asns) {
        auto snapshot = provider(vantage);
        if (!snapshot) continue;  // provider failure, diff state untouched

        std::set<std::pair<uint32_t, IpPrefix>> present;
        for (const auto& entry : *snapshot) {
            auto key = std::make_pair(vantage, entry.prefix);
            present.insert(key);
            auto it = seen_.find(key);
            if (it != seen_.end() && it->second == entry.as_path) continue;
            seen_[key] = entry.as_path;
            FeedEvent ev;
            ev.timestamp_ms = now_ms;
            ev.source_id = desc_.source_id;
            ev.vantage_asn = vantage;
            ev.kind = FeedEventKind::Announce;
            ev.prefix = entry.prefix;
            ev.as_path = entry.as_path;
            out.push_back(std::move(ev));
        }
        for (auto it = seen_.lower_bound({vantage, IpPrefix{}});
             it != seen_.end() && it->first.first == vantage;) {
            if (!present.count(it->first)) {
                FeedEvent ev;
                ev.timestamp_ms = now_ms;
                ev.source_id = desc_.source_id;
                ev.vantage_asn = vantage;
                ev.kind = FeedEventKind::Withdraw;
                ev.prefix = it->first.second;
                out.push_back(std::move(ev));
                it = seen_.erase(it);
            } else {
                ++it;
            }
        }
    }
    return out;
}

}  // namespace vigil
