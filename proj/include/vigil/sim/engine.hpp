#pragma once

#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <variant>
#include <vector>

#include "vigil/feed.hpp"
#include "vigil/poller.hpp"
#include "vigil/sim/routing.hpp"
#include "vigil/sim/topology.hpp"

namespace vigil::sim {

struct BestRouteChange {
    int64_t time_ms = 0;
    uint32_t asn = 0;
    IpPrefix prefix;
    std::optional<Route> best;  // nullopt = route lost
};

struct CommandRecord {
    int64_t time_ms = 0;
    uint32_t asn = 0;
    IpPrefix prefix;
    bool announce = true;
};

/// Timestamped record of one simulated run: every best-route change, every
/// feed event delivered to the monitoring pipeline, every injected router
/// command, and the ground-truth markers the harness metrics hang off.
struct EventTrace {
    std::vector<BestRouteChange> route_changes;
    std::vector<FeedEvent> feed_events;
    std::vector<CommandRecord> commands;
    int64_t hijack_start_ms = -1;
    int64_t mitigation_start_ms = -1;  // first mitigation command applied
    int64_t recovered_ms = -1;         // infected set empty for good
    int64_t end_ms = 0;

    /// Record lines plus `# GT <marker> <ms>` comments.
    void write(const std::string& path) const;
};

/// Deterministic event-driven AS-level path-vector simulator. One router per
/// AS, valley-free export, per-message link delays drawn from
/// per-(edge, prefix) hash streams so runs differing only in injected
/// announcements keep identical delays for unrelated traffic.
///
/// Single-threaded: one priority queue keyed (timestamp, sequence).
class Simulation {
public:
    Simulation(const Topology& topology, uint64_t seed, int floor_length = 24,
               int64_t mrai_ms = 0);

    /// Originate `prefix` at `asn` at time t. Command injections additionally
    /// record a CommandRecord and set the mitigation-start marker.
    void schedule_origin_announce(int64_t t, uint32_t asn, const IpPrefix& prefix,
                                  bool command = false);
    void schedule_origin_withdraw(int64_t t, uint32_t asn, const IpPrefix& prefix,
                                  bool command = false);

    /// Run `fn` at time t. Auxiliary callbacks (poll ticks) do not count as
    /// pending work for idle detection.
    void schedule_callback(int64_t t, std::function<void()> fn, bool auxiliary = false);

    /// Fires on every best-route change, after RIB update and trace append.
    void set_change_listener(std::function<void(const BestRouteChange&)> fn) {
        change_listener_ = std::move(fn);
    }

    bool step();  // process one event; false when the queue is empty
    void run();   // drain the queue

    int64_t now() const { return now_; }
    std::optional<int64_t> next_event_time() const {
        return queue_.empty() ? std::nullopt : std::optional<int64_t>(queue_.top().t);
    }
    bool idle_except_aux() const { return pending_non_aux_ == 0; }
    int64_t last_routing_activity() const { return last_routing_activity_; }
    size_t messages_delivered() const { return messages_delivered_; }

    const Topology& topology() const { return topo_; }
    uint64_t seed() const { return seed_; }
    int floor_length() const { return floor_; }

    /// Origin per selected prefix (forwarding-check input).
    std::map<IpPrefix, uint32_t> route_origins(uint32_t asn) const;
    /// Vantage best-route table as the poller's snapshot provider sees it.
    std::vector<SnapshotEntry> snapshot(uint32_t vantage) const;
    /// Converged per-AS selected routes (oracle comparison shape).
    std::map<uint32_t, std::map<IpPrefix, Route>> rib_snapshot() const;

    EventTrace& trace() { return trace_; }
    const EventTrace& trace() const { return trace_; }

private:
    struct Message {
        uint32_t from = 0, to = 0;
        bool announce = true;
        IpPrefix prefix;
        std::vector<uint32_t> path;
    };
    struct OriginOp {
        uint32_t asn = 0;
        bool announce = true;
        IpPrefix prefix;
        bool command = false;
    };
    struct Callback {
        std::function<void()> fn;
    };
    struct Queued {
        int64_t t;
        uint64_t seq;
        bool aux;
        std::variant<Message, OriginOp, Callback> payload;
    };
    struct QueuedAfter {
        bool operator()(const Queued& a, const Queued& b) const {
            return a.t != b.t ? a.t > b.t : a.seq > b.seq;
        }
    };
    struct PrefixState {
        std::map<uint32_t, Route> candidates;  // keyed by advertising neighbor
        std::optional<Route> best;
        std::set<uint32_t> rib_out;  // neighbors currently holding our export
        // MRAI batching bookkeeping (engine-level option, off by default)
        int64_t last_export_ms = INT64_MIN;
        bool flush_pending = false;
        bool dirty = false;
    };

    void push(int64_t t, bool aux, std::variant<Message, OriginOp, Callback> payload);
    void deliver(const Message& msg);
    void apply_origin(const OriginOp& op);
    void reselect(uint32_t asn, const IpPrefix& prefix);
    void export_state(uint32_t asn, const IpPrefix& prefix);
    void send(uint32_t from, uint32_t to, bool announce, const IpPrefix& prefix,
              std::vector<uint32_t> path);
    int64_t link_delay(uint32_t a, uint32_t b, const IpPrefix& prefix);
    NeighborRel rel_of(uint32_t self, uint32_t neighbor) const;
    const DelaySpec& delay_spec(uint32_t a, uint32_t b) const;

    const Topology& topo_;
    uint64_t seed_;
    int floor_;
    int64_t mrai_ms_;
    int64_t now_ = 0;
    uint64_t seq_ = 0;
    size_t pending_non_aux_ = 0;
    size_t messages_delivered_ = 0;
    int64_t last_routing_activity_ = 0;
    std::priority_queue<Queued, std::vector<Queued>, QueuedAfter> queue_;
    std::map<uint32_t, std::map<IpPrefix, PrefixState>> state_;
    std::map<std::tuple<uint32_t, uint32_t, IpPrefix>, uint64_t> edge_counters_;
    std::map<std::tuple<uint32_t, uint32_t, IpPrefix>, int64_t> fifo_floor_;
    std::function<void(const BestRouteChange&)> change_listener_;
    EventTrace trace_;
};

}  // namespace vigil::sim
