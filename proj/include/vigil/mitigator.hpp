#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vigil/detector.hpp"
#include "vigil/feed.hpp"

namespace vigil {

/// De-aggregation announcements answering one alarm. Empty (FilteredFloor)
/// when the hijacked prefix is already at the filter floor, which needs
/// operator escalation instead.
struct MitigationPlan {
    HijackAlarm alarm;
    std::vector<std::pair<IpPrefix, uint32_t>> announcements;  // (prefix, origin)
    DeaggregationOutcome::Kind outcome_kind = DeaggregationOutcome::Kind::Split;
    int64_t created_at = 0;

    bool filtered_floor() const {
        return outcome_kind == DeaggregationOutcome::Kind::FilteredFloor;
    }
};

struct CommandResult {
    bool ok = false;
    int64_t ack_time_ms = 0;
    std::string error;
};

/// Abstract router command sink. Commands are applied in submission order
/// and each is acknowledged or failed exactly once.
class RouterCommandInterface {
public:
    virtual ~RouterCommandInterface() = default;
    virtual CommandResult announce(const IpPrefix& prefix, uint32_t origin) = 0;
    virtual CommandResult withdraw(const IpPrefix& prefix) = 0;
};

/// Writes one line per command; the integration seam for a real driver.
///   <timestamp_ms> CMD <ANNOUNCE|WITHDRAW> <prefix> [<origin_asn>]
class FileLogRouterInterface : public RouterCommandInterface {
public:
    using Clock = std::function<int64_t()>;
    FileLogRouterInterface(const std::string& path, Clock clock);
    ~FileLogRouterInterface() override;

    CommandResult announce(const IpPrefix& prefix, uint32_t origin) override;
    CommandResult withdraw(const IpPrefix& prefix) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct ExecutionReport {
    std::vector<CommandResult> acks;   // one per plan announcement
    int64_t start_time_ms = 0;         // first acknowledgment
    int retries = 0;
    bool escalated = false;            // a command kept failing
};

/// Compute the de-aggregation answer to an alarm. Exact hijacks split the
/// owned prefix; sub-prefix hijacks split the hijacker's announced prefix
/// (the minimal footprint that out-specifics it). Announce origin is the
/// covering entry's primary (first-listed) origin.
MitigationPlan plan(const HijackAlarm& alarm, const OwnedPrefixTable& table,
                    int floor_length = 24, int64_t now_ms = 0);

/// Submit all plan announcements in order; failures are retried with bounded
/// backoff (max_attempts per command) before escalating.
ExecutionReport execute(const MitigationPlan& plan, RouterCommandInterface& iface,
                        int max_attempts = 3);

/// Active Split plans each add exactly one net routing-table entry (two
/// sub-prefixes minus the retained covering announcement).
int rib_overhead(const std::vector<MitigationPlan>& active_plans);

enum class VantageState { Unknown, Infected, Recovered };

/// Progress of one mitigation as seen from the feed: per-vantage routing
/// state for the hijacked space, recovered fraction over vantages that were
/// ever infected.
struct MitigationProgress {
    std::map<uint32_t, VantageState> vantages;
    size_t ever_infected = 0;
    size_t recovered = 0;
    double recovered_fraction = 0.0;
    bool complete = false;
};

/// Consumes post-detection feed events and tracks who still routes the
/// hijacked space to the offender. A vantage is Recovered when its visible
/// routes cover the whole hijacked prefix with legitimate origins and no
/// hijacker route remains; Infected while any covered address still resolves
/// to the offending origin.
class MitigationMonitor {
public:
    MitigationMonitor(IpPrefix hijacked_prefix, uint32_t offending_origin,
                      std::vector<uint32_t> legitimate_origins);

    const MitigationProgress& track_progress(const FeedEvent& event);
    const MitigationProgress& progress() const { return progress_; }

    /// CSV rows `time_ms,recovered_count,infected_count,fraction`, one per
    /// state change.
    void write_progress_csv(const std::string& path) const;

private:
    void reevaluate(uint32_t vantage, int64_t now_ms);

    IpPrefix hijacked_;
    uint32_t offender_;
    std::vector<uint32_t> legit_;
    // latest announced origin per (vantage, prefix) within the hijacked space
    std::map<uint32_t, std::map<IpPrefix, uint32_t>> rib_;
    std::set<uint32_t> ever_infected_;
    MitigationProgress progress_;
    struct SnapshotRow {
        int64_t time_ms;
        size_t recovered;
        size_t infected;
        double fraction;
    };
    std::vector<SnapshotRow> history_;
};

}  // namespace vigil
