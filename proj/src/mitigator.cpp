#include "vigil/mitigator.hpp"

#include <fstream>

#include "vigil/forwarding.hpp"

namespace vigil {

struct FileLogRouterInterface::Impl {
    std::ofstream file;
    Clock clock;
};

FileLogRouterInterface::FileLogRouterInterface(const std::string& path, Clock clock)
    : impl_(std::make_unique<Impl>()) {
    impl_->file.open(path, std::ios::app);
    if (!impl_->file) throw std::runtime_error("cannot open command log: " + path);
    impl_->clock = std::move(clock);
}

FileLogRouterInterface::~FileLogRouterInterface() = default;

CommandResult FileLogRouterInterface::announce(const IpPrefix& prefix, uint32_t origin) {
    int64_t now = impl_->clock();
    impl_->file << now << " CMD ANNOUNCE " << format_prefix(prefix) << ' ' << origin
                << '\n';
    impl_->file.flush();
    if (!impl_->file) return {false, now, "write failed"};
    return {true, now, {}};
}

CommandResult FileLogRouterInterface::withdraw(const IpPrefix& prefix) {
    int64_t now = impl_->clock();
    impl_->file << now << " CMD WITHDRAW " << format_prefix(prefix) << '\n';
    impl_->file.flush();
    if (!impl_->file) return {false, now, "write failed"};
    return {true, now, {}};
}

MitigationPlan plan(const HijackAlarm& alarm, const OwnedPrefixTable& table,
                    int floor_length, int64_t now_ms) {
    // Exact hijack: de-aggregate the owned (= announced) prefix. Sub-prefix
    // hijack: de-aggregate what the hijacker announced, so our halves are
    // strictly more specific than his route.
    const IpPrefix target = alarm.announced_prefix;
    MitigationPlan out;
    out.alarm = alarm;
    out.created_at = now_ms;

    auto covering = table.covering(target);
    if (!covering)
        throw std::invalid_argument("alarm prefix " + format_prefix(target) +
                                    " is not covered by the owned table");
    uint32_t origin = covering->value->primary_origin();

    auto outcome = deaggregate(target, floor_length);
    out.outcome_kind = outcome.kind;
    for (const auto& half : outcome.halves) out.announcements.emplace_back(half, origin);
    return out;
}

ExecutionReport execute(const MitigationPlan& plan, RouterCommandInterface& iface,
                        int max_attempts) {
    if (plan.announcements.empty())
        throw std::invalid_argument("cannot execute an empty mitigation plan");
    ExecutionReport report;
    bool first = true;
    for (const auto& [prefix, origin] : plan.announcements) {
        CommandResult result;
        int attempts = 0;
        do {
            result = iface.announce(prefix, origin);
            ++attempts;
        } while (!result.ok && attempts < max_attempts);
        report.retries += attempts - 1;
        if (!result.ok) report.escalated = true;
        if (result.ok && first) {
            report.start_time_ms = result.ack_time_ms;
            first = false;
        }
        report.acks.push_back(result);
    }
    return report;
}

int rib_overhead(const std::vector<MitigationPlan>& active_plans) {
    int total = 0;
    for (const auto& p : active_plans) {
        if (p.outcome_kind == DeaggregationOutcome::Kind::Split)
            total += static_cast<int>(p.announcements.size()) - 1;
    }
    return total;
}

MitigationMonitor::MitigationMonitor(IpPrefix hijacked_prefix, uint32_t offending_origin,
                                     std::vector<uint32_t> legitimate_origins)
    : hijacked_(hijacked_prefix),
      offender_(offending_origin),
      legit_(std::move(legitimate_origins)) {}

const MitigationProgress& MitigationMonitor::track_progress(const FeedEvent& event) {
    bool relevant = contains(hijacked_, event.prefix) || contains(event.prefix, hijacked_);
    if (!relevant) return progress_;
    auto& vantage_rib = rib_[event.vantage_asn];
    if (event.kind == FeedEventKind::Announce)
        vantage_rib[event.prefix] = event.origin();
    else
        vantage_rib.erase(event.prefix);
    reevaluate(event.vantage_asn, event.timestamp_ms);
    return progress_;
}

void MitigationMonitor::reevaluate(uint32_t vantage, int64_t now_ms) {
    auto resolution = resolve_forwarding(rib_[vantage], hijacked_);
    VantageState state = VantageState::Unknown;
    if (resolution.reaches(offender_)) {
        state = VantageState::Infected;
        ever_infected_.insert(vantage);
    } else {
        std::set<uint32_t> allowed(legit_.begin(), legit_.end());
        if (resolution.all_within(allowed)) state = VantageState::Recovered;
    }
    progress_.vantages[vantage] = state;

    progress_.ever_infected = ever_infected_.size();
    progress_.recovered = 0;
    size_t infected = 0;
    for (uint32_t asn : ever_infected_) {
        auto it = progress_.vantages.find(asn);
        if (it == progress_.vantages.end()) continue;
        if (it->second == VantageState::Recovered) ++progress_.recovered;
        if (it->second == VantageState::Infected) ++infected;
    }
    progress_.recovered_fraction =
        progress_.ever_infected == 0
            ? 0.0
            : static_cast<double>(progress_.recovered) /
                  static_cast<double>(progress_.ever_infected);
    progress_.complete =
        progress_.ever_infected > 0 && progress_.recovered == progress_.ever_infected;
    history_.push_back(SnapshotRow{now_ms, progress_.recovered, infected,
                                   progress_.recovered_fraction});
}

void MitigationMonitor::write_progress_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write progress csv: " + path);
    out << "time_ms,recovered_count,infected_count,fraction\n";
    for (const auto& row : history_) {
        out << row.time_ms << ',' << row.recovered << ',' << row.infected << ','
            << row.fraction << '\n';
    }
}

}  // namespace vigil
