#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vigil/feed.hpp"
#include "vigil/prefix_trie.hpp"

namespace vigil {

/// One owned prefix with its legitimate origin set. Order is meaningful:
/// the first origin is the one mitigation announces from.
struct OwnedEntry {
    IpPrefix prefix;
    std::vector<uint32_t> origins;

    bool legitimate(uint32_t asn) const {
        for (uint32_t o : origins)
            if (o == asn) return true;
        return false;
    }
    uint32_t primary_origin() const { return origins.front(); }
};

/// Trie-indexed ground truth: owned prefix -> legitimate origins.
class OwnedPrefixTable {
public:
    /// Add an entry; a repeated prefix merges origin sets, keeping first-seen
    /// order (MOAS union).
    void add(const IpPrefix& prefix, const std::vector<uint32_t>& origins);

    std::optional<PrefixTrie<OwnedEntry>::Match> covering(const IpPrefix& p) const {
        return trie_.longest_match(p);
    }
    const OwnedEntry* exact(const IpPrefix& p) const { return trie_.find_exact(p); }
    size_t size() const { return trie_.size(); }
    void for_each(const std::function<void(const OwnedEntry&)>& fn) const;

private:
    PrefixTrie<OwnedEntry> trie_;
};

/// Config format, one entry per line, '#' comments:
///   prefix <CIDR> origins <asn>[,<asn>...]
OwnedPrefixTable load_config(const std::string& path);
OwnedPrefixTable parse_config(std::istream& in, const std::string& name);

struct Classification {
    enum class Kind { Irrelevant, Legitimate, ExactHijack, SubPrefixHijack };
    Kind kind = Kind::Irrelevant;
    IpPrefix owned_prefix;  // valid for Legitimate and the hijack kinds

    bool hijack() const {
        return kind == Kind::ExactHijack || kind == Kind::SubPrefixHijack;
    }
};

/// Pure origin check of one event against the table. Withdraws and
/// announcements outside owned space are Irrelevant; sub-prefix announcements
/// by a legitimate origin (our own mitigation routes) are Legitimate.
Classification classify(const FeedEvent& event, const OwnedPrefixTable& table);

enum class AlarmKind { Exact, SubPrefix };

struct HijackAlarm {
    IpPrefix owned_prefix;
    IpPrefix announced_prefix;
    uint32_t offending_origin = 0;
    AlarmKind kind = AlarmKind::Exact;
    int64_t first_seen = 0;
    std::string first_source;
    uint32_t first_vantage = 0;
    FeedEvent witness_event;
};

/// `<timestamp_ms> ALARM <EXACT|SUBPREFIX> <announced_prefix> <origin> <source> <vantage>`
std::string format_alarm(const HijackAlarm& alarm);

/// Stateful hijack detection over a merged event stream. The first violating
/// event per (announced prefix, offending origin) raises an alarm; later
/// matches only update bookkeeping (per-source first observations, the
/// per-vantage origin ledger) until the alarm is cleared.
class Detector {
public:
    explicit Detector(OwnedPrefixTable table) : table_(std::move(table)) {}

    std::optional<HijackAlarm> process(const FeedEvent& event);

    /// Alarm clearing is an explicit call (operator command, or the
    /// mitigation monitor reporting full recovery); a withdraw seen at one
    /// vantage proves nothing about global recovery.
    void clear_alarm(const IpPrefix& announced, uint32_t offending_origin);

    const OwnedPrefixTable& table() const { return table_; }
    const std::vector<HijackAlarm>& alarms() const { return alarms_; }

    /// First violating observation per source for one alarm key, kept
    /// current even after the alarm fired (per-source delay breakdowns).
    const std::map<std::string, int64_t>* per_source_first_seen(
        const IpPrefix& announced, uint32_t offending_origin) const;

    /// Latest announced origin per (vantage, prefix), recovery included.
    const std::map<std::pair<uint32_t, IpPrefix>, uint32_t>& ledger() const {
        return ledger_;
    }

private:
    using AlarmKey = std::pair<IpPrefix, uint32_t>;

    OwnedPrefixTable table_;
    std::map<AlarmKey, std::map<std::string, int64_t>> open_;
    std::map<std::pair<uint32_t, IpPrefix>, uint32_t> ledger_;
    std::vector<HijackAlarm> alarms_;
};

/// alarm.first_seen - hijack_start; throws std::invalid_argument when the
/// alarm predates the claimed hijack start (ground-truth inconsistency).
int64_t detection_delay(const HijackAlarm& alarm, int64_t hijack_start_ms);

}  // namespace vigil
