#include "vigil/detector.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace vigil {

void OwnedPrefixTable::add(const IpPrefix& prefix, const std::vector<uint32_t>& origins) {
    if (origins.empty())
        throw std::invalid_argument("owned prefix " + format_prefix(prefix) +
                                    " has no origins");
    if (auto* existing = trie_.find_exact(prefix)) {
        for (uint32_t o : origins)
            if (!existing->legitimate(o)) existing->origins.push_back(o);
        return;
    }
    trie_.insert(prefix, OwnedEntry{prefix, origins});
}

void OwnedPrefixTable::for_each(const std::function<void(const OwnedEntry&)>& fn) const {
    trie_.for_each([&](const IpPrefix&, const OwnedEntry& e) { fn(e); });
}

namespace {

uint32_t parse_asn(const std::string& tok) {
    uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError("bad asn '" + tok + "'");
    return v;
}

std::vector<uint32_t> parse_asn_list(const std::string& tok) {
    std::vector<uint32_t> out;
    size_t start = 0;
    while (start <= tok.size()) {
        size_t comma = tok.find(',', start);
        size_t end = comma == std::string::npos ? tok.size() : comma;
        out.push_back(parse_asn(tok.substr(start, end - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

OwnedPrefixTable parse_config(std::istream& in, const std::string& name) {
    OwnedPrefixTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kw_prefix, cidr, kw_origins, origins_tok;
        if (!(ls >> kw_prefix >> cidr >> kw_origins >> origins_tok) ||
            kw_prefix != "prefix" || kw_origins != "origins")
            throw ParseError(name + ":" + std::to_string(lineno) +
                             ": expected 'prefix <CIDR> origins <asn,...>'");
        std::string extra;
        if (ls >> extra)
            throw ParseError(name + ":" + std::to_string(lineno) + ": trailing tokens");
        table.add(parse_prefix(cidr), parse_asn_list(origins_tok));
    }
    if (table.size() == 0)
        throw ParseError(name + ": no owned prefixes configured");
    return table;
}

OwnedPrefixTable load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    return parse_config(in, path);
}

Classification classify(const FeedEvent& event, const OwnedPrefixTable& table) {
    if (event.kind != FeedEventKind::Announce) return {};
    auto match = table.covering(event.prefix);
    if (!match) return {};
    const OwnedEntry& entry = *match->value;
    if (entry.legitimate(event.origin()))
        return {Classification::Kind::Legitimate, match->prefix};
    if (event.prefix == match->prefix)
        return {Classification::Kind::ExactHijack, match->prefix};
    return {Classification::Kind::SubPrefixHijack, match->prefix};
}

std::optional<HijackAlarm> Detector::process(const FeedEvent& event) {
    if (event.kind == FeedEventKind::Announce)
        ledger_[{event.vantage_asn, event.prefix}] = event.origin();
    else
        ledger_.erase({event.vantage_asn, event.prefix});

    auto cls = classify(event, table_);
    if (!cls.hijack()) return std::nullopt;

    AlarmKey key{event.prefix, event.origin()};
    auto [it, fresh] = open_.try_emplace(key);
    auto [src_it, first_from_source] = it->second.try_emplace(event.source_id,
                                                             event.timestamp_ms);
    if (!first_from_source && event.timestamp_ms < src_it->second)
        src_it->second = event.timestamp_ms;
    if (!fresh) return std::nullopt;

    HijackAlarm alarm;
    alarm.owned_prefix = cls.owned_prefix;
    alarm.announced_prefix = event.prefix;
    alarm.offending_origin = event.origin();
    alarm.kind = cls.kind == Classification::Kind::ExactHijack ? AlarmKind::Exact
                                                               : AlarmKind::SubPrefix;
    alarm.first_seen = event.timestamp_ms;
    alarm.first_source = event.source_id;
    alarm.first_vantage = event.vantage_asn;
    alarm.witness_event = event;
    alarms_.push_back(alarm);
    return alarm;
}

void Detector::clear_alarm(const IpPrefix& announced, uint32_t offending_origin) {
    open_.erase({announced, offending_origin});
}

const std::map<std::string, int64_t>* Detector::per_source_first_seen(
    const IpPrefix& announced, uint32_t offending_origin) const {
    auto it = open_.find({announced, offending_origin});
    return it == open_.end() ? nullptr : &it->second;
}

std::string format_alarm(const HijackAlarm& alarm) {
    std::string out = std::to_string(alarm.first_seen);
    out += " ALARM ";
    out += alarm.kind == AlarmKind::Exact ? "EXACT " : "SUBPREFIX ";
    out += format_prefix(alarm.announced_prefix);
    out += ' ';
    out += std::to_string(alarm.offending_origin);
    out += ' ';
    out += alarm.first_source;
    out += ' ';
    out += std::to_string(alarm.first_vantage);
    return out;
}

int64_t detection_delay(const HijackAlarm& alarm, int64_t hijack_start_ms) {
    if (alarm.first_seen < hijack_start_ms)
        throw std::invalid_argument(
            "alarm at " + std::to_string(alarm.first_seen) +
            " predates hijack start " + std::to_string(hijack_start_ms));
    return alarm.first_seen - hijack_start_ms;
}

}  // namespace vigil
