#include "vigil/feed.hpp"

#include <charconv>
#include <sstream>

namespace vigil {

namespace {

template <typename T>
T parse_number(const std::string& tok, const char* what) {
    T v{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError(std::string("bad ") + what + " '" + tok + "'");
    return v;
}

std::vector<uint32_t> parse_path(const std::string& tok) {
    std::vector<uint32_t> path;
    size_t start = 0;
    while (start <= tok.size()) {
        size_t comma = tok.find(',', start);
        size_t end = comma == std::string::npos ? tok.size() : comma;
        path.push_back(parse_number<uint32_t>(tok.substr(start, end - start), "asn"));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return path;
}

// Loop rule: consecutive repeats are prepending and fine; the same ASN
// showing up again after other hops is a routing loop.
bool has_loop(const std::vector<uint32_t>& path) {
    for (size_t i = 0; i < path.size(); ++i) {
        for (size_t j = i + 1; j < path.size(); ++j) {
            if (path[j] == path[i] && path[j] != path[j - 1]) return true;
        }
    }
    return false;
}

}  // namespace

FeedEvent normalize(const std::string& line) {
    std::istringstream in(line);
    std::string ts_tok, source, vantage_tok, kind_tok, prefix_tok, path_tok, extra;
    if (!(in >> ts_tok >> source >> vantage_tok >> kind_tok >> prefix_tok))
        throw ParseError("short feed record: '" + line + "'");
    in >> path_tok;
    if (in >> extra) throw ParseError("trailing tokens in feed record: '" + line + "'");

    FeedEvent ev;
    ev.timestamp_ms = parse_number<int64_t>(ts_tok, "timestamp");
    ev.source_id = source;
    ev.vantage_asn = parse_number<uint32_t>(vantage_tok, "vantage asn");
    ev.prefix = parse_prefix(prefix_tok);
    if (kind_tok == "A") {
        ev.kind = FeedEventKind::Announce;
        if (path_tok.empty())
            throw ParseError("announce without as_path: '" + line + "'");
        ev.as_path = parse_path(path_tok);
        if (has_loop(ev.as_path))
            throw ParseError("as_path loop in record: '" + line + "'");
    } else if (kind_tok == "W") {
        ev.kind = FeedEventKind::Withdraw;
        if (!path_tok.empty())
            throw ParseError("withdraw with as_path: '" + line + "'");
    } else {
        throw ParseError("bad event kind '" + kind_tok + "'");
    }
    return ev;
}

std::string format_record(const FeedEvent& event) {
    std::string out = std::to_string(event.timestamp_ms);
    out += ' ';
    out += event.source_id;
    out += ' ';
    out += std::to_string(event.vantage_asn);
    out += event.kind == FeedEventKind::Announce ? " A " : " W ";
    out += format_prefix(event.prefix);
    if (event.kind == FeedEventKind::Announce) {
        out += ' ';
        for (size_t i = 0; i < event.as_path.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(event.as_path[i]);
        }
    }
    return out;
}

void SourceDescriptor::validate() const {
    if (source_id.empty()) throw std::invalid_argument("source without id");
    if (vantage_asns.empty())
        throw std::invalid_argument("source '" + source_id + "' has no vantages");
    if (archetype == SourceArchetype::PollingSnapshot && poll_interval_s <= 0)
        throw std::invalid_argument("source '" + source_id + "' needs poll_interval > 0");
    per_event_latency.validate();
}

}  // namespace vigil
