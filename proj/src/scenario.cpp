#include "vigil/sim/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace vigil::sim {

std::vector<OriginAnnouncement> Scenario::base_announcements() const {
    std::vector<OriginAnnouncement> out;
    for (const auto& entry : legitimate) out.push_back({entry.asn, entry.prefix});
    out.push_back({hijacker_asn, hijack_prefix});
    return out;
}

namespace {

std::vector<uint32_t> parse_asn_list(const std::string& tok, const std::string& where) {
    std::vector<uint32_t> out;
    size_t start = 0;
    while (start <= tok.size()) {
        size_t comma = tok.find(',', start);
        size_t end = comma == std::string::npos ? tok.size() : comma;
        std::string part = tok.substr(start, end - start);
        uint32_t v = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || ptr != part.data() + part.size())
            throw ParseError(where + ": bad asn '" + part + "'");
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& name) {
    Scenario sc;
    bool have_hijacker = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::string where = name + ":" + std::to_string(lineno);
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "legitimate") {
            uint32_t asn;
            std::string cidr, origins;
            if (!(ls >> asn >> cidr >> origins))
                throw ParseError(where + ": legitimate needs <asn> <prefix> <origins>");
            sc.legitimate.push_back(
                {asn, parse_prefix(cidr), parse_asn_list(origins, where)});
        } else if (kw == "hijacker") {
            std::string cidr;
            if (!(ls >> sc.hijacker_asn >> cidr))
                throw ParseError(where + ": hijacker needs <asn> <prefix>");
            sc.hijack_prefix = parse_prefix(cidr);
            have_hijacker = true;
        } else if (kw == "hijack_at") {
            std::string tok;
            if (!(ls >> tok)) throw ParseError(where + ": hijack_at needs <ms|auto>");
            if (tok == "auto") {
                sc.hijack_at_ms.reset();
            } else {
                int64_t ms = 0;
                auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), ms);
                if (ec != std::errc{} || ptr != tok.data() + tok.size() || ms < 0)
                    throw ParseError(where + ": bad hijack_at '" + tok + "'");
                sc.hijack_at_ms = ms;
            }
        } else if (kw == "mitigation") {
            std::string mode;
            if (!(ls >> mode)) throw ParseError(where + ": mitigation needs a mode");
            if (mode == "immediate") {
                sc.mitigation = Scenario::MitigationMode::Immediate;
            } else if (mode == "off") {
                sc.mitigation = Scenario::MitigationMode::Off;
            } else if (mode == "defer") {
                if (!(ls >> sc.defer_ms) || sc.defer_ms < 0)
                    throw ParseError(where + ": defer needs <ms>");
                sc.mitigation = Scenario::MitigationMode::Defer;
            } else {
                throw ParseError(where + ": mitigation must be immediate, defer or off");
            }
        } else if (kw == "floor") {
            if (!(ls >> sc.floor_length) || sc.floor_length < 0 || sc.floor_length > 32)
                throw ParseError(where + ": floor needs a length 0..32");
        } else {
            throw ParseError(where + ": unknown keyword '" + kw + "'");
        }
    }
    if (sc.legitimate.empty())
        throw ParseError(name + ": scenario needs a legitimate entry");
    if (!have_hijacker) throw ParseError(name + ": scenario needs a hijacker entry");
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario: " + path);
    return parse_scenario(in, path);
}

}  // namespace vigil::sim
