#include "vigil/prefix.hpp"

#include <charconv>

namespace vigil {

namespace {

// Parses an unsigned decimal in [0, max]; advances *pos past it.
bool parse_uint(const std::string& s, size_t& pos, uint32_t max, uint32_t& out) {
    const char* begin = s.data() + pos;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr == begin || out > max) return false;
    pos += static_cast<size_t>(ptr - begin);
    return true;
}

}  // namespace

IpPrefix parse_prefix(const std::string& text) {
    uint32_t addr = 0;
    size_t pos = 0;
    for (int octet = 0; octet < 4; ++octet) {
        uint32_t v = 0;
        if (!parse_uint(text, pos, 255, v))
            throw ParseError("bad prefix '" + text + "': malformed address");
        addr = (addr << 8) | v;
        if (octet < 3) {
            if (pos >= text.size() || text[pos] != '.')
                throw ParseError("bad prefix '" + text + "': expected '.'");
            ++pos;
        }
    }
    if (pos >= text.size() || text[pos] != '/')
        throw ParseError("bad prefix '" + text + "': expected '/'");
    ++pos;
    uint32_t len = 0;
    if (!parse_uint(text, pos, 32, len) || pos != text.size())
        throw ParseError("bad prefix '" + text + "': length must be 0..32");
    if ((addr & ~prefix_mask(len)) != 0)
        throw ParseError("bad prefix '" + text + "': nonzero host bits for /" +
                         std::to_string(len));
    return IpPrefix{addr, static_cast<uint8_t>(len)};
}

std::string format_prefix(const IpPrefix& p) {
    std::string out;
    out.reserve(18);
    for (int shift = 24; shift >= 0; shift -= 8) {
        out += std::to_string((p.base >> shift) & 0xffu);
        out += shift == 0 ? '/' : '.';
    }
    out += std::to_string(static_cast<unsigned>(p.length));
    return out;
}

bool contains(const IpPrefix& outer, const IpPrefix& inner) {
    if (outer.length > inner.length) return false;
    return (inner.base & prefix_mask(outer.length)) == outer.base;
}

DeaggregationOutcome deaggregate(const IpPrefix& p, int floor_length) {
    if (p.length >= floor_length)
        return DeaggregationOutcome{DeaggregationOutcome::Kind::FilteredFloor, {}};
    const auto half_len = static_cast<uint8_t>(p.length + 1);
    const uint32_t high_bit = 1u << (32u - half_len);
    return DeaggregationOutcome{
        DeaggregationOutcome::Kind::Split,
        {IpPrefix{p.base, half_len}, IpPrefix{p.base | high_bit, half_len}}};
}

}  // namespace vigil
