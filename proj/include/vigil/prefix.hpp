#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vigil {

/// Raised when textual input (prefix, feed record, config line, ...) is
/// malformed. The message names the offending token.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// An IPv4 CIDR block in canonical form: all bits of `base` below
/// position (32 - length) are zero.
struct IpPrefix {
    uint32_t base = 0;
    uint8_t length = 0;

    auto operator<=>(const IpPrefix&) const = default;
};

/// Network mask for a prefix length (len 0 -> 0, len 32 -> all ones).
constexpr uint32_t prefix_mask(unsigned length) {
    return length == 0 ? 0u : ~uint32_t{0} << (32u - length);
}

/// Parse "A.B.C.D/L". Non-canonical host bits are an error, not masked:
/// a config typo like 10.0.0.1/8 should surface, not be silently fixed.
IpPrefix parse_prefix(const std::string& text);

/// "A.B.C.D/L" textual form, inverse of parse_prefix.
std::string format_prefix(const IpPrefix& p);

/// True iff `inner` is covered by `outer` (outer.length <= inner.length and
/// the top outer.length bits agree). Reflexive.
bool contains(const IpPrefix& outer, const IpPrefix& inner);

/// Result of a one-bit de-aggregation attempt.
struct DeaggregationOutcome {
    enum class Kind { Split, FilteredFloor };
    Kind kind;
    std::vector<IpPrefix> halves;  // exactly 2 for Split, empty otherwise

    bool filtered() const { return kind == Kind::FilteredFloor; }
};

/// Split `p` into its two (length+1)-bit halves, unless length already is at
/// or beyond `floor_length` (conventionally /24, the longest prefix most
/// transit routers accept) in which case the outcome is FilteredFloor.
DeaggregationOutcome deaggregate(const IpPrefix& p, int floor_length = 24);

}  // namespace vigil
