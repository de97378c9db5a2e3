#include "vigil/sim/engine.hpp"

#include <algorithm>
#include <fstream>

namespace vigil::sim {

void EventTrace::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace: " + path);
    if (hijack_start_ms >= 0) out << "# GT hijack_start " << hijack_start_ms << '\n';
    if (mitigation_start_ms >= 0)
        out << "# GT mitigation_start " << mitigation_start_ms << '\n';
    if (recovered_ms >= 0) out << "# GT recovered " << recovered_ms << '\n';
    out << "# GT end " << end_ms << '\n';
    for (const auto& ev : feed_events) out << format_record(ev) << '\n';
}

Simulation::Simulation(const Topology& topology, uint64_t seed, int floor_length,
                       int64_t mrai_ms)
    : topo_(topology), seed_(seed), floor_(floor_length), mrai_ms_(mrai_ms) {
    for (uint32_t asn : topo_.nodes()) state_.try_emplace(asn);
}

NeighborRel Simulation::rel_of(uint32_t self, uint32_t neighbor) const {
    for (const auto& n : topo_.neighbors(self))
        if (n.asn == neighbor) return n.rel;
    throw std::invalid_argument("AS " + std::to_string(neighbor) +
                                " is not a neighbor of " + std::to_string(self));
}

const DelaySpec& Simulation::delay_spec(uint32_t a, uint32_t b) const {
    for (const auto& n : topo_.neighbors(a))
        if (n.asn == b) return n.delay;
    throw std::invalid_argument("no edge " + std::to_string(a) + "-" + std::to_string(b));
}

int64_t Simulation::link_delay(uint32_t a, uint32_t b, const IpPrefix& prefix) {
    auto key = std::make_tuple(std::min(a, b), std::max(a, b), prefix);
    uint64_t counter = edge_counters_[key]++;
    uint64_t word = mix64(seed_, mix64(std::get<0>(key), std::get<1>(key)),
                          mix64(prefix.base, prefix.length), counter);
    return delay_spec(a, b).sample(word);
}

void Simulation::push(int64_t t, bool aux, std::variant<Message, OriginOp, Callback> payload) {
    if (t < now_)
        throw std::logic_error("event scheduled in the past: " + std::to_string(t) +
                               " < " + std::to_string(now_));
    if (!aux) ++pending_non_aux_;
    queue_.push(Queued{t, seq_++, aux, std::move(payload)});
}

void Simulation::schedule_origin_announce(int64_t t, uint32_t asn, const IpPrefix& prefix,
                                          bool command) {
    if (!topo_.has_node(asn))
        throw std::invalid_argument("unknown AS " + std::to_string(asn));
    push(t, false, OriginOp{asn, true, prefix, command});
}

void Simulation::schedule_origin_withdraw(int64_t t, uint32_t asn, const IpPrefix& prefix,
                                          bool command) {
    if (!topo_.has_node(asn))
        throw std::invalid_argument("unknown AS " + std::to_string(asn));
    push(t, false, OriginOp{asn, false, prefix, command});
}

void Simulation::schedule_callback(int64_t t, std::function<void()> fn, bool auxiliary) {
    push(t, auxiliary, Callback{std::move(fn)});
}

bool Simulation::step() {
    if (queue_.empty()) return false;
    Queued ev = queue_.top();
    queue_.pop();
    now_ = ev.t;
    if (!ev.aux) --pending_non_aux_;
    if (auto* msg = std::get_if<Message>(&ev.payload)) {
        deliver(*msg);
    } else if (auto* op = std::get_if<OriginOp>(&ev.payload)) {
        apply_origin(*op);
    } else {
        std::get<Callback>(ev.payload).fn();
    }
    if (trace_.end_ms < now_) trace_.end_ms = now_;
    return true;
}

void Simulation::run() {
    while (step()) {
    }
}

void Simulation::apply_origin(const OriginOp& op) {
    last_routing_activity_ = now_;
    if (op.command) {
        trace_.commands.push_back(CommandRecord{now_, op.asn, op.prefix, op.announce});
        if (trace_.mitigation_start_ms < 0) trace_.mitigation_start_ms = now_;
    }
    auto& st = state_[op.asn][op.prefix];
    if (op.announce)
        st.candidates[op.asn] =
            Route{op.prefix, {op.asn}, op.asn, NeighborRel::Local};
    else
        st.candidates.erase(op.asn);
    reselect(op.asn, op.prefix);
}

void Simulation::deliver(const Message& msg) {
    ++messages_delivered_;
    last_routing_activity_ = now_;
    if (msg.announce) {
        if (msg.prefix.length > floor_) return;  // import filter
        for (uint32_t asn : msg.path)
            if (asn == msg.to) return;  // loop
        auto& st = state_[msg.to][msg.prefix];
        Route route{msg.prefix, msg.path, msg.from, rel_of(msg.to, msg.from)};
        auto it = st.candidates.find(msg.from);
        if (it != st.candidates.end() && it->second == route) return;
        st.candidates[msg.from] = std::move(route);
    } else {
        auto as_it = state_.find(msg.to);
        if (as_it == state_.end()) return;
        auto pf_it = as_it->second.find(msg.prefix);
        if (pf_it == as_it->second.end()) return;
        if (pf_it->second.candidates.erase(msg.from) == 0) return;
    }
    reselect(msg.to, msg.prefix);
}

void Simulation::send(uint32_t from, uint32_t to, bool announce, const IpPrefix& prefix,
                      std::vector<uint32_t> path) {
    int64_t t = now_ + link_delay(from, to, prefix);
    // BGP sessions are FIFO: a later update must not overtake an earlier one
    // on the same session, or receivers end up holding stale state
    auto& floor = fifo_floor_[std::make_tuple(from, to, prefix)];
    if (t < floor) t = floor;
    floor = t;
    push(t, false, Message{from, to, announce, prefix, std::move(path)});
}

void Simulation::reselect(uint32_t asn, const IpPrefix& prefix) {
    auto& st = state_[asn][prefix];
    const Route* chosen = decide(st.candidates);
    std::optional<Route> new_best =
        chosen ? std::optional<Route>(*chosen) : std::nullopt;
    if (new_best == st.best) return;
    st.best = new_best;

    BestRouteChange change{now_, asn, prefix, st.best};
    trace_.route_changes.push_back(change);
    if (change_listener_) change_listener_(change);

    if (mrai_ms_ <= 0 || now_ >= st.last_export_ms + mrai_ms_) {
        export_state(asn, prefix);
        return;
    }
    // within the advertisement interval: coalesce and flush at its end
    st.dirty = true;
    if (!st.flush_pending) {
        st.flush_pending = true;
        int64_t at = st.last_export_ms + mrai_ms_;
        push(at, false, Callback{[this, asn, prefix] {
                 auto& ps = state_[asn][prefix];
                 ps.flush_pending = false;
                 if (ps.dirty) {
                     ps.dirty = false;
                     export_state(asn, prefix);
                 }
             }});
    }
}

void Simulation::export_state(uint32_t asn, const IpPrefix& prefix) {
    auto& st = state_[asn][prefix];
    st.last_export_ms = now_;
    std::set<uint32_t> targets;
    if (st.best) {
        for (const auto& nbr : topo_.neighbors(asn))
            if (exportable(*st.best, nbr.rel)) targets.insert(nbr.asn);
    }
    // implicit withdraws to neighbors that lost eligibility
    for (uint32_t gone : st.rib_out) {
        if (!targets.count(gone)) send(asn, gone, false, prefix, {});
    }
    if (st.best) {
        auto path = export_path(*st.best, asn);
        for (uint32_t to : targets) send(asn, to, true, prefix, path);
    }
    st.rib_out = std::move(targets);
}

std::map<IpPrefix, uint32_t> Simulation::route_origins(uint32_t asn) const {
    std::map<IpPrefix, uint32_t> out;
    auto as_it = state_.find(asn);
    if (as_it == state_.end()) return out;
    for (const auto& [prefix, st] : as_it->second)
        if (st.best) out[prefix] = st.best->origin();
    return out;
}

std::vector<SnapshotEntry> Simulation::snapshot(uint32_t vantage) const {
    std::vector<SnapshotEntry> out;
    auto as_it = state_.find(vantage);
    if (as_it == state_.end()) return out;
    for (const auto& [prefix, st] : as_it->second)
        if (st.best) out.push_back(SnapshotEntry{prefix, export_path(*st.best, vantage)});
    return out;
}

std::map<uint32_t, std::map<IpPrefix, Route>> Simulation::rib_snapshot() const {
    std::map<uint32_t, std::map<IpPrefix, Route>> out;
    for (const auto& [asn, prefixes] : state_) {
        auto& dst = out[asn];
        for (const auto& [prefix, st] : prefixes)
            if (st.best) dst.emplace(prefix, *st.best);
    }
    return out;
}

}  // namespace vigil::sim
