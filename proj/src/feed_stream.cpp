#include "vigil/feed_stream.hpp"

#include <chrono>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace vigil {

struct ReplayStream::Impl {
    std::ifstream file;
    std::string path;
};

ReplayStream::ReplayStream(const std::string& path, double speed_factor)
    : impl_(std::make_unique<Impl>()), speed_(speed_factor) {
    impl_->path = path;
    impl_->file.open(path);
    if (!impl_->file) throw std::runtime_error("cannot open replay file: " + path);
}

ReplayStream::~ReplayStream() = default;

std::optional<FeedEvent> ReplayStream::next() {
    std::string line;
    while (std::getline(impl_->file, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream in(line);
            std::string hash, gt, marker;
            int64_t ms;
            if (in >> hash >> gt >> marker >> ms && gt == "GT")
                ground_truth_[marker] = ms;
            continue;
        }
        FeedEvent ev;
        try {
            ev = normalize(line);
        } catch (const ParseError&) {
            ++rejected_;
            continue;
        }
        if (ev.timestamp_ms < last_ts_)
            throw std::runtime_error("unsorted replay file " + impl_->path +
                                     " at timestamp " + std::to_string(ev.timestamp_ms));
        if (speed_ > 0.0 && paced_started_) {
            auto gap_ms = static_cast<int64_t>(
                static_cast<double>(ev.timestamp_ms - last_ts_) / speed_);
            if (gap_ms > 0)
                std::this_thread::sleep_for(std::chrono::milliseconds(gap_ms));
        }
        paced_started_ = true;
        last_ts_ = ev.timestamp_ms;
        return ev;
    }
    if (impl_->file.bad())
        throw std::runtime_error("read error on replay file: " + impl_->path);
    return std::nullopt;
}

Mux::Mux(std::vector<std::unique_ptr<EventStream>> inputs, int64_t reorder_window_ms)
    : window_(reorder_window_ms) {
    if (inputs.empty()) throw std::invalid_argument("mux needs at least one input");
    inputs_.reserve(inputs.size());
    for (auto& s : inputs) inputs_.push_back(Input{std::move(s)});
    live_count_ = inputs_.size();
}

int64_t Mux::min_live_frontier() const {
    int64_t m = std::numeric_limits<int64_t>::max();
    for (const auto& in : inputs_)
        if (in.live && in.frontier < m) m = in.frontier;
    return m;
}

// Pulls one event from the most-behind live input (models reading all
// sources concurrently, deterministically). Returns false when all inputs
// are exhausted.
bool Mux::pull_once() {
    Input* pick = nullptr;
    for (auto& in : inputs_) {
        if (in.live && (!pick || in.frontier < pick->frontier)) pick = &in;
    }
    if (!pick) return false;
    if (auto ev = pick->stream->next()) {
        if (ev->timestamp_ms > pick->frontier) pick->frontier = ev->timestamp_ms;
        buffer_.push(Entry{std::move(*ev), seq_++});
    } else {
        pick->live = false;
        --live_count_;
    }
    return true;
}

std::optional<FeedEvent> Mux::next() {
    while (true) {
        if (!buffer_.empty()) {
            int64_t head_ts = buffer_.top().event.timestamp_ms;
            if (live_count_ == 0 || head_ts + window_ <= min_live_frontier()) {
                FeedEvent ev = buffer_.top().event;
                buffer_.pop();
                if (ev.timestamp_ms < last_emitted_)
                    ev.late = true;
                else
                    last_emitted_ = ev.timestamp_ms;
                return ev;
            }
        }
        if (live_count_ == 0) return std::nullopt;
        pull_once();
    }
}

}  // namespace vigil
