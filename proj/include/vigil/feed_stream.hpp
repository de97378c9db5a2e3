#pragma once

#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "vigil/feed.hpp"

namespace vigil {

/// Pull interface shared by replay files, in-memory fixtures, and adapters.
/// next() yields events in arrival order; nullopt means exhausted.
class EventStream {
public:
    virtual ~EventStream() = default;
    virtual std::optional<FeedEvent> next() = 0;
};

class VectorStream : public EventStream {
public:
    explicit VectorStream(std::vector<FeedEvent> events)
        : events_(std::move(events)) {}

    std::optional<FeedEvent> next() override {
        if (pos_ >= events_.size()) return std::nullopt;
        return events_[pos_++];
    }

private:
    std::vector<FeedEvent> events_;
    size_t pos_ = 0;
};

/// Replays a record file. Malformed records are skipped and counted so a bad
/// line cannot stall monitoring; an out-of-order timestamp is an error (the
/// format requires sorted files). `# GT <marker> <ms>` comments are collected
/// as ground-truth metadata; other comments and blank lines are ignored.
///
/// speed_factor scales wall-clock pacing: original gaps are divided by it,
/// and infinity (the default) means as fast as possible.
class ReplayStream : public EventStream {
public:
    explicit ReplayStream(const std::string& path,
                          double speed_factor = kAsFastAsPossible);
    ~ReplayStream() override;

    std::optional<FeedEvent> next() override;

    size_t rejected_records() const { return rejected_; }
    const std::map<std::string, int64_t>& ground_truth() const { return ground_truth_; }

    static constexpr double kAsFastAsPossible = 0.0;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    size_t rejected_ = 0;
    std::map<std::string, int64_t> ground_truth_;
    int64_t last_ts_ = INT64_MIN;
    double speed_ = kAsFastAsPossible;
    bool paced_started_ = false;
};

inline std::unique_ptr<ReplayStream> open_replay(
    const std::string& path, double speed_factor = ReplayStream::kAsFastAsPossible) {
    return std::make_unique<ReplayStream>(path, speed_factor);
}

/// Merges several streams into one, reordering within `reorder_window_ms`.
/// An event is held until every still-live input has advanced past
/// event_ts + window, so bounded skew comes out sorted; an event that misses
/// the window is emitted immediately with its `late` flag set. Every input
/// event appears exactly once.
class Mux : public EventStream {
public:
    Mux(std::vector<std::unique_ptr<EventStream>> inputs,
        int64_t reorder_window_ms = kDefaultReorderWindowMs);

    std::optional<FeedEvent> next() override;

    static constexpr int64_t kDefaultReorderWindowMs = 2000;

private:
    struct Entry {
        FeedEvent event;
        uint64_t seq;
        bool operator>(const Entry& o) const {
            return event.timestamp_ms != o.event.timestamp_ms
                       ? event.timestamp_ms > o.event.timestamp_ms
                       : seq > o.seq;
        }
    };
    struct Input {
        std::unique_ptr<EventStream> stream;
        int64_t frontier = INT64_MIN;  // max timestamp pulled so far
        bool live = true;
    };

    bool pull_once();
    int64_t min_live_frontier() const;

    std::vector<Input> inputs_;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> buffer_;
    int64_t window_;
    int64_t last_emitted_ = INT64_MIN;
    uint64_t seq_ = 0;
    size_t live_count_;
};

}  // namespace vigil
