#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "carguard/time.hpp"

namespace carguard::sim {

/// Min-queue keyed by (time, insertion sequence): equal timestamps pop in
/// FIFO order.
template <typename Event>
class EventQueue {
public:
    struct Entry {
        VirtualTime at;
        std::uint64_t sequence;
        Event event;
    };

    void push(VirtualTime at, Event event) { heap_.push(Entry{at, next_sequence_++, std::move(event)}); }

    [[nodiscard]] bool empty() const { return heap_.empty(); }
    [[nodiscard]] std::size_t size() const { return heap_.size(); }
    [[nodiscard]] std::optional<VirtualTime> next_time() const {
        if (heap_.empty()) return std::nullopt;
        return heap_.top().at;
    }

    Entry pop() {
        Entry top = heap_.top();
        heap_.pop();
        return top;
    }

private:
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.at != b.at) return a.at > b.at;
            return a.sequence > b.sequence;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
    std::uint64_t next_sequence_ = 0;
};

}  // namespace carguard::sim
