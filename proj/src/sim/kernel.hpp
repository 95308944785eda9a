#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace aitax::sim {

// Virtual time in integer nanoseconds.
using SimTime = std::int64_t;

inline constexpr SimTime kNanosPerSecond = 1'000'000'000;

SimTime from_seconds(double seconds);
double to_seconds(SimTime t);

class EventHandler {
public:
    virtual ~EventHandler() = default;
    virtual void on_event(std::uint32_t kind, std::uint64_t arg) = 0;
};

struct EventHandle {
    SimTime time = 0;
    std::uint64_t sequence = 0;
};

// Single-threaded event loop. Events run in (time, sequence) order.
class Simulator {
public:
    Simulator();
    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    SimTime now() const { return now_; }

    // Throws std::invalid_argument when t < now().
    EventHandle schedule(SimTime t, EventHandler& handler, std::uint32_t kind, std::uint64_t arg = 0);
    EventHandle schedule(SimTime t, std::function<void()> action);

    // Dispatches every event with time <= t_end, then sets the clock to t_end.
    SimTime run_until(SimTime t_end);

    // Dispatches the next event, if any. Returns false when the queue is empty.
    bool step();

    bool empty() const { return heap_.empty(); }
    SimTime next_time() const;
    std::size_t pending() const { return heap_.size(); }
    std::uint64_t dispatched() const { return dispatched_; }

private:
    struct Event {
        SimTime time;
        std::uint64_t seq;
        EventHandler* handler;
        std::uint64_t arg;
        std::uint32_t kind;
    };
    static bool later(const Event& a, const Event& b) {
        return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }

    class ClosureTable : public EventHandler {
    public:
        std::uint32_t store(std::function<void()> fn);
        void on_event(std::uint32_t slot, std::uint64_t) override;

    private:
        std::vector<std::function<void()>> slots_;
        std::vector<std::uint32_t> free_;
    };

    void dispatch_top();

    std::vector<Event> heap_;
    ClosureTable closures_;
    SimTime now_ = 0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t dispatched_ = 0;
};

}  // namespace aitax::sim
