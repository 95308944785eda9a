#include "sim/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aitax::sim {

SimTime from_seconds(double seconds) {
    return static_cast<SimTime>(std::llround(seconds * 1e9));
}

double to_seconds(SimTime t) { return static_cast<double>(t) * 1e-9; }

Simulator::Simulator() { heap_.reserve(1024); }

EventHandle Simulator::schedule(SimTime t, EventHandler& handler, std::uint32_t kind, std::uint64_t arg) {
    if (t < now_) {
        throw std::invalid_argument("cannot schedule at " + std::to_string(t) + " ns, clock is at " +
                                    std::to_string(now_) + " ns");
    }
    Event ev{t, next_seq_++, &handler, arg, kind};
    heap_.push_back(ev);
    std::push_heap(heap_.begin(), heap_.end(), later);
    return {t, ev.seq};
}

EventHandle Simulator::schedule(SimTime t, std::function<void()> action) {
    if (t < now_) {
        throw std::invalid_argument("cannot schedule at " + std::to_string(t) + " ns, clock is at " +
                                    std::to_string(now_) + " ns");
    }
    std::uint32_t slot = closures_.store(std::move(action));
    return schedule(t, closures_, slot, 0);
}

void Simulator::dispatch_top() {
    std::pop_heap(heap_.begin(), heap_.end(), later);
    Event ev = heap_.back();
    heap_.pop_back();
    now_ = ev.time;
    ++dispatched_;
    ev.handler->on_event(ev.kind, ev.arg);
}

SimTime Simulator::run_until(SimTime t_end) {
    if (t_end < now_) throw std::invalid_argument("run_until target is in the past");
    while (!heap_.empty() && heap_.front().time <= t_end) dispatch_top();
    now_ = t_end;
    return now_;
}

bool Simulator::step() {
    if (heap_.empty()) return false;
    dispatch_top();
    return true;
}

SimTime Simulator::next_time() const {
    if (heap_.empty()) throw std::logic_error("event queue is empty");
    return heap_.front().time;
}

std::uint32_t Simulator::ClosureTable::store(std::function<void()> fn) {
    if (!free_.empty()) {
        std::uint32_t slot = free_.back();
        free_.pop_back();
        slots_[slot] = std::move(fn);
        return slot;
    }
    slots_.push_back(std::move(fn));
    return static_cast<std::uint32_t>(slots_.size() - 1);
}

void Simulator::ClosureTable::on_event(std::uint32_t slot, std::uint64_t) {
    auto fn = std::move(slots_[slot]);
    slots_[slot] = nullptr;
    free_.push_back(slot);
    fn();
}

}  // namespace aitax::sim
