#include "sim/rate_resource.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aitax::sim {

UsageWindows::UsageWindows(SimTime window, std::size_t members) : window_(window), members_(members) {
    if (window <= 0) throw std::invalid_argument("sampling interval must be positive");
}

void UsageWindows::grow(std::size_t n) {
    if (n > busy_.size()) {
        busy_.resize(n, 0);
        units_.resize(n, 0.0);
    }
}

void UsageWindows::add(SimTime start, SimTime end, double units) {
    if (end <= start) {
        std::size_t w = static_cast<std::size_t>(start / window_);
        grow(w + 1);
        units_[w] += units;
        return;
    }
    const double span = static_cast<double>(end - start);
    std::size_t first = static_cast<std::size_t>(start / window_);
    std::size_t last = static_cast<std::size_t>((end - 1) / window_);
    grow(last + 1);
    if (first == last) {
        busy_[first] += end - start;
        units_[first] += units;
        return;
    }
    for (std::size_t w = first; w <= last; ++w) {
        SimTime lo = std::max<SimTime>(start, static_cast<SimTime>(w) * window_);
        SimTime hi = std::min<SimTime>(end, static_cast<SimTime>(w + 1) * window_);
        busy_[w] += hi - lo;
        units_[w] += units * static_cast<double>(hi - lo) / span;
    }
}

double UsageWindows::busy_fraction(SimTime from, SimTime to) const {
    std::size_t a = static_cast<std::size_t>(from / window_);
    std::size_t b = static_cast<std::size_t>(to / window_);
    if (b <= a || members_ == 0) return 0.0;
    SimTime total = 0;
    for (std::size_t w = a; w < b; ++w) total += busy(w);
    return static_cast<double>(total) / (static_cast<double>(b - a) * static_cast<double>(window_) *
                                         static_cast<double>(members_));
}

double UsageWindows::units_between(SimTime from, SimTime to) const {
    std::size_t a = static_cast<std::size_t>(from / window_);
    std::size_t b = static_cast<std::size_t>(to / window_);
    double total = 0.0;
    for (std::size_t w = a; w < b; ++w) total += units(w);
    return total;
}

RateResource::RateResource(std::string name, double capacity, UsageWindows* usage, bool track_queue)
    : name_(std::move(name)), capacity_(capacity), usage_(usage), track_queue_(track_queue) {
    if (!(capacity > 0.0)) throw std::invalid_argument("resource " + name_ + ": capacity must be positive");
}

SimTime RateResource::service_time(double units) const {
    return static_cast<SimTime>(std::llround(units * 1e9 / capacity_));
}

SimTime RateResource::acquire(SimTime arrival, double units) {
    if (!(units > 0.0)) throw std::invalid_argument("resource " + name_ + ": demand must be positive");
    const SimTime start = std::max(arrival, busy_until_);
    const SimTime service = service_time(units);
    busy_until_ = start + service;
    busy_total_ += service;
    units_accepted_ += units;
    ++demands_;
    if (usage_) usage_->add(start, busy_until_, units);
    if (track_queue_) {
        while (!outstanding_.empty() && outstanding_.front() <= arrival) outstanding_.pop_front();
        outstanding_.push_back(busy_until_);
    }
    return busy_until_;
}

std::size_t RateResource::queue_length(SimTime now) {
    while (!outstanding_.empty() && outstanding_.front() <= now) outstanding_.pop_front();
    return outstanding_.size();
}

double RateResource::backlog_seconds(SimTime now) const {
    return busy_until_ > now ? to_seconds(busy_until_ - now) : 0.0;
}

}  // namespace aitax::sim
