#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "sim/kernel.hpp"

namespace aitax::sim {

// Busy time and served volume bucketed into fixed windows. Several resources
// of one class may share an instance; busy fraction divides by member count.
class UsageWindows {
public:
    UsageWindows(SimTime window, std::size_t members = 1);

    void add(SimTime start, SimTime end, double units);
    void add_member() { ++members_; }

    SimTime window() const { return window_; }
    std::size_t members() const { return members_; }
    std::size_t size() const { return busy_.size(); }
    SimTime busy(std::size_t i) const { return i < busy_.size() ? busy_[i] : 0; }
    double units(std::size_t i) const { return i < units_.size() ? units_[i] : 0.0; }

    // Busy fraction and volume over [from, to), whole windows only.
    double busy_fraction(SimTime from, SimTime to) const;
    double units_between(SimTime from, SimTime to) const;

private:
    void grow(std::size_t n);

    SimTime window_;
    std::size_t members_;
    std::vector<SimTime> busy_;
    std::vector<double> units_;
};

// FIFO work-conserving server: a demand of s units arriving at t completes at
// max(t, busy_until) + s / capacity.
class RateResource {
public:
    RateResource(std::string name, double capacity, UsageWindows* usage = nullptr, bool track_queue = false);

    // Throws std::invalid_argument for units <= 0.
    SimTime acquire(SimTime arrival, double units);

    SimTime service_time(double units) const;
    const std::string& name() const { return name_; }
    double capacity() const { return capacity_; }
    SimTime busy_until() const { return busy_until_; }
    double units_accepted() const { return units_accepted_; }
    SimTime busy_total() const { return busy_total_; }
    std::uint64_t demands() const { return demands_; }

    // Demands accepted but not complete at `now`. Needs track_queue.
    std::size_t queue_length(SimTime now);
    double backlog_seconds(SimTime now) const;

private:
    std::string name_;
    double capacity_;
    UsageWindows* usage_;
    bool track_queue_;
    SimTime busy_until_ = 0;
    SimTime busy_total_ = 0;
    double units_accepted_ = 0.0;
    std::uint64_t demands_ = 0;
    std::deque<SimTime> outstanding_;
};

}  // namespace aitax::sim
