#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "mca/core/types.hpp"

namespace mca {

enum class DeliveryStatus { kDelivered, kDelayed, kLost };
std::string_view to_string(DeliveryStatus s);

struct DeliveryRecord {
    std::size_t flow = 0;  // index into the workload
    Direction direction = Direction::kDownlink;
    DeliveryStatus status = DeliveryStatus::kDelivered;
    double delay = 0.0;
    double paged_at = 0.0;  // when the network (or the app, for uplink) first tried to move data
    std::optional<double> delivered_at;

    bool operator==(const DeliveryRecord&) const = default;
};

struct ServingSpan {
    Interval span;
    SibConfig sib;  // paging configuration of the serving cell
    bool operator==(const ServingSpan&) const = default;
};

/// What the device looked like over a run: when it was registered (and with
/// which DRX configuration) and when it was tuned away scanning.
struct DeviceTimeline {
    std::vector<ServingSpan> serving;    // disjoint, sorted
    std::vector<Interval> off_frequency;  // disjoint, sorted
    double horizon = 0.0;
    double inactivity_tail = 0.0;

    bool registered_at(double t) const;
    const ServingSpan* span_at(double t) const;
    bool available_at(double t) const;
    /// Earliest t' >= t at which the device is registered and on-frequency.
    std::optional<double> return_time(double t) const;
};

/// Interval-level traffic delivery against a device timeline. Flows arriving
/// at or after the horizon are not reported.
std::vector<DeliveryRecord> deliver_traffic(const TrafficWorkload& workload, const DeviceTimeline& timeline);

/// Intervals during which flows keep the device AWAKE (delivery through end + tail).
std::vector<Interval> flow_activity_intervals(const TrafficWorkload& workload, const DeviceTimeline& timeline);

}  // namespace mca
