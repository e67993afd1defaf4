#include "mca/sim/delivery.hpp"

#include <algorithm>
#include <numeric>

#include "mca/sim/drx.hpp"

namespace mca {

std::string_view to_string(DeliveryStatus s) {
    switch (s) {
        case DeliveryStatus::kDelivered: return "DELIVERED";
        case DeliveryStatus::kDelayed: return "DELAYED";
        case DeliveryStatus::kLost: return "LOST";
    }
    return "UNKNOWN";
}

const ServingSpan* DeviceTimeline::span_at(double t) const {
    for (const auto& s : serving)
        if (s.span.contains(t)) return &s;
    return nullptr;
}

bool DeviceTimeline::registered_at(double t) const { return span_at(t) != nullptr; }

bool DeviceTimeline::available_at(double t) const {
    if (!registered_at(t)) return false;
    return std::none_of(off_frequency.begin(), off_frequency.end(),
                        [t](const Interval& i) { return i.contains(t); });
}

std::optional<double> DeviceTimeline::return_time(double t) const {
    // Each pass moves t forward past one blocking interval; both lists are finite.
    for (std::size_t guard = 0; guard <= serving.size() + off_frequency.size() + 1; ++guard) {
        if (!registered_at(t)) {
            std::optional<double> next;
            for (const auto& s : serving)
                if (s.span.start >= t && s.span.length() > 0.0 && (!next || s.span.start < *next))
                    next = s.span.start;
            if (!next) return std::nullopt;
            t = *next;
            continue;
        }
        bool moved = false;
        for (const auto& off : off_frequency) {
            if (off.contains(t)) {
                t = off.end;
                moved = true;
                break;
            }
        }
        if (!moved) return t;
    }
    return std::nullopt;
}

std::vector<DeliveryRecord> deliver_traffic(const TrafficWorkload& workload, const DeviceTimeline& timeline) {
    std::vector<std::size_t> order(workload.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return workload[a].arrival_time < workload[b].arrival_time;
    });

    std::vector<Interval> activity;
    std::vector<DeliveryRecord> out;
    for (std::size_t idx : order) {
        const Flow& f = workload[idx];
        if (f.arrival_time >= timeline.horizon) continue;
        const double a = f.arrival_time;

        double paged = a;
        if (f.direction == Direction::kDownlink) {
            const ServingSpan* span = timeline.span_at(a);
            const bool awake = std::any_of(activity.begin(), activity.end(),
                                           [a](const Interval& i) { return i.contains(a); });
            if (span && !awake && !in_on_duration(span->sib, a)) paged = next_cycle_start(span->sib, a);
        }

        DeliveryRecord rec;
        rec.flow = idx;
        rec.direction = f.direction;
        rec.paged_at = paged;
        // A flow is lost only when the device is still away at the horizon; a
        // page that lands past the horizon on a ready device goes through.
        auto back = timeline.return_time(paged);
        if (!back || (*back > paged && *back > timeline.horizon)) {
            rec.status = DeliveryStatus::kLost;
            rec.delay = std::max(0.0, timeline.horizon - paged);
        } else {
            rec.delivered_at = *back;
            rec.delay = *back - paged;
            rec.status = rec.delay > 0.0 ? DeliveryStatus::kDelayed : DeliveryStatus::kDelivered;
            activity.push_back({*back, *back + f.duration + timeline.inactivity_tail});
        }
        out.push_back(rec);
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.flow < y.flow; });
    return out;
}

std::vector<Interval> flow_activity_intervals(const TrafficWorkload& workload, const DeviceTimeline& timeline) {
    std::vector<Interval> out;
    for (const auto& rec : deliver_traffic(workload, timeline)) {
        if (!rec.delivered_at) continue;
        const Flow& f = workload[rec.flow];
        out.push_back({*rec.delivered_at, *rec.delivered_at + f.duration + timeline.inactivity_tail});
    }
    std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.start < b.start; });
    return out;
}

}  // namespace mca
