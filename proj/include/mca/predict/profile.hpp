#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mca/core/types.hpp"
#include "mca/sim/events.hpp"

namespace mca {

/// Occurrence counts of one configuration field's observed values.
struct FieldStat {
    std::map<std::string, int> counts;
    int total = 0;

    /// Most frequent value; ties go to the smallest value string.
    const std::string& modal() const;
    int modal_count() const;
    double probability() const { return total == 0 ? 0.0 : static_cast<double>(modal_count()) / total; }
    bool operator==(const FieldStat&) const = default;
};

// Profiled field names.
namespace field {
inline constexpr const char* kTrafficClass = "traffic_class";
inline constexpr const char* kDelayClass = "delay_class";
inline constexpr const char* kMaxDlRate = "max_dl_rate";
inline constexpr const char* kMaxUlRate = "max_ul_rate";
inline constexpr const char* kDlGbr = "dl_gbr";
inline constexpr const char* kUlGbr = "ul_gbr";
inline constexpr const char* kTddConfig = "tdd_config";
inline constexpr const char* kPagingCycle = "paging_cycle";
inline constexpr const char* kHandoffPriority = "handoff_priority";
inline constexpr const char* kHandoffThreshold = "handoff_threshold";
inline constexpr const char* kVoiceOverPs = "voice_over_ps";
}  // namespace field

/// Per-(network, cell) heterogeneity profile built from signalling.
class ProfileStore {
public:
    using Key = std::pair<NetworkId, CellId>;
    using Fields = std::map<std::string, FieldStat>;

    void observe(const NetworkId& net, const CellId& cell, const std::string& field, const std::string& value);

    const Fields* cell_profile(const NetworkId& net, const CellId& cell) const;
    /// Modal value for one cell, falling back to the pooled counts of the network.
    std::optional<std::string> modal(const NetworkId& net, const CellId& cell, const std::string& field) const;
    std::optional<std::string> network_modal(const NetworkId& net, const std::string& field) const;
    std::optional<double> modal_number(const NetworkId& net, const CellId& cell, const std::string& field) const;
    bool has_network(const NetworkId& net) const;

    const std::map<Key, Fields>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    /// Tab-separated rows: network, cell, field, value, count, probability.
    void write_tsv(std::ostream& os) const;
    static ProfileStore read_tsv(std::istream& is);

    bool operator==(const ProfileStore&) const = default;

private:
    std::map<Key, Fields> entries_;
};

/// Canonical shortest round-trip text for a number.
std::string format_number(double v);

/// Folds one event into the store. QoS comes from EPS/PDP setup, radio
/// settings from RRC reconfiguration, voice support from location updates;
/// every other kind is ignored.
void profile_update(ProfileStore& store, const CellularEvent& event);

}  // namespace mca
