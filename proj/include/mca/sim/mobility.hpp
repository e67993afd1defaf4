#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mca/core/types.hpp"

namespace mca {

/// One cell as seen by the idle-mode reselection logic.
struct CellMeasurement {
    CellId cell;
    NetworkId network;
    std::string plmn;
    double rss = 0.0;
    int reselection_priority = 0;
    double reselection_threshold = -120.0;
    bool barred = false;
    bool available = true;
};

struct HandoffDecision {
    bool move = false;
    CellId cell;
    NetworkId network;
    bool operator==(const HandoffDecision&) const = default;
};

/// Network-controlled reselection. The device leaves the serving cell when
/// its RSS falls below the serving threshold, heading for the same-carrier
/// cell with the highest priority (then strongest RSS, then smallest id).
/// A candidate must itself sit at or above its own threshold; otherwise the
/// device would bounce straight back.
HandoffDecision network_reselection(const CellMeasurement& serving, const std::vector<CellMeasurement>& candidates);

}  // namespace mca
