#include "mca/sim/mobility.hpp"

namespace mca {

HandoffDecision network_reselection(const CellMeasurement& serving, const std::vector<CellMeasurement>& candidates) {
    if (serving.rss >= serving.reselection_threshold) return {};
    const CellMeasurement* best = nullptr;
    for (const auto& c : candidates) {
        if (!c.available || c.barred) continue;
        if (c.plmn != serving.plmn || c.network == serving.network) continue;
        if (c.rss < c.reselection_threshold) continue;
        if (!best || c.reselection_priority > best->reselection_priority ||
            (c.reselection_priority == best->reselection_priority &&
             (c.rss > best->rss || (c.rss == best->rss && c.cell < best->cell))))
            best = &c;
    }
    if (!best) return {};
    return {true, best->cell, best->network};
}

}  // namespace mca
