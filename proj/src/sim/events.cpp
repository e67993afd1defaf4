#include "mca/sim/events.hpp"

namespace mca {

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::kPaging: return "PAGING";
        case EventKind::kRadioMeas: return "RADIO_MEAS";
        case EventKind::kRrcSib1: return "RRC_SIB1";
        case EventKind::kRrcSibResel: return "RRC_SIB_RESEL";
        case EventKind::kRrcReconfig: return "RRC_RECONFIG";
        case EventKind::kEpsPdpSetup: return "EPS_PDP_SETUP";
        case EventKind::kLocationUpdate: return "LOCATION_UPDATE";
        case EventKind::kAttachAccept: return "ATTACH_ACCEPT";
        case EventKind::kDetach: return "DETACH";
        case EventKind::kOutOfService: return "OUT_OF_SERVICE";
    }
    return "UNKNOWN";
}

namespace {

using nlohmann::ordered_json;

struct PayloadJson {
    ordered_json operator()(const PagingPayload& p) const {
        return {{"cell", p.cell}, {"data_pending", p.data_pending}};
    }
    ordered_json operator()(const RadioMeasPayload& p) const { return {{"cell", p.cell}, {"rss", p.rss}}; }
    ordered_json operator()(const Sib1Payload& p) const {
        return {{"cell", p.cell}, {"plmn", p.plmn}, {"barred", p.barred}};
    }
    ordered_json operator()(const SibReselPayload& p) const {
        return {{"cell", p.cell},
                {"reselection_priority", p.reselection_priority},
                {"reselection_threshold", p.reselection_threshold}};
    }
    ordered_json operator()(const RrcReconfigPayload& p) const {
        return {{"cell", p.cell},
                {"network", p.network},
                {"tdd_config", p.tdd_config},
                {"paging_cycle", p.paging_cycle},
                {"handoff_priority", p.handoff_priority},
                {"handoff_threshold", p.handoff_threshold}};
    }
    ordered_json operator()(const EpsPdpSetupPayload& p) const {
        return {{"cell", p.cell},
                {"network", p.network},
                {"traffic_class", to_string(p.qos.traffic_class)},
                {"delay_class", p.qos.delay_class},
                {"max_dl_rate", p.qos.max_dl_rate},
                {"max_ul_rate", p.qos.max_ul_rate},
                {"dl_gbr", p.qos.dl_gbr},
                {"ul_gbr", p.qos.ul_gbr}};
    }
    ordered_json operator()(const LocationUpdatePayload& p) const {
        return {{"cell", p.cell}, {"network", p.network}, {"voice_over_ps", p.voice_over_ps}};
    }
    ordered_json operator()(const AttachAcceptPayload& p) const {
        return {{"cell", p.cell}, {"network", p.network}};
    }
    ordered_json operator()(const DetachPayload& p) const { return {{"network", p.network}}; }
    ordered_json operator()(const OutOfServicePayload& p) const {
        return {{"network", p.network ? ordered_json(*p.network) : ordered_json(nullptr)}, {"cause", p.cause}};
    }
};

}  // namespace

nlohmann::ordered_json to_json(const CellularEvent& ev) {
    ordered_json j;
    j["time"] = ev.time;
    j["kind"] = to_string(ev.kind());
    j["payload"] = std::visit(PayloadJson{}, ev.payload);
    return j;
}

}  // namespace mca
