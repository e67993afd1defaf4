#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"
#include "mca/core/types.hpp"

namespace mca {

struct PagingPayload {
    CellId cell;
    bool data_pending = false;
};
struct RadioMeasPayload {
    CellId cell;
    double rss = 0.0;
};
struct Sib1Payload {
    CellId cell;
    std::string plmn;
    bool barred = false;
};
struct SibReselPayload {
    CellId cell;
    int reselection_priority = 0;
    double reselection_threshold = 0.0;
};
struct RrcReconfigPayload {
    CellId cell;
    NetworkId network;
    int tdd_config = 0;
    double paging_cycle = 0.0;
    int handoff_priority = 0;
    double handoff_threshold = 0.0;
};
struct EpsPdpSetupPayload {
    CellId cell;
    NetworkId network;
    QosConfig qos;
};
struct LocationUpdatePayload {
    CellId cell;
    NetworkId network;
    bool voice_over_ps = true;
};
struct AttachAcceptPayload {
    CellId cell;
    NetworkId network;
};
struct DetachPayload {
    NetworkId network;
};
struct OutOfServicePayload {
    std::optional<NetworkId> network;
    std::string cause;
};

/// Variant order matches EventKind, so the kind is always consistent with the payload.
using EventPayload = std::variant<PagingPayload, RadioMeasPayload, Sib1Payload, SibReselPayload,
                                  RrcReconfigPayload, EpsPdpSetupPayload, LocationUpdatePayload,
                                  AttachAcceptPayload, DetachPayload, OutOfServicePayload>;

enum class EventKind {
    kPaging,
    kRadioMeas,
    kRrcSib1,
    kRrcSibResel,
    kRrcReconfig,
    kEpsPdpSetup,
    kLocationUpdate,
    kAttachAccept,
    kDetach,
    kOutOfService,
};

std::string_view to_string(EventKind kind);

struct CellularEvent {
    double time = 0.0;
    EventPayload payload;

    EventKind kind() const { return static_cast<EventKind>(payload.index()); }
};

/// One structured record: {"time", "kind", "payload"} in that order.
nlohmann::ordered_json to_json(const CellularEvent& ev);

}  // namespace mca
