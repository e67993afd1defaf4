#include "mca/guard/fault_guard.hpp"

#include "mca/sim/mobility.hpp"

namespace mca {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::kAllowed: return "ALLOWED";
        case Verdict::kBarred: return "BARRED";
        case Verdict::kIncompleteService: return "INCOMPLETE_SERVICE";
        case Verdict::kMobilityConflict: return "MOBILITY_CONFLICT";
    }
    return "UNKNOWN";
}

CheckResult check_forbidden(const NetworkScan& candidate) {
    CheckResult r;
    bool any_available = false;
    for (const auto& e : candidate.cells) {
        if (!e.available()) continue;
        any_available = true;
        if (e.sib && !e.sib->barred) return r;
    }
    if (!any_available) return r;  // nothing to attach to, but nothing forbidden either
    r.verdict = Verdict::kBarred;
    r.detail = "every available cell is barred or lacks SIB1";
    return r;
}

CheckResult check_service_completeness(const NetworkScan& candidate, const Scenario& sc, const ProfileStore& profiles,
                                       const ScanResult& scan, const ServiceRequirements& req) {
    CheckResult r;
    if (!req.needs_voice) return r;
    const CarrierNetwork& net = sc.network(candidate.network_id);
    if (net.rat != Rat::k4G) return r;
    const auto volte = profiles.network_modal(net.network_id, field::kVoiceOverPs);
    if (!volte) {
        r.warning = GuardWarning{net.network_id, "no voice profile; completeness not checked"};
        return r;
    }
    if (*volte == "true") return r;
    for (const auto& other : scan.networks) {
        const CarrierNetwork& o = sc.network(other.network_id);
        if (o.plmn == net.plmn && o.rat == Rat::k3G && other.any_available()) return r;
    }
    r.verdict = Verdict::kIncompleteService;
    r.detail = "voice falls back to 3G but no " + net.plmn + " 3G network is available";
    return r;
}

CheckResult check_mobility_coordination(const NetworkScan& candidate, const Scenario& sc,
                                        const ProfileStore& profiles, const ScanResult& scan) {
    CheckResult r;
    const ScanEntry* best = candidate.best_entry();
    if (!best) return r;
    const CarrierNetwork& net = sc.network(candidate.network_id);
    const auto threshold = profiles.modal_number(net.network_id, best->cell_id, field::kHandoffThreshold);
    if (!threshold) {
        r.warning = GuardWarning{net.network_id, "no mobility profile; reselection not predicted"};
        return r;
    }
    const auto priority = profiles.modal_number(net.network_id, best->cell_id, field::kHandoffPriority);
    CellMeasurement serving{best->cell_id, net.network_id, net.plmn, *best->rss,
                            static_cast<int>(priority.value_or(0.0)), *threshold, false, true};

    std::vector<CellMeasurement> alternatives;
    for (const auto& other : scan.networks) {
        const CarrierNetwork& o = sc.network(other.network_id);
        if (o.network_id == net.network_id || o.plmn != net.plmn) continue;
        for (const auto& e : other.cells) {
            if (!e.available()) continue;
            const SibConfig sib = e.sib.value_or(SibConfig{});
            CellMeasurement m{e.cell_id, o.network_id, o.plmn, *e.rss,
                              static_cast<int>(profiles.modal_number(o.network_id, e.cell_id, field::kHandoffPriority)
                                                   .value_or(sib.reselection_priority)),
                              profiles.modal_number(o.network_id, e.cell_id, field::kHandoffThreshold)
                                  .value_or(sib.reselection_threshold),
                              !e.sib || sib.barred, true};
            alternatives.push_back(m);
        }
    }
    const HandoffDecision d = network_reselection(serving, alternatives);
    if (!d.move) return r;
    r.verdict = Verdict::kMobilityConflict;
    r.final_network = d.network;
    r.detail = "carrier would reselect to " + d.network;
    return r;
}

namespace {

FaultVerdict judge(const NetworkScan& ns, const ScanResult& scan, const Scenario& sc, const ProfileStore& profiles,
                   const ServiceRequirements& req, std::vector<GuardWarning>* warnings) {
    FaultVerdict v{ns.network_id, Verdict::kAllowed, std::nullopt, ""};
    for (const CheckResult& r : {check_forbidden(ns), check_service_completeness(ns, sc, profiles, scan, req),
                                 check_mobility_coordination(ns, sc, profiles, scan)}) {
        if (r.warning && warnings) warnings->push_back(*r.warning);
        if (v.verdict == Verdict::kAllowed && r.verdict != Verdict::kAllowed) {
            v.verdict = r.verdict;
            v.final_network = r.final_network;
            v.detail = r.detail;
        }
    }
    return v;
}

}  // namespace

std::vector<FaultVerdict> evaluate_candidates(const ScanResult& scan, const Scenario& sc,
                                              const ProfileStore& profiles, const ServiceRequirements& req,
                                              const std::optional<NetworkId>& registered,
                                              std::vector<GuardWarning>* warnings) {
    std::vector<FaultVerdict> out;
    for (const auto& ns : scan.networks) {
        if (registered && ns.network_id == *registered) {
            out.push_back({ns.network_id, Verdict::kAllowed, std::nullopt, "registered network"});
            continue;
        }
        out.push_back(judge(ns, scan, sc, profiles, req, warnings));
    }
    return out;
}

GuardOutcome filter_candidates(const ScanResult& scan, const Scenario& sc, const ProfileStore& profiles,
                               const ServiceRequirements& req, const std::optional<NetworkId>& registered) {
    GuardOutcome out;
    out.filtered = scan;
    out.filtered.networks.clear();
    const auto verdicts = evaluate_candidates(scan, sc, profiles, req, registered, &out.warnings);
    for (std::size_t i = 0; i < scan.networks.size(); ++i) {
        if (verdicts[i].verdict == Verdict::kAllowed)
            out.filtered.networks.push_back(scan.networks[i]);
        else
            out.verdicts.push_back(verdicts[i]);
    }
    return out;
}

}  // namespace mca
