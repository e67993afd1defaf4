#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mca/core/types.hpp"
#include "mca/predict/predictor.hpp"
#include "mca/predict/profile.hpp"

namespace mca {

enum class Action { kStay, kSwitch };

struct Decision {
    Action action = Action::kStay;
    std::optional<NetworkId> target;
    std::string reason;
    bool decided_on_partial = false;

    static Decision stay(std::string why) { return {Action::kStay, std::nullopt, std::move(why), false}; }
    static Decision to(NetworkId target, std::string why) { return {Action::kSwitch, std::move(target), std::move(why), false}; }
};

/// Everything a strategy may look at. The scan is already filtered.
struct StrategyContext {
    const ScanResult& scan;
    const Scenario& scenario;
    const ProfileStore* profiles = nullptr;
    CarrierPredictor* predictor = nullptr;
    const std::map<std::string, BillingPlan>* billing = nullptr;
    std::optional<NetworkId> registered;
    double now = 0.0;
    Metric metric = Metric::kThroughput;
};

class Strategy {
public:
    virtual ~Strategy() = default;
    virtual std::string name() const = 0;
    virtual Decision decide(const StrategyContext& ctx) = 0;
    /// Whether to be called on partial scans too (otherwise complete ones only).
    virtual bool decides_on_partial() const { return false; }
    /// Legacy mode: no monitoring, no guard, no user switches.
    virtual bool uses_monitor() const { return true; }
    /// Ideal reference that is handed ground truth each epoch.
    virtual bool is_oracle() const { return false; }
};

struct StrategyIssue {
    double time = 0.0;
    std::string strategy;
    std::string message;
};

/// Runs one strategy callback. A throwing strategy, or one naming a network
/// outside the scan, yields STAY and a STRATEGY_EXCEPTION record.
Decision run_strategy(Strategy& strategy, const StrategyContext& ctx, std::vector<StrategyIssue>* issues = nullptr);

// Built-in selection rules, usable directly.
std::optional<NetworkId> strategy_radio_only(const ScanResult& scan, const Scenario& sc);
std::optional<NetworkId> strategy_profile_only(const ScanResult& scan, const ProfileStore& profiles);
std::optional<NetworkId> strategy_min_billing(const ScanResult& scan, const Scenario& sc,
                                              const std::map<std::string, BillingPlan>& plans);
/// Per-unit price at the plan's current usage.
double unit_price(const BillingPlan& plan);
/// Best available, unbarred network at t by ground truth; nullopt if none.
std::optional<NetworkId> oracle_optimal(const Scenario& sc, double t, Metric metric);

inline constexpr double kMinLatencyRssFloor = -100.0;

using StrategyFactory = std::function<std::unique_ptr<Strategy>()>;

/// Name -> factory. Built-ins: baseline, radio-only, profile-only, tree,
/// min-latency, min-billing, optimal.
class StrategyRegistry {
public:
    static StrategyRegistry& instance();
    void add(const std::string& name, StrategyFactory factory);
    /// Throws UNKNOWN_STRATEGY.
    std::unique_ptr<Strategy> create(const std::string& name) const;
    std::vector<std::string> names() const;

private:
    StrategyRegistry();
    std::map<std::string, StrategyFactory> factories_;
};

}  // namespace mca
