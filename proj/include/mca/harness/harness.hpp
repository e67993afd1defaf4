#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mca/core/types.hpp"
#include "mca/guard/fault_guard.hpp"
#include "mca/monitor/monitor.hpp"
#include "mca/predict/profile.hpp"
#include "mca/sim/engine.hpp"
#include "mca/strategy/strategy.hpp"

namespace mca {

enum class ReportFormat { kJson, kCsv };
std::optional<ReportFormat> parse_format(std::string_view s);
std::string_view to_string(ReportFormat f);

struct RunConfig {
    std::filesystem::path scenario_path;
    std::string strategy = "tree";
    Metric metric = Metric::kThroughput;
    std::optional<std::uint64_t> seed;  // default: the scenario's own seed
    double epoch = 1.0;
    std::filesystem::path out;
    ReportFormat format = ReportFormat::kJson;
    bool disruption_avoidance = true;
    std::optional<double> platform_overhead;
};

inline constexpr const char* kNoNetwork = "NONE";

/// Core fields derived from the per-epoch logs.
struct MetricsCore {
    std::size_t epochs = 0;
    double hit_ratio = 0.0;
    std::vector<std::optional<double>> gamma;  // nullopt where the optimum is zero
    std::vector<double> gamma_plus;
    double gamma_plus_median = 0.0;
    double gamma_plus_max = 0.0;
    std::size_t zero_optimum = 0;
    std::vector<std::string> warnings;
};

/// Throws LENGTH_MISMATCH unless all four logs have the same length.
MetricsCore compute_metrics(const std::vector<std::string>& chosen, const std::vector<std::string>& optimal,
                            const std::vector<double>& x, const std::vector<double>& x_opt);

struct EpochRecord {
    double t = 0.0;
    std::string chosen;
    std::string optimal;
    double x = 0.0;
    double x_opt = 0.0;
};

struct DeliveryCounts {
    std::size_t delivered = 0;
    std::size_t delayed = 0;
    std::size_t lost = 0;
};

struct MetricsReport {
    std::string scenario;
    std::string strategy;
    Metric metric = Metric::kThroughput;
    std::uint64_t seed = 0;
    double epoch = 1.0;
    bool disruption_avoidance = true;
    double platform_overhead = 0.0;

    std::vector<EpochRecord> epochs;
    MetricsCore core;
    std::vector<SwitchRecord> switches;
    std::size_t inter_carrier_in_service = 0;
    double unregistered_time = 0.0;
    double scan_elapsed = 0.0;
    int cells_scanned = 0;
    std::size_t monitor_passes = 0;
    DeliveryCounts deliveries;
    std::size_t guard_removals = 0;
    std::vector<std::string> warnings;

    double disruption_total() const;
    double disruption_mean() const;
};

struct TimedVerdict {
    double time = 0.0;
    FaultVerdict verdict;
};

/// Report plus the raw logs behind it.
struct RunArtifacts {
    MetricsReport report;
    std::vector<CellularEvent> events;
    MonitorLog monitor_log;
    std::vector<TimedVerdict> verdicts;
    std::vector<GuardWarning> guard_warnings;
    std::vector<StrategyIssue> strategy_issues;
    std::vector<DeliveryRecord> deliveries;
    ProfileStore profiles;
};

/// Loads and validates the scenario file (INVALID_SCENARIO), then runs it.
MetricsReport run_scenario(const RunConfig& config);
MetricsReport run_scenario(const Scenario& scenario, const RunConfig& config);
RunArtifacts run_scenario_full(const Scenario& scenario, const RunConfig& config);

/// Applies the config's seed and overhead overrides.
Scenario apply_overrides(Scenario sc, const RunConfig& config);

/// Feeds history records into a profile store (and predictor) as if the
/// device had registered there before.
void replay_history(const Scenario& sc, ProfileStore& profiles, CarrierPredictor* predictor);

/// Monitors every network other than the registered one starting at `t`,
/// with profiles from history, and returns what the fault guard makes of
/// the complete scan.
GuardOutcome guard_snapshot(const Scenario& sc, double t);

nlohmann::ordered_json report_to_json(const MetricsReport& report);
std::string report_to_csv(const MetricsReport& report);
std::string serialize_report(const MetricsReport& report, ReportFormat format);
/// Writes the report; throws IO_FAILURE.
void export_report(const MetricsReport& report, ReportFormat format, const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

struct ComparisonRow {
    std::string strategy;
    double hit_ratio = 0.0;
    double gamma_plus_median = 0.0;
    double gamma_plus_max = 0.0;
    double mean_disruption = 0.0;
    double total_scan_time = 0.0;
    std::size_t switches = 0;
};

struct Comparison {
    std::string scenario;
    Metric metric = Metric::kThroughput;
    unsigned repeat = 1;
    std::vector<ComparisonRow> rows;      // config order
    std::vector<MetricsReport> reports;   // first repetition of each config
};

/// Runs every config (in parallel) on one shared scenario; SCENARIO_MISMATCH
/// otherwise. With repeat > 1, each row holds medians over consecutive seeds.
Comparison compare(const std::vector<RunConfig>& configs, unsigned repeat = 1);
Comparison compare(const Scenario& scenario, const std::vector<RunConfig>& configs, unsigned repeat = 1);

nlohmann::ordered_json comparison_to_json(const Comparison& c);
std::string comparison_to_csv(const Comparison& c);
std::string comparison_to_table(const Comparison& c);
/// Plot-ready empirical CDF of gamma per strategy.
std::string gamma_cdf_csv(const Comparison& c);

std::string events_to_ndjson(const std::vector<CellularEvent>& events);
std::string switches_to_csv(const std::vector<SwitchRecord>& switches);
std::string monitor_log_to_csv(const MonitorLog& log);
std::string verdicts_to_csv(const std::vector<TimedVerdict>& verdicts);

}  // namespace mca
