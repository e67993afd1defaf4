// Command-line front end: run, compare, validate and export.
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mca/core/error.hpp"
#include "mca/core/scenario.hpp"
#include "mca/harness/harness.hpp"

namespace fs = std::filesystem;
using namespace mca;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
    std::string scenario;
    std::string strategy = "tree";
    std::string metric = "throughput";
    std::optional<std::uint64_t> seed;
    double epoch = 1.0;
    std::string out;
    std::string format = "json";
    bool no_avoidance = false;
    std::optional<double> platform_overhead;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_strategy) {
    cmd->add_option("--scenario", f.scenario, "Scenario JSON file")->required();
    if (with_strategy) cmd->add_option("--strategy", f.strategy, "Selection strategy");
    cmd->add_option("--metric", f.metric, "latency or throughput")
        ->check(CLI::IsMember({"latency", "throughput"}));
    cmd->add_option("--seed", f.seed, "Override the scenario seed");
    cmd->add_option("--epoch", f.epoch, "Evaluation epoch in seconds")->check(CLI::PositiveNumber);
    cmd->add_option("--out", f.out, "Output path (stdout when omitted)");
    cmd->add_option("--format", f.format, "json or csv");
    cmd->add_flag("--no-avoidance", f.no_avoidance, "Scan without avoiding paging and traffic");
    cmd->add_option("--platform-overhead", f.platform_overhead, "Per-switch platform overhead in seconds")
        ->check(CLI::NonNegativeNumber);
}

RunConfig to_config(const CommonFlags& f, const std::string& strategy) {
    RunConfig c;
    c.scenario_path = f.scenario;
    c.strategy = strategy;
    c.metric = *parse_metric(f.metric);
    c.seed = f.seed;
    c.epoch = f.epoch;
    c.out = f.out;
    const auto fmt = parse_format(f.format);
    if (!fmt) throw Error(Errc::UnknownFormat, "format must be json or csv, got '" + f.format + "'");
    c.format = *fmt;
    c.disruption_avoidance = !f.no_avoidance;
    c.platform_overhead = f.platform_overhead;
    return c;
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty())
        std::cout << text;
    else
        write_text_file(out, text);
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case Errc::ParseError:
        case Errc::DuplicateId:
        case Errc::DanglingReference:
        case Errc::NonMonotoneTrace:
        case Errc::EmptyNetwork:
        case Errc::MissingTrace:
        case Errc::InvalidValue:
        case Errc::InvalidScenario:
        case Errc::UnknownStrategy:
        case Errc::UnknownFormat:
            return kExitInvalid;
        default:
            return kExitRuntime;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-carrier cellular access simulator"};
    app.require_subcommand(1);

    CommonFlags run_f, cmp_f, exp_f;
    auto* run = app.add_subcommand("run", "Run one strategy over a scenario and report metrics");
    add_common(run, run_f, true);

    auto* cmp = app.add_subcommand("compare", "Run several strategies side by side");
    add_common(cmp, cmp_f, false);
    std::vector<std::string> strategies{"baseline", "radio-only", "profile-only", "tree", "optimal"};
    unsigned repeat = 1;
    std::string cdf_out;
    cmp->add_option("--strategies", strategies, "Strategies to compare")->delimiter(',');
    cmp->add_option("--repeat", repeat, "Runs per strategy over consecutive seeds")->check(CLI::PositiveNumber);
    cmp->add_option("--cdf-out", cdf_out, "Write per-strategy gamma CDF data here");

    std::string validate_path;
    auto* val = app.add_subcommand("validate", "Check a scenario file");
    val->add_option("--scenario", validate_path, "Scenario JSON file")->required();

    auto* exp = app.add_subcommand("export", "Run and write the report with raw logs into a directory");
    add_common(exp, exp_f, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*val) {
            const Scenario raw = load_scenario_file(validate_path);
            const auto res = validate_scenario(raw);
            if (!res.ok()) {
                std::cerr << format_issues(res.issues);
                return kExitInvalid;
            }
            std::cout << "ok: " << res.scenario->name << " (" << res.scenario->networks.size() << " networks, "
                      << res.scenario->cells.size() << " cells)\n";
            return kExitOk;
        }
        if (*run) {
            const RunConfig cfg = to_config(run_f, run_f.strategy);
            const auto report = run_scenario(cfg);
            emit(serialize_report(report, cfg.format), run_f.out);
            return kExitOk;
        }
        if (*cmp) {
            std::vector<RunConfig> configs;
            for (const auto& s : strategies) configs.push_back(to_config(cmp_f, s));
            const auto table = compare(configs, repeat);
            std::string text;
            if (cmp_f.out.empty())
                text = comparison_to_table(table);
            else
                text = configs.front().format == ReportFormat::kJson ? comparison_to_json(table).dump(2) + "\n"
                                                                     : comparison_to_csv(table);
            emit(text, cmp_f.out);
            if (!cdf_out.empty()) write_text_file(cdf_out, gamma_cdf_csv(table));
            return kExitOk;
        }
        if (*exp) {
            const RunConfig cfg = to_config(exp_f, exp_f.strategy);
            const fs::path dir = exp_f.out.empty() ? fs::path("export") : fs::path(exp_f.out);
            const Scenario sc = load_valid_scenario(cfg.scenario_path);
            const auto art = run_scenario_full(sc, cfg);
            std::error_code ec;
            fs::create_directories(dir, ec);
            if (ec) throw Error(Errc::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
            export_report(art.report, cfg.format, dir / (cfg.format == ReportFormat::kJson ? "report.json" : "report.csv"));
            write_text_file(dir / "events.ndjson", events_to_ndjson(art.events));
            write_text_file(dir / "switches.csv", switches_to_csv(art.report.switches));
            write_text_file(dir / "monitoring.csv", monitor_log_to_csv(art.monitor_log));
            write_text_file(dir / "verdicts.csv", verdicts_to_csv(art.verdicts));
            std::ostringstream tsv;
            art.profiles.write_tsv(tsv);
            write_text_file(dir / "profiles.tsv", tsv.str());
            std::cout << "wrote " << dir.string() << "\n";
            return kExitOk;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
