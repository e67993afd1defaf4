#include "mca/predict/predictor.hpp"

namespace mca {

const FeatureSchema& CarrierPredictor::schema() {
    static const FeatureSchema kSchema = {
        {"rss", FeatureKind::kNumeric, false},
        {field::kTrafficClass, FeatureKind::kCategorical, true},
        {field::kDelayClass, FeatureKind::kNumeric, true},
        {field::kMaxDlRate, FeatureKind::kNumeric, true},
        {field::kMaxUlRate, FeatureKind::kNumeric, true},
        {field::kDlGbr, FeatureKind::kNumeric, true},
        {field::kUlGbr, FeatureKind::kNumeric, true},
        {field::kTddConfig, FeatureKind::kCategorical, true},
        {field::kPagingCycle, FeatureKind::kNumeric, true},
        {field::kHandoffPriority, FeatureKind::kNumeric, true},
        {field::kHandoffThreshold, FeatureKind::kNumeric, true},
    };
    return kSchema;
}

CarrierPredictor::CarrierPredictor(const ProfileStore& profiles, PredictorConfig config) : profiles_(profiles) {
    for (Metric m : {Metric::kLatency, Metric::kThroughput}) {
        trees_.emplace(m, OnlineTree(schema(), config.params, config.rebuild_every));
        caches_[m];
        samples_[m];
    }
}

std::optional<std::vector<double>> CarrierPredictor::features(const NetworkId& net, const CellId& cell,
                                                              double rss) const {
    if (!profiles_.has_network(net)) return std::nullopt;
    const auto& sch = schema();
    std::vector<double> x(sch.size(), 0.0);
    x[0] = rss;
    for (std::size_t f = 1; f < sch.size(); ++f) x[f] = profiles_.modal_number(net, cell, sch[f].name).value_or(0.0);
    return x;
}

bool CarrierPredictor::observe(const NetworkId& net, const CellId& cell, double rss, double latency,
                               double throughput, double timestamp) {
    auto x = features(net, cell, rss);
    if (!x) return false;
    for (auto [m, label] : {std::pair{Metric::kLatency, latency}, std::pair{Metric::kThroughput, throughput}}) {
        samples_[m].push_back({*x, label, net, timestamp});
        trees_.at(m).update({*x, label});
    }
    return true;
}

void CarrierPredictor::rebuild() {
    for (auto& [m, t] : trees_) t.rebuild();
}

std::optional<double> CarrierPredictor::predict(const NetworkId& net, const CellId& cell, double rss,
                                                Metric metric) {
    auto x = features(net, cell, rss);
    if (!x) return std::nullopt;
    const RegressionTree& t = trees_.at(metric).tree();
    return use_cache ? t.predict_cached(*x, caches_[metric], &node_tests_) : t.predict(*x, &node_tests_);
}

}  // namespace mca
