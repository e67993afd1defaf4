#pragma once

#include <map>
#include <optional>
#include <vector>

#include "mca/core/types.hpp"
#include "mca/predict/profile.hpp"
#include "mca/predict/regression_tree.hpp"

namespace mca {

struct TrainingSample {
    std::vector<double> features;
    double label = 0.0;
    NetworkId network;
    double timestamp = 0.0;
};

struct PredictorConfig {
    TreeParams params;
    std::size_t rebuild_every = 32;
};

/// Metric predictor over (RSS, profiled configuration): one online tree per
/// metric, fed with whatever the device observes while registered.
class CarrierPredictor {
public:
    explicit CarrierPredictor(const ProfileStore& profiles, PredictorConfig config = {});

    /// rss first, then QoS fields, then radio fields.
    static const FeatureSchema& schema();

    /// Feature vector for a cell; profile fields take their modal values.
    /// nullopt when the network has never been profiled.
    std::optional<std::vector<double>> features(const NetworkId& net, const CellId& cell, double rss) const;

    /// Adds one observation per metric; skipped (returns false) without a profile.
    bool observe(const NetworkId& net, const CellId& cell, double rss, double latency, double throughput,
                 double timestamp);
    void rebuild();

    /// nullopt without a profile; throws EMPTY_TREE before any observation.
    std::optional<double> predict(const NetworkId& net, const CellId& cell, double rss, Metric metric);

    const OnlineTree& tree(Metric metric) const { return trees_.at(metric); }
    const std::vector<TrainingSample>& samples(Metric metric) const { return samples_.at(metric); }
    std::size_t node_tests() const { return node_tests_; }
    bool use_cache = true;

private:
    const ProfileStore& profiles_;
    std::map<Metric, OnlineTree> trees_;
    std::map<Metric, BranchCache> caches_;
    std::map<Metric, std::vector<TrainingSample>> samples_;
    std::size_t node_tests_ = 0;
};

}  // namespace mca
