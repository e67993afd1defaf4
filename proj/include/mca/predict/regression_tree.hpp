#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mca {

enum class FeatureKind { kNumeric, kCategorical };

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::kNumeric;
    bool is_profile = false;  // resolved by the branch cache
};
using FeatureSchema = std::vector<FeatureSpec>;

/// Categorical values are carried as their integer codes.
struct TreeSample {
    std::vector<double> x;
    double y = 0.0;
};

struct TreeParams {
    std::size_t min_samples_leaf = 1;
    double min_impurity_decrease = 0.0;  // per-sample variance reduction required to split
    std::size_t max_depth = 32;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;  // numeric: go left if x <= threshold; categorical: left if x == threshold
    int left = -1;
    int right = -1;
    double sum = 0.0;
    std::size_t count = 0;
    double value = 0.0;  // mean label of the samples that reached this node

    bool is_leaf() const { return feature < 0; }
};

/// Per profile assignment, a jump table that skips profile tests.
struct BranchCache {
    std::uint64_t tree_version = 0;
    std::map<std::vector<double>, std::vector<int>> jumps;
};

class RegressionTree {
public:
    RegressionTree() = default;
    RegressionTree(FeatureSchema schema, TreeParams params);

    bool empty() const { return nodes_.empty(); }
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    const FeatureSchema& schema() const { return schema_; }
    std::uint64_t version() const { return version_; }
    std::size_t depth() const;

    /// Root-to-leaf traversal. `tests`, when given, is incremented per node test.
    /// Throws EMPTY_TREE.
    double predict(const std::vector<double>& x, std::size_t* tests = nullptr) const;
    /// Same answer, starting from the jump table for x's profile fields.
    /// Building a table for a new assignment is counted in `tests` too.
    double predict_cached(const std::vector<double>& x, BranchCache& cache, std::size_t* tests = nullptr) const;

    int leaf_for(const std::vector<double>& x) const;
    /// Online step between rebuilds: only the reached leaf changes.
    void add_to_leaf(const TreeSample& s);

    static RegressionTree single_leaf(FeatureSchema schema, TreeParams params, const TreeSample& s);

private:
    friend RegressionTree tree_train(const std::vector<TreeSample>&, const FeatureSchema&, const TreeParams&);

    bool goes_left(const TreeNode& n, double v) const;
    const std::vector<int>& jump_table(const std::vector<double>& x, BranchCache& cache, std::size_t* tests) const;

    FeatureSchema schema_;
    TreeParams params_;
    std::vector<TreeNode> nodes_;
    std::uint64_t version_ = 0;
};

/// Greedy CART regression: minimize the summed squared error of the two
/// children. Ties go to the lowest feature index, then the smallest
/// threshold. Throws EMPTY_SAMPLES.
RegressionTree tree_train(const std::vector<TreeSample>& samples, const FeatureSchema& schema,
                          const TreeParams& params = {});

/// Buffers samples, updates leaf statistics at once and retrains from
/// scratch every `rebuild_every` inserts.
class OnlineTree {
public:
    OnlineTree(FeatureSchema schema, TreeParams params = {}, std::size_t rebuild_every = 32);

    void update(const TreeSample& s);
    void rebuild();
    const RegressionTree& tree() const { return tree_; }
    const std::vector<TreeSample>& samples() const { return samples_; }
    std::size_t rebuild_every() const { return rebuild_every_; }

private:
    FeatureSchema schema_;
    TreeParams params_;
    std::size_t rebuild_every_;
    std::vector<TreeSample> samples_;
    RegressionTree tree_;
};

}  // namespace mca
