#include "mca/predict/regression_tree.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>

#include "mca/core/error.hpp"

namespace mca {

namespace {

std::uint64_t next_version() {
    static std::atomic<std::uint64_t> counter{0};
    return ++counter;
}

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double sse = std::numeric_limits<double>::infinity();
};

double mean_of(const std::vector<TreeSample>& s, const std::vector<std::size_t>& idx) {
    double sum = 0.0;
    for (auto i : idx) sum += s[i].y;
    return sum / static_cast<double>(idx.size());
}

// Squared error from sums of labels already centered on the node mean.
double sse_from(double sum, double sumsq, std::size_t n) {
    if (n == 0) return 0.0;
    return std::max(0.0, sumsq - sum * sum / static_cast<double>(n));
}

class Builder {
public:
    Builder(const std::vector<TreeSample>& s, const FeatureSchema& schema, const TreeParams& p)
        : s_(s), schema_(schema), p_(p) {}

    int build(std::vector<std::size_t> idx, std::size_t depth, std::vector<TreeNode>& out) {
        const int id = static_cast<int>(out.size());
        out.emplace_back();
        const double mean = mean_of(s_, idx);
        {
            TreeNode& n = out[id];
            n.count = idx.size();
            for (auto i : idx) n.sum += s_[i].y;
            n.value = mean;
        }

        double parent_sse = 0.0;
        for (auto i : idx) parent_sse += (s_[i].y - mean) * (s_[i].y - mean);
        const double tol = 1e-10 * (1.0 + parent_sse);
        if (depth >= p_.max_depth || idx.size() < 2 * p_.min_samples_leaf || parent_sse <= tol) return id;

        const Split best = find_split(idx, mean, tol);
        const double required = std::max(p_.min_impurity_decrease * static_cast<double>(idx.size()), tol);
        if (best.feature < 0 || parent_sse - best.sse <= required) return id;

        const bool categorical = schema_[best.feature].kind == FeatureKind::kCategorical;
        std::vector<std::size_t> left, right;
        for (auto i : idx) {
            const double v = s_[i].x[best.feature];
            (categorical ? v == best.threshold : v <= best.threshold) ? left.push_back(i) : right.push_back(i);
        }
        out[id].feature = best.feature;
        out[id].threshold = best.threshold;
        const int l = build(std::move(left), depth + 1, out);
        const int r = build(std::move(right), depth + 1, out);
        out[id].left = l;
        out[id].right = r;
        return id;
    }

private:
    void consider(Split& best, int f, double thr, double sse, double tol) const {
        if (sse < best.sse - tol) best = {f, thr, sse};
    }

    Split find_split(const std::vector<std::size_t>& idx, double mean, double tol) const {
        Split best;
        const std::size_t n = idx.size();
        const std::size_t min_leaf = std::max<std::size_t>(1, p_.min_samples_leaf);
        double tot = 0.0, totsq = 0.0;
        for (auto i : idx) {
            const double c = s_[i].y - mean;
            tot += c;
            totsq += c * c;
        }
        std::vector<std::size_t> order(idx);
        for (std::size_t f = 0; f < schema_.size(); ++f) {
            const int fi = static_cast<int>(f);
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return s_[a].x[f] < s_[b].x[f]; });
            if (schema_[f].kind == FeatureKind::kNumeric) {
                double sum = 0.0, sumsq = 0.0;
                for (std::size_t k = 0; k + 1 < n; ++k) {
                    const double c = s_[order[k]].y - mean;
                    sum += c;
                    sumsq += c * c;
                    const double a = s_[order[k]].x[f];
                    const double b = s_[order[k + 1]].x[f];
                    if (!(a < b)) continue;
                    const std::size_t nl = k + 1;
                    if (nl < min_leaf || n - nl < min_leaf) continue;
                    const double sse = sse_from(sum, sumsq, nl) + sse_from(tot - sum, totsq - sumsq, n - nl);
                    consider(best, fi, a + (b - a) / 2.0, sse, tol);
                }
            } else {
                std::size_t k = 0;
                while (k < n) {
                    const double cat = s_[order[k]].x[f];
                    double sum = 0.0, sumsq = 0.0;
                    std::size_t nl = 0;
                    for (; k < n && s_[order[k]].x[f] == cat; ++k, ++nl) {
                        const double c = s_[order[k]].y - mean;
                        sum += c;
                        sumsq += c * c;
                    }
                    if (nl < min_leaf || n - nl < min_leaf) continue;
                    const double sse = sse_from(sum, sumsq, nl) + sse_from(tot - sum, totsq - sumsq, n - nl);
                    consider(best, fi, cat, sse, tol);
                }
            }
        }
        return best;
    }

    const std::vector<TreeSample>& s_;
    const FeatureSchema& schema_;
    const TreeParams& p_;
};

}  // namespace

RegressionTree::RegressionTree(FeatureSchema schema, TreeParams params)
    : schema_(std::move(schema)), params_(params), version_(next_version()) {}

RegressionTree RegressionTree::single_leaf(FeatureSchema schema, TreeParams params, const TreeSample& s) {
    RegressionTree t(std::move(schema), params);
    TreeNode leaf;
    leaf.sum = s.y;
    leaf.count = 1;
    leaf.value = s.y;
    t.nodes_.push_back(leaf);
    return t;
}

RegressionTree tree_train(const std::vector<TreeSample>& samples, const FeatureSchema& schema,
                          const TreeParams& params) {
    if (samples.empty()) throw Error(Errc::EmptySamples, "cannot train a tree on zero samples");
    for (const auto& s : samples)
        if (s.x.size() != schema.size())
            throw Error(Errc::InvalidValue, "sample has " + std::to_string(s.x.size()) + " features, schema has " +
                                                std::to_string(schema.size()));
    RegressionTree tree(schema, params);
    std::vector<std::size_t> idx(samples.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Builder(samples, tree.schema_, tree.params_).build(std::move(idx), 0, tree.nodes_);
    return tree;
}

bool RegressionTree::goes_left(const TreeNode& n, double v) const {
    return schema_[n.feature].kind == FeatureKind::kCategorical ? v == n.threshold : v <= n.threshold;
}

std::size_t RegressionTree::depth() const {
    if (nodes_.empty()) return 0;
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    std::size_t deepest = 0;
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (!nodes_[i].is_leaf()) {
            stack.push_back({nodes_[i].left, d + 1});
            stack.push_back({nodes_[i].right, d + 1});
        }
    }
    return deepest;
}

int RegressionTree::leaf_for(const std::vector<double>& x) const {
    if (nodes_.empty()) throw Error(Errc::EmptyTree, "prediction on an empty tree");
    int i = 0;
    while (!nodes_[i].is_leaf()) i = goes_left(nodes_[i], x[nodes_[i].feature]) ? nodes_[i].left : nodes_[i].right;
    return i;
}

double RegressionTree::predict(const std::vector<double>& x, std::size_t* tests) const {
    if (nodes_.empty()) throw Error(Errc::EmptyTree, "prediction on an empty tree");
    int i = 0;
    while (!nodes_[i].is_leaf()) {
        if (tests) ++*tests;
        i = goes_left(nodes_[i], x[nodes_[i].feature]) ? nodes_[i].left : nodes_[i].right;
    }
    return nodes_[i].value;
}

const std::vector<int>& RegressionTree::jump_table(const std::vector<double>& x, BranchCache& cache,
                                                   std::size_t* tests) const {
    if (cache.tree_version != version_) {
        cache.jumps.clear();
        cache.tree_version = version_;
    }
    std::vector<double> key;
    for (std::size_t f = 0; f < schema_.size(); ++f)
        if (schema_[f].is_profile) key.push_back(x[f]);
    auto it = cache.jumps.find(key);
    if (it != cache.jumps.end()) return it->second;

    // jump[i] = first node at or below i that is not a profile test.
    std::vector<int> jump(nodes_.size(), -1);
    for (std::size_t start = 0; start < nodes_.size(); ++start) {
        std::vector<int> chain;
        int i = static_cast<int>(start);
        while (jump[i] < 0 && !nodes_[i].is_leaf() && schema_[nodes_[i].feature].is_profile) {
            chain.push_back(i);
            if (tests) ++*tests;
            i = goes_left(nodes_[i], x[nodes_[i].feature]) ? nodes_[i].left : nodes_[i].right;
        }
        const int target = jump[i] >= 0 ? jump[i] : i;
        jump[i] = target;
        for (int c : chain) jump[c] = target;
    }
    return cache.jumps.emplace(std::move(key), std::move(jump)).first->second;
}

double RegressionTree::predict_cached(const std::vector<double>& x, BranchCache& cache, std::size_t* tests) const {
    if (nodes_.empty()) throw Error(Errc::EmptyTree, "prediction on an empty tree");
    const auto& jump = jump_table(x, cache, tests);
    int i = jump[0];
    while (!nodes_[i].is_leaf()) {
        if (tests) ++*tests;
        i = jump[goes_left(nodes_[i], x[nodes_[i].feature]) ? nodes_[i].left : nodes_[i].right];
    }
    return nodes_[i].value;
}

void RegressionTree::add_to_leaf(const TreeSample& s) {
    TreeNode& leaf = nodes_[leaf_for(s.x)];
    leaf.sum += s.y;
    ++leaf.count;
    leaf.value = leaf.sum / static_cast<double>(leaf.count);
}

// ---------------------------------------------------------------------------

OnlineTree::OnlineTree(FeatureSchema schema, TreeParams params, std::size_t rebuild_every)
    : schema_(std::move(schema)), params_(params), rebuild_every_(std::max<std::size_t>(1, rebuild_every)) {}

void OnlineTree::update(const TreeSample& s) {
    samples_.push_back(s);
    if (tree_.empty())
        tree_ = RegressionTree::single_leaf(schema_, params_, s);
    else if (samples_.size() % rebuild_every_ == 0)
        rebuild();
    else
        tree_.add_to_leaf(s);
}

void OnlineTree::rebuild() {
    if (samples_.empty()) return;
    tree_ = tree_train(samples_, schema_, params_);
}

}  // namespace mca
