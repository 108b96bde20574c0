#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qreg/dataset.hpp"

namespace qreg {

// Instance-based regressor; stores the training set, no trainable parameters.
// `weighted` switches from the plain k-neighbor mean to inverse-distance
// weighting (exact matches take over), which is what the published benchmark
// tables correspond to.
class KnnRegressor {
  public:
    KnnRegressor(int k, Matrix x, std::vector<double> y, bool weighted = false);

    double predict(std::span<const double> point) const;
    int k() const { return k_; }
    int param_count() const { return 0; }

  private:
    int k_;
    bool weighted_;
    Matrix x_;
    std::vector<double> y_;
};

struct TreeConfig {
    int max_depth = -1;        // unlimited when negative
    int min_samples_split = 2;
};

// CART regression tree: greedy squared-error reduction, split thresholds at
// midpoints between consecutive sorted unique feature values.
class TreeRegressor {
  public:
    static TreeRegressor fit(const Matrix& x, std::span<const double> y,
                             const TreeConfig& config = {});

    double predict(std::span<const double> point) const;
    int param_count() const { return static_cast<int>(nodes_.size()); } // node count

  private:
    struct Node {
        int feature = -1; // -1 for leaves
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };
    std::vector<Node> nodes_;

    int build(const Matrix& x, std::span<const double> y, std::vector<int>& rows, int depth,
              const TreeConfig& config);
};

struct ForestConfig {
    int n_trees = 100;
    int max_depth = -1;
    std::uint64_t seed = 0;
};

// Bagged Gini classification trees with ceil(sqrt(d)) features per split;
// majority vote, ties toward the lowest class label.
class ForestClassifier {
  public:
    void fit(const Matrix& x, std::span<const int> labels, const ForestConfig& config);
    int predict(std::span<const double> point) const;
    bool fitted() const { return !trees_.empty(); }

  private:
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        int label = 0;
    };
    struct Tree {
        std::vector<Node> nodes;
    };
    std::vector<Tree> trees_;
    int n_classes_ = 0;
};

// Exact two-sided signed-rank p-value: zero differences dropped, tie-averaged
// ranks, null distribution from all 2^m sign assignments.
double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

} // namespace qreg
