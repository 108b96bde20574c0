#include "qreg/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qreg/complexity.hpp"
#include "qreg/errors.hpp"
#include "qreg/rng.hpp"

namespace qreg {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

} // namespace

KnnRegressor::KnnRegressor(int k, Matrix x, std::vector<double> y, bool weighted)
    : k_(k), weighted_(weighted), x_(std::move(x)), y_(std::move(y)) {
    if (k_ < 1) throw std::invalid_argument("KnnRegressor: k must be >= 1");
    if (static_cast<int>(y_.size()) != x_.rows)
        throw std::invalid_argument("KnnRegressor: target length mismatch");
}

double KnnRegressor::predict(std::span<const double> point) const {
    if (x_.rows == 0) throw InvalidStateError("KnnRegressor: empty training set");
    if (k_ > x_.rows) throw std::invalid_argument("KnnRegressor: k exceeds training size");
    std::vector<int> order(static_cast<std::size_t>(x_.rows));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> dist(static_cast<std::size_t>(x_.rows));
    for (int i = 0; i < x_.rows; ++i) dist[static_cast<std::size_t>(i)] = sq_dist(x_.row(i), point);
    std::partial_sort(order.begin(), order.begin() + k_, order.end(), [&](int a, int b) {
        if (dist[static_cast<std::size_t>(a)] != dist[static_cast<std::size_t>(b)])
            return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)];
        return a < b; // distance ties toward the lower row index
    });

    if (weighted_) {
        // exact matches take over; otherwise weights are 1/distance
        double exact_sum = 0.0;
        int exact_count = 0;
        for (int i = 0; i < k_; ++i) {
            const int r = order[static_cast<std::size_t>(i)];
            if (dist[static_cast<std::size_t>(r)] == 0.0) {
                exact_sum += y_[static_cast<std::size_t>(r)];
                ++exact_count;
            }
        }
        if (exact_count > 0) return exact_sum / static_cast<double>(exact_count);
        double wsum = 0.0, acc = 0.0;
        for (int i = 0; i < k_; ++i) {
            const int r = order[static_cast<std::size_t>(i)];
            const double w = 1.0 / std::sqrt(dist[static_cast<std::size_t>(r)]);
            wsum += w;
            acc += w * y_[static_cast<std::size_t>(r)];
        }
        return acc / wsum;
    }

    double mean = 0.0;
    for (int i = 0; i < k_; ++i) mean += y_[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    return mean / static_cast<double>(k_);
}

namespace {

double mean_of(std::span<const double> y, const std::vector<int>& rows) {
    double s = 0.0;
    for (int r : rows) s += y[static_cast<std::size_t>(r)];
    return s / static_cast<double>(rows.size());
}

bool is_pure(std::span<const double> y, const std::vector<int>& rows) {
    for (int r : rows)
        if (y[static_cast<std::size_t>(r)] != y[static_cast<std::size_t>(rows[0])]) return false;
    return true;
}

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0; // improvement; <= 0 means no usable split
};

// Best squared-error-reduction split over the given features.
Split best_regression_split(const Matrix& x, std::span<const double> y,
                            const std::vector<int>& rows, std::span<const int> features) {
    Split best;
    const double n = static_cast<double>(rows.size());
    double total = 0.0, total_sq = 0.0;
    for (int r : rows) {
        total += y[static_cast<std::size_t>(r)];
        total_sq += y[static_cast<std::size_t>(r)] * y[static_cast<std::size_t>(r)];
    }
    const double parent_sse = total_sq - total * total / n;

    std::vector<int> order = rows;
    for (int f : features) {
        std::sort(order.begin(), order.end(), [&](int a, int b) { return x(a, f) < x(b, f); });
        double left_sum = 0.0, left_sq = 0.0;
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            const int r = order[i];
            left_sum += y[static_cast<std::size_t>(r)];
            left_sq += y[static_cast<std::size_t>(r)] * y[static_cast<std::size_t>(r)];
            const double a = x(r, f);
            const double b = x(order[i + 1], f);
            if (a == b) continue;
            const double nl = static_cast<double>(i + 1);
            const double nr = n - nl;
            const double right_sum = total - left_sum;
            const double right_sq = total_sq - left_sq;
            const double sse = (left_sq - left_sum * left_sum / nl) +
                               (right_sq - right_sum * right_sum / nr);
            const double gain = parent_sse - sse;
            if (gain > best.score) {
                best.score = gain;
                best.feature = f;
                best.threshold = 0.5 * (a + b);
            }
        }
    }
    return best;
}

} // namespace

int TreeRegressor::build(const Matrix& x, std::span<const double> y, std::vector<int>& rows,
                         int depth, const TreeConfig& config) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[static_cast<std::size_t>(id)].value = mean_of(y, rows);

    const bool depth_capped = config.max_depth >= 0 && depth >= config.max_depth;
    if (depth_capped || static_cast<int>(rows.size()) < config.min_samples_split ||
        is_pure(y, rows))
        return id;

    std::vector<int> all_features(static_cast<std::size_t>(x.cols));
    std::iota(all_features.begin(), all_features.end(), 0);
    const Split split = best_regression_split(x, y, rows, all_features);
    if (split.feature < 0 || split.score <= 0.0) return id;

    std::vector<int> left, right;
    for (int r : rows) {
        (x(r, split.feature) <= split.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(x, y, left, depth + 1, config);
    const int r = build(x, y, right, depth + 1, config);
    nodes_[static_cast<std::size_t>(id)].feature = split.feature;
    nodes_[static_cast<std::size_t>(id)].threshold = split.threshold;
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
}

TreeRegressor TreeRegressor::fit(const Matrix& x, std::span<const double> y,
                                 const TreeConfig& config) {
    if (x.rows < 1) throw std::invalid_argument("TreeRegressor: empty training set");
    if (static_cast<int>(y.size()) != x.rows)
        throw std::invalid_argument("TreeRegressor: target length mismatch");
    TreeRegressor tree;
    std::vector<int> rows(static_cast<std::size_t>(x.rows));
    std::iota(rows.begin(), rows.end(), 0);
    tree.build(x, y, rows, 0, config);
    return tree;
}

double TreeRegressor::predict(std::span<const double> point) const {
    int id = 0;
    for (;;) {
        const Node& node = nodes_[static_cast<std::size_t>(id)];
        if (node.feature < 0) return node.value;
        id = point[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                             : node.right;
    }
}

namespace {

int majority_label(std::span<const int> labels, const std::vector<int>& rows, int n_classes) {
    std::vector<int> counts(static_cast<std::size_t>(n_classes), 0);
    for (int r : rows) ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(r)])];
    int best = 0;
    for (int c = 1; c < n_classes; ++c)
        if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(best)]) best = c;
    return best; // ties stay with the lowest label
}

double gini(const std::vector<int>& counts, double n) {
    double g = 1.0;
    for (int c : counts) {
        const double p = static_cast<double>(c) / n;
        g -= p * p;
    }
    return g;
}

struct ClassSplit {
    int feature = -1;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();
};

ClassSplit best_gini_split(const Matrix& x, std::span<const int> labels,
                           const std::vector<int>& rows, std::span<const int> features,
                           int n_classes) {
    ClassSplit best;
    const double n = static_cast<double>(rows.size());
    std::vector<int> total(static_cast<std::size_t>(n_classes), 0);
    for (int r : rows) ++total[static_cast<std::size_t>(labels[static_cast<std::size_t>(r)])];

    std::vector<int> order = rows;
    std::vector<int> left_counts(static_cast<std::size_t>(n_classes));
    for (int f : features) {
        std::sort(order.begin(), order.end(), [&](int a, int b) { return x(a, f) < x(b, f); });
        std::fill(left_counts.begin(), left_counts.end(), 0);
        std::vector<int> right_counts = total;
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            const int r = order[i];
            const int lab = labels[static_cast<std::size_t>(r)];
            ++left_counts[static_cast<std::size_t>(lab)];
            --right_counts[static_cast<std::size_t>(lab)];
            const double a = x(r, f);
            const double b = x(order[i + 1], f);
            if (a == b) continue;
            const double nl = static_cast<double>(i + 1);
            const double nr = n - nl;
            const double impurity = (nl / n) * gini(left_counts, nl) + (nr / n) * gini(right_counts, nr);
            if (impurity < best.impurity) {
                best.impurity = impurity;
                best.feature = f;
                best.threshold = 0.5 * (a + b);
            }
        }
    }
    return best;
}

} // namespace

void ForestClassifier::fit(const Matrix& x, std::span<const int> labels,
                           const ForestConfig& config) {
    if (x.rows < 1) throw std::invalid_argument("ForestClassifier: empty training set");
    if (static_cast<int>(labels.size()) != x.rows)
        throw std::invalid_argument("ForestClassifier: label length mismatch");
    n_classes_ = *std::max_element(labels.begin(), labels.end()) + 1;
    const int n_features = std::max(
        1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(x.cols)))));

    trees_.clear();
    trees_.resize(static_cast<std::size_t>(config.n_trees));
    for (int t = 0; t < config.n_trees; ++t) {
        Rng rng(hash_combine(config.seed, static_cast<std::uint64_t>(t)));
        std::vector<int> rows(static_cast<std::size_t>(x.rows));
        for (int& r : rows) r = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(x.rows)));

        Tree& tree = trees_[static_cast<std::size_t>(t)];
        // iterative stack build so per-split feature draws stay in seed order
        struct Item {
            std::vector<int> rows;
            int depth;
            int node;
        };
        tree.nodes.push_back({});
        std::vector<Item> stack;
        stack.push_back({std::move(rows), 0, 0});
        while (!stack.empty()) {
            Item item = std::move(stack.back());
            stack.pop_back();
            Node& node = tree.nodes[static_cast<std::size_t>(item.node)];
            node.label = majority_label(labels, item.rows, n_classes_);

            const bool depth_capped = config.max_depth >= 0 && item.depth >= config.max_depth;
            bool pure = true;
            for (int r : item.rows)
                if (labels[static_cast<std::size_t>(r)] !=
                    labels[static_cast<std::size_t>(item.rows[0])]) {
                    pure = false;
                    break;
                }
            if (depth_capped || pure || item.rows.size() < 2) continue;

            // feature subsample without replacement
            std::vector<int> feats(static_cast<std::size_t>(x.cols));
            std::iota(feats.begin(), feats.end(), 0);
            for (int i = 0; i < n_features && i < x.cols; ++i) {
                const std::size_t j = static_cast<std::size_t>(i) +
                                      rng.uniform_below(static_cast<std::uint64_t>(x.cols - i));
                std::swap(feats[static_cast<std::size_t>(i)], feats[j]);
            }
            feats.resize(static_cast<std::size_t>(std::min(n_features, x.cols)));

            const ClassSplit split = best_gini_split(x, labels, item.rows, feats, n_classes_);
            if (split.feature < 0) continue;
            std::vector<int> left, right;
            for (int r : item.rows)
                (x(r, split.feature) <= split.threshold ? left : right).push_back(r);
            if (left.empty() || right.empty()) continue;

            const int li = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back({});
            const int ri = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back({});
            Node& parent = tree.nodes[static_cast<std::size_t>(item.node)];
            parent.feature = split.feature;
            parent.threshold = split.threshold;
            parent.left = li;
            parent.right = ri;
            stack.push_back({std::move(right), item.depth + 1, ri});
            stack.push_back({std::move(left), item.depth + 1, li});
        }
    }
}

int ForestClassifier::predict(std::span<const double> point) const {
    if (trees_.empty()) throw InvalidStateError("ForestClassifier: not fitted");
    std::vector<int> votes(static_cast<std::size_t>(n_classes_), 0);
    for (const Tree& tree : trees_) {
        int id = 0;
        for (;;) {
            const Node& node = tree.nodes[static_cast<std::size_t>(id)];
            if (node.feature < 0) {
                ++votes[static_cast<std::size_t>(node.label)];
                break;
            }
            id = point[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                                 : node.right;
        }
    }
    int best = 0;
    for (int c = 1; c < n_classes_; ++c)
        if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) best = c;
    return best;
}

double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("wilcoxon_signed_rank: length mismatch");
    if (a.size() < 5 || a.size() > 25)
        throw std::invalid_argument("wilcoxon_signed_rank: exact test supports 5..25 pairs");

    std::vector<double> abs_diff;
    std::vector<bool> positive;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d == 0.0) continue;
        abs_diff.push_back(std::abs(d));
        positive.push_back(d > 0.0);
    }
    if (abs_diff.empty())
        throw DegeneratePairError("wilcoxon_signed_rank: all differences are zero");

    // doubled ranks are integers even with tie averaging, so the null
    // distribution can be tabulated exactly
    const std::vector<double> ranks = fractional_ranks(abs_diff);
    std::vector<long> r2(ranks.size());
    long w_plus2 = 0;
    long total2 = 0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        r2[i] = std::lround(2.0 * ranks[i]);
        total2 += r2[i];
        if (positive[i]) w_plus2 += r2[i];
    }

    // counts[w] = number of sign assignments with doubled W+ equal to w
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(total2) + 1, 0);
    counts[0] = 1;
    for (long r : r2)
        for (long w = total2; w >= r; --w) counts[static_cast<std::size_t>(w)] += counts[static_cast<std::size_t>(w - r)];

    std::uint64_t le = 0, ge = 0;
    for (long w = 0; w <= total2; ++w) {
        if (w <= w_plus2) le += counts[static_cast<std::size_t>(w)];
        if (w >= w_plus2) ge += counts[static_cast<std::size_t>(w)];
    }
    const double denom = std::pow(2.0, static_cast<double>(r2.size()));
    const double p = 2.0 * static_cast<double>(std::min(le, ge)) / denom;
    return std::min(1.0, p);
}

} // namespace qreg
