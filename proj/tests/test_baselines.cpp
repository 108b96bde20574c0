#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qreg/baselines.hpp"
#include "qreg/errors.hpp"
#include "qreg/rng.hpp"

using namespace qreg;

namespace {

// literal 2^m sign enumeration, the independent oracle for the exact test
double wilcoxon_oracle(std::span<const double> a, std::span<const double> b) {
    std::vector<double> abs_diff;
    std::vector<int> sign;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d == 0.0) continue;
        abs_diff.push_back(std::abs(d));
        sign.push_back(d > 0.0 ? 1 : 0);
    }
    const std::size_t m = abs_diff.size();
    // tie-averaged ranks, recomputed from scratch
    std::vector<double> ranks(m);
    for (std::size_t i = 0; i < m; ++i) {
        double below = 0.0, equal = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (abs_diff[j] < abs_diff[i]) ++below;
            if (abs_diff[j] == abs_diff[i]) ++equal;
        }
        ranks[i] = below + (equal + 1.0) / 2.0;
    }
    double w_obs = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (sign[i]) w_obs += ranks[i];
    std::uint64_t le = 0, ge = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        double w = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (std::uint64_t{1} << i)) w += ranks[i];
        if (w <= w_obs + 1e-12) ++le;
        if (w >= w_obs - 1e-12) ++ge;
    }
    const double p = 2.0 * static_cast<double>(std::min(le, ge)) /
                     static_cast<double>(std::uint64_t{1} << m);
    return std::min(1.0, p);
}

Matrix column(const std::vector<double>& v) {
    Matrix x(static_cast<int>(v.size()), 1);
    for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<int>(i), 0) = v[i];
    return x;
}

} // namespace

TEST_CASE("knn at a training point returns that target for k=1") {
    const KnnRegressor knn(1, column({0.0, 1.0, 2.0}), {5.0, 7.0, 9.0});
    CHECK(knn.predict(std::vector<double>{1.0}) == doctest::Approx(7.0));
    CHECK(knn.param_count() == 0);
}

TEST_CASE("knn with k=n is the global mean") {
    const KnnRegressor knn(3, column({0.0, 1.0, 2.0}), {5.0, 7.0, 9.0});
    CHECK(knn.predict(std::vector<double>{10.0}) == doctest::Approx(7.0));
}

TEST_CASE("knn breaks distance ties toward the lower row index") {
    // rows 0 and 2 are equidistant from the query; k=2 must pick rows 0 and 1
    const KnnRegressor knn(2, column({-1.0, 0.0, 1.0}), {10.0, 20.0, 30.0});
    CHECK(knn.predict(std::vector<double>{0.0}) == doctest::Approx(15.0));
}

TEST_CASE("knn predictions stay within the neighbor target range") {
    Rng rng(3);
    Matrix x(50, 2);
    std::vector<double> y(50);
    for (int i = 0; i < 50; ++i) {
        x(i, 0) = rng.uniform(-1, 1);
        x(i, 1) = rng.uniform(-1, 1);
        y[static_cast<std::size_t>(i)] = rng.uniform(-5, 5);
    }
    const KnnRegressor knn(4, x, y);
    const double ymin = *std::min_element(y.begin(), y.end());
    const double ymax = *std::max_element(y.begin(), y.end());
    for (int trial = 0; trial < 50; ++trial) {
        const double p = knn.predict(std::vector<double>{rng.uniform(-1, 1), rng.uniform(-1, 1)});
        CHECK(p >= ymin);
        CHECK(p <= ymax);
    }
}

TEST_CASE("weighted knn honors exact matches and pulls toward near neighbors") {
    const KnnRegressor knn(2, column({0.0, 1.0, 4.0}), {10.0, 20.0, 40.0}, true);
    // query on a stored row: that row wins outright
    CHECK(knn.predict(std::vector<double>{1.0}) == doctest::Approx(20.0));
    // query at 0.5: weights 1/0.5 and 1/0.5 -> plain mean of rows 0 and 1
    CHECK(knn.predict(std::vector<double>{0.5}) == doctest::Approx(15.0));
    // query at 0.25: closer to row 0, prediction below the midpoint
    CHECK(knn.predict(std::vector<double>{0.25}) < 15.0);
}

TEST_CASE("knn validates k and emptiness") {
    CHECK_THROWS_AS(KnnRegressor(0, column({1.0}), std::vector<double>{1.0}),
                    std::invalid_argument);
    const KnnRegressor knn(5, column({0.0, 1.0}), {0.0, 1.0});
    CHECK_THROWS_AS(knn.predict(std::vector<double>{0.0}), std::invalid_argument);
}

TEST_CASE("an unlimited tree memorizes unique inputs") {
    Rng rng(4);
    Matrix x(60, 2);
    std::vector<double> y(60);
    for (int i = 0; i < 60; ++i) {
        x(i, 0) = rng.uniform(-1, 1);
        x(i, 1) = rng.uniform(-1, 1);
        y[static_cast<std::size_t>(i)] = rng.uniform(-1, 1);
    }
    const TreeRegressor tree = TreeRegressor::fit(x, y);
    for (int i = 0; i < 60; ++i)
        CHECK(tree.predict(x.row(i)) == doctest::Approx(y[static_cast<std::size_t>(i)]).epsilon(1e-12));
}

TEST_CASE("a constant target yields a single leaf") {
    const TreeRegressor tree = TreeRegressor::fit(column({1.0, 2.0, 3.0}), std::vector<double>{4.0, 4.0, 4.0});
    CHECK(tree.param_count() == 1);
    CHECK(tree.predict(std::vector<double>{9.0}) == doctest::Approx(4.0));
}

TEST_CASE("a step function needs one split") {
    std::vector<double> x, y;
    for (int i = 0; i < 100; ++i) {
        const double v = (i - 49.5) / 10.0;
        x.push_back(v);
        y.push_back(v > 0 ? 1.0 : -1.0);
    }
    const TreeRegressor tree = TreeRegressor::fit(column(x), y);
    CHECK(tree.param_count() <= 3);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(tree.predict(std::vector<double>{x[i]}) == doctest::Approx(y[i]));
}

TEST_CASE("tree training error is non-increasing in depth") {
    Rng rng(5);
    Matrix x(80, 1);
    std::vector<double> y(80);
    for (int i = 0; i < 80; ++i) {
        x(i, 0) = rng.uniform(-2, 2);
        y[static_cast<std::size_t>(i)] = std::sin(3.0 * x(i, 0)) + 0.1 * rng.uniform(-1, 1);
    }
    double previous = 1e300;
    for (int depth : {1, 2, 4, 8, 16}) {
        TreeConfig config;
        config.max_depth = depth;
        const TreeRegressor tree = TreeRegressor::fit(x, y, config);
        double sse = 0.0;
        for (int i = 0; i < 80; ++i) {
            const double e = tree.predict(x.row(i)) - y[static_cast<std::size_t>(i)];
            sse += e * e;
        }
        CHECK(sse <= previous + 1e-12);
        previous = sse;
    }
}

TEST_CASE("forest on single-class data always answers that class") {
    Matrix x = column({0.0, 1.0, 2.0, 3.0});
    const std::vector<int> labels{2, 2, 2, 2};
    ForestClassifier forest;
    forest.fit(x, labels, {25, -1, 0});
    CHECK(forest.predict(std::vector<double>{-10.0}) == 2);
    CHECK(forest.predict(std::vector<double>{10.0}) == 2);
}

TEST_CASE("forest separates margin-1 classes perfectly and is seed-stable") {
    Rng rng(6);
    Matrix x(40, 1);
    std::vector<int> labels(40);
    for (int i = 0; i < 40; ++i) {
        const bool hi = i % 2 == 0;
        x(i, 0) = hi ? rng.uniform(1.0, 2.0) : rng.uniform(-2.0, -1.0);
        labels[static_cast<std::size_t>(i)] = hi ? 1 : 0;
    }
    ForestClassifier forest;
    forest.fit(x, labels, {50, -1, 9});
    for (int i = 0; i < 40; ++i)
        CHECK(forest.predict(x.row(i)) == labels[static_cast<std::size_t>(i)]);

    ForestClassifier again;
    again.fit(x, labels, {50, -1, 9});
    Rng probe(7);
    for (int trial = 0; trial < 30; ++trial) {
        const std::vector<double> point{probe.uniform(-3, 3)};
        CHECK(again.predict(point) == forest.predict(point));
    }

    ForestClassifier unfitted;
    CHECK_THROWS_AS(unfitted.predict(std::vector<double>{0.0}), InvalidStateError);
}

TEST_CASE("forest tracks a single tree on separable blobs across seeds") {
    int forest_wins_or_ties = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        Matrix x(60, 2);
        std::vector<int> labels(60);
        std::vector<double> y_as_double(60);
        for (int i = 0; i < 60; ++i) {
            const bool hi = i % 2 == 0;
            x(i, 0) = (hi ? 2.0 : -2.0) + rng.uniform(-0.8, 0.8);
            x(i, 1) = rng.uniform(-1, 1);
            labels[static_cast<std::size_t>(i)] = hi ? 1 : 0;
            y_as_double[static_cast<std::size_t>(i)] = labels[static_cast<std::size_t>(i)];
        }
        ForestClassifier forest;
        forest.fit(x, labels, {50, -1, seed});
        const TreeRegressor tree = TreeRegressor::fit(x, y_as_double);
        int forest_correct = 0, tree_correct = 0;
        for (int i = 0; i < 60; ++i) {
            if (forest.predict(x.row(i)) == labels[static_cast<std::size_t>(i)]) ++forest_correct;
            if ((tree.predict(x.row(i)) > 0.5 ? 1 : 0) == labels[static_cast<std::size_t>(i)])
                ++tree_correct;
        }
        if (forest_correct >= tree_correct) ++forest_wins_or_ties;
    }
    CHECK(forest_wins_or_ties >= 6);
}

TEST_CASE("wilcoxon: six positive differences give p = 2/64") {
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    const std::vector<double> b{0.5, 1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(wilcoxon_signed_rank(a, b) == doctest::Approx(0.03125).epsilon(1e-12));
}

TEST_CASE("wilcoxon: balanced signs sit near the null") {
    // positive ranks {1,2,7,8} sum to half the total, pinning W+ at the
    // distribution median, so the two-sided p caps at 1
    const std::vector<double> a{1.0, 2.0, -3.0, -4.0, -5.0, -6.0, 7.0, 8.0};
    const std::vector<double> b(8, 0.0);
    CHECK(wilcoxon_signed_rank(a, b) == doctest::Approx(1.0));
}

TEST_CASE("wilcoxon is symmetric and in (0, 1]") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a, b;
        for (int i = 0; i < 9; ++i) {
            a.push_back(rng.uniform(-1, 1));
            b.push_back(rng.uniform(-1, 1));
        }
        const double p1 = wilcoxon_signed_rank(a, b);
        const double p2 = wilcoxon_signed_rank(b, a);
        CHECK(p1 == doctest::Approx(p2).epsilon(1e-12));
        CHECK(p1 > 0.0);
        CHECK(p1 <= 1.0);
    }
}

TEST_CASE("wilcoxon matches the exhaustive enumeration oracle") {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a, b;
        for (int i = 0; i < 10; ++i) {
            // mix of ties in |d| and alternating signs
            const double mag = 1.0 + static_cast<double>(rng.uniform_below(5));
            const double sign = rng.uniform01() < 0.6 ? 1.0 : -1.0;
            a.push_back(sign * mag);
            b.push_back(0.0);
        }
        CHECK(wilcoxon_signed_rank(a, b) == doctest::Approx(wilcoxon_oracle(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("wilcoxon rejects degenerate and out-of-regime input") {
    const std::vector<double> same{1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK_THROWS_AS(wilcoxon_signed_rank(same, same), DegeneratePairError);
    CHECK_THROWS_AS(wilcoxon_signed_rank(std::vector<double>{1.0, 2.0},
                                         std::vector<double>{0.0, 0.0}),
                    std::invalid_argument);
}
