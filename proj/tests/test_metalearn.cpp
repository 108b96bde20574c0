#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "qreg/metalearn.hpp"
#include "qreg/rng.hpp"

using namespace qreg;

namespace {

// 22 rows, two classes; feature 0 encodes the label with margin >= 1
MetaDataset separable_meta(int n_class_a, std::uint64_t seed) {
    Rng rng(seed);
    MetaDataset meta;
    for (int i = 0; i < 22; ++i) {
        MetaRow row;
        row.function_id = i + 1;
        const bool is_a = i < n_class_a;
        row.label = is_a ? "A" : "B";
        row.features[0] = (is_a ? 10.0 : 0.0) + rng.uniform(-0.4, 0.4);
        for (int f = 1; f < 12; ++f) row.features[static_cast<std::size_t>(f)] = rng.uniform(-1, 1);
        meta.rows.push_back(std::move(row));
    }
    return meta;
}

} // namespace

TEST_CASE("majority baselines for the published class distributions") {
    auto dist = [](std::vector<int> counts) {
        std::vector<std::string> labels;
        for (std::size_t c = 0; c < counts.size(); ++c)
            for (int i = 0; i < counts[c]; ++i) labels.push_back("class" + std::to_string(c));
        return labels;
    };
    CHECK(majority_baseline(dist({17, 5})) == doctest::Approx(17.0 / 22.0));
    CHECK(majority_baseline(dist({11, 7, 3, 1})) == doctest::Approx(0.5));
    CHECK(majority_baseline(dist({14, 8})) == doctest::Approx(14.0 / 22.0));
    CHECK(majority_baseline(dist({14, 6, 2})) == doctest::Approx(14.0 / 22.0));
    CHECK(majority_baseline({"x", "x", "x"}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(majority_baseline({}), std::invalid_argument);
}

TEST_CASE("a label-encoding feature gives perfect LOOCV accuracy") {
    const MetaDataset meta = separable_meta(12, 1);
    CHECK(loocv_accuracy(meta, {0}, {100, -1, 0}, 7) == doctest::Approx(1.0));
}

TEST_CASE("single-class labels are trivially predicted") {
    MetaDataset meta = separable_meta(22, 2); // every row labeled A
    CHECK(loocv_accuracy(meta, {0, 1}, {50, -1, 0}, 1) == doctest::Approx(1.0));
}

TEST_CASE("identical features cannot beat the majority baseline") {
    MetaDataset meta;
    for (int i = 0; i < 22; ++i) {
        MetaRow row;
        row.function_id = i + 1;
        row.label = i % 2 == 0 ? "A" : "B";
        row.features.fill(0.5);
        meta.rows.push_back(std::move(row));
    }
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        worst = std::max(worst, loocv_accuracy(meta, {0, 3, 7}, {30, -1, 0}, seed));
    CHECK(worst <= 0.5 + 0.1);
}

TEST_CASE("accuracy is always a multiple of 1/22") {
    const MetaDataset meta = separable_meta(15, 3);
    for (const std::vector<int> subset : {std::vector<int>{1}, {2, 5}, {0, 4, 9}}) {
        const double acc = loocv_accuracy(meta, subset, {40, -1, 0}, 11);
        const double scaled = acc * 22.0;
        CHECK(std::abs(scaled - std::round(scaled)) < 1e-9);
    }
}

TEST_CASE("subset counts for the enumeration ranges") {
    const MetaDataset meta = separable_meta(12, 4);
    CHECK(subset_search(meta, 12, 12, {10, -1, 0}, 0).size() == 1);
    CHECK(subset_search(meta, 1, 2, {10, -1, 0}, 0).size() == 12 + 66);
}

TEST_CASE("search finds the separable subset on top and stays deterministic") {
    const MetaDataset meta = separable_meta(12, 5);
    const auto results = subset_search(meta, 1, 2, {60, -1, 0}, 13, 2);
    REQUIRE(!results.empty());
    CHECK(results.front().accuracy == doctest::Approx(1.0));
    CHECK(results.front().baseline == doctest::Approx(12.0 / 22.0));
    // sorted: accuracy descending, then lexicographic subsets
    for (std::size_t i = 1; i < results.size(); ++i) {
        const bool ordered = results[i - 1].accuracy > results[i].accuracy ||
                             (results[i - 1].accuracy == results[i].accuracy &&
                              results[i - 1].subset < results[i].subset);
        CHECK(ordered);
    }
    const auto again = subset_search(meta, 1, 2, {60, -1, 0}, 13, 1);
    REQUIRE(again.size() == results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        CHECK(again[i].subset == results[i].subset);
        CHECK(again[i].accuracy == results[i].accuracy);
    }
}

TEST_CASE("some evaluated subset reaches the majority baseline") {
    const MetaDataset meta = separable_meta(14, 6);
    const auto results = subset_search(meta, 1, 3, {40, -1, 0}, 3);
    const double baseline = results.front().baseline;
    CHECK(results.front().accuracy >= baseline);
}

TEST_CASE("meta CSV round-trip") {
    const MetaDataset meta = separable_meta(10, 7);
    const auto dir = std::filesystem::temp_directory_path() / "qreg_meta_test";
    std::filesystem::create_directories(dir);
    write_meta_csv(meta, dir / "meta.csv");
    const MetaDataset back = read_meta_csv(dir / "meta.csv");
    REQUIRE(back.rows.size() == meta.rows.size());
    for (std::size_t i = 0; i < meta.rows.size(); ++i) {
        CHECK(back.rows[i].function_id == meta.rows[i].function_id);
        CHECK(back.rows[i].label == meta.rows[i].label);
        for (int f = 0; f < 12; ++f)
            CHECK(back.rows[i].features[static_cast<std::size_t>(f)] ==
                  doctest::Approx(meta.rows[i].features[static_cast<std::size_t>(f)]));
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("subset names use the feature labels") {
    CHECK(subset_to_string({0, 2, 11}) == "c1+c3+t2");
}

TEST_CASE("invalid subset-search ranges are rejected") {
    const MetaDataset meta = separable_meta(12, 8);
    CHECK_THROWS_AS(subset_search(meta, 0, 3, {10, -1, 0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(subset_search(meta, 5, 3, {10, -1, 0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(loocv_accuracy(meta, {}, {10, -1, 0}, 0), std::invalid_argument);
}
