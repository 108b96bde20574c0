#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qreg/baselines.hpp"
#include "qreg/complexity.hpp"

namespace qreg {

struct MetaRow {
    int function_id = 0;
    std::array<double, 12> features{}; // c1..t2 order
    std::string label;
};

struct MetaDataset {
    std::vector<MetaRow> rows;
    int scenario = 0;
};

double majority_baseline(const std::vector<std::string>& labels);

// Leave-one-out accuracy of a fresh forest per fold, restricted to the given
// feature subset (indices into ComplexityProfile::feature_names()). The
// per-fold forest seed is hash(seed, subset, fold).
double loocv_accuracy(const MetaDataset& meta, const std::vector<int>& subset,
                      const ForestConfig& forest_config, std::uint64_t seed);

struct SubsetSearchResult {
    std::vector<int> subset;
    int k = 0;
    double accuracy = 0.0;
    double baseline = 0.0;
};

// Evaluates every feature subset with size in [k_min, k_max]; results sorted
// by accuracy descending, then subset lexicographically.
std::vector<SubsetSearchResult> subset_search(const MetaDataset& meta, int k_min, int k_max,
                                              const ForestConfig& forest_config,
                                              std::uint64_t seed, int jobs = 1);

std::string subset_to_string(const std::vector<int>& subset);

void write_meta_csv(const MetaDataset& meta, const std::filesystem::path& path);
MetaDataset read_meta_csv(const std::filesystem::path& path);
void write_results_csv(const std::vector<SubsetSearchResult>& results,
                       const std::filesystem::path& path);

} // namespace qreg
