#include "qreg/metalearn.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qreg/errors.hpp"
#include "qreg/rng.hpp"

namespace qreg {

double majority_baseline(const std::vector<std::string>& labels) {
    if (labels.empty()) throw std::invalid_argument("majority_baseline: empty labels");
    std::map<std::string, int> counts;
    for (const std::string& l : labels) ++counts[l];
    int best = 0;
    for (const auto& [label, count] : counts) best = std::max(best, count);
    return static_cast<double>(best) / static_cast<double>(labels.size());
}

namespace {

std::vector<std::string> class_names(const MetaDataset& meta) {
    std::vector<std::string> names;
    for (const MetaRow& row : meta.rows)
        if (std::find(names.begin(), names.end(), row.label) == names.end())
            names.push_back(row.label);
    std::sort(names.begin(), names.end());
    return names;
}

} // namespace

double loocv_accuracy(const MetaDataset& meta, const std::vector<int>& subset,
                      const ForestConfig& forest_config, std::uint64_t seed) {
    const int n = static_cast<int>(meta.rows.size());
    if (n < 2) throw std::invalid_argument("loocv_accuracy: need at least 2 rows");
    if (subset.empty()) throw std::invalid_argument("loocv_accuracy: empty feature subset");
    for (int f : subset)
        if (f < 0 || f >= 12) throw std::invalid_argument("loocv_accuracy: bad feature index");

    const std::vector<std::string> classes = class_names(meta);
    auto class_id = [&](const std::string& label) {
        return static_cast<int>(std::find(classes.begin(), classes.end(), label) -
                                classes.begin());
    };

    const std::uint64_t subset_seed = hash_span(seed, subset);
    int correct = 0;
    for (int fold = 0; fold < n; ++fold) {
        Matrix x(n - 1, static_cast<int>(subset.size()));
        std::vector<int> labels;
        labels.reserve(static_cast<std::size_t>(n - 1));
        int r = 0;
        for (int i = 0; i < n; ++i) {
            if (i == fold) continue;
            for (std::size_t j = 0; j < subset.size(); ++j)
                x(r, static_cast<int>(j)) =
                    meta.rows[static_cast<std::size_t>(i)].features[static_cast<std::size_t>(subset[j])];
            labels.push_back(class_id(meta.rows[static_cast<std::size_t>(i)].label));
            ++r;
        }

        const int truth = class_id(meta.rows[static_cast<std::size_t>(fold)].label);
        const bool single_class =
            std::all_of(labels.begin(), labels.end(), [&](int l) { return l == labels[0]; });
        int predicted;
        if (single_class) {
            predicted = labels[0];
        } else {
            ForestConfig cfg = forest_config;
            cfg.seed = hash_combine(subset_seed, static_cast<std::uint64_t>(fold));
            ForestClassifier forest;
            forest.fit(x, labels, cfg);
            std::vector<double> point(subset.size());
            for (std::size_t j = 0; j < subset.size(); ++j)
                point[j] = meta.rows[static_cast<std::size_t>(fold)]
                               .features[static_cast<std::size_t>(subset[j])];
            predicted = forest.predict(point);
        }
        if (predicted == truth) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(n);
}

std::vector<SubsetSearchResult> subset_search(const MetaDataset& meta, int k_min, int k_max,
                                              const ForestConfig& forest_config,
                                              std::uint64_t seed, int jobs) {
    if (k_min < 1 || k_max > 12 || k_min > k_max)
        throw std::invalid_argument("subset_search: need 1 <= k_min <= k_max <= 12");

    std::vector<std::string> labels;
    labels.reserve(meta.rows.size());
    for (const MetaRow& row : meta.rows) labels.push_back(row.label);
    const double baseline = majority_baseline(labels);

    // enumerate subsets in lexicographic order
    std::vector<std::vector<int>> subsets;
    std::vector<int> current;
    auto enumerate = [&](auto&& self, int start, int remaining) -> void {
        if (remaining == 0) {
            subsets.push_back(current);
            return;
        }
        for (int f = start; f <= 12 - remaining; ++f) {
            current.push_back(f);
            self(self, f + 1, remaining - 1);
            current.pop_back();
        }
    };
    for (int k = k_min; k <= k_max; ++k) enumerate(enumerate, 0, k);

    std::vector<SubsetSearchResult> results(subsets.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= subsets.size()) return;
            SubsetSearchResult& r = results[i];
            r.subset = subsets[i];
            r.k = static_cast<int>(subsets[i].size());
            r.accuracy = loocv_accuracy(meta, subsets[i], forest_config, seed);
            r.baseline = baseline;
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }

    std::sort(results.begin(), results.end(),
              [](const SubsetSearchResult& a, const SubsetSearchResult& b) {
                  if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
                  return a.subset < b.subset;
              });
    return results;
}

std::string subset_to_string(const std::vector<int>& subset) {
    std::string out;
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (i > 0) out += "+";
        out += ComplexityProfile::feature_names()[static_cast<std::size_t>(subset[i])];
    }
    return out;
}

void write_meta_csv(const MetaDataset& meta, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_meta_csv: cannot open " + path.string());
    out.precision(17);
    out << "function_id";
    for (const char* name : ComplexityProfile::feature_names()) out << "," << name;
    out << ",label\n";
    for (const MetaRow& row : meta.rows) {
        out << row.function_id;
        for (double v : row.features) out << "," << v;
        out << "," << row.label << "\n";
    }
}

MetaDataset read_meta_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_meta_csv: cannot open " + path.string());
    MetaDataset meta;
    std::string line;
    if (!std::getline(in, line)) throw IoError("read_meta_csv: empty file");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        MetaRow row;
        std::getline(ss, field, ',');
        row.function_id = std::stoi(field);
        for (double& v : row.features) {
            std::getline(ss, field, ',');
            v = std::stod(field);
        }
        std::getline(ss, row.label, ',');
        meta.rows.push_back(std::move(row));
    }
    return meta;
}

void write_results_csv(const std::vector<SubsetSearchResult>& results,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_results_csv: cannot open " + path.string());
    out.precision(17);
    out << "subset,k,accuracy,baseline\n";
    for (const SubsetSearchResult& r : results)
        out << subset_to_string(r.subset) << "," << r.k << "," << r.accuracy << "," << r.baseline
            << "\n";
}

} // namespace qreg
