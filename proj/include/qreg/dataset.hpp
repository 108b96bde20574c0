#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace qreg {

// Row-major dense matrix, plenty for n x d regression tables.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
    std::span<const double> row(int i) const {
        return {data.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)};
    }
};

struct BenchmarkInfo {
    int id;           // 1..22
    std::string name;
    int dim;          // 2 for the whole suite
    double lo, hi;    // same closed interval on every axis
};

const std::vector<BenchmarkInfo>& benchmark_suite();
const BenchmarkInfo& benchmark_info(int id);

double eval_function(int id, std::span<const double> x);
double eval_1d_function(int fid, double x); // fid in {1,2,3,4}, domain [-1, 1]

struct ScaleRecord {
    double min = 0.0;
    double max = 0.0;
};

// Features scaled per column to [-pi, pi], target min-max scaled to [-1, 1];
// scaling statistics come from the full sample.
struct RegressionDataset {
    int function_id = 0; // 0 = custom, 1..22 = suite, 101..104 = 1D f1..f4
    std::uint64_t seed = 0;
    Matrix x_raw;
    Matrix x;
    std::vector<double> y_raw;
    std::vector<double> y;
    std::vector<int> train_idx;
    std::vector<int> test_idx;
    std::vector<ScaleRecord> x_scale;
    ScaleRecord y_scale;

    int n() const { return x.rows; }
    int dim() const { return x.cols; }
};

RegressionDataset generate_dataset(int id, int n, std::uint64_t seed);
RegressionDataset generate_dataset_1d(int fid, int n, std::uint64_t seed);

// Scale + split arbitrary raw data with the same conventions as the suite.
RegressionDataset make_dataset(Matrix x_raw, std::vector<double> y_raw, std::uint64_t seed,
                               int function_id = 0);

double unscale_feature(const RegressionDataset& data, int column, double scaled);
double unscale_target(const RegressionDataset& data, double scaled);

void write_dataset_csv(const RegressionDataset& data, const std::filesystem::path& path);
void write_dataset_manifest(const RegressionDataset& data, const std::filesystem::path& path);

} // namespace qreg
