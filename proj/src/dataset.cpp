#include "qreg/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "qreg/errors.hpp"
#include "qreg/rng.hpp"

namespace qreg {

namespace {

constexpr double kPi = std::numbers::pi;

double sum_sq(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double sum_of(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

// Schwefel's bias constant, printed to full precision in the benchmark table.
constexpr double kSchwefelOffset = 418.9828872724337;

double weierstrass(std::span<const double> x) {
    constexpr double a = 0.5;
    constexpr double b = 3.0;
    constexpr int k_max = 20;
    double outer = 0.0;
    for (double xi : x) {
        double inner = 0.0;
        double ak = 1.0, bk = 1.0;
        for (int k = 0; k <= k_max; ++k) {
            inner += ak * std::cos(2.0 * kPi * bk * (xi + 0.5));
            ak *= a;
            bk *= b;
        }
        outer += inner;
    }
    double bias = 0.0;
    double ak = 1.0, bk = 1.0;
    for (int k = 0; k <= k_max; ++k) {
        bias += ak * std::cos(kPi * bk);
        ak *= a;
        bk *= b;
    }
    return outer - static_cast<double>(x.size()) * bias;
}

double katsuura(std::span<const double> x) {
    const double d = static_cast<double>(x.size());
    const double expo = 10.0 / std::pow(d, 1.2);
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double inner = 0.0;
        double two_j = 2.0;
        for (int j = 1; j <= 32; ++j) {
            const double v = two_j * x[i];
            inner += std::abs(v - std::floor(v + 0.5)) / two_j;
            two_j *= 2.0;
        }
        prod *= std::pow(1.0 + static_cast<double>(i + 1) * inner, expo);
    }
    return 10.0 / (d * d) * prod - 10.0 / (d * d);
}

double schaffer_g(double x, double y) {
    const double r2 = x * x + y * y;
    const double s = std::sin(std::sqrt(r2));
    const double denom = 1.0 + 0.001 * r2;
    return 0.5 + (s * s - 0.5) / (denom * denom);
}

} // namespace

const std::vector<BenchmarkInfo>& benchmark_suite() {
    static const std::vector<BenchmarkInfo> suite = {
        {1, "Sphere", 2, -5.0, 5.0},
        {2, "Ellipsoid", 2, -5.0, 5.0},
        {3, "BentCigar", 2, -5.0, 5.0},
        {4, "Discus", 2, -5.0, 5.0},
        {5, "DifferentPowers", 2, -5.0, 5.0},
        {6, "Rosenbrock", 2, -5.0, 5.0},
        {7, "SchafferF7", 2, -5.0, 5.0},
        {8, "Ackley", 2, -5.0, 5.0},
        {9, "Rastrigin", 2, -5.0, 5.0},
        {10, "Weierstrass", 2, -5.0, 5.0},
        {11, "Griewank", 2, -10.0, 10.0},
        {12, "Schwefel", 2, -500.0, 500.0},
        {13, "Katsuura", 2, -500.0, 500.0},
        {14, "GriewankRosenbrock", 2, -300.0, 300.0},
        {15, "ExpandedSchaffer6", 2, -10.0, 10.0},
        {16, "StepRastrigin", 2, -30.0, 30.0},
        {17, "HappyCat", 2, -50.0, 50.0},
        {18, "HGBat", 2, -30.0, 30.0},
        {19, "DifferentPowersMod", 2, -5.0, 5.0},
        {20, "Zakharov", 2, -5.0, 5.0},
        {21, "Levy", 2, -500.0, 500.0},
        {22, "DixonPrice", 2, -1000.0, 1000.0},
    };
    return suite;
}

const BenchmarkInfo& benchmark_info(int id) {
    if (id < 1 || id > 22) throw std::invalid_argument("benchmark_info: id must be in 1..22");
    return benchmark_suite()[static_cast<std::size_t>(id - 1)];
}

double eval_function(int id, std::span<const double> x) {
    const BenchmarkInfo& info = benchmark_info(id);
    if (static_cast<int>(x.size()) != info.dim)
        throw std::invalid_argument("eval_function: expected dimension " +
                                    std::to_string(info.dim));
    const int d = info.dim;
    switch (id) {
    case 1:
        return sum_sq(x);
    case 2: {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += (i + 1) * x[i] * x[i];
        return s;
    }
    case 3: {
        double s = x[0] * x[0];
        for (int i = 1; i < d; ++i) s += 1e6 * x[i] * x[i];
        return s;
    }
    case 4: {
        double s = 1e6 * x[0] * x[0];
        for (int i = 1; i < d; ++i) s += x[i] * x[i];
        return s;
    }
    case 5: {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += std::pow(std::abs(x[i]), i + 2);
        return s;
    }
    case 6: {
        // table prints (x_i + 1)^2 where the textbook form has (1 - x_i)^2;
        // kept verbatim
        double s = 0.0;
        for (int i = 0; i + 1 < d; ++i) {
            const double a = x[i + 1] - x[i] * x[i];
            const double b = x[i] + 1.0;
            s += 100.0 * a * a + b * b;
        }
        return s;
    }
    case 7: {
        double s = 0.0;
        for (int i = 0; i + 1 < d; ++i) {
            const double si = std::sqrt(x[i] * x[i] + x[i + 1] * x[i + 1]);
            const double root = std::sqrt(si);
            const double sn = std::sin(50.0 * std::pow(si, 0.2));
            s += root + root * sn * sn;
        }
        s /= static_cast<double>(d - 1);
        return s * s;
    }
    case 8: {
        double sq = 0.0, cs = 0.0;
        for (int i = 0; i < d; ++i) {
            sq += x[i] * x[i];
            cs += std::cos(2.0 * kPi * x[i]);
        }
        return -20.0 * std::exp(-0.2 * std::sqrt(sq / d)) - std::exp(cs / d) + std::exp(1.0) +
               20.0;
    }
    case 9: {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += x[i] * x[i] - 10.0 * std::cos(2.0 * kPi * x[i]);
        return s + 10.0 * d;
    }
    case 10:
        return weierstrass(x);
    case 11: {
        double s = 0.0, p = 1.0;
        for (int i = 0; i < d; ++i) {
            s += x[i] * x[i];
            p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
        }
        return s / 4000.0 - p + 1.0;
    }
    case 12: {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += x[i] * std::sin(std::sqrt(std::abs(x[i])));
        return -s + kSchwefelOffset * d;
    }
    case 13:
        return katsuura(x);
    case 14: {
        double s = 0.0;
        for (int i = 0; i + 1 < d; ++i) {
            const double a = x[i] * x[i] - x[i + 1];
            const double b = x[i] - 1.0;
            const double t = 100.0 * a * a + b * b;
            s += t * t / 4000.0 - std::cos(t) + 1.0;
        }
        return s;
    }
    case 15: {
        double s = 0.0;
        for (int i = 0; i + 1 < d; ++i) s += schaffer_g(x[i], x[i + 1]);
        s += schaffer_g(x[d - 1], x[0]);
        return s;
    }
    case 16: {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            const double v = 5.12 / 100.0 * x[i];
            const double z = std::abs(v) > 0.5 ? std::floor(v + 0.5) : v;
            s += z * z - 10.0 * std::cos(2.0 * kPi * z) + 10.0;
        }
        return s;
    }
    case 17: {
        const double sq = sum_sq(x);
        const double sm = sum_of(x);
        return std::pow(std::abs(sq - d), 0.25) + (0.5 * sq + sm) / d + 0.5;
    }
    case 18: {
        const double sq = sum_sq(x);
        const double sm = sum_of(x);
        return std::sqrt(std::abs(sq * sq - sm * sm)) + (0.5 * sq + sm) / d + 0.5;
    }
    case 19: {
        double s = 0.0;
        for (int i = 0; i < d; ++i)
            s += std::pow(std::abs(x[i]), 2.0 + 4.0 * i / (d - 1.0));
        return std::sqrt(s);
    }
    case 20: {
        const double sq = sum_sq(x);
        double lin = 0.0;
        for (int i = 0; i < d; ++i) lin += 0.5 * (i + 1) * x[i];
        return sq + lin * lin + lin * lin * lin * lin;
    }
    case 21: {
        auto w = [&x](int i) { return 1.0 + (x[i] - 1.0) / 4.0; };
        const double s1 = std::sin(kPi * w(0));
        double s = s1 * s1;
        for (int i = 0; i + 1 < d; ++i) {
            const double wi = w(i);
            const double sn = std::sin(kPi * wi + 1.0);
            s += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * sn * sn);
        }
        const double wd = w(d - 1);
        const double sn = std::sin(2.0 * kPi * wd);
        return s + (wd - 1.0) * (wd - 1.0) * (1.0 + sn * sn);
    }
    case 22: {
        // table prints (2 x_i)^2 where the textbook form has 2 x_i^2; kept verbatim
        double s = (x[0] - 1.0) * (x[0] - 1.0);
        for (int i = 1; i < d; ++i) {
            const double t = 4.0 * x[i] * x[i] - x[i - 1];
            s += (i + 1) * t * t;
        }
        return s;
    }
    default:
        throw std::invalid_argument("eval_function: unknown id");
    }
}

double eval_1d_function(int fid, double x) {
    switch (fid) {
    case 1: return x * x;
    case 2: return x * x * x;
    case 3: return 2.0 * x * x * x * x - 1.0;
    case 4: return 0.9 / (1.0 + std::exp(-10.0 * x));
    default: throw std::invalid_argument("eval_1d_function: fid must be in 1..4");
    }
}

namespace {

RegressionDataset assemble(Matrix x_raw, std::vector<double> y_raw, std::uint64_t seed,
                           int function_id) {
    const int n = x_raw.rows;
    const int d = x_raw.cols;
    if (n < 10) throw std::invalid_argument("dataset: need at least 10 samples");
    if (static_cast<int>(y_raw.size()) != n)
        throw std::invalid_argument("dataset: y length mismatch");

    RegressionDataset data;
    data.function_id = function_id;
    data.seed = seed;
    data.x_raw = std::move(x_raw);
    data.y_raw = std::move(y_raw);

    // per-column min-max onto [-pi, pi]
    data.x = Matrix(n, d);
    data.x_scale.resize(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        double lo = data.x_raw(0, j), hi = data.x_raw(0, j);
        for (int i = 1; i < n; ++i) {
            lo = std::min(lo, data.x_raw(i, j));
            hi = std::max(hi, data.x_raw(i, j));
        }
        data.x_scale[static_cast<std::size_t>(j)] = {lo, hi};
        const double span = hi - lo;
        for (int i = 0; i < n; ++i)
            data.x(i, j) = span > 0.0 ? -kPi + 2.0 * kPi * (data.x_raw(i, j) - lo) / span : 0.0;
    }

    // target onto [-1, 1]
    double ylo = data.y_raw[0], yhi = data.y_raw[0];
    for (double v : data.y_raw) {
        ylo = std::min(ylo, v);
        yhi = std::max(yhi, v);
    }
    data.y_scale = {ylo, yhi};
    data.y.resize(static_cast<std::size_t>(n));
    const double yspan = yhi - ylo;
    for (int i = 0; i < n; ++i)
        data.y[static_cast<std::size_t>(i)] =
            yspan > 0.0 ? -1.0 + 2.0 * (data.y_raw[static_cast<std::size_t>(i)] - ylo) / yspan
                        : 0.0;

    // seeded 70/30 split
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    Rng rng(hash_combine(seed, 0x5711u)); // split stream, separate from sampling
    for (int i = n - 1; i > 0; --i)
        std::swap(order[static_cast<std::size_t>(i)],
                  order[rng.uniform_below(static_cast<std::uint64_t>(i) + 1)]);
    const int n_train = static_cast<int>(std::llround(0.7 * n));
    data.train_idx.assign(order.begin(), order.begin() + n_train);
    data.test_idx.assign(order.begin() + n_train, order.end());
    std::sort(data.train_idx.begin(), data.train_idx.end());
    std::sort(data.test_idx.begin(), data.test_idx.end());
    return data;
}

} // namespace

RegressionDataset generate_dataset(int id, int n, std::uint64_t seed) {
    const BenchmarkInfo& info = benchmark_info(id);
    Rng rng(hash_combine(seed, static_cast<std::uint64_t>(id)));
    Matrix x_raw(n, info.dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < info.dim; ++j) x_raw(i, j) = rng.uniform(info.lo, info.hi);
    std::vector<double> y_raw(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) y_raw[static_cast<std::size_t>(i)] = eval_function(id, x_raw.row(i));
    return assemble(std::move(x_raw), std::move(y_raw), seed, id);
}

RegressionDataset generate_dataset_1d(int fid, int n, std::uint64_t seed) {
    if (fid < 1 || fid > 4) throw std::invalid_argument("generate_dataset_1d: fid must be in 1..4");
    Rng rng(hash_combine(seed, 100 + static_cast<std::uint64_t>(fid)));
    Matrix x_raw(n, 1);
    for (int i = 0; i < n; ++i) x_raw(i, 0) = rng.uniform(-1.0, 1.0);
    std::vector<double> y_raw(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        y_raw[static_cast<std::size_t>(i)] = eval_1d_function(fid, x_raw(i, 0));
    return assemble(std::move(x_raw), std::move(y_raw), seed, 100 + fid);
}

RegressionDataset make_dataset(Matrix x_raw, std::vector<double> y_raw, std::uint64_t seed,
                               int function_id) {
    return assemble(std::move(x_raw), std::move(y_raw), seed, function_id);
}

double unscale_feature(const RegressionDataset& data, int column, double scaled) {
    const ScaleRecord& s = data.x_scale[static_cast<std::size_t>(column)];
    if (s.max <= s.min) return s.min;
    return s.min + (scaled + kPi) / (2.0 * kPi) * (s.max - s.min);
}

double unscale_target(const RegressionDataset& data, double scaled) {
    const ScaleRecord& s = data.y_scale;
    if (s.max <= s.min) return s.min;
    return s.min + (scaled + 1.0) / 2.0 * (s.max - s.min);
}

void write_dataset_csv(const RegressionDataset& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_dataset_csv: cannot open " + path.string());
    out.precision(17);
    for (int j = 0; j < data.dim(); ++j) out << "x" << (j + 1) << ",";
    out << "y_raw,y_scaled\n";
    for (int i = 0; i < data.n(); ++i) {
        for (int j = 0; j < data.dim(); ++j) out << data.x_raw(i, j) << ",";
        out << data.y_raw[static_cast<std::size_t>(i)] << ","
            << data.y[static_cast<std::size_t>(i)] << "\n";
    }
}

void write_dataset_manifest(const RegressionDataset& data, const std::filesystem::path& path) {
    nlohmann::json scaling;
    scaling["x"] = nlohmann::json::array();
    for (const ScaleRecord& s : data.x_scale)
        scaling["x"].push_back({{"min", s.min}, {"max", s.max}});
    scaling["y"] = {{"min", data.y_scale.min}, {"max", data.y_scale.max}};
    const nlohmann::json manifest = {{"id", data.function_id},
                                     {"n", data.n()},
                                     {"seed", data.seed},
                                     {"scaling", scaling}};
    std::ofstream out(path);
    if (!out) throw IoError("write_dataset_manifest: cannot open " + path.string());
    out << manifest.dump(2) << "\n";
}

} // namespace qreg
