#include "qreg/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "qreg/baselines.hpp"
#include "qreg/errors.hpp"

namespace qreg {

void to_json(nlohmann::json& j, const RunRecord& r) {
    j = nlohmann::json{{"run_id", r.run_id},
                       {"command", r.command},
                       {"config", r.config_snapshot},
                       {"function_id", r.function_id},
                       {"model", r.model},
                       {"seed", r.seed},
                       {"metrics",
                        {{"train_r2", r.train_metrics.r2},
                         {"train_rmse", r.train_metrics.rmse},
                         {"full_r2", r.full_metrics.r2},
                         {"full_rmse", r.full_metrics.rmse}}},
                       {"param_count", r.param_count},
                       {"wall_time_seconds", r.wall_time_seconds}};
}

void from_json(const nlohmann::json& j, RunRecord& r) {
    j.at("run_id").get_to(r.run_id);
    j.at("command").get_to(r.command);
    r.config_snapshot = j.at("config");
    j.at("function_id").get_to(r.function_id);
    j.at("model").get_to(r.model);
    j.at("seed").get_to(r.seed);
    const auto& m = j.at("metrics");
    m.at("train_r2").get_to(r.train_metrics.r2);
    m.at("train_rmse").get_to(r.train_metrics.rmse);
    m.at("full_r2").get_to(r.full_metrics.r2);
    m.at("full_rmse").get_to(r.full_metrics.rmse);
    j.at("param_count").get_to(r.param_count);
    j.at("wall_time_seconds").get_to(r.wall_time_seconds);
}

ModelSpec parse_model(const std::string& descriptor) {
    ModelSpec spec;
    spec.name = descriptor;
    if (descriptor == "DT") {
        spec.kind = ModelSpec::Kind::Tree;
        return spec;
    }
    if (descriptor == "OLS") {
        spec.kind = ModelSpec::Kind::Ols;
        return spec;
    }
    if (descriptor.rfind("knn", 0) == 0) {
        spec.kind = ModelSpec::Kind::Knn;
        try {
            spec.k = std::stoi(descriptor.substr(3));
        } catch (...) {
            throw ConfigError("model '" + descriptor + "': expected knn<k>");
        }
        if (spec.k < 1) throw ConfigError("model '" + descriptor + "': k must be >= 1");
        return spec;
    }
    if (descriptor.rfind("RRQNN-", 0) == 0) {
        // RRQNN-<gates>-<qubits>q
        spec.kind = ModelSpec::Kind::Rrqnn;
        const std::string rest = descriptor.substr(6);
        const std::size_t dash = rest.find('-');
        if (dash == std::string::npos || rest.size() < dash + 3 || rest.back() != 'q')
            throw ConfigError("model '" + descriptor + "': expected RRQNN-<gates>-<qubits>q");
        try {
            spec.n_gates = std::stoi(rest.substr(0, dash));
            spec.n_qubits = std::stoi(rest.substr(dash + 1, rest.size() - dash - 2));
        } catch (...) {
            throw ConfigError("model '" + descriptor + "': expected RRQNN-<gates>-<qubits>q");
        }
        if (spec.n_gates < 1 || spec.n_qubits < 1)
            throw ConfigError("model '" + descriptor + "': gates and qubits must be >= 1");
        return spec;
    }
    const std::size_t dash = descriptor.rfind('-');
    if (dash == std::string::npos)
        throw ConfigError("model '" + descriptor + "': unknown descriptor");
    spec.kind = ModelSpec::Kind::Ansatz;
    spec.ansatz.family = parse_family(descriptor.substr(0, dash));
    try {
        spec.ansatz.layers = std::stoi(descriptor.substr(dash + 1));
    } catch (...) {
        throw ConfigError("model '" + descriptor + "': expected <family>-<layers>");
    }
    if (spec.ansatz.layers < 1)
        throw ConfigError("model '" + descriptor + "': layers must be >= 1");
    spec.ansatz.qubits = 2; // placeholder; run_one widens to the dataset dimension
    return spec;
}

namespace {

template <typename T>
T get_field(const nlohmann::json& j, const std::string& path, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + "." + key + ": " + e.what());
    }
}

RegressionDataset dataset_for(int function_id, int n_samples, std::uint64_t seed) {
    if (function_id >= 101 && function_id <= 104)
        return generate_dataset_1d(function_id - 100, n_samples, seed);
    return generate_dataset(function_id, n_samples, seed);
}

Metrics metrics_on_rows(const std::vector<double>& y_hat_all, const RegressionDataset& data,
                        std::span<const int> rows) {
    std::vector<double> y, y_hat;
    y.reserve(rows.size());
    y_hat.reserve(rows.size());
    for (int r : rows) {
        y.push_back(data.y[static_cast<std::size_t>(r)]);
        y_hat.push_back(y_hat_all[static_cast<std::size_t>(r)]);
    }
    return {r2_score(y, y_hat), rmse(y, y_hat)};
}

Matrix train_matrix(const RegressionDataset& data) {
    Matrix x(static_cast<int>(data.train_idx.size()), data.dim());
    for (std::size_t i = 0; i < data.train_idx.size(); ++i)
        for (int j = 0; j < data.dim(); ++j) x(static_cast<int>(i), j) = data.x(data.train_idx[i], j);
    return x;
}

std::vector<double> train_targets(const RegressionDataset& data) {
    std::vector<double> y;
    y.reserve(data.train_idx.size());
    for (int r : data.train_idx) y.push_back(data.y[static_cast<std::size_t>(r)]);
    return y;
}

} // namespace

SuiteConfig parse_suite_config(const nlohmann::json& j) {
    SuiteConfig config;
    if (!j.contains("functions")) throw ConfigError("config.functions: required");
    if (!j.contains("models")) throw ConfigError("config.models: required");
    if (!j.contains("seeds")) throw ConfigError("config.seeds: required");
    try {
        config.functions = j.at("functions").get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config.functions: ") + e.what());
    }
    try {
        config.models = j.at("models").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config.models: ") + e.what());
    }
    try {
        config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config.seeds: ") + e.what());
    }
    for (int f : config.functions) {
        const bool suite = f >= 1 && f <= 22;
        const bool one_d = f >= 101 && f <= 104;
        if (!suite && !one_d)
            throw ConfigError("config.functions: id " + std::to_string(f) +
                              " outside 1..22 and 101..104");
    }
    for (const std::string& m : config.models) parse_model(m); // validate early
    config.n_samples = get_field(j, "config", "n_samples", 900);
    if (config.n_samples < 10) throw ConfigError("config.n_samples: must be >= 10");
    config.jobs = get_field(j, "config", "jobs", 1);

    if (j.contains("train")) {
        const auto& t = j.at("train");
        config.train.learning_rate = get_field(t, "config.train", "learning_rate", config.train.learning_rate);
        config.train.epochs = get_field(t, "config.train", "epochs", config.train.epochs);
        config.train.adam_beta1 = get_field(t, "config.train", "adam_beta1", config.train.adam_beta1);
        config.train.adam_beta2 = get_field(t, "config.train", "adam_beta2", config.train.adam_beta2);
        config.train.adam_eps = get_field(t, "config.train", "adam_eps", config.train.adam_eps);
        config.train.measurement_wire = get_field(t, "config.train", "measurement_wire", config.train.measurement_wire);
        if (config.train.learning_rate <= 0.0) throw ConfigError("config.train.learning_rate: must be > 0");
        if (config.train.epochs < 0) throw ConfigError("config.train.epochs: must be >= 0");
    }
    if (j.contains("ga")) {
        const auto& g = j.at("ga");
        config.ga.population = get_field(g, "config.ga", "population", config.ga.population);
        config.ga.generations = get_field(g, "config.ga", "generations", config.ga.generations);
        config.ga.elites = get_field(g, "config.ga", "elites", config.ga.elites);
        config.ga.mutation_genome_fraction =
            get_field(g, "config.ga", "mutation_genome_fraction", config.ga.mutation_genome_fraction);
        config.ga.mutation_individual_prob =
            get_field(g, "config.ga", "mutation_individual_prob", config.ga.mutation_individual_prob);
        config.ga.fitness_epochs = get_field(g, "config.ga", "fitness_epochs", config.ga.fitness_epochs);
        if (config.ga.elites >= config.ga.population)
            throw ConfigError("config.ga.elites: must be < population");
    }
    return config;
}

SuiteConfig load_suite_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
    return parse_suite_config(j);
}

RunRecord run_one(const ModelSpec& model, int function_id, int n_samples, std::uint64_t seed,
                  const TrainConfig& train_config, const GAConfig& ga_config) {
    const auto start = std::chrono::steady_clock::now();
    const RegressionDataset data = dataset_for(function_id, n_samples, seed);

    RunRecord record;
    record.function_id = function_id;
    record.model = model.name;
    record.seed = seed;
    record.run_id = "f" + std::to_string(function_id) + "-" + model.name + "-s" + std::to_string(seed);

    switch (model.kind) {
    case ModelSpec::Kind::Ansatz: {
        AnsatzSpec spec = model.ansatz;
        spec.qubits = data.dim(); // one wire per feature, loaded in parallel
        TrainConfig cfg = train_config;
        cfg.seed = seed;
        const CircuitSpec circuit = build_ansatz(spec, data.dim());
        const TrainResult result = train(circuit, data, cfg);
        record.train_metrics = result.train_metrics;
        record.full_metrics = result.full_metrics;
        record.param_count = count_params(circuit);
        record.config_snapshot = {{"family", family_name(spec.family)},
                                  {"layers", spec.layers},
                                  {"qubits", spec.qubits},
                                  {"epochs", cfg.epochs},
                                  {"learning_rate", cfg.learning_rate}};
        break;
    }
    case ModelSpec::Kind::Rrqnn: {
        GAConfig cfg = ga_config;
        cfg.n_gates = model.n_gates;
        cfg.n_qubits = model.n_qubits;
        cfg.seed = seed;
        TrainConfig tcfg = train_config;
        const GAResult result = run_ga(cfg, data, tcfg);
        const CircuitSpec circuit = decode_chromosome(result.best_chromosome);
        const std::vector<double> y_hat_train =
            predict_rows(circuit, result.best_params, data, data.train_idx, tcfg.measurement_wire);
        const std::vector<double> y_train = train_targets(data);
        record.train_metrics = {r2_score(y_train, y_hat_train), rmse(y_train, y_hat_train)};
        record.full_metrics = result.final_metrics;
        record.param_count = count_params(circuit);
        nlohmann::json chrom;
        to_json(chrom, result.best_chromosome);
        record.config_snapshot = {{"population", cfg.population},
                                  {"generations", cfg.generations},
                                  {"n_gates", cfg.n_gates},
                                  {"n_qubits", cfg.n_qubits},
                                  {"fitness_epochs", cfg.fitness_epochs},
                                  {"best_chromosome", chrom}};
        break;
    }
    case ModelSpec::Kind::Knn: {
        // inverse-distance weighting reproduces the published knn rows
        const KnnRegressor knn(model.k, train_matrix(data), train_targets(data),
                               /*weighted=*/true);
        std::vector<double> y_hat(static_cast<std::size_t>(data.n()));
        for (int i = 0; i < data.n(); ++i) y_hat[static_cast<std::size_t>(i)] = knn.predict(data.x.row(i));
        std::vector<int> all(static_cast<std::size_t>(data.n()));
        for (int i = 0; i < data.n(); ++i) all[static_cast<std::size_t>(i)] = i;
        record.train_metrics = metrics_on_rows(y_hat, data, data.train_idx);
        record.full_metrics = metrics_on_rows(y_hat, data, all);
        record.param_count = 0;
        record.config_snapshot = {{"k", model.k}};
        break;
    }
    case ModelSpec::Kind::Tree: {
        const TreeRegressor tree = TreeRegressor::fit(train_matrix(data), train_targets(data));
        std::vector<double> y_hat(static_cast<std::size_t>(data.n()));
        for (int i = 0; i < data.n(); ++i) y_hat[static_cast<std::size_t>(i)] = tree.predict(data.x.row(i));
        std::vector<int> all(static_cast<std::size_t>(data.n()));
        for (int i = 0; i < data.n(); ++i) all[static_cast<std::size_t>(i)] = i;
        record.train_metrics = metrics_on_rows(y_hat, data, data.train_idx);
        record.full_metrics = metrics_on_rows(y_hat, data, all);
        record.param_count = tree.param_count();
        record.config_snapshot = {{"max_depth", nullptr}, {"min_samples_split", 2}};
        break;
    }
    case ModelSpec::Kind::Ols: {
        const LinearModel linear = ols_fit(train_matrix(data), train_targets(data));
        std::vector<double> y_hat(static_cast<std::size_t>(data.n()));
        for (int i = 0; i < data.n(); ++i) y_hat[static_cast<std::size_t>(i)] = linear.predict(data.x.row(i));
        std::vector<int> all(static_cast<std::size_t>(data.n()));
        for (int i = 0; i < data.n(); ++i) all[static_cast<std::size_t>(i)] = i;
        record.train_metrics = metrics_on_rows(y_hat, data, data.train_idx);
        record.full_metrics = metrics_on_rows(y_hat, data, all);
        record.param_count = data.dim() + 1;
        record.config_snapshot = {{"intercept", true}};
        break;
    }
    }

    record.command = "bench";
    record.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

std::vector<RunRecord> read_records(const std::filesystem::path& path) {
    std::vector<RunRecord> records;
    std::ifstream in(path);
    if (!in) return records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const nlohmann::json j = nlohmann::json::parse(line);
        records.push_back(j.get<RunRecord>());
    }
    return records;
}

std::vector<RunRecord> run_suite(const SuiteConfig& config,
                                 const std::filesystem::path& records_path, std::ostream& log) {
    std::set<std::string> done;
    for (const RunRecord& r : read_records(records_path)) done.insert(r.run_id);

    struct Planned {
        ModelSpec model;
        int function_id;
        std::uint64_t seed;
    };
    std::vector<Planned> planned;
    std::size_t total = 0;
    for (int f : config.functions) {
        for (const std::string& m : config.models) {
            const ModelSpec spec = parse_model(m);
            for (std::uint64_t s : config.seeds) {
                ++total;
                const std::string run_id =
                    "f" + std::to_string(f) + "-" + spec.name + "-s" + std::to_string(s);
                if (!done.count(run_id)) planned.push_back({spec, f, s});
            }
        }
    }
    log << "planned " << total << " runs (" << done.size() << " already recorded, "
        << planned.size() << " to execute)\n";

    std::ofstream out(records_path, std::ios::app);
    if (!out) throw IoError("run_suite: cannot open " + records_path.string() + " for append");

    std::vector<RunRecord> produced(planned.size());
    std::mutex write_mutex;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= planned.size()) return;
            const Planned& p = planned[i];
            RunRecord record = run_one(p.model, p.function_id, config.n_samples, p.seed,
                                       config.train, config.ga);
            nlohmann::json j;
            to_json(j, record);
            {
                std::lock_guard<std::mutex> lock(write_mutex);
                out << j.dump() << "\n";
                out.flush();
                log << record.run_id << " full_r2=" << record.full_metrics.r2 << "\n";
            }
            produced[i] = std::move(record);
        }
    };
    const int jobs = std::max(1, config.jobs);
    if (jobs == 1 || planned.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }
    return produced;
}

ReportKind parse_report_kind(const std::string& name) {
    if (name == "table") return ReportKind::Table;
    if (name == "layers_curve") return ReportKind::LayersCurve;
    if (name == "violin_data") return ReportKind::ViolinData;
    throw ConfigError("report kind '" + name + "': expected table, layers_curve or violin_data");
}

namespace {

struct Stats {
    double mean = 0.0;
    double stddev = 0.0;
};

Stats stats_of(const std::vector<double>& v) {
    Stats s;
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(var / static_cast<double>(v.size()));
    return s;
}

// R^2 below the table sentinel threshold prints as inf, matching the
// convention used for wildly diverged models
std::string format_r2(double mean) {
    if (mean < -100.0) return "inf";
    std::ostringstream ss;
    ss.precision(6);
    ss << mean;
    return ss.str();
}

std::string format_num(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

void write_svg_chart(const std::filesystem::path& path, const std::string& title,
                     const std::vector<std::string>& series_names,
                     const std::vector<std::vector<double>>& xs,
                     const std::vector<std::vector<double>>& ys) {
    const int width = 640, height = 420, margin = 56;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (std::size_t s = 0; s < xs.size(); ++s) {
        for (double v : xs[s]) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : ys[s]) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (xmin >= xmax) xmax = xmin + 1.0;
    if (ymin >= ymax) ymax = ymin + 1.0;
    auto px = [&](double x) {
        return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin);
    };
    auto py = [&](double y) {
        return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
    };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    std::ofstream out(path);
    if (!out) throw IoError("write_svg_chart: cannot open " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double xv = xmin + (xmax - xmin) * tick / 4.0;
        const double yv = ymin + (ymax - ymin) * tick / 4.0;
        out << "<text x=\"" << px(xv) << "\" y=\"" << height - margin + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << format_num(xv) << "</text>\n";
        out << "<text x=\"" << margin - 6 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << format_num(yv) << "</text>\n";
    }
    for (std::size_t s = 0; s < xs.size(); ++s) {
        out << "<polyline fill=\"none\" stroke=\"" << colors[s % 5] << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < xs[s].size(); ++i)
            out << px(xs[s][i]) << "," << py(ys[s][i]) << " ";
        out << "\"/>\n";
        out << "<text x=\"" << width - margin + 4 << "\" y=\"" << margin + 16 * static_cast<int>(s)
            << "\" font-size=\"11\" fill=\"" << colors[s % 5] << "\">" << series_names[s]
            << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace

std::vector<std::filesystem::path> emit_report(const std::filesystem::path& records_path,
                                               ReportKind kind,
                                               const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;

    if (kind == ReportKind::ViolinData) {
        // records here are subset-search results (subset,k,accuracy,baseline)
        std::ifstream in(records_path);
        if (!in) throw IoError("emit_report: cannot open " + records_path.string());
        std::string line;
        std::getline(in, line);
        std::map<int, std::vector<double>> by_size;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string subset, k_str, acc_str;
            std::getline(ss, subset, ',');
            std::getline(ss, k_str, ',');
            std::getline(ss, acc_str, ',');
            by_size[std::stoi(k_str)].push_back(std::stod(acc_str));
        }
        if (by_size.empty()) throw EmptyReportError("emit_report: no subset results");
        const std::filesystem::path path = out_dir / "violin_data.csv";
        std::ofstream out(path);
        out << "k,count,min,q25,median,q75,max,mean\n";
        for (auto& [k, accs] : by_size) {
            std::sort(accs.begin(), accs.end());
            auto quantile = [&](double q) {
                const double pos = q * static_cast<double>(accs.size() - 1);
                const std::size_t lo = static_cast<std::size_t>(pos);
                const std::size_t hi = std::min(lo + 1, accs.size() - 1);
                return accs[lo] + (pos - static_cast<double>(lo)) * (accs[hi] - accs[lo]);
            };
            const Stats s = stats_of(accs);
            out << k << "," << accs.size() << "," << accs.front() << "," << quantile(0.25) << ","
                << quantile(0.5) << "," << quantile(0.75) << "," << accs.back() << "," << s.mean
                << "\n";
        }
        written.push_back(path);
        return written;
    }

    const std::vector<RunRecord> records = read_records(records_path);
    if (records.empty()) throw EmptyReportError("emit_report: no records in " + records_path.string());

    // aggregate by (function, model)
    struct Agg {
        std::vector<double> r2, rmse, params;
    };
    std::map<int, std::map<std::string, Agg>> table;
    for (const RunRecord& r : records) {
        Agg& a = table[r.function_id][r.model];
        a.r2.push_back(r.full_metrics.r2);
        a.rmse.push_back(r.full_metrics.rmse);
        a.params.push_back(r.param_count);
    }

    if (kind == ReportKind::Table) {
        for (const auto& [fid, models] : table) {
            const std::filesystem::path path =
                out_dir / ("function_" + std::to_string(fid) + "_table.csv");
            std::ofstream out(path);
            out << "model,r2_mean,r2_std,rmse_mean,rmse_std,params_mean,params_std,runs\n";
            std::vector<std::pair<std::string, const Agg*>> rows;
            for (const auto& [model, agg] : models) rows.emplace_back(model, &agg);
            std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
                return stats_of(a.second->r2).mean > stats_of(b.second->r2).mean;
            });
            for (const auto& [model, agg] : rows) {
                const Stats r2 = stats_of(agg->r2);
                const Stats rm = stats_of(agg->rmse);
                const Stats pc = stats_of(agg->params);
                out << model << "," << format_r2(r2.mean) << "," << format_num(r2.stddev) << ","
                    << format_num(rm.mean) << "," << format_num(rm.stddev) << ","
                    << format_num(pc.mean) << "," << format_num(pc.stddev) << "," << agg->r2.size()
                    << "\n";
            }
            written.push_back(path);
        }
        return written;
    }

    // layers_curve: depth sweep per ansatz family
    const std::filesystem::path csv_path = out_dir / "layers_curve.csv";
    std::ofstream csv(csv_path);
    csv << "function_id,family,layers,r2_mean,r2_std\n";
    for (const auto& [fid, models] : table) {
        std::map<std::string, std::vector<std::pair<int, Stats>>> curves;
        for (const auto& [model, agg] : models) {
            const std::size_t dash = model.rfind('-');
            if (dash == std::string::npos || model.rfind("RRQNN-", 0) == 0) continue;
            std::string family = model.substr(0, dash);
            int layers = 0;
            try {
                layers = std::stoi(model.substr(dash + 1));
                parse_family(family);
            } catch (...) {
                continue; // not an ansatz record
            }
            curves[family].emplace_back(layers, stats_of(agg.r2));
        }
        if (curves.empty()) continue;
        std::vector<std::string> names;
        std::vector<std::vector<double>> xs, ys;
        for (auto& [family, points] : curves) {
            std::sort(points.begin(), points.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            names.push_back(family);
            xs.emplace_back();
            ys.emplace_back();
            for (const auto& [layers, s] : points) {
                csv << fid << "," << family << "," << layers << "," << format_r2(s.mean) << ","
                    << format_num(s.stddev) << "\n";
                xs.back().push_back(layers);
                ys.back().push_back(s.mean);
            }
        }
        const std::filesystem::path svg_path =
            out_dir / ("layers_curve_f" + std::to_string(fid) + ".svg");
        write_svg_chart(svg_path, "R2 by depth, function " + std::to_string(fid), names, xs, ys);
        written.push_back(svg_path);
    }
    written.push_back(csv_path);
    return written;
}

namespace {

// mean full-data R^2 per model for one function
std::map<std::string, double> model_means(const std::vector<RunRecord>& records, int function_id) {
    std::map<std::string, std::vector<double>> by_model;
    for (const RunRecord& r : records)
        if (r.function_id == function_id) by_model[r.model].push_back(r.full_metrics.r2);
    std::map<std::string, double> means;
    for (const auto& [model, values] : by_model) {
        double m = 0.0;
        for (double v : values) m += v;
        means[model] = m / static_cast<double>(values.size());
    }
    return means;
}

bool is_quantum_model(const std::string& name) {
    if (name.rfind("RRQNN-", 0) == 0) return true;
    const std::size_t dash = name.rfind('-');
    if (dash == std::string::npos) return false;
    try {
        parse_family(name.substr(0, dash));
        return true;
    } catch (...) {
        return false;
    }
}

// best model among those passing `filter`; ties toward the smaller name
template <typename Filter>
std::string winner(const std::map<std::string, double>& means, Filter filter) {
    std::string best;
    double best_r2 = -std::numeric_limits<double>::infinity();
    for (const auto& [model, r2] : means) {
        if (!filter(model)) continue;
        if (r2 > best_r2 || (r2 == best_r2 && model < best)) {
            best_r2 = r2;
            best = model;
        }
    }
    return best;
}

} // namespace

std::map<int, std::string> scenario_labels(const std::vector<RunRecord>& records, int scenario) {
    if (scenario < 1 || scenario > 5)
        throw std::invalid_argument("scenario_labels: scenario must be in 1..5");
    std::set<int> functions;
    for (const RunRecord& r : records) functions.insert(r.function_id);

    std::map<int, std::string> labels;
    for (int fid : functions) {
        const auto means = model_means(records, fid);
        std::string label;
        switch (scenario) {
        case 1: { // SEL vs STD family
            const std::string best = winner(means, [](const std::string& m) {
                return m.rfind("StronglyEntanglingLayers-", 0) == 0 ||
                       m.rfind("SimplifiedTwoDesign-", 0) == 0;
            });
            if (best.empty()) continue;
            label = best.substr(0, best.rfind('-'));
            break;
        }
        case 2: { // the four RRQNN configurations of the operator/qubit study
            static const std::set<std::string> pool = {"RRQNN-120-2q", "RRQNN-120-1q",
                                                       "RRQNN-20-2q", "RRQNN-40-1q"};
            label = winner(means, [&](const std::string& m) { return pool.count(m) > 0; });
            break;
        }
        case 3: { // one vs two qubits among RRQNNs
            const std::string best =
                winner(means, [](const std::string& m) { return m.rfind("RRQNN-", 0) == 0; });
            if (best.empty()) continue;
            label = best.substr(best.rfind('-') + 1);
            break;
        }
        case 4: // best (model, depth) pair among all quantum models
            label = winner(means, is_quantum_model);
            break;
        case 5: { // best family, depths collapsed; RRQNN configs stay distinct
            const std::string best = winner(means, is_quantum_model);
            if (best.empty()) continue;
            label = best.rfind("RRQNN-", 0) == 0 ? best : best.substr(0, best.rfind('-'));
            break;
        }
        }
        if (!label.empty()) labels[fid] = label;
    }
    return labels;
}

std::map<int, ComplexityProfile> read_profiles_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_profiles_csv: cannot open " + path.string());
    std::map<int, ComplexityProfile> profiles;
    std::string line;
    if (!std::getline(in, line)) throw IoError("read_profiles_csv: empty file");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::getline(ss, field, ',');
        const int id = std::stoi(field);
        std::array<double, 12> v{};
        for (double& x : v) {
            std::getline(ss, field, ',');
            x = std::stod(field);
        }
        ComplexityProfile p;
        p.c1 = v[0]; p.c2 = v[1]; p.c3 = v[2]; p.c4 = v[3];
        p.l1 = v[4]; p.l2 = v[5]; p.l3 = v[6];
        p.s1 = v[7]; p.s2 = v[8]; p.s3 = v[9]; p.s4 = v[10];
        p.t2 = v[11];
        profiles[id] = p;
    }
    return profiles;
}

MetaDataset build_meta_dataset(const std::map<int, ComplexityProfile>& profiles,
                               const std::map<int, std::string>& labels, int scenario) {
    MetaDataset meta;
    meta.scenario = scenario;
    for (const auto& [fid, profile] : profiles) {
        const auto it = labels.find(fid);
        if (it == labels.end()) continue;
        MetaRow row;
        row.function_id = fid;
        for (int i = 0; i < 12; ++i) row.features[static_cast<std::size_t>(i)] = profile.value(i);
        row.label = it->second;
        meta.rows.push_back(std::move(row));
    }
    return meta;
}

} // namespace qreg
