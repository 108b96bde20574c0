// qregress: circuit simulation, training, GA architecture search, dataset
// complexity profiling and meta-learning experiments from one binary.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qreg/ansatz.hpp"
#include "qreg/complexity.hpp"
#include "qreg/errors.hpp"
#include "qreg/ga.hpp"
#include "qreg/runner.hpp"

using namespace qreg;

namespace {

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> values;
    if (csv.empty()) return values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
    return values;
}

Chromosome load_chromosome(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open chromosome file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("chromosome file " + path + ": " + e.what());
    }
    return j.get<Chromosome>();
}

RegressionDataset dataset_from_flags(int function_id, int function_1d, int n, std::uint64_t seed) {
    if (function_id > 0 && function_1d > 0)
        throw ConfigError("--function and --function-1d are mutually exclusive");
    if (function_1d > 0) return generate_dataset_1d(function_1d, n, seed);
    if (function_id > 0) return generate_dataset(function_id, n, seed);
    throw ConfigError("one of --function or --function-1d is required");
}

nlohmann::json metrics_json(const Metrics& m) {
    return {{"r2", m.r2}, {"rmse", m.rmse}};
}

void write_or_print(const nlohmann::json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream file(out);
    if (!file) throw IoError("cannot open " + out);
    file << j.dump(2) << "\n";
}

int run_simulate(const std::string& model, const std::string& chromosome_path, int layers,
                 int qubits, const std::string& params_csv, const std::string& features_csv,
                 int wire, std::uint64_t seed) {
    CircuitSpec circuit;
    if (!chromosome_path.empty()) {
        circuit = decode_chromosome(load_chromosome(chromosome_path));
    } else if (!model.empty()) {
        AnsatzSpec spec{parse_family(model), layers, qubits};
        const std::vector<double> probe = parse_doubles(features_csv);
        circuit = build_ansatz(spec, probe.empty() ? 1 : static_cast<int>(probe.size()));
    } else {
        throw ConfigError("simulate needs --model or --chromosome");
    }

    std::vector<double> params = parse_doubles(params_csv);
    if (params.empty() && count_params(circuit) > 0) {
        Rng rng(seed);
        params.resize(static_cast<std::size_t>(count_params(circuit)));
        for (double& p : params) p = rng.uniform(-3.14159265358979323846, 3.14159265358979323846);
    }
    const std::vector<double> features = parse_doubles(features_csv);
    const double value = predict(circuit, params, features, wire);
    std::cout << "gates=" << circuit.gates.size() << " params=" << count_params(circuit)
              << " expectation_z=" << value << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum regression workbench"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string out;
    int jobs = 1;

    // --- simulate ---
    auto* simulate = app.add_subcommand("simulate", "run one circuit and print <Z>");
    std::string sim_model, sim_chromosome, sim_params, sim_features;
    int sim_layers = 1, sim_qubits = 1, sim_wire = 0;
    simulate->add_option("--model", sim_model, "ansatz family (SEL, BEL, STD)");
    simulate->add_option("--chromosome", sim_chromosome, "chromosome JSON file");
    simulate->add_option("--layers", sim_layers, "ansatz layers");
    simulate->add_option("--qubits", sim_qubits, "ansatz qubits");
    simulate->add_option("--params", sim_params, "comma-separated parameter angles");
    simulate->add_option("--features", sim_features, "comma-separated feature values");
    simulate->add_option("--wire", sim_wire, "measurement wire");
    simulate->add_option("--seed", seed, "seed for random parameters");

    // --- train ---
    auto* train_cmd = app.add_subcommand("train", "train one model on one benchmark");
    std::string train_model = "SEL-10", train_chromosome;
    int train_function = 0, train_function_1d = 0, train_n = 900;
    int train_epochs = -1;
    double train_lr = -1.0;
    train_cmd->add_option("--model", train_model, "model descriptor, e.g. SEL-10");
    train_cmd->add_option("--chromosome", train_chromosome, "chromosome JSON file");
    train_cmd->add_option("--function", train_function, "benchmark id 1..22");
    train_cmd->add_option("--function-1d", train_function_1d, "1D function id 1..4");
    train_cmd->add_option("--n", train_n, "sample count");
    train_cmd->add_option("--epochs", train_epochs, "training epochs");
    train_cmd->add_option("--lr", train_lr, "learning rate");
    train_cmd->add_option("--seed", seed, "run seed");
    train_cmd->add_option("--out", out, "write the result JSON here");

    // --- ga ---
    auto* ga_cmd = app.add_subcommand("ga", "evolve a circuit with the genetic algorithm");
    GAConfig ga_config;
    int ga_function = 0, ga_function_1d = 0, ga_n = 900;
    int ga_epochs = -1;
    ga_cmd->add_option("--function", ga_function, "benchmark id 1..22");
    ga_cmd->add_option("--function-1d", ga_function_1d, "1D function id 1..4");
    ga_cmd->add_option("--n", ga_n, "sample count");
    ga_cmd->add_option("--population", ga_config.population, "population size");
    ga_cmd->add_option("--generations", ga_config.generations, "generations");
    ga_cmd->add_option("--elites", ga_config.elites, "elites kept each generation");
    ga_cmd->add_option("--mutation-fraction", ga_config.mutation_genome_fraction,
                       "fraction of genes redrawn on mutation");
    ga_cmd->add_option("--mutation-prob", ga_config.mutation_individual_prob,
                       "per-offspring mutation probability");
    ga_cmd->add_option("--gates", ga_config.n_gates, "gate budget");
    ga_cmd->add_option("--qubits", ga_config.n_qubits, "qubit count");
    ga_cmd->add_option("--fitness-epochs", ga_config.fitness_epochs,
                       "Adam steps per fitness evaluation");
    ga_cmd->add_option("--epochs", ga_epochs, "final retraining epochs");
    ga_cmd->add_option("--seed", seed, "run seed");
    ga_cmd->add_option("--jobs", jobs, "fitness evaluation threads");
    ga_cmd->add_option("--out", out, "write the result JSON here");

    // --- bench ---
    auto* bench = app.add_subcommand("bench", "run a functions x models x seeds grid");
    std::string bench_config, bench_out = "records.jsonl";
    int bench_jobs = 0;
    std::uint64_t bench_seed = 0;
    bench->add_option("--config", bench_config, "suite config JSON")->required();
    bench->add_option("--out", bench_out, "record file (JSON lines, append)");
    bench->add_option("--jobs", bench_jobs, "worker threads (overrides config)");
    bench->add_option("--seed", bench_seed, "run a single seed instead of the config list");

    // --- complexity ---
    auto* complexity = app.add_subcommand("complexity", "profile benchmark datasets");
    std::vector<int> cx_functions;
    int cx_n = 900;
    std::string cx_out = "profiles.csv";
    complexity->add_option("--functions", cx_functions, "benchmark ids (default: all 22)");
    complexity->add_option("--n", cx_n, "sample count");
    complexity->add_option("--seed", seed, "dataset seed");
    complexity->add_option("--out", cx_out, "profiles CSV path");

    // --- meta ---
    auto* meta_cmd = app.add_subcommand("meta", "meta-learning subset search");
    std::string meta_csv, meta_records, meta_profiles, meta_out = "subset_results.csv", meta_save;
    int meta_scenario = 1, meta_kmin = 1, meta_kmax = 6, meta_trees = 100;
    meta_cmd->add_option("--meta", meta_csv, "meta-dataset CSV (function_id,c1..t2,label)");
    meta_cmd->add_option("--records", meta_records, "record file to derive labels from");
    meta_cmd->add_option("--profiles", meta_profiles, "profiles CSV from `complexity`");
    meta_cmd->add_option("--scenario", meta_scenario, "label scenario 1..5");
    meta_cmd->add_option("--kmin", meta_kmin, "smallest subset size");
    meta_cmd->add_option("--kmax", meta_kmax, "largest subset size");
    meta_cmd->add_option("--trees", meta_trees, "forest size");
    meta_cmd->add_option("--meta-out", meta_save, "write the built meta-dataset CSV here");
    meta_cmd->add_option("--seed", seed, "search seed");
    meta_cmd->add_option("--jobs", jobs, "subset evaluation threads");
    meta_cmd->add_option("--out", meta_out, "results CSV path");

    // --- report ---
    auto* report = app.add_subcommand("report", "emit tables and plots from records");
    std::string report_records, report_kind = "table", report_out = "reports";
    report->add_option("--records", report_records, "record file")->required();
    report->add_option("--kind", report_kind, "table, layers_curve or violin_data");
    report->add_option("--out", report_out, "output directory");
    report->add_option("--seed", seed, "accepted for interface uniformity; reports are pure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed())
            return run_simulate(sim_model, sim_chromosome, sim_layers, sim_qubits, sim_params,
                                sim_features, sim_wire, seed);

        if (train_cmd->parsed()) {
            const RegressionDataset data =
                dataset_from_flags(train_function, train_function_1d, train_n, seed);
            CircuitSpec circuit;
            std::string name;
            if (!train_chromosome.empty()) {
                circuit = decode_chromosome(load_chromosome(train_chromosome));
                name = "chromosome";
            } else {
                ModelSpec spec = parse_model(train_model);
                if (spec.kind != ModelSpec::Kind::Ansatz)
                    throw ConfigError("train expects an ansatz descriptor or --chromosome");
                circuit = build_ansatz(spec.ansatz, data.dim());
                name = spec.name;
            }
            TrainConfig config;
            config.seed = seed;
            if (train_epochs >= 0) config.epochs = train_epochs;
            if (train_lr > 0.0) config.learning_rate = train_lr;
            const TrainResult result = train(circuit, data, config);
            nlohmann::json j = {{"model", name},
                                {"params", result.final_params},
                                {"loss_history", result.loss_history},
                                {"train", metrics_json(result.train_metrics)},
                                {"full", metrics_json(result.full_metrics)}};
            write_or_print(j, out);
            std::cout << name << " train_r2=" << result.train_metrics.r2
                      << " full_r2=" << result.full_metrics.r2 << "\n";
            return 0;
        }

        if (ga_cmd->parsed()) {
            const RegressionDataset data = dataset_from_flags(ga_function, ga_function_1d, ga_n, seed);
            ga_config.seed = seed;
            ga_config.jobs = jobs;
            TrainConfig train_config;
            if (ga_epochs >= 0) train_config.epochs = ga_epochs;
            const GAResult result = run_ga(ga_config, data, train_config);
            nlohmann::json chrom;
            to_json(chrom, result.best_chromosome);
            nlohmann::json j = {{"best_chromosome", chrom},
                                {"best_params", result.best_params},
                                {"best_fitness_history", result.best_fitness_history},
                                {"metrics", metrics_json(result.final_metrics)}};
            write_or_print(j, out);
            std::cout << "best full_r2=" << result.final_metrics.r2
                      << " params=" << result.best_params.size() << "\n";
            return 0;
        }

        if (bench->parsed()) {
            SuiteConfig config = load_suite_config(bench_config);
            if (bench_jobs > 0) config.jobs = bench_jobs;
            if (bench->count("--seed") > 0) config.seeds = {bench_seed};
            const auto produced = run_suite(config, bench_out, std::cout);
            std::cout << "wrote " << produced.size() << " new records to " << bench_out << "\n";
            return 0;
        }

        if (complexity->parsed()) {
            if (cx_functions.empty())
                for (const BenchmarkInfo& info : benchmark_suite()) cx_functions.push_back(info.id);
            std::ofstream file(cx_out);
            if (!file) throw IoError("cannot open " + cx_out);
            file.precision(17);
            file << "id";
            for (const char* name : ComplexityProfile::feature_names()) file << "," << name;
            file << "\n";
            for (int id : cx_functions) {
                const RegressionDataset data = generate_dataset(id, cx_n, seed);
                const ComplexityProfile profile = compute_profile(data, seed);
                file << id;
                for (int i = 0; i < 12; ++i) file << "," << profile.value(i);
                file << "\n";
                std::cout << "function " << id << " profiled\n";
            }
            std::cout << "wrote " << cx_out << "\n";
            return 0;
        }

        if (meta_cmd->parsed()) {
            MetaDataset meta;
            if (!meta_csv.empty()) {
                meta = read_meta_csv(meta_csv);
                meta.scenario = meta_scenario;
            } else {
                if (meta_records.empty() || meta_profiles.empty())
                    throw ConfigError("meta needs --meta, or --records together with --profiles");
                const auto records = read_records(meta_records);
                if (records.empty()) throw ConfigError("no records in " + meta_records);
                const auto labels = scenario_labels(records, meta_scenario);
                const auto profiles = read_profiles_csv(meta_profiles);
                meta = build_meta_dataset(profiles, labels, meta_scenario);
            }
            if (meta.rows.empty()) throw ConfigError("meta-dataset is empty");
            if (!meta_save.empty()) write_meta_csv(meta, meta_save);

            std::vector<std::string> labels;
            for (const MetaRow& row : meta.rows) labels.push_back(row.label);
            const double baseline = majority_baseline(labels);
            ForestConfig forest{meta_trees, -1, 0};
            const auto results = subset_search(meta, meta_kmin, meta_kmax, forest, seed, jobs);
            write_results_csv(results, meta_out);
            std::cout << "rows=" << meta.rows.size() << " baseline=" << baseline
                      << " subsets=" << results.size() << "\n";
            if (!results.empty() && results.front().accuracy < baseline)
                std::cout << "note: no evaluated subset reached the majority baseline\n";
            for (std::size_t i = 0; i < results.size() && i < 5; ++i)
                std::cout << "  " << subset_to_string(results[i].subset)
                          << " accuracy=" << results[i].accuracy << "\n";
            std::cout << "wrote " << meta_out << "\n";
            return 0;
        }

        if (report->parsed()) {
            const auto files = emit_report(report_records, parse_report_kind(report_kind), report_out);
            for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
