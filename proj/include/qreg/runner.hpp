#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qreg/ansatz.hpp"
#include "qreg/ga.hpp"
#include "qreg/metalearn.hpp"
#include "qreg/trainer.hpp"

namespace qreg {

// One persisted experiment run; serialized as a single JSON line.
struct RunRecord {
    std::string run_id;
    std::string command;
    nlohmann::json config_snapshot;
    int function_id = 0;
    std::string model;
    std::uint64_t seed = 0;
    Metrics train_metrics;
    Metrics full_metrics;
    double param_count = 0.0;
    double wall_time_seconds = 0.0;
};

void to_json(nlohmann::json& j, const RunRecord& r);
void from_json(const nlohmann::json& j, RunRecord& r);

// Parsed model descriptor, e.g. "SEL-10", "RRQNN-25-1q", "knn3", "DT", "OLS".
struct ModelSpec {
    enum class Kind { Ansatz, Rrqnn, Knn, Tree, Ols };
    Kind kind = Kind::Ansatz;
    AnsatzSpec ansatz;  // Kind::Ansatz
    int n_gates = 0;    // Kind::Rrqnn
    int n_qubits = 1;   // Kind::Rrqnn
    int k = 0;          // Kind::Knn
    std::string name;   // canonical descriptor
};

ModelSpec parse_model(const std::string& descriptor);

struct SuiteConfig {
    std::vector<int> functions; // 1..22 benchmark ids, 101..104 for the 1D set
    std::vector<std::string> models;
    std::vector<std::uint64_t> seeds;
    int n_samples = 900;
    TrainConfig train;
    GAConfig ga;
    int jobs = 1;
};

SuiteConfig parse_suite_config(const nlohmann::json& j);   // throws ConfigError with field path
SuiteConfig load_suite_config(const std::filesystem::path& path);

// Trains one model on one seeded dataset and fills a record.
RunRecord run_one(const ModelSpec& model, int function_id, int n_samples, std::uint64_t seed,
                  const TrainConfig& train_config, const GAConfig& ga_config);

std::vector<RunRecord> read_records(const std::filesystem::path& path);

// Executes the functions x models x seeds grid, appending one JSON line per
// run; run_ids already present in the record file are skipped.
std::vector<RunRecord> run_suite(const SuiteConfig& config,
                                 const std::filesystem::path& records_path, std::ostream& log);

enum class ReportKind { Table, LayersCurve, ViolinData };
ReportKind parse_report_kind(const std::string& name);

// table: per-function mean/std CSVs; layers_curve: depth sweep CSV + SVG per
// function; violin_data: per-subset-size accuracy distribution from a subset
// search results CSV.
std::vector<std::filesystem::path> emit_report(const std::filesystem::path& records_path,
                                               ReportKind kind,
                                               const std::filesystem::path& out_dir);

// Winner labels per function for the five meta-learning scenarios.
std::map<int, std::string> scenario_labels(const std::vector<RunRecord>& records, int scenario);

// Reads the CSV written by the `complexity` subcommand (id,c1..t2).
std::map<int, ComplexityProfile> read_profiles_csv(const std::filesystem::path& path);

MetaDataset build_meta_dataset(const std::map<int, ComplexityProfile>& profiles,
                               const std::map<int, std::string>& labels, int scenario);

} // namespace qreg
