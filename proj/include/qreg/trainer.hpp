#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qreg/circuit.hpp"
#include "qreg/dataset.hpp"

namespace qreg {

struct Metrics {
    double r2 = 0.0;
    double rmse = 0.0;
};

struct TrainConfig {
    double learning_rate = 0.05;
    int epochs = 200;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double init_range = 3.14159265358979323846; // params start uniform in [-init_range, init_range]
    int measurement_wire = 0;
    std::uint64_t seed = 0;
};

struct TrainResult {
    std::vector<double> final_params; // best-loss parameters seen
    std::vector<double> loss_history; // one MSE value per epoch
    Metrics train_metrics;
    Metrics full_metrics;
};

// R^2 = 1 - SS_res / SS_tot; throws DegenerateTargetError when Var(y) = 0.
double r2_score(std::span<const double> y, std::span<const double> y_hat);

double rmse(std::span<const double> y, std::span<const double> y_hat);

// Full-batch Adam step, bias-corrected moments.
class AdamOptimizer {
  public:
    AdamOptimizer(double learning_rate, double beta1, double beta2, double eps);
    void step(std::vector<double>& params, std::span<const double> grad);

  private:
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
    std::vector<double> m_, v_;
};

// Circuit predictions for the given rows of a dataset (scaled features).
std::vector<double> predict_rows(const CircuitSpec& circuit, std::span<const double> params,
                                 const RegressionDataset& data, std::span<const int> rows,
                                 int wire);

// Metrics over all rows of the dataset.
Metrics evaluate(const CircuitSpec& circuit, std::span<const double> params,
                 const RegressionDataset& data, int wire);

// Full-batch Adam on MSE over the train split, exact adjoint gradients.
// Returns the best-loss iterate; metrics on the train split and on all rows.
TrainResult train(const CircuitSpec& circuit, const RegressionDataset& data,
                  const TrainConfig& config);

} // namespace qreg
