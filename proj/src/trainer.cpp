#include "qreg/trainer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qreg/errors.hpp"
#include "qreg/rng.hpp"

namespace qreg {

double r2_score(std::span<const double> y, std::span<const double> y_hat) {
    if (y.size() != y_hat.size()) throw std::invalid_argument("r2_score: length mismatch");
    if (y.size() < 2) throw std::invalid_argument("r2_score: need at least 2 samples");
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - y_hat[i];
        const double t = y[i] - mean;
        ss_res += r * r;
        ss_tot += t * t;
    }
    if (ss_tot <= 0.0) throw DegenerateTargetError("r2_score: target has zero variance");
    return 1.0 - ss_res / ss_tot;
}

double rmse(std::span<const double> y, std::span<const double> y_hat) {
    if (y.size() != y_hat.size()) throw std::invalid_argument("rmse: length mismatch");
    if (y.empty()) throw std::invalid_argument("rmse: empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - y_hat[i];
        s += r * r;
    }
    return std::sqrt(s / static_cast<double>(y.size()));
}

AdamOptimizer::AdamOptimizer(double learning_rate, double beta1, double beta2, double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void AdamOptimizer::step(std::vector<double>& params, std::span<const double> grad) {
    if (m_.size() != params.size()) {
        m_.assign(params.size(), 0.0);
        v_.assign(params.size(), 0.0);
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
        const double m_hat = m_[i] / bc1;
        const double v_hat = v_[i] / bc2;
        params[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
    }
}

std::vector<double> predict_rows(const CircuitSpec& circuit, std::span<const double> params,
                                 const RegressionDataset& data, std::span<const int> rows,
                                 int wire) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (int r : rows) out.push_back(predict(circuit, params, data.x.row(r), wire));
    return out;
}

Metrics evaluate(const CircuitSpec& circuit, std::span<const double> params,
                 const RegressionDataset& data, int wire) {
    if (static_cast<int>(params.size()) != circuit.n_trainable)
        throw std::invalid_argument("evaluate: params length mismatch");
    std::vector<int> all(static_cast<std::size_t>(data.n()));
    for (int i = 0; i < data.n(); ++i) all[static_cast<std::size_t>(i)] = i;
    const std::vector<double> y_hat = predict_rows(circuit, params, data, all, wire);
    return {r2_score(data.y, y_hat), rmse(data.y, y_hat)};
}

namespace {

// MSE and its parameter gradient over the given rows.
double mse_and_grad(const CircuitSpec& circuit, const std::vector<double>& params,
                    const RegressionDataset& data, std::span<const int> rows, int wire,
                    std::vector<double>& grad) {
    grad.assign(params.size(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(rows.size());
    double loss = 0.0;
    std::vector<double> g;
    for (int r : rows) {
        const auto features = data.x.row(r);
        double pred;
        if (params.empty()) {
            pred = predict(circuit, params, features, wire);
        } else {
            pred = expectation_and_gradient(circuit, params, features, wire, g);
        }
        const double err = pred - data.y[static_cast<std::size_t>(r)];
        loss += err * err;
        for (std::size_t k = 0; k < g.size(); ++k) grad[k] += 2.0 * err * g[k] * inv_n;
    }
    return loss * inv_n;
}

std::vector<double> metrics_targets(const RegressionDataset& data, std::span<const int> rows) {
    std::vector<double> y;
    y.reserve(rows.size());
    for (int r : rows) y.push_back(data.y[static_cast<std::size_t>(r)]);
    return y;
}

} // namespace

TrainResult train(const CircuitSpec& circuit, const RegressionDataset& data,
                  const TrainConfig& config) {
    if (config.learning_rate <= 0.0) throw std::invalid_argument("train: learning_rate must be > 0");
    if (config.epochs < 0) throw std::invalid_argument("train: epochs must be >= 0");
    if (config.measurement_wire < 0 || config.measurement_wire >= circuit.n_qubits)
        throw std::invalid_argument("train: measurement wire out of range");

    Rng rng(hash_combine(config.seed, 0x7241u));
    std::vector<double> params(static_cast<std::size_t>(circuit.n_trainable));
    for (double& p : params) p = rng.uniform(-config.init_range, config.init_range);

    const std::span<const int> rows = data.train_idx;
    TrainResult result;

    if (config.epochs > 0 && !params.empty()) {
        AdamOptimizer adam(config.learning_rate, config.adam_beta1, config.adam_beta2,
                           config.adam_eps);
        std::vector<double> best = params;
        double best_loss = std::numeric_limits<double>::infinity();
        std::vector<double> grad;
        for (int epoch = 0; epoch < config.epochs; ++epoch) {
            const double loss = mse_and_grad(circuit, params, data, rows, config.measurement_wire,
                                             grad);
            result.loss_history.push_back(loss);
            if (loss < best_loss) {
                best_loss = loss;
                best = params;
            }
            adam.step(params, grad);
        }
        // the last step produced parameters whose loss was never measured
        const std::vector<double> y_hat =
            predict_rows(circuit, params, data, rows, config.measurement_wire);
        const std::vector<double> y = metrics_targets(data, rows);
        double final_loss = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double e = y_hat[i] - y[i];
            final_loss += e * e;
        }
        final_loss /= static_cast<double>(y.size());
        result.final_params = final_loss < best_loss ? params : best;
    } else {
        if (config.epochs > 0) {
            // no trainable parameters: loss is constant across epochs
            std::vector<double> grad;
            const double loss = mse_and_grad(circuit, params, data, rows, config.measurement_wire,
                                             grad);
            result.loss_history.assign(static_cast<std::size_t>(config.epochs), loss);
        }
        result.final_params = params;
    }

    const std::vector<double> y_train = metrics_targets(data, rows);
    const std::vector<double> y_hat_train =
        predict_rows(circuit, result.final_params, data, rows, config.measurement_wire);
    result.train_metrics = {r2_score(y_train, y_hat_train), rmse(y_train, y_hat_train)};
    result.full_metrics = evaluate(circuit, result.final_params, data, config.measurement_wire);
    return result;
}

} // namespace qreg
