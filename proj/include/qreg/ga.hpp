#pragma once

#include <cstdint>
#include <vector>

#include "qreg/chromosome.hpp"
#include "qreg/trainer.hpp"

namespace qreg {

struct GAConfig {
    int population = 20;
    int generations = 15;
    int elites = 4;
    double mutation_genome_fraction = 0.10; // fraction of gene positions redrawn
    double mutation_individual_prob = 0.20; // chance an offspring mutates at all
    int n_gates = 20;
    int n_qubits = 1;
    int fitness_epochs = 100; // Adam steps per fitness evaluation
    std::uint64_t seed = 0;
    int jobs = 1; // worker threads for fitness evaluation
};

struct GAResult {
    Chromosome best_chromosome;
    std::vector<double> best_params;
    std::vector<double> best_fitness_history; // one entry per generation, non-increasing
    Metrics final_metrics;                    // over the full dataset, after retraining
};

// child = p1[0..k) ++ p2[k..end), cut point uniform in 1..len-1
Chromosome crossover_single_point(const Chromosome& p1, const Chromosome& p2, Rng& rng);

// With probability mutation_individual_prob, redraws ceil(fraction * len)
// distinct positions from their segment alphabets; otherwise returns c as-is.
Chromosome mutate(const Chromosome& c, const GAConfig& config, Rng& rng);

// Steady-state GA: elites survive, offspring come from elite parents via
// single-point crossover + mutation. Fitness = -R^2 of the decoded circuit
// trained for fitness_epochs on the train split. The best chromosome is
// retrained with the full train_config epoch budget before returning.
GAResult run_ga(const GAConfig& config, const RegressionDataset& dataset,
                const TrainConfig& train_config);

} // namespace qreg
