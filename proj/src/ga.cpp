#include "qreg/ga.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace qreg {

Chromosome crossover_single_point(const Chromosome& p1, const Chromosome& p2, Rng& rng) {
    if (p1.genes.size() != p2.genes.size() || p1.n_gates != p2.n_gates ||
        p1.n_qubits != p2.n_qubits)
        throw std::invalid_argument("crossover_single_point: parents are incompatible");
    const std::size_t len = p1.genes.size();
    if (len < 2) throw std::invalid_argument("crossover_single_point: genome too short");
    const std::size_t cut = 1 + rng.uniform_below(len - 1);
    Chromosome child = p1;
    for (std::size_t i = cut; i < len; ++i) child.genes[i] = p2.genes[i];
    return child;
}

Chromosome mutate(const Chromosome& c, const GAConfig& config, Rng& rng) {
    if (rng.uniform01() >= config.mutation_individual_prob) return c;
    const int len = static_cast<int>(c.genes.size());
    const int count = std::min(
        len, static_cast<int>(std::ceil(config.mutation_genome_fraction * static_cast<double>(len))));
    if (count == 0) return c;

    // partial Fisher-Yates picks `count` distinct positions
    std::vector<int> positions(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) positions[static_cast<std::size_t>(i)] = i;
    Chromosome out = c;
    for (int i = 0; i < count; ++i) {
        const std::size_t j =
            static_cast<std::size_t>(i) + rng.uniform_below(static_cast<std::uint64_t>(len - i));
        std::swap(positions[static_cast<std::size_t>(i)], positions[j]);
        const int pos = positions[static_cast<std::size_t>(i)];
        out.genes[static_cast<std::size_t>(pos)] = static_cast<int>(
            rng.uniform_below(static_cast<std::uint64_t>(segment_alphabet_size(c, pos))));
    }
    return out;
}

namespace {

// Fitness is a pure function of the chromosome: the training seed is derived
// from (ga seed, genes), so repeated evaluations (elites, duplicates) agree
// and results do not depend on evaluation order or concurrency.
class FitnessCache {
  public:
    FitnessCache(const GAConfig& config, const RegressionDataset& dataset,
                 const TrainConfig& train_config)
        : config_(config), dataset_(dataset), train_config_(train_config) {}

    std::uint64_t train_seed(const Chromosome& c) const {
        return hash_span(config_.seed, c.genes);
    }

    double fitness(const Chromosome& c) {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find(c.genes);
            if (it != cache_.end()) return it->second;
        }
        TrainConfig fit_cfg = train_config_;
        fit_cfg.epochs = config_.fitness_epochs;
        fit_cfg.seed = train_seed(c);
        const TrainResult result = train(decode_chromosome(c), dataset_, fit_cfg);
        const double value = -result.train_metrics.r2; // Loss = -1 * R^2
        std::lock_guard<std::mutex> lock(mutex_);
        cache_.emplace(c.genes, value);
        return value;
    }

    void evaluate_all(const std::vector<Chromosome>& population, int jobs) {
        if (jobs <= 1 || population.size() <= 1) {
            for (const Chromosome& c : population) fitness(c);
            return;
        }
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= population.size()) return;
                fitness(population[i]);
            }
        };
        std::vector<std::thread> threads;
        const int n_threads = std::min<int>(jobs, static_cast<int>(population.size()));
        threads.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }

  private:
    const GAConfig& config_;
    const RegressionDataset& dataset_;
    const TrainConfig& train_config_;
    std::mutex mutex_;
    std::map<std::vector<int>, double> cache_;
};

} // namespace

GAResult run_ga(const GAConfig& config, const RegressionDataset& dataset,
                const TrainConfig& train_config) {
    if (config.population < 1) throw std::invalid_argument("run_ga: population must be >= 1");
    if (config.elites < 1 || config.elites >= config.population)
        throw std::invalid_argument("run_ga: need 1 <= elites < population");
    if (config.generations < 0) throw std::invalid_argument("run_ga: generations must be >= 0");
    if (config.mutation_genome_fraction < 0.0 || config.mutation_genome_fraction > 1.0 ||
        config.mutation_individual_prob < 0.0 || config.mutation_individual_prob > 1.0)
        throw std::invalid_argument("run_ga: mutation fractions must be in [0, 1]");

    FitnessCache cache(config, dataset, train_config);
    Rng rng(hash_combine(config.seed, 0x6a5ull));

    std::vector<Chromosome> population;
    population.reserve(static_cast<std::size_t>(config.population));
    for (int i = 0; i < config.population; ++i)
        population.push_back(random_chromosome(config.n_gates, config.n_qubits, rng));

    // sorted indices, ties broken toward the lexicographically smaller genome
    auto ranking = [&](const std::vector<Chromosome>& pop) {
        std::vector<int> order(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const double fa = cache.fitness(pop[static_cast<std::size_t>(a)]);
            const double fb = cache.fitness(pop[static_cast<std::size_t>(b)]);
            if (fa != fb) return fa < fb;
            return pop[static_cast<std::size_t>(a)].genes < pop[static_cast<std::size_t>(b)].genes;
        });
        return order;
    };

    cache.evaluate_all(population, config.jobs);
    std::vector<int> order = ranking(population);

    GAResult result;
    for (int gen = 0; gen < config.generations; ++gen) {
        std::vector<Chromosome> next;
        next.reserve(static_cast<std::size_t>(config.population));
        for (int e = 0; e < config.elites; ++e)
            next.push_back(population[static_cast<std::size_t>(order[static_cast<std::size_t>(e)])]);
        while (static_cast<int>(next.size()) < config.population) {
            const auto& p1 = next[rng.uniform_below(static_cast<std::uint64_t>(config.elites))];
            const auto& p2 = next[rng.uniform_below(static_cast<std::uint64_t>(config.elites))];
            next.push_back(mutate(crossover_single_point(p1, p2, rng), config, rng));
        }
        population = std::move(next);
        cache.evaluate_all(population, config.jobs);
        order = ranking(population);
        result.best_fitness_history.push_back(
            cache.fitness(population[static_cast<std::size_t>(order[0])]));
    }

    result.best_chromosome = population[static_cast<std::size_t>(order[0])];

    // retrain the winner with the full epoch budget, continuing from the same
    // seeded initialization its fitness run used
    TrainConfig final_cfg = train_config;
    final_cfg.seed = cache.train_seed(result.best_chromosome);
    const TrainResult final_run = train(decode_chromosome(result.best_chromosome), dataset,
                                        final_cfg);
    result.best_params = final_run.final_params;
    result.final_metrics = final_run.full_metrics;
    return result;
}

} // namespace qreg
