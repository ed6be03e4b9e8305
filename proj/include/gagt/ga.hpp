#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gagt/game.hpp"
#include "gagt/knapsack.hpp"
#include "gagt/rng.hpp"

namespace gagt {

enum class NoiseKind { Off, Uniform, Gaussian };

inline std::string_view noise_name(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::Off:      return "off";
        case NoiseKind::Uniform:  return "uniform";
        case NoiseKind::Gaussian: return "gaussian";
    }
    return "?";
}

inline std::optional<NoiseKind> parse_noise(std::string_view name) {
    if (name == "off") return NoiseKind::Off;
    if (name == "uniform") return NoiseKind::Uniform;
    if (name == "gaussian") return NoiseKind::Gaussian;
    return std::nullopt;
}

// Full configuration of one run. game == nullopt selects the control mode:
// a standard GA with an all-cooperator population and no social step
// (cheater_rate, tau and the beta weights are then ignored).
struct GaConfig {
    std::size_t population_size = 500;
    std::size_t generations = 1000;
    double cheater_rate = 0.1;                // fraction of cheaters at init
    double crossover_rate = 0.75;
    std::optional<double> mutation_rate;      // per bit; nullopt = 1/L
    double tau = 50.0;                        // cheating degree, percent
    double beta_ga = 0.8;                     // weight of the genetic term
    double beta_gt = 0.2;                     // weight of the social term
    std::optional<GameModel> game;            // nullopt = control mode
    std::optional<GameParams> game_params;    // override the model defaults
    NoiseKind noise = NoiseKind::Off;         // replace payoffs with noise
    CheatMode cheat_mode = CheatMode::Proportional;
    std::uint64_t seed = 1;

    bool control() const { return !game.has_value(); }

    void validate() const {
        if (population_size < 2)
            throw std::invalid_argument("population size must be at least 2; got " + std::to_string(population_size));
        if (population_size % 2 != 0)
            throw std::invalid_argument("population size must be even so that social pairing forms a perfect matching; got " +
                                        std::to_string(population_size));
        if (generations < 1) throw std::invalid_argument("generation count must be at least 1");
        if (!(cheater_rate >= 0.0 && cheater_rate <= 1.0))
            throw std::invalid_argument("cheater rate must lie in [0, 1]");
        if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
            throw std::invalid_argument("crossover rate must lie in [0, 1]");
        if (mutation_rate && !(*mutation_rate > 0.0 && *mutation_rate <= 1.0))
            throw std::invalid_argument("mutation rate must lie in (0, 1]");
        if (!(tau >= 0.0 && tau <= 100.0)) throw std::invalid_argument("cheating degree tau must lie in [0, 100]");
        if (!(beta_ga >= 0.0) || !(beta_gt >= 0.0))
            throw std::invalid_argument("beta weights must be non-negative");
        if (!(beta_ga + beta_gt > 0.0)) throw std::invalid_argument("beta weights must not both be zero");
        if (game_params) validate_params(*game_params);
    }

    PayoffMatrix matrix() const {
        return build_matrix(game_params ? *game_params : default_params(game.value_or(GameModel::PD)));
    }
};

struct Chromosome {
    Solution bits;
    Role role = Role::Cooperator;
    double genetic_term = 0.0;      // f(x) or g(x), by role
    double social_term = 0.0;       // payoff received this generation
    double combined_fitness = 0.0;  // what selection acts on
};

using Population = std::vector<Chromosome>;
using Pairing = std::vector<std::pair<std::size_t, std::size_t>>;

struct GenerationStats {
    std::size_t generation_index = 0;
    std::optional<double> best_feasible_value;   // best in the current population
    std::optional<double> incumbent_value;       // best feasible seen so far in the run
    double max_genetic_term = 0.0;               // raw generation maximum
    double cheater_fraction = 0.0;
    double mean_combined_fitness = 0.0;
};

// Feasibility accounting over the end-of-run population. Feasibility is
// always judged on true weights; the mean and max are taken over each
// feasible member's own genetic fitness, so cheaters contribute their
// inflated values, exactly as the algorithm scored them.
struct FinalPopulationSummary {
    std::size_t feasible_count = 0;
    std::optional<double> mean_feasible_value;
    std::optional<double> max_feasible_value;
    double cheater_fraction = 0.0;
};

struct RunResult {
    std::vector<GenerationStats> history;        // one entry per generation
    std::optional<Solution> best_solution;       // incumbent, feasible by true weights
    std::optional<double> best_feasible_value;   // its honest packed value
    FinalPopulationSummary final_summary;
    Population final_population;
};

// Uniform random bits; in game mode exactly round(cheater_rate * N) cheaters
// placed at uniformly random positions. Draw order: all bits chromosome by
// chromosome, then the cheater placement shuffle.
inline Population init_population(const GaConfig& config, const KnapsackInstance& instance, SplitMix64& rng) {
    const std::size_t n = config.population_size;
    const std::size_t length = instance.n_items();
    Population population(n);
    for (auto& chromosome : population) {
        chromosome.bits.resize(length);
        for (std::size_t j = 0; j < length; ++j) chromosome.bits[j] = static_cast<std::uint8_t>(rng.below(2));
    }
    if (!config.control()) {
        const auto cheaters = static_cast<std::size_t>(std::llround(config.cheater_rate * static_cast<double>(n)));
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        for (std::size_t i = 0; i < cheaters; ++i)
            std::swap(order[i], order[i + rng.below(n - i)]);
        for (std::size_t i = 0; i < cheaters; ++i) population[order[i]].role = Role::Cheater;
    }
    return population;
}

// Uniformly random perfect matching: shuffle 0..n-1, pair consecutive
// entries. Both members of a pair take their payoff from the same encounter.
inline Pairing social_pairing(std::size_t n, SplitMix64& rng) {
    if (n % 2 != 0) throw std::invalid_argument("social pairing needs an even population; got " + std::to_string(n));
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[rng.below(i)]);
    Pairing pairs;
    pairs.reserve(n / 2);
    for (std::size_t i = 0; i + 1 < n; i += 2) pairs.emplace_back(order[i], order[i + 1]);
    return pairs;
}

struct EvalStats {
    double max_genetic_term = 0.0;             // f_max, raw
    double normalizer = 1.0;                   // f_max adjusted per the rules below
    std::optional<double> best_feasible_value;
    std::optional<std::size_t> best_feasible_index;
    double cheater_fraction = 0.0;
    double mean_combined_fitness = 0.0;
};

// Fills genetic_term, social_term and combined_fitness for every chromosome.
//
// combined = beta_ga * genetic / normalizer + beta_gt * social / max_payoff.
// The normalizer is the generation maximum of the genetic terms; when that
// maximum is not positive (an all-infeasible population under the penalty
// fitness) the largest absolute genetic term is used instead, and 1 when
// even that is zero, so the term stays bounded and ordering is preserved.
//
// Control mode: social_term = 0 and combined = genetic term. Noise modes
// replace each payoff with a draw from the matrix-anchored distribution, in
// pairing order (first member, then second). rng is consumed only then.
inline EvalStats evaluate(Population& population, const KnapsackInstance& instance, const PayoffMatrix& matrix,
                          const GaConfig& config, const Pairing& pairing, SplitMix64& rng) {
    if (population.empty()) throw std::invalid_argument("cannot evaluate an empty population");
    const CheatConfig cheat{config.tau, config.cheat_mode};
    for (auto& chromosome : population)
        chromosome.genetic_term = chromosome.role == Role::Cheater
                                      ? cheater_fitness(instance, chromosome.bits, cheat)
                                      : cooperative_fitness(instance, chromosome.bits);

    EvalStats stats;
    double max_term = population.front().genetic_term;
    double max_abs = 0.0;
    for (const auto& chromosome : population) {
        max_term = std::max(max_term, chromosome.genetic_term);
        max_abs = std::max(max_abs, std::fabs(chromosome.genetic_term));
    }
    stats.max_genetic_term = max_term;
    stats.normalizer = max_term > 0.0 ? max_term : (max_abs > 0.0 ? max_abs : 1.0);

    if (config.control()) {
        for (auto& chromosome : population) {
            chromosome.social_term = 0.0;
            chromosome.combined_fitness = chromosome.genetic_term;
        }
    } else {
        switch (config.noise) {
            case NoiseKind::Off:
                for (const auto& [a, b] : pairing) {
                    population[a].social_term = payoff(matrix, population[a].role, population[b].role);
                    population[b].social_term = payoff(matrix, population[b].role, population[a].role);
                }
                break;
            case NoiseKind::Uniform: {
                const double lo = std::min(std::min(matrix.reward, matrix.sucker), std::min(matrix.temptation, matrix.punishment));
                const double hi = matrix.max_payoff;
                for (const auto& [a, b] : pairing) {
                    population[a].social_term = lo + (hi - lo) * rng.uniform01();
                    population[b].social_term = lo + (hi - lo) * rng.uniform01();
                }
                break;
            }
            case NoiseKind::Gaussian: {
                const double mean = (matrix.reward + matrix.sucker + matrix.temptation + matrix.punishment) / 4.0;
                const double var = ((matrix.reward - mean) * (matrix.reward - mean) +
                                    (matrix.sucker - mean) * (matrix.sucker - mean) +
                                    (matrix.temptation - mean) * (matrix.temptation - mean) +
                                    (matrix.punishment - mean) * (matrix.punishment - mean)) /
                                   4.0;
                const double sd = std::sqrt(var);
                for (const auto& [a, b] : pairing) {
                    population[a].social_term = mean + sd * rng.normal();
                    population[b].social_term = mean + sd * rng.normal();
                }
                break;
            }
        }
        for (auto& chromosome : population)
            chromosome.combined_fitness = config.beta_ga * chromosome.genetic_term / stats.normalizer +
                                          config.beta_gt * chromosome.social_term / matrix.max_payoff;
    }

    double combined_sum = 0.0;
    std::size_t cheaters = 0;
    for (std::size_t i = 0; i < population.size(); ++i) {
        const auto& chromosome = population[i];
        combined_sum += chromosome.combined_fitness;
        if (chromosome.role == Role::Cheater) ++cheaters;
        if (is_feasible(instance, chromosome.bits)) {
            const double value = packed_value(instance, chromosome.bits);
            if (!stats.best_feasible_value || value > *stats.best_feasible_value) {
                stats.best_feasible_value = value;
                stats.best_feasible_index = i;
            }
        }
    }
    stats.cheater_fraction = static_cast<double>(cheaters) / static_cast<double>(population.size());
    stats.mean_combined_fitness = combined_sum / static_cast<double>(population.size());
    return stats;
}

// Winner of a tournament between two already-drawn indices; ties are broken
// by a coin flip.
inline std::size_t tournament_winner(const Population& population, std::size_t i, std::size_t j, SplitMix64& rng) {
    const double fi = population[i].combined_fitness;
    const double fj = population[j].combined_fitness;
    if (fi > fj) return i;
    if (fj > fi) return j;
    return rng.below(2) ? j : i;
}

// Binary tournament: two uniform index draws with replacement.
inline std::size_t binary_tournament(const Population& population, SplitMix64& rng) {
    const std::size_t n = population.size();
    if (n == 0) throw std::invalid_argument("tournament over an empty population");
    const std::size_t i = rng.below(n);
    const std::size_t j = rng.below(n);
    return tournament_winner(population, i, j, rng);
}

// Deterministic two-point segment swap over [cut_lo, cut_hi). Offspring keep
// the role of the parent contributing their outer segments.
inline std::pair<Chromosome, Chromosome> two_point_crossover_at(const Chromosome& parent_a, const Chromosome& parent_b,
                                                                std::size_t cut_lo, std::size_t cut_hi) {
    if (parent_a.bits.size() != parent_b.bits.size())
        throw std::invalid_argument("crossover parents differ in length");
    Chromosome first{parent_a.bits, parent_a.role, 0.0, 0.0, 0.0};
    Chromosome second{parent_b.bits, parent_b.role, 0.0, 0.0, 0.0};
    for (std::size_t j = cut_lo; j < cut_hi; ++j) std::swap(first.bits[j], second.bits[j]);
    return {std::move(first), std::move(second)};
}

// With probability crossover_rate, swap a segment between cut points
// 0 <= u < v <= L chosen uniformly over valid pairs; otherwise copy the
// parents unchanged.
inline std::pair<Chromosome, Chromosome> two_point_crossover(const Chromosome& parent_a, const Chromosome& parent_b,
                                                             double crossover_rate, SplitMix64& rng) {
    if (parent_a.bits.size() != parent_b.bits.size())
        throw std::invalid_argument("crossover parents differ in length");
    if (rng.uniform01() < crossover_rate) {
        const std::uint64_t span = parent_a.bits.size() + 1;
        std::uint64_t u = rng.below(span);
        std::uint64_t v = rng.below(span);
        while (u == v) {
            u = rng.below(span);
            v = rng.below(span);
        }
        if (u > v) std::swap(u, v);
        return two_point_crossover_at(parent_a, parent_b, u, v);
    }
    return {Chromosome{parent_a.bits, parent_a.role, 0.0, 0.0, 0.0},
            Chromosome{parent_b.bits, parent_b.role, 0.0, 0.0, 0.0}};
}

// Independent per-bit flips; the role tag is never mutated.
inline void bit_mutation(Chromosome& chromosome, double mutation_rate, SplitMix64& rng) {
    for (auto& bit : chromosome.bits)
        if (rng.uniform01() < mutation_rate) bit ^= 1u;
}

// One full run: G cycles of social interaction, evaluation, selection,
// crossover and mutation, with generational replacement. The incumbent best
// feasible solution is tracked across every evaluated population and the
// final one; the population itself carries no elitism.
//
// Stochastic decisions consume the single seeded stream in a fixed order:
// initialization (bits, cheater placement), then per generation the pairing
// shuffle, noise draws if enabled, and per offspring pair two tournaments,
// the crossover coin and cuts, and the two mutation scans. This makes every
// result bit-reproducible from the seed.
inline RunResult run(const GaConfig& config, const KnapsackInstance& instance) {
    config.validate();
    validate_instance(instance);
    const std::size_t n = config.population_size;
    const std::size_t length = instance.n_items();
    const double mutation_rate = config.mutation_rate.value_or(1.0 / static_cast<double>(length));
    if (!(mutation_rate > 0.0 && mutation_rate <= 1.0))
        throw std::invalid_argument("mutation rate must lie in (0, 1]");

    PayoffMatrix matrix;
    if (!config.control()) {
        matrix = config.matrix();
        if (matrix.max_payoff == 0.0)
            throw std::invalid_argument("maximum payoff is zero; the social term cannot be normalized");
    }

    SplitMix64 rng(config.seed);
    Population population = init_population(config, instance, rng);

    RunResult result;
    result.history.reserve(config.generations);
    const CheatConfig cheat{config.tau, config.cheat_mode};

    auto consider_incumbent = [&](double value, const Solution& bits) {
        if (!result.best_feasible_value || value > *result.best_feasible_value) {
            result.best_feasible_value = value;
            result.best_solution = bits;
        }
    };

    for (std::size_t generation = 0; generation < config.generations; ++generation) {
        Pairing pairing;
        if (!config.control()) pairing = social_pairing(n, rng);
        const EvalStats stats = evaluate(population, instance, matrix, config, pairing, rng);
        if (stats.best_feasible_index)
            consider_incumbent(*stats.best_feasible_value, population[*stats.best_feasible_index].bits);

        result.history.push_back({generation, stats.best_feasible_value, result.best_feasible_value,
                                  stats.max_genetic_term, stats.cheater_fraction, stats.mean_combined_fitness});

        Population next;
        next.reserve(n);
        for (std::size_t pair_index = 0; pair_index < n / 2; ++pair_index) {
            const std::size_t first = binary_tournament(population, rng);
            const std::size_t second = binary_tournament(population, rng);
            auto [child_a, child_b] = two_point_crossover(population[first], population[second], config.crossover_rate, rng);
            bit_mutation(child_a, mutation_rate, rng);
            bit_mutation(child_b, mutation_rate, rng);
            next.push_back(std::move(child_a));
            next.push_back(std::move(child_b));
        }
        population = std::move(next);
    }

    // Final population: genetic terms only (no further social step), plus
    // the feasibility accounting the experiment summaries are built from.
    double feasible_sum = 0.0;
    std::size_t cheaters = 0;
    FinalPopulationSummary& summary = result.final_summary;
    for (auto& chromosome : population) {
        chromosome.genetic_term = chromosome.role == Role::Cheater ? cheater_fitness(instance, chromosome.bits, cheat)
                                                                   : cooperative_fitness(instance, chromosome.bits);
        chromosome.social_term = 0.0;
        chromosome.combined_fitness = chromosome.genetic_term;
        if (chromosome.role == Role::Cheater) ++cheaters;
        if (is_feasible(instance, chromosome.bits)) {
            ++summary.feasible_count;
            const double scored = chromosome.genetic_term; // inflated for cheaters
            feasible_sum += scored;
            if (!summary.max_feasible_value || scored > *summary.max_feasible_value) summary.max_feasible_value = scored;
            consider_incumbent(packed_value(instance, chromosome.bits), chromosome.bits);
        }
    }
    if (summary.feasible_count > 0)
        summary.mean_feasible_value = feasible_sum / static_cast<double>(summary.feasible_count);
    summary.cheater_fraction = static_cast<double>(cheaters) / static_cast<double>(population.size());
    result.final_population = std::move(population);
    return result;
}

} // namespace gagt
