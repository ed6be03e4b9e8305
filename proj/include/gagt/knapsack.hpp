#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gagt {

// 0/1 knapsack instance. The single-sack problem is the n_sacks() == 1 case.
// weights is stored row-major by sack: weights[m][j] is the weight of item j
// in sack m, matching the OR-library file layout.
struct KnapsackInstance {
    std::string name;
    std::vector<double> values;                // per item
    std::vector<std::vector<double>> weights;  // n_sacks rows of n_items
    std::vector<double> capacities;            // per sack
    std::optional<double> best_known;

    std::size_t n_items() const { return values.size(); }
    std::size_t n_sacks() const { return capacities.size(); }
};

// Bitstring solution; bits[j] == 1 packs item j.
using Solution = std::vector<std::uint8_t>;

inline void validate_instance(const KnapsackInstance& inst) {
    if (inst.values.empty()) throw std::invalid_argument("instance '" + inst.name + "': needs at least one item");
    if (inst.capacities.empty()) throw std::invalid_argument("instance '" + inst.name + "': needs at least one sack");
    if (inst.weights.size() != inst.capacities.size())
        throw std::invalid_argument("instance '" + inst.name + "': weight rows (" + std::to_string(inst.weights.size()) +
                                    ") do not match sack count (" + std::to_string(inst.capacities.size()) + ")");
    for (const auto& row : inst.weights)
        if (row.size() != inst.values.size())
            throw std::invalid_argument("instance '" + inst.name + "': weight row length (" + std::to_string(row.size()) +
                                        ") does not match item count (" + std::to_string(inst.values.size()) + ")");
    for (double v : inst.values)
        if (!(v >= 0.0)) throw std::invalid_argument("instance '" + inst.name + "': item values must be non-negative");
    for (const auto& row : inst.weights)
        for (double w : row)
            if (!(w >= 0.0)) throw std::invalid_argument("instance '" + inst.name + "': weights must be non-negative");
    for (double cap : inst.capacities)
        if (!(cap > 0.0)) throw std::invalid_argument("instance '" + inst.name + "': capacities must be positive");
}

namespace detail {

inline void check_solution_length(const KnapsackInstance& inst, const Solution& sol) {
    if (sol.size() != inst.n_items())
        throw std::invalid_argument("solution length " + std::to_string(sol.size()) +
                                    " does not match item count " + std::to_string(inst.n_items()));
}

inline double packed_weight(const std::vector<double>& row, const Solution& sol) {
    double total = 0.0;
    for (std::size_t j = 0; j < sol.size(); ++j)
        if (sol[j]) total += row[j];
    return total;
}

} // namespace detail

// True iff no sack is overfilled. Always judged on the true weights;
// cheating never changes feasibility.
inline bool is_feasible(const KnapsackInstance& inst, const Solution& sol) {
    detail::check_solution_length(inst, sol);
    for (std::size_t m = 0; m < inst.n_sacks(); ++m)
        if (detail::packed_weight(inst.weights[m], sol) > inst.capacities[m]) return false;
    return true;
}

inline double packed_value(const KnapsackInstance& inst, const Solution& sol) {
    detail::check_solution_length(inst, sol);
    double total = 0.0;
    for (std::size_t j = 0; j < sol.size(); ++j)
        if (sol[j]) total += inst.values[j];
    return total;
}

// Genetic fitness of an honest chromosome.
// Single sack: packed value if feasible, otherwise the non-positive penalty
// W - sum(w_j x_j). Multiple sacks: packed value if feasible, otherwise 0.
inline double cooperative_fitness(const KnapsackInstance& inst, const Solution& sol) {
    detail::check_solution_length(inst, sol);
    if (inst.n_sacks() == 1) {
        double load = detail::packed_weight(inst.weights[0], sol);
        if (load <= inst.capacities[0]) return packed_value(inst, sol);
        return inst.capacities[0] - load;
    }
    return is_feasible(inst, sol) ? packed_value(inst, sol) : 0.0;
}

// How a cheater's per-item deltas scale with the cheating degree tau.
// Proportional: dv_j = v_j * tau/100 and dw_j = w_j * tau/100.
// Absolute: dv_j = dw_j = tau/100 regardless of item magnitude.
enum class CheatMode { Proportional, Absolute };

inline std::string_view cheat_mode_name(CheatMode mode) {
    return mode == CheatMode::Proportional ? "proportional" : "absolute";
}

struct CheatConfig {
    double tau = 50.0; // cheating degree, percent in [0, 100]
    CheatMode mode = CheatMode::Proportional;
};

// Genetic fitness of a cheater chromosome: values inflated by dv_j, penalty
// weights deflated by dw_j. Feasibility is judged on the true weights, so
// cheating inflates the reported fitness without touching the genes.
// Single sack, infeasible: W - sum((w_j - dw_j) x_j).
// Multiple sacks, infeasible: same penalty shape applied to the most
// violated sack (ties broken by lowest sack index).
inline double cheater_fitness(const KnapsackInstance& inst, const Solution& sol, const CheatConfig& cheat) {
    detail::check_solution_length(inst, sol);
    const double factor = cheat.tau / 100.0;
    const bool proportional = cheat.mode == CheatMode::Proportional;

    auto inflated_value = [&]() {
        double total = 0.0;
        for (std::size_t j = 0; j < sol.size(); ++j)
            if (sol[j]) total += inst.values[j] + (proportional ? inst.values[j] * factor : factor);
        return total;
    };
    auto deflated_load = [&](std::size_t sack) {
        double total = 0.0;
        const auto& row = inst.weights[sack];
        for (std::size_t j = 0; j < sol.size(); ++j)
            if (sol[j]) total += row[j] - (proportional ? row[j] * factor : factor);
        return total;
    };

    if (inst.n_sacks() == 1) {
        double load = detail::packed_weight(inst.weights[0], sol);
        if (load <= inst.capacities[0]) return inflated_value();
        return inst.capacities[0] - deflated_load(0);
    }

    std::size_t worst_sack = 0;
    double worst_excess = -1.0;
    bool feasible = true;
    for (std::size_t m = 0; m < inst.n_sacks(); ++m) {
        double excess = detail::packed_weight(inst.weights[m], sol) - inst.capacities[m];
        if (excess > 0.0) feasible = false;
        if (excess > worst_excess) {
            worst_excess = excess;
            worst_sack = m;
        }
    }
    if (feasible) return inflated_value();
    return inst.capacities[worst_sack] - deflated_load(worst_sack);
}

} // namespace gagt
