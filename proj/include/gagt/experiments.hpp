#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gagt/ga.hpp"
#include "gagt/knapsack_io.hpp"

namespace gagt {

// A batch description: per-game replica arms plus a standard-GA control arm.
struct ExperimentPlan {
    std::string instance_path;            // resolved by the caller
    std::size_t instance_index = 0;
    std::vector<GameModel> games;
    std::size_t replicas_per_game = 1;
    std::size_t control_replicas = 1;
    GaConfig base;
    std::vector<double> tau_values;       // used by tau_sweep

    void validate() const {
        if (replicas_per_game < 1) throw std::invalid_argument("replicas per game must be at least 1");
        if (control_replicas < 1) throw std::invalid_argument("control replicas must be at least 1");
        base.validate();
    }
};

// Per-replica record: incumbent best plus final-population feasibility
// accounting (count, mean and max of honest values).
struct RunSummary {
    std::string label;
    std::size_t replica_index = 0;
    std::uint64_t seed = 0;
    std::optional<double> best_feasible_value;
    std::size_t feasible_count = 0;
    std::optional<double> mean_feasible_fitness;
    std::optional<double> max_feasible_fitness;
    double final_cheater_fraction = 0.0;
};

inline RunSummary summarize_run(std::string label, std::size_t replica_index, const RunResult& result,
                                std::uint64_t seed) {
    RunSummary summary;
    summary.label = std::move(label);
    summary.replica_index = replica_index;
    summary.seed = seed;
    summary.best_feasible_value = result.best_feasible_value;
    summary.feasible_count = result.final_summary.feasible_count;
    summary.mean_feasible_fitness = result.final_summary.mean_feasible_value;
    summary.max_feasible_fitness = result.final_summary.max_feasible_value;
    summary.final_cheater_fraction = result.final_summary.cheater_fraction;
    return summary;
}

namespace detail {

// Runs fn(0..count-1) on up to `workers` threads. Slot-indexed output keeps
// collection order-stable, so parallel and sequential execution produce
// identical files.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned thread_count = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    pool.reserve(thread_count);
    for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
    if (failure) std::rethrow_exception(failure);
}

struct ReplicaTask {
    std::string label;
    std::size_t replica_index;
    GaConfig config;
};

inline std::vector<RunSummary> execute(const std::vector<ReplicaTask>& tasks, const KnapsackInstance& instance,
                                       unsigned workers) {
    std::vector<RunSummary> summaries(tasks.size());
    parallel_for(tasks.size(), workers, [&](std::size_t i) {
        const ReplicaTask& task = tasks[i];
        summaries[i] = summarize_run(task.label, task.replica_index, run(task.config, instance), task.config.seed);
    });
    return summaries;
}

} // namespace detail

// Replica seeds are base seed + replica index, restarted per arm, so every
// summary is reproducible from the plan and its replica index alone and the
// arms share common random numbers.
inline std::vector<RunSummary> run_batch(const ExperimentPlan& plan, const KnapsackInstance& instance,
                                         unsigned workers = 1) {
    plan.validate();
    std::vector<detail::ReplicaTask> tasks;
    tasks.reserve(plan.games.size() * plan.replicas_per_game + plan.control_replicas);
    for (GameModel game : plan.games) {
        for (std::size_t r = 0; r < plan.replicas_per_game; ++r) {
            GaConfig config = plan.base;
            config.game = game;
            config.seed = plan.base.seed + r;
            tasks.push_back({std::string(game_name(game)), r, config});
        }
    }
    for (std::size_t r = 0; r < plan.control_replicas; ++r) {
        GaConfig config = plan.base;
        config.game = std::nullopt;
        config.noise = NoiseKind::Off;
        config.seed = plan.base.seed + r;
        tasks.push_back({"control", r, config});
    }
    return detail::execute(tasks, instance, workers);
}

// Identical to the game arms of run_batch, but with every payoff replaced by
// a draw from the matrix-anchored noise distribution.
inline std::vector<RunSummary> noise_control(const ExperimentPlan& plan, const KnapsackInstance& instance,
                                             NoiseKind kind, unsigned workers = 1) {
    if (kind == NoiseKind::Off) throw std::invalid_argument("noise control needs a noise kind (uniform or gaussian)");
    plan.validate();
    std::vector<detail::ReplicaTask> tasks;
    std::vector<GameModel> games = plan.games;
    if (games.empty()) games.push_back(plan.base.game.value_or(GameModel::PD));
    for (GameModel game : games) {
        for (std::size_t r = 0; r < plan.replicas_per_game; ++r) {
            GaConfig config = plan.base;
            config.game = game;
            config.noise = kind;
            config.seed = plan.base.seed + r;
            tasks.push_back({std::string(game_name(game)) + "-" + std::string(noise_name(kind)), r, config});
        }
    }
    return detail::execute(tasks, instance, workers);
}

// Aggregates over the replicas of one cheating degree. Means of the optional
// fields are taken over the replicas where they exist.
struct TauSweepRow {
    double tau = 0.0;
    std::size_t replicas = 0;
    double mean_feasible_count = 0.0;
    std::optional<double> mean_feasible_fitness;
    std::optional<double> mean_max_feasible_fitness;
};

inline std::vector<TauSweepRow> tau_sweep(const ExperimentPlan& plan, const KnapsackInstance& instance,
                                          std::vector<double> tau_values, unsigned workers = 1) {
    if (tau_values.empty()) throw std::invalid_argument("tau sweep needs at least one tau value");
    for (double tau : tau_values)
        if (!(tau >= 0.0 && tau <= 100.0))
            throw std::invalid_argument("tau values must lie in [0, 100]");
    plan.validate();
    std::sort(tau_values.begin(), tau_values.end());

    const GameModel game = !plan.games.empty() ? plan.games.front() : plan.base.game.value_or(GameModel::PD);
    std::vector<detail::ReplicaTask> tasks;
    tasks.reserve(tau_values.size() * plan.replicas_per_game);
    for (double tau : tau_values) {
        for (std::size_t r = 0; r < plan.replicas_per_game; ++r) {
            GaConfig config = plan.base;
            config.game = game;
            config.tau = tau;
            config.seed = plan.base.seed + r;
            tasks.push_back({std::string(game_name(game)), r, config});
        }
    }
    const std::vector<RunSummary> summaries = detail::execute(tasks, instance, workers);

    std::vector<TauSweepRow> rows;
    rows.reserve(tau_values.size());
    for (std::size_t t = 0; t < tau_values.size(); ++t) {
        TauSweepRow row;
        row.tau = tau_values[t];
        row.replicas = plan.replicas_per_game;
        double count_sum = 0.0, mean_sum = 0.0, max_sum = 0.0;
        std::size_t mean_n = 0, max_n = 0;
        for (std::size_t r = 0; r < plan.replicas_per_game; ++r) {
            const RunSummary& s = summaries[t * plan.replicas_per_game + r];
            count_sum += static_cast<double>(s.feasible_count);
            if (s.mean_feasible_fitness) {
                mean_sum += *s.mean_feasible_fitness;
                ++mean_n;
            }
            if (s.max_feasible_fitness) {
                max_sum += *s.max_feasible_fitness;
                ++max_n;
            }
        }
        row.mean_feasible_count = count_sum / static_cast<double>(plan.replicas_per_game);
        if (mean_n > 0) row.mean_feasible_fitness = mean_sum / static_cast<double>(mean_n);
        if (max_n > 0) row.mean_max_feasible_fitness = max_sum / static_cast<double>(max_n);
        rows.push_back(row);
    }
    return rows;
}

// Plan files are JSON documents mirroring ExperimentPlan:
// {"instance": "...", "instance_index": 0, "games": ["pd", ...],
//  "replicas_per_game": 20, "control_replicas": 20, "tau_values": [...],
//  "config": {"pop": 100, "gens": 300, "alpha": 0.1, "pc": 0.75,
//             "pm": null, "tau": 50, "beta_ga": 0.8, "beta_gt": 0.2,
//             "game": "pd", "noise": "off", "cheat_mode": "proportional",
//             "seed": 1}}
// Every key is optional; omitted keys keep their defaults.
inline ExperimentPlan parse_plan_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON plan: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("plan must be a JSON object");

    ExperimentPlan plan;
    auto get_number = [](const nlohmann::json& node, const char* key) {
        if (!node.is_number()) throw ParseError(std::string("plan key '") + key + "' must be a number");
        return node.get<double>();
    };
    auto get_count = [&](const nlohmann::json& node, const char* key) {
        double v = get_number(node, key);
        if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v)))
            throw ParseError(std::string("plan key '") + key + "' must be a non-negative integer");
        return static_cast<std::size_t>(v);
    };

    for (const auto& [key, value] : doc.items()) {
        if (key == "instance") {
            if (!value.is_string()) throw ParseError("plan key 'instance' must be a string");
            plan.instance_path = value.get<std::string>();
        } else if (key == "instance_index") {
            plan.instance_index = get_count(value, "instance_index");
        } else if (key == "games") {
            if (!value.is_array()) throw ParseError("plan key 'games' must be an array of game names");
            for (const auto& item : value) {
                if (!item.is_string()) throw ParseError("plan key 'games' must contain game names");
                auto game = parse_game(item.get<std::string>());
                if (!game) throw ParseError("unknown game model '" + item.get<std::string>() + "' in plan");
                plan.games.push_back(*game);
            }
        } else if (key == "replicas_per_game") {
            plan.replicas_per_game = get_count(value, "replicas_per_game");
        } else if (key == "control_replicas") {
            plan.control_replicas = get_count(value, "control_replicas");
        } else if (key == "tau_values") {
            if (!value.is_array()) throw ParseError("plan key 'tau_values' must be an array of numbers");
            for (const auto& item : value) plan.tau_values.push_back(get_number(item, "tau_values"));
        } else if (key == "config") {
            if (!value.is_object()) throw ParseError("plan key 'config' must be an object");
            for (const auto& [ckey, cvalue] : value.items()) {
                if (ckey == "pop") plan.base.population_size = get_count(cvalue, "pop");
                else if (ckey == "gens") plan.base.generations = get_count(cvalue, "gens");
                else if (ckey == "alpha") plan.base.cheater_rate = get_number(cvalue, "alpha");
                else if (ckey == "pc") plan.base.crossover_rate = get_number(cvalue, "pc");
                else if (ckey == "pm") {
                    if (!cvalue.is_null()) plan.base.mutation_rate = get_number(cvalue, "pm");
                } else if (ckey == "tau") plan.base.tau = get_number(cvalue, "tau");
                else if (ckey == "beta_ga") plan.base.beta_ga = get_number(cvalue, "beta_ga");
                else if (ckey == "beta_gt") plan.base.beta_gt = get_number(cvalue, "beta_gt");
                else if (ckey == "game") {
                    if (cvalue.is_null()) {
                        plan.base.game = std::nullopt;
                    } else {
                        if (!cvalue.is_string()) throw ParseError("config key 'game' must be a game name or null");
                        auto game = parse_game(cvalue.get<std::string>());
                        if (!game) throw ParseError("unknown game model '" + cvalue.get<std::string>() + "' in plan config");
                        plan.base.game = game;
                    }
                } else if (ckey == "game_params") {
                    if (!cvalue.is_array() || cvalue.size() != 4)
                        throw ParseError("config key 'game_params' must be an array [k, s1, s2, c]");
                    plan.base.game_params = GameParams{get_number(cvalue[0], "game_params"), get_number(cvalue[1], "game_params"),
                                                       get_number(cvalue[2], "game_params"), get_number(cvalue[3], "game_params")};
                } else if (ckey == "noise") {
                    if (!cvalue.is_string()) throw ParseError("config key 'noise' must be a string");
                    auto kind = parse_noise(cvalue.get<std::string>());
                    if (!kind) throw ParseError("unknown noise kind '" + cvalue.get<std::string>() + "' in plan config");
                    plan.base.noise = *kind;
                } else if (ckey == "cheat_mode") {
                    if (!cvalue.is_string()) throw ParseError("config key 'cheat_mode' must be a string");
                    const std::string mode = cvalue.get<std::string>();
                    if (mode == "proportional") plan.base.cheat_mode = CheatMode::Proportional;
                    else if (mode == "absolute") plan.base.cheat_mode = CheatMode::Absolute;
                    else throw ParseError("unknown cheat mode '" + mode + "' in plan config");
                } else if (ckey == "seed") {
                    plan.base.seed = static_cast<std::uint64_t>(get_count(cvalue, "seed"));
                } else {
                    throw ParseError("unknown plan config key '" + ckey + "'");
                }
            }
        } else {
            throw ParseError("unknown plan key '" + key + "'");
        }
    }
    return plan;
}

} // namespace gagt
