// gagt: genetic algorithm with game-theoretic social interactions, evaluated
// on single and multidimensional 0/1 knapsack instances.
//
// Subcommands: run (single seeded run), batch (per-game replica arms plus a
// standard-GA control arm), sweep (cheating-degree sweep), noise
// (payoff-noise control arms), stats (regression / rank-sum test over result
// CSVs), validate (game ordering and instance file diagnostics).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gagt/experiments.hpp"
#include "gagt/format.hpp"
#include "gagt/ga.hpp"
#include "gagt/knapsack_io.hpp"
#include "gagt/report.hpp"
#include "gagt/stats.hpp"
#include "gagt/version.hpp"

namespace {

bool g_verbose = false;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutputOptions {
    std::string path;   // empty = stdout
    std::string format = "csv";
};

void add_output_options(CLI::App* cmd, OutputOptions& out) {
    cmd->add_option("--out", out.path, "write results to this file instead of standard output");
    cmd->add_option("--format", out.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

// Writes through a stringstream so a failed run never leaves a partial file.
void write_output(const OutputOptions& out, const std::string& text) {
    if (out.path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(out.path, std::ios::binary);
    if (!file) throw gagt::ParseError("cannot open output file '" + out.path + "'");
    file << text;
    if (!file) throw gagt::ParseError("failed to write output file '" + out.path + "'");
}

struct InstanceOptions {
    std::string path;
    std::size_t index = 0;
};

void add_instance_options(CLI::App* cmd, InstanceOptions& inst, bool required) {
    auto* opt = cmd->add_option("--instance", inst.path, "knapsack instance file (.json or OR-library mknap)");
    if (required) opt->required();
    cmd->add_option("--instance-index", inst.index, "problem index inside a multi-problem OR-library file")
        ->capture_default_str();
}

struct GaOptions {
    std::size_t pop = 0;
    std::size_t gens = 0;
    double alpha = 0.0;
    double pc = 0.0;
    double pm = 0.0;
    double tau = 0.0;
    double beta_ga = 0.0;
    double beta_gt = 0.0;
    std::string game;
    bool control = false;
    std::string noise;
    std::string cheat_mode;
    std::string game_params;
    std::uint64_t seed = 0;

    CLI::Option* pop_opt = nullptr;
    CLI::Option* gens_opt = nullptr;
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* pc_opt = nullptr;
    CLI::Option* pm_opt = nullptr;
    CLI::Option* tau_opt = nullptr;
    CLI::Option* beta_ga_opt = nullptr;
    CLI::Option* beta_gt_opt = nullptr;
    CLI::Option* game_opt = nullptr;
    CLI::Option* control_opt = nullptr;
    CLI::Option* noise_opt = nullptr;
    CLI::Option* cheat_mode_opt = nullptr;
    CLI::Option* game_params_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
};

void add_ga_options(CLI::App* cmd, GaOptions& ga, bool with_game_choice) {
    ga.pop_opt = cmd->add_option("--pop", ga.pop, "population size N (even, default 500)");
    ga.gens_opt = cmd->add_option("--gens", ga.gens, "generations G (default 1000)");
    ga.alpha_opt = cmd->add_option("--alpha", ga.alpha, "initial cheater rate in [0, 1] (default 0.1)");
    ga.pc_opt = cmd->add_option("--pc", ga.pc, "crossover rate (default 0.75)");
    ga.pm_opt = cmd->add_option("--pm", ga.pm, "mutation rate per bit (default 1/L)");
    ga.tau_opt = cmd->add_option("--tau", ga.tau, "cheating degree in [0, 100] (default 50)");
    ga.beta_ga_opt = cmd->add_option("--beta-ga", ga.beta_ga, "weight of the genetic term (default 0.8)");
    ga.beta_gt_opt = cmd->add_option("--beta-gt", ga.beta_gt, "weight of the social term (default 0.2)");
    if (with_game_choice) {
        ga.game_opt = cmd->add_option("--game", ga.game, "game model")
                          ->check(CLI::IsMember({"pd", "cg", "mp", "fof", "fd", "bs", "sh"}));
        ga.control_opt = cmd->add_flag("--control", ga.control, "standard GA control (no social step, all cooperators)");
        ga.game_opt->excludes(ga.control_opt);
        ga.control_opt->excludes(ga.game_opt);
        ga.noise_opt = cmd->add_option("--noise", ga.noise, "replace payoffs with noise (off|uniform|gaussian)")
                           ->check(CLI::IsMember({"off", "uniform", "gaussian"}));
    }
    ga.game_params_opt =
        cmd->add_option("--game-params", ga.game_params, "custom payoff parameters k,s1,s2,c (overrides the model defaults)");
    ga.cheat_mode_opt = cmd->add_option("--cheat-mode", ga.cheat_mode, "delta scaling for cheaters")
                            ->check(CLI::IsMember({"proportional", "absolute"}));
    ga.seed_opt = cmd->add_option("--seed", ga.seed, "base random seed (default: GAGT_SEED env var, else 1)");
}

gagt::GameParams parse_game_params_flag(const std::string& text) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string token = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        auto value = gagt::parse_double(token);
        if (!value) throw UsageError("--game-params: '" + token + "' is not a number");
        parts.push_back(*value);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (parts.size() != 4) throw UsageError("--game-params needs exactly four comma-separated decimals k,s1,s2,c");
    return {parts[0], parts[1], parts[2], parts[3]};
}

std::uint64_t seed_from_environment() {
    const char* env = std::getenv("GAGT_SEED");
    if (!env || *env == '\0') return 1;
    auto value = gagt::parse_double(env);
    if (!value || *value < 0 || *value != static_cast<double>(static_cast<std::uint64_t>(*value)))
        throw UsageError(std::string("GAGT_SEED must be a non-negative integer, got '") + env + "'");
    return static_cast<std::uint64_t>(*value);
}

// Folds the flags the user actually passed into a config (which may have
// come from a plan file). Seed precedence: explicit --seed, then the plan
// file's value when one was loaded, then GAGT_SEED, then 1.
void apply_ga_options(gagt::GaConfig& config, const GaOptions& ga, bool seed_from_plan = false) {
    if (ga.pop_opt->count()) config.population_size = ga.pop;
    if (ga.gens_opt->count()) config.generations = ga.gens;
    if (ga.alpha_opt->count()) config.cheater_rate = ga.alpha;
    if (ga.pc_opt->count()) config.crossover_rate = ga.pc;
    if (ga.pm_opt->count()) config.mutation_rate = ga.pm;
    if (ga.tau_opt->count()) config.tau = ga.tau;
    if (ga.beta_ga_opt->count()) config.beta_ga = ga.beta_ga;
    if (ga.beta_gt_opt->count()) config.beta_gt = ga.beta_gt;
    if (ga.game_opt && ga.game_opt->count()) config.game = gagt::parse_game(ga.game);
    if (ga.control_opt && ga.control_opt->count()) config.game = std::nullopt;
    if (ga.noise_opt && ga.noise_opt->count()) config.noise = *gagt::parse_noise(ga.noise);
    if (ga.cheat_mode_opt->count())
        config.cheat_mode = ga.cheat_mode == "absolute" ? gagt::CheatMode::Absolute : gagt::CheatMode::Proportional;
    if (ga.game_params_opt->count()) config.game_params = parse_game_params_flag(ga.game_params);
    if (ga.seed_opt->count()) {
        config.seed = ga.seed;
    } else if (!seed_from_plan) {
        config.seed = seed_from_environment();
    }
}

// Table-1 style orderings are diagnostics: report, never refuse to run.
void warn_if_ordering_violated(const gagt::GaConfig& config) {
    if (config.control()) return;
    const auto report = gagt::validate_ordering(*config.game, config.matrix());
    for (const auto& violation : report.violations)
        std::cerr << "warning: " << gagt::game_name(report.model) << " ordering: " << violation << "\n";
}

void add_config_manifest(gagt::Manifest& manifest, const gagt::GaConfig& config, const gagt::KnapsackInstance& instance) {
    manifest.add("instance_name", instance.name);
    manifest.add("items", instance.n_items());
    manifest.add("sacks", instance.n_sacks());
    if (instance.best_known) manifest.add("instance_best_known", *instance.best_known);
    manifest.add("pop", config.population_size);
    manifest.add("gens", config.generations);
    manifest.add("alpha", config.cheater_rate);
    manifest.add("pc", config.crossover_rate);
    manifest.add("pm", config.mutation_rate.value_or(1.0 / static_cast<double>(instance.n_items())));
    manifest.add("tau", config.tau);
    manifest.add("beta_ga", config.beta_ga);
    manifest.add("beta_gt", config.beta_gt);
    manifest.add("game", config.control() ? std::string("control") : std::string(gagt::game_name(*config.game)));
    if (config.game_params) {
        manifest.add("game_params", gagt::format_double(config.game_params->k) + "," + gagt::format_double(config.game_params->s1) +
                                        "," + gagt::format_double(config.game_params->s2) + "," +
                                        gagt::format_double(config.game_params->c));
    }
    manifest.add("noise", std::string(gagt::noise_name(config.noise)));
    manifest.add("cheat_mode", std::string(gagt::cheat_mode_name(config.cheat_mode)));
    manifest.add("seed", std::to_string(config.seed));
}

void echo_manifest(const gagt::Manifest& manifest) {
    if (!g_verbose) return;
    for (const auto& [key, value] : manifest.entries) std::cerr << key << " = " << value << "\n";
}

gagt::Manifest base_manifest(const std::string& command, const InstanceOptions& inst) {
    gagt::Manifest manifest;
    manifest.add("gagt_version", std::string(gagt::kVersion));
    manifest.add("command", command);
    manifest.add("instance", inst.path);
    manifest.add("instance_index", inst.index);
    return manifest;
}

// ---------------------------------------------------------------- run ----

struct RunCommand {
    InstanceOptions instance;
    GaOptions ga;
    OutputOptions output;
    std::string trace_path;
};

int execute_run(const RunCommand& cmd) {
    gagt::GaConfig config;
    config.game = gagt::GameModel::PD; // run defaults to the PD game; --control switches it off
    apply_ga_options(config, cmd.ga);
    config.validate();
    warn_if_ordering_violated(config);

    const gagt::KnapsackInstance instance = gagt::load_instance(cmd.instance.path, cmd.instance.index);
    const gagt::RunResult result = gagt::run(config, instance);
    const std::string label = config.control() ? "control" : std::string(gagt::game_name(*config.game));
    const std::vector<gagt::RunSummary> summaries = {gagt::summarize_run(label, 0, result, config.seed)};

    gagt::Manifest manifest = base_manifest("run", cmd.instance);
    add_config_manifest(manifest, config, instance);
    echo_manifest(manifest);

    std::ostringstream out;
    if (cmd.output.format == "json") {
        gagt::write_summaries_json(out, manifest, summaries);
    } else {
        gagt::write_summaries_csv(out, manifest, summaries);
    }
    write_output(cmd.output, out.str());

    if (!cmd.trace_path.empty()) {
        std::ostringstream trace;
        gagt::write_trace_csv(trace, manifest, result.history);
        OutputOptions trace_out;
        trace_out.path = cmd.trace_path;
        write_output(trace_out, trace.str());
    }
    return kExitOk;
}

// -------------------------------------------------------------- batch ----

struct BatchCommand {
    InstanceOptions instance;
    CLI::Option* instance_opt = nullptr;
    CLI::Option* index_opt = nullptr;
    GaOptions ga;
    OutputOptions output;
    std::string plan_path;
    std::vector<std::string> games;
    CLI::Option* games_opt = nullptr;
    std::size_t replicas = 0;
    CLI::Option* replicas_opt = nullptr;
    std::size_t controls = 0;
    CLI::Option* controls_opt = nullptr;
    unsigned workers = 1;
};

gagt::ExperimentPlan resolve_plan(const BatchCommand& cmd, bool game_from_flag) {
    gagt::ExperimentPlan plan;
    plan.replicas_per_game = 0; // sentinel: resolved below
    plan.control_replicas = 0;
    if (!cmd.plan_path.empty()) plan = gagt::parse_plan_json(gagt::read_file(cmd.plan_path));

    if (cmd.instance_opt->count()) plan.instance_path = cmd.instance.path;
    if (plan.instance_path.empty()) throw UsageError("no instance: pass --instance or set \"instance\" in the plan file");
    if (cmd.index_opt && cmd.index_opt->count()) plan.instance_index = cmd.instance.index;

    apply_ga_options(plan.base, cmd.ga, !cmd.plan_path.empty());

    if (cmd.games_opt && cmd.games_opt->count()) {
        plan.games.clear();
        for (const auto& name : cmd.games) {
            auto game = gagt::parse_game(name);
            if (!game) throw UsageError("--games: unknown game model '" + name + "'");
            plan.games.push_back(*game);
        }
    }
    if (game_from_flag && plan.games.empty()) plan.games.push_back(plan.base.game.value_or(gagt::GameModel::PD));

    if (cmd.replicas_opt->count()) plan.replicas_per_game = cmd.replicas;
    if (plan.replicas_per_game == 0) plan.replicas_per_game = 1;
    if (cmd.controls_opt && cmd.controls_opt->count()) plan.control_replicas = cmd.controls;
    if (plan.control_replicas == 0) plan.control_replicas = plan.replicas_per_game;
    return plan;
}

void add_plan_manifest(gagt::Manifest& manifest, const gagt::ExperimentPlan& plan) {
    std::string games;
    for (gagt::GameModel game : plan.games) {
        if (!games.empty()) games += ",";
        games += gagt::game_name(game);
    }
    manifest.add("games", games);
    manifest.add("replicas_per_game", plan.replicas_per_game);
    manifest.add("control_replicas", plan.control_replicas);
}

int execute_batch(const BatchCommand& cmd) {
    gagt::ExperimentPlan plan = resolve_plan(cmd, false);
    if (plan.games.empty())
        plan.games.assign(gagt::kAllGameModels.begin(), gagt::kAllGameModels.end());
    for (gagt::GameModel game : plan.games) {
        gagt::GaConfig probe = plan.base;
        probe.game = game;
        warn_if_ordering_violated(probe);
    }
    const gagt::KnapsackInstance instance = gagt::load_instance(plan.instance_path, plan.instance_index);

    InstanceOptions inst{plan.instance_path, plan.instance_index};
    gagt::Manifest manifest = base_manifest("batch", inst);
    gagt::GaConfig shown = plan.base;
    shown.game = plan.games.front();
    add_config_manifest(manifest, shown, instance);
    add_plan_manifest(manifest, plan);
    echo_manifest(manifest);

    const std::vector<gagt::RunSummary> summaries = gagt::run_batch(plan, instance, cmd.workers);
    std::ostringstream out;
    if (cmd.output.format == "json") {
        gagt::write_summaries_json(out, manifest, summaries);
    } else {
        gagt::write_summaries_csv(out, manifest, summaries);
    }
    write_output(cmd.output, out.str());
    return kExitOk;
}

// -------------------------------------------------------------- sweep ----

struct SweepCommand {
    BatchCommand batch;
    std::vector<double> tau_list;
    CLI::Option* tau_list_opt = nullptr;
};

int execute_sweep(const SweepCommand& cmd) {
    gagt::ExperimentPlan plan = resolve_plan(cmd.batch, true);
    std::vector<double> taus = cmd.tau_list_opt->count() ? cmd.tau_list : plan.tau_values;
    if (taus.empty()) throw UsageError("no cheating degrees: pass --tau-list or set \"tau_values\" in the plan file");
    warn_if_ordering_violated([&] {
        gagt::GaConfig probe = plan.base;
        probe.game = plan.games.front();
        return probe;
    }());
    const gagt::KnapsackInstance instance = gagt::load_instance(plan.instance_path, plan.instance_index);

    InstanceOptions inst{plan.instance_path, plan.instance_index};
    gagt::Manifest manifest = base_manifest("sweep", inst);
    gagt::GaConfig shown = plan.base;
    shown.game = plan.games.front();
    add_config_manifest(manifest, shown, instance);
    manifest.add("replicas_per_tau", plan.replicas_per_game);
    std::string tau_text;
    for (double tau : taus) {
        if (!tau_text.empty()) tau_text += ",";
        tau_text += gagt::format_double(tau);
    }
    manifest.add("tau_values", tau_text);
    echo_manifest(manifest);

    const std::vector<gagt::TauSweepRow> rows = gagt::tau_sweep(plan, instance, taus, cmd.batch.workers);
    std::ostringstream out;
    if (cmd.batch.output.format == "json") {
        gagt::write_sweep_json(out, manifest, rows);
    } else {
        gagt::write_sweep_csv(out, manifest, rows);
    }
    write_output(cmd.batch.output, out.str());
    return kExitOk;
}

// -------------------------------------------------------------- noise ----

struct NoiseCommand {
    BatchCommand batch;
    std::string kind;
};

int execute_noise(const NoiseCommand& cmd) {
    gagt::ExperimentPlan plan = resolve_plan(cmd.batch, true);
    const gagt::NoiseKind kind = *gagt::parse_noise(cmd.kind);
    const gagt::KnapsackInstance instance = gagt::load_instance(plan.instance_path, plan.instance_index);

    InstanceOptions inst{plan.instance_path, plan.instance_index};
    gagt::Manifest manifest = base_manifest("noise", inst);
    gagt::GaConfig shown = plan.base;
    shown.game = plan.games.front();
    shown.noise = kind;
    add_config_manifest(manifest, shown, instance);
    manifest.add("replicas_per_game", plan.replicas_per_game);
    echo_manifest(manifest);

    const std::vector<gagt::RunSummary> summaries = gagt::noise_control(plan, instance, kind, cmd.batch.workers);
    std::ostringstream out;
    if (cmd.batch.output.format == "json") {
        gagt::write_summaries_json(out, manifest, summaries);
    } else {
        gagt::write_summaries_csv(out, manifest, summaries);
    }
    write_output(cmd.batch.output, out.str());
    return kExitOk;
}

// -------------------------------------------------------------- stats ----

struct RegressCommand {
    std::string csv_path;
    std::string x_column;
    std::string y_column;
    OutputOptions output;
};

std::vector<std::pair<double, double>> numeric_pairs(const gagt::CsvTable& table, const std::string& x_col,
                                                     const std::string& y_col) {
    auto xi = table.column_index(x_col);
    auto yi = table.column_index(y_col);
    if (!xi) throw gagt::ParseError("column '" + x_col + "' not found in CSV header");
    if (!yi) throw gagt::ParseError("column '" + y_col + "' not found in CSV header");
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() <= std::max(*xi, *yi)) continue;
        if (row[*xi].empty() || row[*yi].empty()) continue; // absent optional fields
        auto x = gagt::parse_double(row[*xi]);
        auto y = gagt::parse_double(row[*yi]);
        if (!x || !y)
            throw gagt::ParseError("row " + std::to_string(r + 1) + ": non-numeric value in column '" +
                                   (x ? y_col : x_col) + "'");
        pairs.emplace_back(*x, *y);
    }
    return pairs;
}

std::string format_p_value(double p) {
    if (p < 1e-4) {
        std::ostringstream out;
        out.precision(6);
        out << std::scientific << p;
        return out.str();
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", p);
    return buf;
}

std::string format_stat(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

int execute_regress(const RegressCommand& cmd) {
    const gagt::CsvTable table = gagt::CsvTable::parse(gagt::read_file(cmd.csv_path));
    const auto pairs = numeric_pairs(table, cmd.x_column, cmd.y_column);
    if (pairs.size() < 3)
        throw gagt::ParseError("need at least 3 usable rows for a regression, found " + std::to_string(pairs.size()));
    std::vector<double> x, y;
    for (const auto& [px, py] : pairs) {
        x.push_back(px);
        y.push_back(py);
    }
    const gagt::RegressionResult r = gagt::linear_regression(x, y);

    std::ostringstream out;
    if (cmd.output.format == "json") {
        nlohmann::json doc;
        doc["x"] = cmd.x_column;
        doc["y"] = cmd.y_column;
        doc["n"] = pairs.size();
        doc["slope"] = r.slope;
        doc["intercept"] = r.intercept;
        doc["ss_model"] = r.ss_model;
        doc["ss_residual"] = r.ss_residual;
        doc["ss_total"] = r.ss_total;
        doc["df_model"] = r.df_model;
        doc["df_residual"] = r.df_residual;
        doc["f_ratio"] = r.f_ratio;
        doc["p_value"] = r.p_value;
        doc["correlation_coefficient"] = r.correlation_coefficient;
        doc["r_square_percent"] = r.r_square_percent;
        out << doc.dump(2) << "\n";
    } else {
        const double ms_residual = r.ss_residual / static_cast<double>(r.df_residual);
        auto pad = [](const std::string& s, std::size_t width) {
            return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
        };
        out << "Regression ANOVA (" << cmd.y_column << " = " << format_stat(r.intercept)
            << (r.slope < 0 ? " - " : " + ") << format_stat(std::fabs(r.slope)) << " " << cmd.x_column << ")\n\n";
        out << pad("Source", 15) << pad("SS", 13) << pad("DF", 5) << pad("MSS", 13) << pad("F-rate", 13) << "P-Value\n";
        out << pad("Model", 15) << pad(format_stat(r.ss_model), 13) << pad("1", 5) << pad(format_stat(r.ss_model), 13)
            << pad(format_stat(r.f_ratio), 13) << format_p_value(r.p_value) << "\n";
        out << pad("Residual", 15) << pad(format_stat(r.ss_residual), 13) << pad(std::to_string(r.df_residual), 5)
            << pad(format_stat(ms_residual), 13) << "\n";
        out << pad("Total (Corr.)", 15) << pad(format_stat(r.ss_total), 13) << (r.df_residual + 1) << "\n\n";
        out << "Correlation coefficient = " << format_stat(r.correlation_coefficient) << "\n";
        out << "R-square = " << format_stat(r.r_square_percent) << " percent\n";
    }
    write_output(cmd.output, out.str());
    return kExitOk;
}

struct MwuCommand {
    std::string csv_path;
    std::string group_column;
    std::string value_column;
    std::string alternative = "two-sided";
    OutputOptions output;
};

int execute_mwu(const MwuCommand& cmd) {
    const gagt::CsvTable table = gagt::CsvTable::parse(gagt::read_file(cmd.csv_path));
    auto gi = table.column_index(cmd.group_column);
    auto vi = table.column_index(cmd.value_column);
    if (!gi) throw gagt::ParseError("column '" + cmd.group_column + "' not found in CSV header");
    if (!vi) throw gagt::ParseError("column '" + cmd.value_column + "' not found in CSV header");

    std::vector<std::string> labels;
    std::vector<std::vector<double>> groups;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() <= std::max(*gi, *vi)) continue;
        if (row[*vi].empty()) continue;
        auto value = gagt::parse_double(row[*vi]);
        if (!value)
            throw gagt::ParseError("row " + std::to_string(r + 1) + ": non-numeric value in column '" + cmd.value_column + "'");
        const std::string& label = row[*gi];
        std::size_t g = 0;
        for (; g < labels.size(); ++g)
            if (labels[g] == label) break;
        if (g == labels.size()) {
            labels.push_back(label);
            groups.emplace_back();
        }
        groups[g].push_back(*value);
    }
    if (labels.size() != 2)
        throw gagt::ParseError("column '" + cmd.group_column + "' must hold exactly two distinct labels, found " +
                               std::to_string(labels.size()));

    gagt::Alternative alternative = gagt::Alternative::TwoSided;
    if (cmd.alternative == "greater") alternative = gagt::Alternative::Greater;
    else if (cmd.alternative == "less") alternative = gagt::Alternative::Less;
    const gagt::MannWhitneyResult result = gagt::mann_whitney(groups[0], groups[1], alternative);
    const double median_a = gagt::median(groups[0]);
    const double median_b = gagt::median(groups[1]);

    std::ostringstream out;
    if (cmd.output.format == "json") {
        nlohmann::json doc;
        doc["group_a"] = labels[0];
        doc["group_b"] = labels[1];
        doc["n_a"] = result.n_a;
        doc["n_b"] = result.n_b;
        doc["median_a"] = median_a;
        doc["median_b"] = median_b;
        doc["u_statistic"] = result.u_statistic;
        doc["z_score"] = result.z_score;
        doc["alternative"] = cmd.alternative;
        doc["p_value"] = result.p_value;
        out << doc.dump(2) << "\n";
    } else {
        out << "Mann-Whitney (Wilcoxon) rank-sum test\n";
        out << "group a: " << labels[0] << " (n = " << result.n_a << ", median = " << format_stat(median_a) << ")\n";
        out << "group b: " << labels[1] << " (n = " << result.n_b << ", median = " << format_stat(median_b) << ")\n";
        out << "U = " << format_stat(result.u_statistic) << "  z = " << format_stat(result.z_score) << "  p-value ("
            << cmd.alternative << ") = " << format_p_value(result.p_value) << "\n";
    }
    write_output(cmd.output, out.str());
    return kExitOk;
}

// ----------------------------------------------------------- validate ----

struct ValidateCommand {
    std::string game;
    CLI::Option* game_opt = nullptr;
    InstanceOptions instance;
    CLI::Option* instance_opt = nullptr;
    GaOptions ga; // only --game-params is honored here
};

int execute_validate(const ValidateCommand& cmd) {
    if (!cmd.game_opt->count() && !cmd.instance_opt->count())
        throw UsageError("validate needs --game and/or --instance");
    std::ostringstream out;
    if (cmd.game_opt->count()) {
        const gagt::GameModel model = *gagt::parse_game(cmd.game);
        const gagt::GameParams params =
            cmd.ga.game_params_opt->count() ? parse_game_params_flag(cmd.ga.game_params) : gagt::default_params(model);
        const gagt::PayoffMatrix matrix = gagt::build_matrix(params);
        out << "game: " << gagt::game_name(model) << "\n";
        out << "params: k = " << format_stat(params.k) << ", s1 = " << format_stat(params.s1)
            << ", s2 = " << format_stat(params.s2) << ", c = " << format_stat(params.c) << "\n";
        out << "payoffs: R = " << format_stat(matrix.reward) << ", S = " << format_stat(matrix.sucker)
            << ", T = " << format_stat(matrix.temptation) << ", P = " << format_stat(matrix.punishment)
            << " (max " << format_stat(matrix.max_payoff) << ")\n";
        const gagt::OrderingReport report = gagt::validate_ordering(model, matrix);
        if (report.satisfied) {
            out << "ordering: satisfied\n";
        } else {
            out << "ordering: VIOLATED\n";
            for (const auto& violation : report.violations) out << "  warning: " << violation << "\n";
        }
    }
    if (cmd.instance_opt->count()) {
        const gagt::KnapsackInstance instance = gagt::load_instance(cmd.instance.path, cmd.instance.index);
        out << "instance: " << instance.name << " (" << cmd.instance.path << ")\n";
        out << "items: " << instance.n_items() << ", sacks: " << instance.n_sacks();
        if (instance.best_known) out << ", best known: " << gagt::format_double(*instance.best_known);
        out << "\n";
    }
    std::cout << out.str();
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"genetic algorithm with game-theoretic social interactions on 0/1 knapsack problems"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(gagt::kVersion));
    app.add_flag("-v,--verbose", g_verbose, "echo the resolved configuration to standard error");

    RunCommand run_cmd;
    auto* run_app = app.add_subcommand("run", "execute a single seeded run");
    add_instance_options(run_app, run_cmd.instance, true);
    add_ga_options(run_app, run_cmd.ga, true);
    add_output_options(run_app, run_cmd.output);
    run_app->add_option("--trace", run_cmd.trace_path, "also write per-generation statistics to this CSV file");

    BatchCommand batch_cmd;
    auto* batch_app = app.add_subcommand("batch", "run per-game replica arms plus standard-GA controls");
    batch_cmd.instance_opt = batch_app->add_option("--instance", batch_cmd.instance.path, "knapsack instance file");
    batch_cmd.index_opt = batch_app->add_option("--instance-index", batch_cmd.instance.index, "problem index in the instance file");
    batch_app->add_option("--plan", batch_cmd.plan_path, "JSON experiment plan; explicit flags override plan values");
    batch_cmd.games_opt =
        batch_app->add_option("--games", batch_cmd.games, "game models to run (default: all seven)")->delimiter(',');
    batch_cmd.replicas_opt = batch_app->add_option("--replicas", batch_cmd.replicas, "replicas per game (default 1)");
    batch_cmd.controls_opt =
        batch_app->add_option("--controls", batch_cmd.controls, "control replicas (default: same as --replicas)");
    batch_app->add_option("--workers", batch_cmd.workers, "max parallel replicas (default 1)");
    add_ga_options(batch_app, batch_cmd.ga, true);
    add_output_options(batch_app, batch_cmd.output);

    SweepCommand sweep_cmd;
    auto* sweep_app = app.add_subcommand("sweep", "sweep the cheating degree tau for one game model");
    sweep_cmd.batch.instance_opt = sweep_app->add_option("--instance", sweep_cmd.batch.instance.path, "knapsack instance file");
    sweep_cmd.batch.index_opt =
        sweep_app->add_option("--instance-index", sweep_cmd.batch.instance.index, "problem index in the instance file");
    sweep_app->add_option("--plan", sweep_cmd.batch.plan_path, "JSON experiment plan; explicit flags override plan values");
    sweep_cmd.tau_list_opt = sweep_app->add_option("--tau-list", sweep_cmd.tau_list, "cheating degrees, e.g. 10,15,20,25,30,40,50")
                                 ->delimiter(',');
    sweep_cmd.batch.replicas_opt =
        sweep_app->add_option("--replicas", sweep_cmd.batch.replicas, "replicas per tau (default 1)");
    sweep_cmd.batch.controls_opt = nullptr;
    sweep_app->add_option("--workers", sweep_cmd.batch.workers, "max parallel replicas (default 1)");
    add_ga_options(sweep_app, sweep_cmd.batch.ga, true);
    add_output_options(sweep_app, sweep_cmd.batch.output);

    NoiseCommand noise_cmd;
    auto* noise_app = app.add_subcommand("noise", "replace payoffs with uniform or Gaussian noise");
    noise_cmd.batch.instance_opt = noise_app->add_option("--instance", noise_cmd.batch.instance.path, "knapsack instance file");
    noise_cmd.batch.index_opt =
        noise_app->add_option("--instance-index", noise_cmd.batch.instance.index, "problem index in the instance file");
    noise_app->add_option("--plan", noise_cmd.batch.plan_path, "JSON experiment plan; explicit flags override plan values");
    noise_app->add_option("--kind", noise_cmd.kind, "noise distribution")
        ->required()
        ->check(CLI::IsMember({"uniform", "gaussian"}));
    noise_cmd.batch.replicas_opt =
        noise_app->add_option("--replicas", noise_cmd.batch.replicas, "replicas per arm (default 1)");
    noise_cmd.batch.controls_opt = nullptr;
    noise_app->add_option("--workers", noise_cmd.batch.workers, "max parallel replicas (default 1)");
    add_ga_options(noise_app, noise_cmd.batch.ga, true);
    add_output_options(noise_app, noise_cmd.batch.output);

    auto* stats_app = app.add_subcommand("stats", "statistics over result CSVs");
    stats_app->require_subcommand(1);

    RegressCommand regress_cmd;
    auto* regress_app = stats_app->add_subcommand("regress", "simple linear regression with ANOVA table");
    regress_app->add_option("csv", regress_cmd.csv_path, "input CSV file")->required();
    regress_app->add_option("--x", regress_cmd.x_column, "predictor column name")->required();
    regress_app->add_option("--y", regress_cmd.y_column, "response column name")->required();
    add_output_options(regress_app, regress_cmd.output);

    MwuCommand mwu_cmd;
    auto* mwu_app = stats_app->add_subcommand("mwu", "Mann-Whitney (Wilcoxon) rank-sum test between two groups");
    mwu_app->add_option("csv", mwu_cmd.csv_path, "input CSV file")->required();
    mwu_app->add_option("--group", mwu_cmd.group_column, "column holding exactly two distinct group labels")->required();
    mwu_app->add_option("--value", mwu_cmd.value_column, "numeric column to compare")->required();
    mwu_app->add_option("--alternative", mwu_cmd.alternative, "alternative hypothesis")
        ->check(CLI::IsMember({"two-sided", "greater", "less"}))
        ->capture_default_str();
    add_output_options(mwu_app, mwu_cmd.output);

    ValidateCommand validate_cmd;
    auto* validate_app = app.add_subcommand("validate", "check game orderings and instance files");
    validate_cmd.game_opt = validate_app->add_option("--game", validate_cmd.game, "game model to audit")
                                ->check(CLI::IsMember({"pd", "cg", "mp", "fof", "fd", "bs", "sh"}));
    validate_cmd.instance_opt = validate_app->add_option("--instance", validate_cmd.instance.path, "instance file to parse");
    validate_app->add_option("--instance-index", validate_cmd.instance.index, "problem index in the instance file");
    validate_cmd.ga.game_params_opt =
        validate_app->add_option("--game-params", validate_cmd.ga.game_params, "custom payoff parameters k,s1,s2,c");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run_app->parsed()) return execute_run(run_cmd);
        if (batch_app->parsed()) return execute_batch(batch_cmd);
        if (sweep_app->parsed()) return execute_sweep(sweep_cmd);
        if (noise_app->parsed()) return execute_noise(noise_cmd);
        if (stats_app->parsed()) {
            if (regress_app->parsed()) return execute_regress(regress_cmd);
            if (mwu_app->parsed()) return execute_mwu(mwu_cmd);
        }
        if (validate_app->parsed()) return execute_validate(validate_cmd);
        throw UsageError("no subcommand selected");
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const gagt::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
