#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <cstdio>

namespace gagt {

// The seven 2x2 symmetric games used for the social-interaction step.
enum class GameModel { PD, CG, MP, FOF, FD, BS, SH };

inline constexpr std::array<GameModel, 7> kAllGameModels = {
    GameModel::PD, GameModel::CG, GameModel::MP, GameModel::FOF,
    GameModel::FD, GameModel::BS, GameModel::SH};

inline std::string_view game_name(GameModel model) {
    switch (model) {
        case GameModel::PD:  return "pd";
        case GameModel::CG:  return "cg";
        case GameModel::MP:  return "mp";
        case GameModel::FOF: return "fof";
        case GameModel::FD:  return "fd";
        case GameModel::BS:  return "bs";
        case GameModel::SH:  return "sh";
    }
    return "?";
}

inline std::optional<GameModel> parse_game(std::string_view name) {
    for (GameModel model : kAllGameModels)
        if (name == game_name(model)) return model;
    return std::nullopt;
}

enum class Role { Cooperator, Cheater };

inline std::string_view role_name(Role role) {
    return role == Role::Cooperator ? "cooperator" : "cheater";
}

// Payoff parameterization: reward k, sucker deduction s1, temptation
// increment s2, punishment deduction c.
struct GameParams {
    double k = 1.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double c = 0.0;
};

inline void validate_params(const GameParams& params) {
    if (!(std::isfinite(params.k) && std::isfinite(params.s1) &&
          std::isfinite(params.s2) && std::isfinite(params.c)))
        throw std::invalid_argument("game parameters must be finite");
    if (!(params.k > 0.0))
        throw std::invalid_argument("game parameter k must be positive");
}

// Per-model defaults, as used for the payoff estimates in the source
// microbiology literature. CG and SH as listed here do not satisfy their own
// textbook orderings; validate_ordering() reports that, and the values are
// kept anyway because the experiments use them as-is.
inline GameParams default_params(GameModel model) {
    switch (model) {
        case GameModel::PD:  return {1.0, 0.4, 1.0, 0.2};
        case GameModel::CG:  return {1.0, 0.5, 9.0, 0.17};
        case GameModel::MP:  return {1.0, 0.5, 0.5, 1.0};
        case GameModel::FOF: return {1.0, 1.0, 0.5, 1.0};
        case GameModel::FD:  return {1.0, 0.3, 0.3, 0.0};
        case GameModel::BS:  return {1.0, 1.0, -1.0, 0.3};
        case GameModel::SH:  return {1.0, 0.7, -0.2, 1.0};
    }
    throw std::invalid_argument("unknown game model");
}

// Row-player payoffs: R = reward (C meets C), S = sucker's payoff (C meets
// D), T = temptation (D meets C), P = punishment (D meets D).
struct PayoffMatrix {
    double reward = 0.0;
    double sucker = 0.0;
    double temptation = 0.0;
    double punishment = 0.0;
    double max_payoff = 0.0;
};

inline PayoffMatrix build_matrix(const GameParams& params) {
    validate_params(params);
    PayoffMatrix m;
    m.reward = params.k;
    m.sucker = params.k - params.s1;
    m.temptation = params.k + params.s2;
    m.punishment = params.k - params.c;
    m.max_payoff = std::max(std::max(m.reward, m.sucker), std::max(m.temptation, m.punishment));
    return m;
}

// Payoff received by `self` (the row player) when meeting `other`.
inline double payoff(const PayoffMatrix& matrix, Role self, Role other) {
    if (self == Role::Cooperator)
        return other == Role::Cooperator ? matrix.reward : matrix.sucker;
    return other == Role::Cooperator ? matrix.temptation : matrix.punishment;
}

struct OrderingReport {
    GameModel model = GameModel::PD;
    bool satisfied = true;
    std::vector<std::string> violations;
};

namespace detail {

// One link of an ordering chain: lhs > rhs (strict) or lhs = rhs. The symbol
// '0' stands for the literal zero.
struct OrderingRelation {
    char lhs;
    char rhs;
    bool strict;
};

inline double payoff_symbol(const PayoffMatrix& m, char symbol) {
    switch (symbol) {
        case 'R': return m.reward;
        case 'S': return m.sucker;
        case 'T': return m.temptation;
        case 'P': return m.punishment;
        default:  return 0.0;
    }
}

// Diagnostic number format: compact, not round-trip precise.
inline std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::vector<OrderingRelation> ordering_chain(GameModel model) {
    switch (model) {
        case GameModel::PD:  return {{'T', 'R', true}, {'R', 'P', true}, {'P', 'S', true}};
        case GameModel::CG:  return {{'T', 'R', true}, {'R', 'S', true}, {'S', 'P', true}};
        case GameModel::MP:  return {{'T', 'R', true}, {'R', 'S', true}, {'S', 'P', true}, {'P', '0', false}};
        case GameModel::FOF: return {{'T', 'R', true}, {'R', 'P', true}, {'P', 'S', false}, {'S', '0', false}};
        case GameModel::FD:  return {{'T', 'R', true}, {'R', 'P', false}, {'P', 'S', true}};
        case GameModel::BS:  return {{'R', 'P', true}, {'P', 'T', true}, {'T', 'S', false}, {'S', '0', false}};
        case GameModel::SH:  return {{'R', 'T', true}, {'T', 'P', true}, {'P', 'S', true}};
    }
    return {};
}

} // namespace detail

// Checks the textbook payoff ordering for the model. Equalities are tested
// with absolute tolerance 1e-9. A violated ordering is a diagnostic, not an
// error: the solver runs with whatever matrix it is given.
inline OrderingReport validate_ordering(GameModel model, const PayoffMatrix& matrix) {
    constexpr double kEqTolerance = 1e-9;
    OrderingReport report;
    report.model = model;
    for (const auto& rel : detail::ordering_chain(model)) {
        double lhs = detail::payoff_symbol(matrix, rel.lhs);
        double rhs = detail::payoff_symbol(matrix, rel.rhs);
        if (rel.strict) {
            if (!(lhs > rhs)) {
                std::string msg;
                msg += rel.lhs;
                msg += '>';
                msg += rel.rhs;
                msg += " fails: " + detail::short_number(lhs) + " ≤ " + detail::short_number(rhs);
                report.violations.push_back(std::move(msg));
            }
        } else if (std::fabs(lhs - rhs) > kEqTolerance) {
            std::string msg;
            msg += rel.lhs;
            msg += '=';
            msg += rel.rhs;
            msg += " fails: " + detail::short_number(lhs) + " ≠ " + detail::short_number(rhs);
            report.violations.push_back(std::move(msg));
        }
    }
    report.satisfied = report.violations.empty();
    return report;
}

} // namespace gagt
