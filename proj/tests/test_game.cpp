#include <catch2/catch.hpp>

#include "gagt/game.hpp"

using namespace gagt;

TEST_CASE("default parameters match the published table", "[game]") {
    auto expect = [](GameModel model, double k, double s1, double s2, double c) {
        const GameParams p = default_params(model);
        CHECK(p.k == k);
        CHECK(p.s1 == s1);
        CHECK(p.s2 == s2);
        CHECK(p.c == c);
    };
    expect(GameModel::PD, 1.0, 0.4, 1.0, 0.2);
    expect(GameModel::CG, 1.0, 0.5, 9.0, 0.17);
    expect(GameModel::MP, 1.0, 0.5, 0.5, 1.0);
    expect(GameModel::FOF, 1.0, 1.0, 0.5, 1.0);
    expect(GameModel::FD, 1.0, 0.3, 0.3, 0.0);
    expect(GameModel::BS, 1.0, 1.0, -1.0, 0.3);
    expect(GameModel::SH, 1.0, 0.7, -0.2, 1.0);
}

TEST_CASE("build_matrix applies the R/S/T/P parameterization", "[game]") {
    SECTION("prisoner's dilemma defaults") {
        const PayoffMatrix m = build_matrix(default_params(GameModel::PD));
        CHECK(m.reward == 1.0);
        CHECK(m.sucker == 0.6);
        CHECK(m.temptation == 2.0);
        CHECK(m.punishment == 0.8);
        CHECK(m.max_payoff == 2.0);
    }
    SECTION("degenerate uniform game") {
        const PayoffMatrix m = build_matrix({1.0, 0.0, 0.0, 0.0});
        CHECK(m.reward == 1.0);
        CHECK(m.sucker == 1.0);
        CHECK(m.temptation == 1.0);
        CHECK(m.punishment == 1.0);
        CHECK(m.max_payoff == 1.0);
    }
    SECTION("mixed polymorphism defaults") {
        const PayoffMatrix m = build_matrix(default_params(GameModel::MP));
        CHECK(m.reward == 1.0);
        CHECK(m.sucker == 0.5);
        CHECK(m.temptation == 1.5);
        CHECK(m.punishment == 0.0);
    }
    SECTION("non-finite parameters rejected") {
        CHECK_THROWS_AS(build_matrix({1.0, std::nan(""), 0.0, 0.0}), std::invalid_argument);
        CHECK_THROWS_AS(build_matrix({0.0, 0.0, 0.0, 0.0}), std::invalid_argument);
    }
}

TEST_CASE("payoff selects the row player's cell", "[game]") {
    const PayoffMatrix pd = build_matrix(default_params(GameModel::PD));
    CHECK(payoff(pd, Role::Cooperator, Role::Cooperator) == 1.0);
    CHECK(payoff(pd, Role::Cooperator, Role::Cheater) == 0.6);
    CHECK(payoff(pd, Role::Cheater, Role::Cooperator) == 2.0);
    CHECK(payoff(pd, Role::Cheater, Role::Cheater) == 0.8);

    const PayoffMatrix uniform = build_matrix({1.0, 0.0, 0.0, 0.0});
    for (Role a : {Role::Cooperator, Role::Cheater})
        for (Role b : {Role::Cooperator, Role::Cheater}) CHECK(payoff(uniform, a, b) == 1.0);
}

TEST_CASE("max_payoff dominates every role pairing", "[game]") {
    for (GameModel model : kAllGameModels) {
        const PayoffMatrix m = build_matrix(default_params(model));
        for (Role a : {Role::Cooperator, Role::Cheater})
            for (Role b : {Role::Cooperator, Role::Cheater}) CHECK(m.max_payoff >= payoff(m, a, b));
    }
}

TEST_CASE("both members of an encounter read the same symmetric game", "[game]") {
    // In a symmetric 2x2 game the column player's payoff in (a, b) equals
    // the row player's payoff in (b, a).
    for (GameModel model : kAllGameModels) {
        const PayoffMatrix m = build_matrix(default_params(model));
        CHECK(payoff(m, Role::Cooperator, Role::Cheater) == m.sucker);
        CHECK(payoff(m, Role::Cheater, Role::Cooperator) == m.temptation);
        CHECK(payoff(m, Role::Cooperator, Role::Cooperator) == payoff(m, Role::Cooperator, Role::Cooperator));
        CHECK(payoff(m, Role::Cheater, Role::Cheater) == payoff(m, Role::Cheater, Role::Cheater));
    }
}

TEST_CASE("PD defaults satisfy the side condition c < s1", "[game]") {
    const GameParams p = default_params(GameModel::PD);
    CHECK(p.c < p.s1);
}

TEST_CASE("ordering audit over the default parameters", "[game]") {
    auto audit = [](GameModel model) { return validate_ordering(model, build_matrix(default_params(model))); };

    CHECK(audit(GameModel::PD).satisfied);   // 2 > 1 > 0.8 > 0.6
    CHECK(audit(GameModel::MP).satisfied);
    CHECK(audit(GameModel::FOF).satisfied);
    CHECK(audit(GameModel::FD).satisfied);
    CHECK(audit(GameModel::BS).satisfied);

    SECTION("chicken game table row breaks its own chain") {
        const OrderingReport report = audit(GameModel::CG);
        CHECK_FALSE(report.satisfied);
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0] == "S>P fails: 0.5 ≤ 0.83");
    }
    SECTION("stag hunt table row breaks its own chain") {
        const OrderingReport report = audit(GameModel::SH);
        CHECK_FALSE(report.satisfied);
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0] == "P>S fails: 0 ≤ 0.3");
    }
    SECTION("satisfied reports carry no violations") {
        for (GameModel model : kAllGameModels) {
            const OrderingReport report = audit(model);
            CHECK(report.satisfied == report.violations.empty());
        }
    }
}

TEST_CASE("equality links use the 1e-9 tolerance", "[game]") {
    // FD requires R = P; nudge c by less than the tolerance.
    GameParams params = default_params(GameModel::FD);
    params.c = 5e-10;
    CHECK(validate_ordering(GameModel::FD, build_matrix(params)).satisfied);
    params.c = 1e-6;
    CHECK_FALSE(validate_ordering(GameModel::FD, build_matrix(params)).satisfied);
}

TEST_CASE("game names round-trip", "[game]") {
    for (GameModel model : kAllGameModels) {
        auto parsed = parse_game(game_name(model));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == model);
    }
    CHECK_FALSE(parse_game("tictactoe").has_value());
}
