#include <catch2/catch_amalgamated.hpp>

#include "autobid/boosts.hpp"
#include "autobid/fixtures.hpp"

using namespace autobid;

TEST_CASE("uniform boosts scale values by c") {
    const auto fixture = fixtures::uniform_boost_worst_case(1.0, 0.1);
    const auto boosts = uniform_boosts(fixture.instance, 1.0);
    REQUIRE(boosts.z == std::vector<std::vector<double>>{{2.0, 0.1}, {0.0, 1.0}});
    REQUIRE(boosts.scheme == BoostScheme::Uniform);

    const auto zero = uniform_boosts(fixture.instance, 0.0);
    REQUIRE(zero.is_zero());
    REQUIRE_THROWS_AS(uniform_boosts(fixture.instance, -0.5), std::invalid_argument);
}

TEST_CASE("uniform boosts satisfy their own competitiveness level") {
    GeneratorParams params;
    params.num_bidders = 4;
    params.num_auctions = 6;
    params.max_slots = 3;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        params.seed = seed;
        const auto inst = generate_instance(params);
        for (double c : {0.0, 0.6, 1.0, 2.5}) {
            REQUIRE(is_value_competitive(uniform_boosts(inst, c), inst, c).ok);
        }
    }
}

TEST_CASE("value-competitiveness failure returns a witness") {
    const auto inst = make_single_slot_instance({{2.0, 1.0}, {1.0, 1.0}});
    const auto boosts = zero_boosts(inst);
    const auto result = is_value_competitive(boosts, inst, 0.5);
    REQUIRE_FALSE(result.ok);
    REQUIRE(result.bidder_hi == 0);
    REQUIRE(result.bidder_lo == 1);
    REQUIRE(result.auction == 0);

    // all values equal in an auction: vacuously competitive at any c
    const auto flat = make_single_slot_instance({{1.0}, {1.0}});
    REQUIRE(is_value_competitive(zero_boosts(flat), flat, 3.0).ok);
}

TEST_CASE("benchmark boosts follow the suffix-sum closed form") {
    ProblemInstance inst = make_single_slot_instance({{3.0}, {2.0}, {1.0}});
    inst.slots = {2};
    inst.pos = {{1.0, 0.9}};
    const BenchmarkOrder order{{{0, 1, 2}}};
    const auto boosts = benchmark_boosts(inst, order, 0.5);
    REQUIRE(boosts.z[0][0] == Catch::Approx(2.5));
    REQUIRE(boosts.z[1][0] == Catch::Approx(1.0));
    REQUIRE(boosts.z[2][0] == 0.0);
    REQUIRE(is_benchmark_competitive(boosts, inst, order, 0.5).ok);

    REQUIRE(benchmark_boosts(inst, order, 0.0).is_zero());
}

TEST_CASE("single-slot benchmark boosts give the top bidder her own value") {
    const auto inst = make_single_slot_instance({{3.0}, {2.0}, {1.0}});
    const BenchmarkOrder order{{{0, 1, 2}}};
    const auto boosts = benchmark_boosts(inst, order, 1.0);
    REQUIRE(boosts.z[0][0] == 3.0);
    REQUIRE(boosts.z[1][0] == 0.0);
    REQUIRE(boosts.z[2][0] == 0.0);
}

TEST_CASE("benchmark-competitiveness failure returns a rank witness") {
    ProblemInstance inst = make_single_slot_instance({{3.0}, {2.0}, {1.0}});
    inst.slots = {2};
    inst.pos = {{1.0, 0.9}};
    const BenchmarkOrder order{{{0, 1, 2}}};
    const auto bad = custom_boosts(inst, {{1.0}, {2.5}, {0.0}});
    const auto result = is_benchmark_competitive(bad, inst, order, 0.5);
    REQUIRE_FALSE(result.ok);
    REQUIRE(result.auction == 0);
    REQUIRE(result.rank_hi == 0);
    REQUIRE(result.rank_lo == 1);
}

TEST_CASE("at c = 0 benchmark-competitiveness means rank-non-increasing boosts") {
    ProblemInstance inst = make_single_slot_instance({{3.0}, {2.0}, {1.0}});
    const BenchmarkOrder order{{{0, 1, 2}}};
    REQUIRE(is_benchmark_competitive(custom_boosts(inst, {{2.0}, {2.0}, {1.0}}), inst, order, 0.0)
                .ok);
    REQUIRE_FALSE(
        is_benchmark_competitive(custom_boosts(inst, {{1.0}, {2.0}, {0.0}}), inst, order, 0.0).ok);
}

TEST_CASE("benchmark boosts are minimal at their equality points") {
    GeneratorParams params;
    params.num_bidders = 4;
    params.num_auctions = 3;
    params.max_slots = 3;
    params.seed = 17;
    const auto inst = generate_instance(params);
    const auto order = rank_by_weighted_values(inst, std::vector<double>(4, 1.0));
    const double c = 0.8;
    const auto minimal = benchmark_boosts(inst, order, c);
    REQUIRE(is_benchmark_competitive(minimal, inst, order, c).ok);

    for (int i = 0; i < inst.num_bidders; ++i) {
        for (int j = 0; j < inst.num_auctions; ++j) {
            if (minimal.z[i][j] == 0.0) continue;
            auto reduced = minimal.z;
            reduced[i][j] -= 1e-6 * std::max(1.0, reduced[i][j]);
            REQUIRE_FALSE(
                is_benchmark_competitive(custom_boosts(inst, reduced), inst, order, c).ok);
        }
    }
}

TEST_CASE("scaling a value-competitive matrix by lambda >= 1 preserves competitiveness") {
    GeneratorParams params;
    params.num_bidders = 5;
    params.num_auctions = 4;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        params.seed = seed;
        const auto inst = generate_instance(params);
        const double c = 0.7;
        auto z = uniform_boosts(inst, c).z;
        for (double lambda : {1.0, 1.5, 3.0}) {
            auto scaled = z;
            for (auto& row : scaled)
                for (double& v : row) v *= lambda;
            REQUIRE(is_value_competitive(custom_boosts(inst, scaled), inst, c).ok);
        }
    }
}

TEST_CASE("seller costs subtract from boosts and may go negative") {
    ProblemInstance inst = make_single_slot_instance({{2.0}, {0.2}});
    inst.seller_costs = {{0.5}, {1.0}};
    auto boosts = custom_boosts(inst, {{2.0}, {0.2}});
    const auto effective = apply_seller_cost(boosts, inst);
    REQUIRE(effective.z[0][0] == 1.5);
    REQUIRE(effective.z[1][0] == Catch::Approx(-0.8));
    REQUIRE(effective.effective);

    REQUIRE_THROWS_AS(apply_seller_cost(effective, inst), std::invalid_argument);
    REQUIRE_THROWS_AS(is_value_competitive(effective, inst, 0.0), std::invalid_argument);
}

TEST_CASE("zero seller costs leave boosts unchanged") {
    const auto inst = make_single_slot_instance({{2.0}, {0.2}});
    const auto boosts = uniform_boosts(inst, 1.0);
    const auto effective = apply_seller_cost(boosts, inst);
    REQUIRE(effective.z == boosts.z);
    REQUIRE(effective.effective);
}

TEST_CASE("custom boosts reject negative entries") {
    const auto inst = make_single_slot_instance({{1.0}, {1.0}});
    REQUIRE_THROWS_AS(custom_boosts(inst, {{-0.1}, {0.0}}), std::invalid_argument);
}
