#include <catch2/catch_amalgamated.hpp>

#include "autobid/fixtures.hpp"
#include "autobid/metrics.hpp"
#include "autobid/rng.hpp"

using namespace autobid;

TEST_CASE("liquid welfare caps received value at the budget") {
    ProblemInstance inst = make_single_slot_instance({{10.0}});
    inst.budgets[0] = 4.0;
    REQUIRE(liquid_welfare(inst, SlotAssignment{{0}}) == 4.0);
    REQUIRE(liquid_welfare(inst, SlotAssignment{{}}) == 0.0);
}

TEST_CASE("the worst-case fixture has optimal welfare 3") {
    const auto fixture = fixtures::uniform_boost_worst_case(1.0, 0.1);
    const auto opt = optimal_welfare_no_budget(fixture.instance);
    REQUIRE(opt.welfare == Catch::Approx(3.0));
    REQUIRE(opt.assignment[0] == std::vector<int>{0});
    REQUIRE(opt.assignment[1] == std::vector<int>{1});
}

TEST_CASE("revenue sums all payments") {
    const auto fixture = fixtures::uniform_boost_worst_case(1.0, 0.1);
    const auto& inst = fixture.instance;
    const auto outcome =
        run_vcg(inst, uniform_bids(inst, fixture.corner_profile(0.0)), zero_boosts(inst));
    REQUIRE(revenue(outcome) == Catch::Approx(1.0));

    AuctionOutcome idle;
    idle.payments.assign(2, std::vector<double>(2, 0.0));
    REQUIRE(revenue(idle) == 0.0);
}

TEST_CASE("revenue never exceeds liquid welfare on feasible profiles") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        GeneratorParams params;
        params.num_bidders = rng.uniform_int(2, 5);
        params.num_auctions = rng.uniform_int(1, 5);
        params.max_slots = 3;
        params.seed = rng.next_u64();
        const auto inst = generate_instance(params);
        const auto boosts = uniform_boosts(inst, rng.uniform(0.0, 1.5));
        const MultiplierProfile ones{std::vector<double>(inst.num_bidders, 1.0)};
        for (Mechanism mech : {Mechanism::Vcg, Mechanism::Gsp}) {
            const auto cls = classify_profile(inst, mech, boosts, ones);
            for (int i = 0; i < inst.num_bidders; ++i) REQUIRE(cls.feasible[i]);
            REQUIRE(revenue(cls.outcome) <=
                    liquid_welfare(inst, cls.outcome) * (1.0 + 1e-12) + 1e-12);
        }
    }
}

TEST_CASE("sorted-greedy optimum pairs ranked values with ranked positions") {
    ProblemInstance inst = make_single_slot_instance({{3.0}, {2.0}, {1.0}});
    inst.slots = {2};
    inst.pos = {{1.0, 0.9}};
    REQUIRE(optimal_welfare_no_budget(inst).welfare == Catch::Approx(4.8));

    const auto flat = make_single_slot_instance({{2.0}, {2.0}, {2.0}});
    REQUIRE(optimal_welfare_no_budget(flat).welfare == Catch::Approx(2.0));

    ProblemInstance budgeted = make_single_slot_instance({{1.0}});
    budgeted.budgets[0] = 1.0;
    REQUIRE_THROWS_AS(optimal_welfare_no_budget(budgeted), std::invalid_argument);
}

TEST_CASE("brute force matches sorted greedy without budgets") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        GeneratorParams params;
        params.num_bidders = 4;
        params.num_auctions = 4;
        params.max_slots = 2;
        params.seed = seed;
        const auto inst = generate_instance(params);
        REQUIRE(optimal_liquid_welfare_bruteforce(inst) ==
                Catch::Approx(optimal_welfare_no_budget(inst).welfare).epsilon(1e-12));
    }
}

TEST_CASE("brute force caps a single over-budget bidder") {
    ProblemInstance inst = make_single_slot_instance({{5.0}});
    inst.budgets[0] = 1.0;
    REQUIRE(optimal_liquid_welfare_bruteforce(inst) == 1.0);
}

TEST_CASE("brute force refuses oversized instances") {
    GeneratorParams params;
    params.num_bidders = 6;
    params.num_auctions = 8;
    params.min_slots = 3;
    params.max_slots = 3;
    params.seed = 1;
    const auto inst = generate_instance(params);
    REQUIRE_THROWS_AS(optimal_liquid_welfare_bruteforce(inst, 1000), std::invalid_argument);
}

TEST_CASE("benchmark welfare of a value-sorted ranking is optimal without budgets") {
    GeneratorParams params;
    params.num_bidders = 4;
    params.num_auctions = 3;
    params.max_slots = 2;
    params.seed = 9;
    const auto inst = generate_instance(params);
    const auto order = rank_by_weighted_values(inst, std::vector<double>(4, 1.0));
    REQUIRE(benchmark_welfare(inst, order) ==
            Catch::Approx(optimal_welfare_no_budget(inst).welfare));
}

TEST_CASE("benchmark welfare never exceeds the brute-force optimum") {
    for (std::uint64_t seed = 50; seed < 70; ++seed) {
        Rng rng(seed);
        GeneratorParams params;
        params.num_bidders = 3;
        params.num_auctions = 3;
        params.max_slots = 2;
        params.seed = rng.next_u64();
        auto inst = generate_instance(params);
        if (seed % 2 == 0) inst.budgets[0] = rng.uniform(0.5, 3.0);
        // an arbitrary (deliberately bad) ranking
        std::vector<double> weights(3);
        for (double& w : weights) w = rng.uniform(0.1, 2.0);
        const auto order = rank_by_weighted_values(inst, weights);
        REQUIRE(benchmark_welfare(inst, order) <=
                optimal_liquid_welfare_bruteforce(inst) * (1.0 + 1e-12));
    }
}

TEST_CASE("welfare report carries capped values and the competitive ratio") {
    const auto fixture = fixtures::uniform_boost_worst_case(1.0, 0.1);
    const auto& inst = fixture.instance;
    const auto outcome =
        run_vcg(inst, uniform_bids(inst, fixture.corner_profile(0.0)), zero_boosts(inst));
    const auto report = make_welfare_report(inst, outcome, 3.0);
    REQUIRE(report.liquid_welfare == Catch::Approx(2.1));
    REQUIRE(report.revenue == Catch::Approx(1.0));
    REQUIRE(report.capped_values[0] == Catch::Approx(2.1));
    REQUIRE(report.capped_values[1] == 0.0);
    REQUIRE(report.competitive_ratio.has_value());
    REQUIRE(*report.competitive_ratio == Catch::Approx(0.7));
    REQUIRE(report.revenue <= report.liquid_welfare);
}

TEST_CASE("the ratio check passes the worst case at weight 1 with slack") {
    const auto fixture = fixtures::uniform_boost_worst_case(1.0, 0.1);
    const auto& inst = fixture.instance;
    const double c = 1.0;
    const auto boosts = uniform_boosts(inst, c);
    const auto profile = fixture.corner_profile(c);

    RatioCheckOptions opts;
    opts.requirement = BoostRequirement::ValueCompetitive;
    opts.competitive_c = c;
    const auto result = check_ratio_bound(inst, Mechanism::Vcg, boosts, profile,
                                          {BaselineKind::OptNoBudget}, (c + 1.0) / (c + 2.0), opts);
    REQUIRE(result.status == CheckStatus::Pass);
    REQUIRE(result.achieved == Catch::Approx(0.7));
    REQUIRE(result.slack == Catch::Approx(0.7 - 2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("the ratio check skips profiles outside Theta") {
    const auto inst = make_single_slot_instance({{2.0}, {1.0}});
    const auto result = check_ratio_bound(inst, Mechanism::Vcg, zero_boosts(inst), {{0.5, 1.0}},
                                          {BaselineKind::OptNoBudget}, 0.5);
    REQUIRE(result.status == CheckStatus::Skip);
    REQUIRE(result.detail == "profile is not in Theta");
}

TEST_CASE("the ratio check skips budgeted instances under the no-budget baseline") {
    ProblemInstance inst = make_single_slot_instance({{2.0}, {1.0}});
    inst.budgets[0] = 1.0;
    const auto result = check_ratio_bound(inst, Mechanism::Vcg, zero_boosts(inst), {{1.0, 1.0}},
                                          {BaselineKind::OptNoBudget}, 0.5);
    REQUIRE(result.status == CheckStatus::Skip);
}

TEST_CASE("the ratio check skips boosts that miss their competitiveness requirement") {
    const auto inst = make_single_slot_instance({{2.0}, {1.0}});
    const MultiplierProfile ones{{1.0, 1.0}};

    RatioCheckOptions opts;
    opts.requirement = BoostRequirement::ValueCompetitive;
    opts.competitive_c = 0.5;
    const auto value_skip = check_ratio_bound(inst, Mechanism::Vcg, zero_boosts(inst), ones,
                                              {BaselineKind::OptNoBudget}, 0.5, opts);
    REQUIRE(value_skip.status == CheckStatus::Skip);

    const BenchmarkOrder order{{{1, 0}}};  // ranks the low-value bidder first
    RatioCheckOptions bench_opts;
    bench_opts.requirement = BoostRequirement::BenchmarkCompetitive;
    bench_opts.competitive_c = 0.5;
    bench_opts.order = &order;
    const auto bench_skip = check_ratio_bound(inst, Mechanism::Vcg, zero_boosts(inst), ones,
                                              {BaselineKind::Benchmark, &order}, 0.5, bench_opts);
    REQUIRE(bench_skip.status == CheckStatus::Skip);
}

TEST_CASE("random Theta profiles above 1 respect the bound under uniform boosts") {
    Rng rng(2024);
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        GeneratorParams params;
        params.num_bidders = rng.uniform_int(2, 5);
        params.num_auctions = rng.uniform_int(1, 6);
        params.max_slots = 3;
        params.seed = rng.next_u64();
        const auto inst = generate_instance(params);
        const double c = std::vector<double>{0.0, 0.3, 1.0}[seed % 3];
        const auto boosts = uniform_boosts(inst, c);
        for (int attempt = 0; attempt < 5; ++attempt) {
            MultiplierProfile profile;
            profile.alpha.resize(inst.num_bidders);
            for (double& a : profile.alpha) a = std::exp(rng.uniform(0.0, std::log(8.0)));
            RatioCheckOptions opts;
            opts.requirement = BoostRequirement::ValueCompetitive;
            opts.competitive_c = c;
            const auto result =
                check_ratio_bound(inst, Mechanism::Vcg, boosts, profile,
                                  {BaselineKind::OptNoBudget}, (c + 1.0) / (c + 2.0), opts);
            REQUIRE(result.status != CheckStatus::Fail);
            if (result.status == CheckStatus::Pass) ++checked;
        }
    }
    REQUIRE(checked > 50);
}
