#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "autobid/fixtures.hpp"
#include "autobid/metrics.hpp"
#include "autobid/simulator.hpp"

using namespace autobid;

namespace {

IterationRecord alpha_record(std::vector<double> alpha) {
    IterationRecord rec;
    rec.alpha = std::move(alpha);
    return rec;
}

}  // namespace

TEST_CASE("zero iterations log exactly the initial state") {
    const auto fixture = fixtures::uniform_boost_worst_case(1.0, 0.1);
    ExperimentConfig config;
    config.pretrain_iterations = 0;
    config.boosted_iterations = 0;
    const auto trace = run_dynamics(fixture.instance, config);
    REQUIRE(trace.records.size() == 1);
    REQUIRE(trace.records[0].phase == 1);
    REQUIRE(trace.records[0].alpha == std::vector<double>{1.0, 1.0});
}

TEST_CASE("a lone first-price bidder lands on the fixed point in one step at eta 1") {
    const auto inst = make_single_slot_instance({{3.0}});
    ExperimentConfig config;
    config.mechanism = Mechanism::FpaUniformEnforced;
    config.pretrain_iterations = 8;
    config.boosted_iterations = 0;
    config.learning.eta = 1.0;
    config.learning.hold_iterations = 100;
    config.initial_alpha = {2.0};
    const auto trace = run_dynamics(inst, config);
    REQUIRE(trace.records[0].alpha[0] == 2.0);
    for (std::size_t t = 1; t < trace.records.size(); ++t)
        REQUIRE(trace.records[t].alpha[0] == Catch::Approx(1.0));
    REQUIRE(trace.last().converged);
}

TEST_CASE("a lone VCG bidder pays nothing and climbs to the multiplier cap") {
    const auto inst = make_single_slot_instance({{3.0}});
    ExperimentConfig config;
    config.pretrain_iterations = 60;
    config.boosted_iterations = 0;
    const auto trace = run_dynamics(inst, config);
    for (const auto& rec : trace.records) {
        REQUIRE(rec.ledger.spend[0] == 0.0);
        REQUIRE(rec.welfare == Catch::Approx(3.0));
    }
    REQUIRE(trace.final_alpha.alpha[0] == 1e6);
    REQUIRE(trace.last().converged);
}

TEST_CASE("iteration records carry the pre-update multipliers") {
    const auto fixture = fixtures::uniform_boost_worst_case(1.0, 0.1);
    ExperimentConfig config;
    config.pretrain_iterations = 3;
    config.boosted_iterations = 2;
    config.scheme = {BoostScheme::Uniform, 1.0};
    const auto trace = run_dynamics(fixture.instance, config);
    REQUIRE(trace.records.size() == 5);
    REQUIRE(trace.records[0].alpha == std::vector<double>{1.0, 1.0});
    REQUIRE(trace.records[0].phase == 1);
    REQUIRE(trace.records[3].phase == 2);
    for (std::size_t t = 0; t < trace.records.size(); ++t)
        REQUIRE(trace.records[t].iteration == static_cast<int>(t) + 1);
}

TEST_CASE("dynamics are bit-deterministic") {
    const auto fixture = fixtures::uniform_boost_worst_case(1.0, 0.1);
    ExperimentConfig config;
    config.scheme = {BoostScheme::Uniform, 0.6};
    const auto a = run_dynamics(fixture.instance, config);
    const auto b = run_dynamics(fixture.instance, config);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t t = 0; t < a.records.size(); ++t) {
        REQUIRE(a.records[t].alpha == b.records[t].alpha);
        REQUIRE(a.records[t].welfare == b.records[t].welfare);
        REQUIRE(a.records[t].revenue == b.records[t].revenue);
    }
}

TEST_CASE("boosted-phase welfare respects the bound whenever the profile is in Theta") {
    const auto fixture = fixtures::uniform_boost_worst_case(1.0, 0.1);
    ExperimentConfig config;
    config.scheme = {BoostScheme::Uniform, 1.0};
    const auto trace = run_dynamics(fixture.instance, config);
    // (c+1)/(c+2) * Wel_opt = (2/3) * 3 = 2 at c = 1
    for (const auto& rec : trace.records) {
        if (rec.phase == 2 && rec.in_theta) REQUIRE(rec.welfare >= 2.0 - 1e-9);
    }
}

TEST_CASE("convergence detection needs a full window of small steps") {
    std::vector<IterationRecord> constant;
    for (int t = 0; t < 5; ++t) constant.push_back(alpha_record({1.5, 0.7}));
    REQUIRE(detect_convergence(constant, 1e-4, 3));
    REQUIRE_FALSE(detect_convergence(std::span<const IterationRecord>(constant.data(), 2), 1e-4, 3));

    std::vector<IterationRecord> oscillating;
    for (int t = 0; t < 8; ++t) oscillating.push_back(alpha_record({t % 2 == 0 ? 1.0 : 2.0}));
    REQUIRE_FALSE(detect_convergence(oscillating, 1e-4, 3));
}

TEST_CASE("geometrically decaying steps converge at the first qualifying window") {
    // log alpha_k = 0.1 * 0.5^k, so step k is 0.1 * 0.5^k; with tol 1e-3 and
    // window 3 the first record whose trailing three steps qualify is k = 9
    std::vector<IterationRecord> records;
    for (int k = 0; k <= 12; ++k)
        records.push_back(alpha_record({std::exp(0.1 * std::pow(0.5, k))}));
    for (int end = 3; end <= 12; ++end) {
        const std::span<const IterationRecord> prefix(records.data(), end + 1);
        if (end < 9)
            REQUIRE_FALSE(detect_convergence(prefix, 1e-3, 3));
        else
            REQUIRE(detect_convergence(prefix, 1e-3, 3));
    }
}

TEST_CASE("an empty sweep reports the baseline only") {
    const auto fixture = fixtures::uniform_boost_worst_case(1.0, 0.1);
    ExperimentConfig config;
    config.pretrain_iterations = 10;
    config.boosted_iterations = 10;
    const auto report = run_sweep(fixture.instance, {}, config);
    REQUIRE(report.rows.size() == 1);
    REQUIRE(report.rows[0].label == "baseline");
    REQUIRE(report.rows[0].welfare_lift == 0.0);
    REQUIRE(report.rows[0].revenue_lift == 0.0);
    REQUIRE(report.pretrain_records.size() == 10);
    REQUIRE(report.branches.size() == 1);
}

TEST_CASE("sweep branches share the pre-trained starting point") {
    const auto fixture = fixtures::uniform_boost_worst_case(1.0, 0.1);
    ExperimentConfig config;
    config.pretrain_iterations = 5;
    config.boosted_iterations = 4;
    const auto report =
        run_sweep(fixture.instance, {{BoostScheme::Uniform, 0.3}, {BoostScheme::Uniform, 1.0}},
                  config);
    REQUIRE(report.rows.size() == 3);
    for (const auto& [spec, trace] : report.branches) {
        REQUIRE(trace.records.front().alpha == report.shared_alpha.alpha);
        REQUIRE(trace.records.front().phase == 2);
        REQUIRE(trace.records.size() == 4);
    }
    REQUIRE(report.rows[1].label == "uboost-0.3");
    REQUIRE(report.rows[2].label == "uboost-1");
}

TEST_CASE("benchmark boosts lift welfare at least as much as uniform boosts here") {
    GeneratorParams params;
    params.num_bidders = 8;
    params.num_auctions = 40;
    params.max_slots = 3;
    params.bidder_location_spread = 0.7;
    params.position_decay = 0.6;
    params.seed = 20240801;
    const auto base = generate_instance(params);
    const auto aug = assign_budgets_via_benchmark(base, 0.6, 0.35, 0.85, 77);

    ExperimentConfig config;
    const auto report = run_sweep(
        aug.instance, {{BoostScheme::Uniform, 0.3}, {BoostScheme::Benchmark, 0.3}}, config,
        &aug.benchmark);
    REQUIRE(report.rows[2].welfare_lift >= report.rows[1].welfare_lift);
}

TEST_CASE("the best-response certificate flags a bidder parked below her win threshold") {
    const auto inst = fixtures::fpa_nonuniform_case();
    const auto boosts = zero_boosts(inst);
    const MultiplierProfile parked{{0.01, 1.0}};
    const auto result =
        best_response_certificate(inst, Mechanism::FpaUniformEnforced, boosts, parked);
    REQUIRE_FALSE(result.certified);
    REQUIRE(result.improving_bidder == 0);
    REQUIRE(result.value_gain > 0.0);
}

TEST_CASE("all worked examples replay with their stated numbers") {
    const auto report = replay_examples();
    for (const auto& check : report.checks) {
        INFO(check.name << ": expected " << check.expected << " got " << check.actual);
        CHECK(check.pass);
    }
    REQUIRE(report.all_pass());
}

TEST_CASE("configs are validated before running") {
    const auto fixture = fixtures::uniform_boost_worst_case(1.0, 0.1);
    ExperimentConfig config;
    config.pretrain_iterations = -1;
    REQUIRE_THROWS_AS(run_dynamics(fixture.instance, config), std::invalid_argument);

    config.pretrain_iterations = 5;
    config.mechanism = Mechanism::FpaUniformEnforced;
    config.scheme = {BoostScheme::Uniform, 0.5};
    REQUIRE_THROWS_AS(run_dynamics(fixture.instance, config), std::invalid_argument);

    config.mechanism = Mechanism::Vcg;
    config.scheme = {BoostScheme::Benchmark, 0.5};
    REQUIRE_THROWS_AS(run_dynamics(fixture.instance, config), std::invalid_argument);
}
