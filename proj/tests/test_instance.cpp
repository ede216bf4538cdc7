#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "autobid/instance.hpp"
#include "autobid/metrics.hpp"

using namespace autobid;

namespace {

bool has_violation(const ValidationReport& report, const std::string& needle) {
    for (const auto& v : report.violations)
        if (v.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("validate_instance accepts a well-formed instance") {
    ProblemInstance inst = make_single_slot_instance({{2.0, 0.1}, {0.0, 1.0}});
    inst.slots = {2, 1};
    inst.pos = {{1.0, 0.9}, {1.0}};
    REQUIRE(validate_instance(inst).ok());
    // idempotent and side-effect free
    REQUIRE(validate_instance(inst).ok());
}

TEST_CASE("validate_instance flags increasing position curves") {
    ProblemInstance inst = make_single_slot_instance({{1.0}, {2.0}});
    inst.slots = {2};
    inst.pos = {{0.9, 1.0}};
    const auto report = validate_instance(inst);
    REQUIRE_FALSE(report.ok());
    REQUIRE(has_violation(report, "pos increasing at (j=1,k=2)"));
}

TEST_CASE("validate_instance flags negative values") {
    ProblemInstance inst = make_single_slot_instance({{1.0, 1.0}, {-1.0, 1.0}});
    const auto report = validate_instance(inst);
    REQUIRE_FALSE(report.ok());
    REQUIRE(has_violation(report, "negative value at (i=2,j=1)"));
}

TEST_CASE("validate_instance flags non-positive budgets and bad dimensions") {
    ProblemInstance inst = make_single_slot_instance({{1.0}, {2.0}});
    inst.budgets[0] = 0.0;
    REQUIRE(has_violation(validate_instance(inst), "non-positive budget at (i=1)"));

    ProblemInstance mismatched = inst;
    mismatched.budgets[0] = 1.0;
    mismatched.slots.push_back(1);
    REQUIRE(has_violation(validate_instance(mismatched), "slots size mismatch"));
}

TEST_CASE("generate_instance is deterministic in the seed") {
    GeneratorParams params;
    params.num_bidders = 4;
    params.num_auctions = 12;
    params.bidder_location_spread = 0.5;
    params.seed = 7;
    const auto a = generate_instance(params);
    const auto b = generate_instance(params);
    REQUIRE(a.values == b.values);
    REQUIRE(a.slots == b.slots);
    REQUIRE(a.pos == b.pos);

    params.seed = 8;
    const auto c = generate_instance(params);
    REQUIRE(a.values != c.values);
}

TEST_CASE("generate_instance builds geometric position curves") {
    GeneratorParams params;
    params.num_bidders = 3;
    params.num_auctions = 4;
    params.min_slots = 2;
    params.max_slots = 2;
    params.position_decay = 0.9;
    params.seed = 3;
    const auto inst = generate_instance(params);
    REQUIRE(validate_instance(inst).ok());
    for (int j = 0; j < inst.num_auctions; ++j) {
        REQUIRE(inst.pos[j].size() == 2);
        REQUIRE(inst.pos[j][0] == 1.0);
        REQUIRE(inst.pos[j][1] == Catch::Approx(0.9));
    }
    for (const auto& b : inst.budgets) REQUIRE_FALSE(b.has_value());
}

TEST_CASE("generated values follow the configured log-normal") {
    GeneratorParams params;
    params.num_bidders = 5;
    params.num_auctions = 50;
    params.value_location = 0.0;
    params.value_scale = 1.0;
    params.seed = 11;
    const auto inst = generate_instance(params);

    double sum = 0.0;
    for (const auto& row : inst.values)
        for (double v : row) sum += v;
    const double mean = sum / (5.0 * 50.0);

    // closed-form moments of LogNormal(0, 1): mean e^{1/2}, variance (e-1)e
    const double expected_mean = std::exp(0.5);
    const double stddev = std::sqrt((std::exp(1.0) - 1.0) * std::exp(1.0));
    const double stderr_mean = stddev / std::sqrt(250.0);
    REQUIRE(std::abs(mean - expected_mean) <= 3.0 * stderr_mean);
}

TEST_CASE("generate_instance rejects invalid parameters") {
    GeneratorParams params;
    params.position_decay = 0.0;
    REQUIRE_THROWS_AS(generate_instance(params), std::invalid_argument);
    params.position_decay = 0.5;
    params.budgeted_fraction = 1.5;
    REQUIRE_THROWS_AS(generate_instance(params), std::invalid_argument);
}

TEST_CASE("rank_by_weighted_values ranks by mu-scaled values with index ties") {
    const auto inst = make_single_slot_instance({{2.0, 0.1}, {0.0, 1.0}});
    const auto order = rank_by_weighted_values(inst, {0.4, 1.0});
    // auction 1 scores (0.8, 0), auction 2 scores (0.04, 1)
    REQUIRE(order.ranking[0] == std::vector<int>{0, 1});
    REQUIRE(order.ranking[1] == std::vector<int>{1, 0});
    REQUIRE(benchmark_value(inst, order, 0) == 2.0);
    REQUIRE(benchmark_value(inst, order, 1) == 1.0);
}

TEST_CASE("assign_budgets_via_benchmark with rho 0 leaves everything unbounded") {
    const auto inst = make_single_slot_instance({{2.0, 0.1}, {0.0, 1.0}});
    const auto aug = assign_budgets_via_benchmark(inst, 0.0, 0.4, 0.9, 5);
    REQUIRE(aug.constrained.empty());
    REQUIRE(aug.mu == std::vector<double>{1.0, 1.0});
    for (const auto& b : aug.instance.budgets) REQUIRE_FALSE(b.has_value());
    // with every mu at 1 the order sorts by raw values
    REQUIRE(aug.benchmark.ranking[0] == std::vector<int>{0, 1});
    REQUIRE(aug.benchmark.ranking[1] == std::vector<int>{1, 0});
}

TEST_CASE("assign_budgets_via_benchmark rejects rho outside [0, 1]") {
    const auto inst = make_single_slot_instance({{1.0}, {2.0}});
    REQUIRE_THROWS_AS(assign_budgets_via_benchmark(inst, -0.1, 0.4, 0.9, 1),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(assign_budgets_via_benchmark(inst, 1.1, 0.4, 0.9, 1), std::invalid_argument);
}

TEST_CASE("constrained budgets equal benchmark value exactly") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        GeneratorParams params;
        params.num_bidders = 4;
        params.num_auctions = 5;
        params.max_slots = 2;
        params.seed = seed;
        const auto base = generate_instance(params);
        const auto aug = assign_budgets_via_benchmark(base, 0.6, 0.3, 0.9, seed + 1000);
        REQUIRE(validate_instance(aug.instance).ok());
        for (int i : aug.constrained) {
            REQUIRE(aug.instance.budgets[i].has_value());
            REQUIRE(*aug.instance.budgets[i] ==
                    benchmark_value(aug.instance, aug.benchmark, i));
        }
        for (int i = 0; i < aug.instance.num_bidders; ++i) {
            const bool constrained =
                std::find(aug.constrained.begin(), aug.constrained.end(), i) !=
                aug.constrained.end();
            REQUIRE(aug.instance.budgets[i].has_value() == constrained);
            if (!constrained) REQUIRE(aug.mu[i] == 1.0);
        }
    }
}

TEST_CASE("the mu-construction benchmark attains the brute-force optimum") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        GeneratorParams params;
        params.num_bidders = 3;
        params.num_auctions = 4;
        params.max_slots = 2;
        params.bidder_location_spread = 0.6;
        params.seed = seed;
        const auto base = generate_instance(params);
        const auto aug = assign_budgets_via_benchmark(base, 0.7, 0.3, 0.9, seed + 41);
        const double wel_o = benchmark_welfare(aug.instance, aug.benchmark);
        const double best = optimal_liquid_welfare_bruteforce(aug.instance);
        REQUIRE(wel_o == Catch::Approx(best).epsilon(1e-9));
    }
}
