#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "autobid/rng.hpp"
#include "autobid/simulator.hpp"

namespace autobid {

struct CounterexampleBundle {
    ProblemInstance instance;
    BoostMatrix boosts;
    std::vector<double> alpha;
    double achieved = 0.0;
    double bound = 0.0;
    std::string note;
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    int instances = 0;
    int theta_samples = 0;  // profiles that cleared the Theta precondition
    int skips = 0;
    int violations = 0;
    int oracle_checks = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    double elapsed_seconds = 0.0;  // informational; never serialized
    std::vector<std::string> notes;
    std::vector<CounterexampleBundle> counterexamples;
};

namespace detail {

class SuiteTimer {
public:
    SuiteTimer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline void capture(SuiteResult& result, const ProblemInstance& inst, const BoostMatrix& boosts,
                    const CheckResult& check, const std::string& note) {
    if (result.counterexamples.size() >= 5) return;
    CounterexampleBundle bundle;
    bundle.instance = inst;
    bundle.boosts = boosts;
    bundle.alpha = check.alpha;
    bundle.achieved = check.achieved;
    bundle.bound = check.bound;
    bundle.note = note;
    result.counterexamples.push_back(std::move(bundle));
}

inline void tally(SuiteResult& result, const ProblemInstance& inst, const BoostMatrix& boosts,
                  const CheckResult& check, const std::string& context) {
    switch (check.status) {
        case CheckStatus::Pass:
            ++result.theta_samples;
            result.min_slack = std::min(result.min_slack, check.slack);
            break;
        case CheckStatus::Fail:
            ++result.violations;
            capture(result, inst, boosts, check, context + ": " + check.detail);
            break;
        case CheckStatus::Skip: ++result.skips; break;
    }
}

inline MultiplierProfile log_uniform_profile(Rng& rng, int n, double lo, double hi) {
    MultiplierProfile profile;
    profile.alpha.resize(n);
    for (int i = 0; i < n; ++i) profile.alpha[i] = std::exp(rng.uniform(std::log(lo), std::log(hi)));
    return profile;
}

/// A short burst of response dynamics; a cheap way to land near Theta on
/// budgeted instances where blind sampling rarely satisfies every budget.
inline MultiplierProfile settle_profile(const ProblemInstance& inst, Mechanism mech,
                                        const BoostMatrix& boosts, int iterations) {
    MultiplierProfile profile;
    profile.alpha.assign(inst.num_bidders, 1.0);
    LearningSchedule schedule;
    for (int t = 1; t <= iterations; ++t) {
        const auto outcome = clear_auctions(inst, uniform_bids(inst, profile), boosts, mech);
        const auto ledger = ledger_from_outcome(inst, outcome);
        profile = update_multipliers(profile, ledger, schedule.rate(t));
    }
    return profile;
}

}  // namespace detail

/// Wraps the worked-example replay as a suite.
inline SuiteResult run_fixture_suite(double tol = 1e-12) {
    detail::SuiteTimer timer;
    SuiteResult result;
    result.name = "fixtures";
    const auto report = replay_examples(tol);
    result.instances = static_cast<int>(report.checks.size());
    for (const auto& check : report.checks) {
        if (!check.pass) {
            ++result.violations;
            std::ostringstream os;
            os << check.name << ": expected " << check.expected << ", got " << check.actual;
            result.notes.push_back(os.str());
        }
    }
    result.passed = result.violations == 0;
    result.elapsed_seconds = timer.seconds();
    return result;
}

struct ValueBoostSuiteParams {
    std::string name = "value-bound";
    Mechanism mechanism = Mechanism::Vcg;
    bool gamma_bound = false;  // assert (c+g)/(c+g+1) with g = min alpha instead of (c+1)/(c+2)
    int samples = 1000;
    int bruteforce_checks = 100;  // leading samples are kept small and cross-checked
    std::vector<double> weights = {0.0, 0.3, 0.6, 1.0, 2.0};
    int alpha_tries = 12;
    double alpha_hi = 10.0;
    std::uint64_t seed = 0x7a3005ull;
};

/// Welfare bound sweep for value-competitive boosts on unbudgeted instances:
/// every Theta profile with multipliers >= 1 must clear the approximation
/// bound, and the sorted-greedy optimum is cross-checked against exhaustive
/// enumeration on the leading (small) samples.
inline SuiteResult run_value_boost_suite(const ValueBoostSuiteParams& params = {}) {
    detail::SuiteTimer timer;
    SuiteResult result;
    result.name = params.name;
    const int bruteforce_target = std::min(params.bruteforce_checks, params.samples);

    for (int s = 0; s < params.samples; ++s) {
        Rng rng(mix_seed(params.seed, static_cast<std::uint64_t>(s)));
        const bool small = s < bruteforce_target;

        GeneratorParams gen;
        gen.num_bidders = rng.uniform_int(2, small ? 4 : 5);
        gen.num_auctions = rng.uniform_int(1, small ? 4 : 6);
        gen.min_slots = 1;
        gen.max_slots = small ? 2 : 3;
        gen.value_location = rng.uniform(-0.5, 0.5);
        gen.value_scale = rng.uniform(0.4, 1.2);
        gen.bidder_location_spread = rng.uniform(0.0, 0.8);
        gen.position_decay = rng.uniform(0.4, 1.0);
        gen.seed = rng.next_u64();
        const ProblemInstance inst = generate_instance(gen);

        const double c = params.weights[s % params.weights.size()];
        BoostMatrix boosts;
        switch (s % 3) {
            case 0: boosts = uniform_boosts(inst, c); break;
            case 1: {
                // scaled uniform boosts stay c-value-competitive for scale >= 1
                const double scale = rng.uniform(1.0, 2.0);
                auto z = uniform_boosts(inst, c).z;
                for (auto& row : z)
                    for (double& v : row) v *= scale;
                boosts = custom_boosts(inst, std::move(z));
                break;
            }
            default: {
                // per-auction additive shifts cancel in boost differences
                std::vector<double> shift(inst.num_auctions);
                for (double& r : shift) r = rng.uniform(0.0, 1.0);
                auto z = uniform_boosts(inst, c).z;
                for (auto& row : z)
                    for (int j = 0; j < inst.num_auctions; ++j) row[j] += shift[j];
                boosts = custom_boosts(inst, std::move(z));
                break;
            }
        }
        if (!is_value_competitive(boosts, inst, c).ok) {
            ++result.violations;
            result.notes.push_back("constructed boosts failed the value-competitive verifier");
            continue;
        }

        if (small) {
            const double greedy = optimal_welfare_no_budget(inst).welfare;
            const double exhaustive = optimal_liquid_welfare_bruteforce(inst);
            ++result.oracle_checks;
            if (std::abs(greedy - exhaustive) > 1e-9 * std::max(1.0, exhaustive)) {
                ++result.violations;
                std::ostringstream os;
                os << "sorted-greedy optimum " << greedy << " != brute force " << exhaustive;
                result.notes.push_back(os.str());
            }
        }

        for (int attempt = 0; attempt <= params.alpha_tries; ++attempt) {
            MultiplierProfile profile;
            if (attempt == 0) {
                profile.alpha.assign(inst.num_bidders, 1.0);
            } else {
                profile = detail::log_uniform_profile(rng, inst.num_bidders, 1.0, params.alpha_hi);
            }
            double bound;
            if (params.gamma_bound) {
                const double gamma = *std::min_element(profile.alpha.begin(), profile.alpha.end());
                bound = (c + gamma) / (c + gamma + 1.0);
            } else {
                bound = (c + 1.0) / (c + 2.0);
            }
            RatioCheckOptions opts;
            opts.requirement = BoostRequirement::ValueCompetitive;
            opts.competitive_c = c;
            const auto check = check_ratio_bound(inst, params.mechanism, boosts, profile,
                                                 {BaselineKind::OptNoBudget}, bound, opts);
            detail::tally(result, inst, boosts, check, result.name);
        }
        ++result.instances;
    }

    {
        std::ostringstream os;
        os << result.instances << " instances, " << result.theta_samples << " Theta samples, "
           << result.skips << " skips, " << result.oracle_checks << " oracle cross-checks";
        result.notes.push_back(os.str());
    }
    result.passed = result.violations == 0 && result.instances >= params.samples &&
                    result.theta_samples >= params.samples &&
                    result.oracle_checks >= bruteforce_target;
    result.elapsed_seconds = timer.seconds();
    return result;
}

struct BenchmarkBoostSuiteParams {
    int samples = 1000;
    std::vector<double> weights = {0.0, 0.3, 0.6, 1.0, 2.0};
    int alpha_tries = 24;
    double alpha_lo = 0.5;
    double alpha_hi = 8.0;
    int settle_iterations = 30;
    std::uint64_t seed = 0x7a3007ull;
};

/// Welfare bound sweep for benchmark boosts on budgeted instances built by
/// the mu-factor construction. Every instance is small enough to enumerate,
/// and the benchmark welfare must equal the brute-force optimum exactly
/// (that equality is what makes Wel(o) the right baseline).
inline SuiteResult run_benchmark_boost_suite(const BenchmarkBoostSuiteParams& params = {}) {
    detail::SuiteTimer timer;
    SuiteResult result;
    result.name = "benchmark-bound";

    for (int s = 0; s < params.samples; ++s) {
        Rng rng(mix_seed(params.seed, static_cast<std::uint64_t>(s)));

        GeneratorParams gen;
        gen.num_bidders = rng.uniform_int(2, 4);
        gen.num_auctions = rng.uniform_int(2, 4);
        gen.min_slots = 1;
        gen.max_slots = 2;
        gen.value_location = rng.uniform(-0.5, 0.5);
        gen.value_scale = rng.uniform(0.4, 1.2);
        gen.bidder_location_spread = rng.uniform(0.0, 0.8);
        gen.position_decay = rng.uniform(0.4, 1.0);
        gen.seed = rng.next_u64();
        const ProblemInstance base = generate_instance(gen);

        const double rho = rng.uniform(0.2, 0.95);
        const double mu_lo = rng.uniform(0.25, 0.5);
        const double mu_hi = rng.uniform(mu_lo + 0.1, 0.9);
        const auto aug = assign_budgets_via_benchmark(base, rho, mu_lo, mu_hi, rng.next_u64());
        const ProblemInstance& inst = aug.instance;
        const BenchmarkOrder& order = aug.benchmark;

        const double c = params.weights[s % params.weights.size()];
        BoostMatrix boosts = benchmark_boosts(inst, order, c);
        if (s % 2 == 1) {
            // scaled minimal boosts remain c-benchmark-competitive
            const double scale = rng.uniform(1.0, 2.0);
            auto z = boosts.z;
            for (auto& row : z)
                for (double& v : row) v *= scale;
            boosts = custom_boosts(inst, std::move(z));
        }
        if (!is_benchmark_competitive(boosts, inst, order, c).ok) {
            ++result.violations;
            result.notes.push_back("constructed boosts failed the benchmark-competitive verifier");
            continue;
        }

        const double wel_o = benchmark_welfare(inst, order);
        const double exhaustive = optimal_liquid_welfare_bruteforce(inst);
        ++result.oracle_checks;
        if (std::abs(wel_o - exhaustive) > 1e-9 * std::max(1.0, exhaustive)) {
            ++result.violations;
            std::ostringstream os;
            os << "benchmark welfare " << wel_o << " != brute-force optimum " << exhaustive;
            result.notes.push_back(os.str());
        }

        const double bound = (c + 1.0) / (c + 2.0);
        RatioCheckOptions opts;
        opts.requirement = BoostRequirement::BenchmarkCompetitive;
        opts.competitive_c = c;
        opts.order = &order;
        const RatioBaseline baseline{BaselineKind::Benchmark, &order};

        for (int attempt = 0; attempt <= params.alpha_tries + 1; ++attempt) {
            MultiplierProfile profile;
            if (attempt == 0) {
                profile.alpha.assign(inst.num_bidders, 1.0);
            } else if (attempt == 1) {
                profile = detail::settle_profile(inst, Mechanism::Vcg, boosts,
                                                 params.settle_iterations);
            } else {
                profile = detail::log_uniform_profile(rng, inst.num_bidders, params.alpha_lo,
                                                      params.alpha_hi);
            }
            const auto check =
                check_ratio_bound(inst, Mechanism::Vcg, boosts, profile, baseline, bound, opts);
            detail::tally(result, inst, boosts, check, result.name);
        }
        ++result.instances;
    }

    {
        std::ostringstream os;
        os << result.instances << " instances, " << result.theta_samples << " Theta samples, "
           << result.skips << " skips, " << result.oracle_checks << " benchmark=optimum checks";
        result.notes.push_back(os.str());
    }
    result.passed = result.violations == 0 && result.instances >= params.samples &&
                    result.theta_samples >= params.samples &&
                    result.oracle_checks >= params.samples;
    result.elapsed_seconds = timer.seconds();
    return result;
}

struct SandwichSuiteParams {
    long target_clearings = 100000;
    int sweep_samples = 500;
    std::uint64_t seed = 0x7a3006ull;
};

/// Per-winner payment sandwich (VCG <= GSP <= bid * pos) over random
/// clearings with arbitrary bids and boosts, plus the generalized
/// (c+g)/(c+g+1) bound for GSP under enforced uniform bidding.
inline SuiteResult run_sandwich_suite(const SandwichSuiteParams& params = {}) {
    detail::SuiteTimer timer;
    SuiteResult result;
    result.name = "sandwich";

    long clearings = 0;
    std::uint64_t round = 0;
    while (clearings < params.target_clearings) {
        Rng rng(mix_seed(params.seed, round++));
        GeneratorParams gen;
        gen.num_bidders = rng.uniform_int(2, 5);
        gen.num_auctions = rng.uniform_int(2, 6);
        gen.min_slots = 1;
        gen.max_slots = 3;
        gen.value_location = rng.uniform(-0.5, 0.5);
        gen.value_scale = rng.uniform(0.4, 1.2);
        gen.position_decay = rng.uniform(0.4, 1.0);
        gen.seed = rng.next_u64();
        const ProblemInstance inst = generate_instance(gen);

        BidProfile bids;
        bids.bids.assign(inst.num_bidders, std::vector<double>(inst.num_auctions, 0.0));
        auto z = zero_boosts(inst).z;
        for (int i = 0; i < inst.num_bidders; ++i) {
            for (int j = 0; j < inst.num_auctions; ++j) {
                bids.bids[i][j] = rng.lognormal(0.0, 1.0);
                z[i][j] = rng.uniform(0.0, 3.0);
            }
        }
        const BoostMatrix boosts = custom_boosts(inst, std::move(z));

        const auto vcg = run_vcg(inst, bids, boosts);
        const auto gsp = run_gsp(inst, bids, boosts);
        for (int j = 0; j < inst.num_auctions; ++j) {
            for (int k = 0; k < inst.filled_slots(j); ++k) {
                const int winner = gsp.assignment[j][k];
                const double p_vcg = vcg.payments[winner][j];
                const double p_gsp = gsp.payments[winner][j];
                const double bid_cap = bids.bids[winner][j] * inst.pos[j][k];
                const double tol = 1e-9 * std::max({1.0, p_gsp, bid_cap});
                if (p_vcg > p_gsp + tol || p_gsp > bid_cap + tol) {
                    ++result.violations;
                    if (result.notes.size() < 10) {
                        std::ostringstream os;
                        os << "payment sandwich violated: vcg=" << p_vcg << " gsp=" << p_gsp
                           << " cap=" << bid_cap;
                        result.notes.push_back(os.str());
                    }
                }
            }
        }
        clearings += inst.num_auctions;
        ++result.instances;
    }
    result.oracle_checks = static_cast<int>(clearings);

    ValueBoostSuiteParams sweep;
    sweep.name = "sandwich-gamma";
    sweep.mechanism = Mechanism::Gsp;
    sweep.gamma_bound = true;
    sweep.samples = params.sweep_samples;
    sweep.bruteforce_checks = 0;
    sweep.seed = mix_seed(params.seed, 0x9999);
    const SuiteResult gamma = run_value_boost_suite(sweep);
    result.theta_samples = gamma.theta_samples;
    result.skips = gamma.skips;
    result.violations += gamma.violations;
    result.min_slack = gamma.min_slack;
    for (const auto& bundle : gamma.counterexamples) result.counterexamples.push_back(bundle);

    {
        std::ostringstream os;
        os << clearings << " clearings sandwich-checked; gamma-bound sweep: " << gamma.instances
           << " instances, " << gamma.theta_samples << " Theta samples";
        result.notes.push_back(os.str());
    }
    result.passed = result.violations == 0 && clearings >= params.target_clearings &&
                    gamma.passed;
    result.elapsed_seconds = timer.seconds();
    return result;
}

struct FpaSuiteParams {
    int samples = 200;
    int iterations = 60;
    double welfare_tol = 1e-6;
    std::uint64_t seed = 0x7a3008ull;
};

/// Equilibrium optimality under enforced uniform first-price bidding:
/// converged runs that pass the best-response certificate must hit the
/// optimal welfare; runs that fail certification are reported, not failed.
inline SuiteResult run_fpa_suite(const FpaSuiteParams& params = {}) {
    detail::SuiteTimer timer;
    SuiteResult result;
    result.name = "fpa";

    int converged_count = 0;
    int certified_count = 0;
    for (int s = 0; s < params.samples; ++s) {
        Rng rng(mix_seed(params.seed, static_cast<std::uint64_t>(s)));
        GeneratorParams gen;
        gen.num_bidders = rng.uniform_int(2, 4);
        gen.num_auctions = rng.uniform_int(2, 5);
        gen.min_slots = 1;
        gen.max_slots = 2;
        gen.value_location = rng.uniform(-0.5, 0.5);
        gen.value_scale = rng.uniform(0.4, 1.2);
        gen.bidder_location_spread = rng.uniform(0.0, 0.8);
        gen.position_decay = rng.uniform(0.4, 1.0);
        gen.seed = rng.next_u64();
        const ProblemInstance inst = generate_instance(gen);

        ExperimentConfig config;
        config.mechanism = Mechanism::FpaUniformEnforced;
        config.scheme = {};
        config.pretrain_iterations = params.iterations;
        config.boosted_iterations = 0;
        // constant learning rate: the first-price log dynamics contract
        // geometrically, so holding eta flat drives multipliers onto the
        // fixed point instead of stalling short of it
        config.learning.hold_iterations = params.iterations + 1;
        config.initial_alpha.resize(inst.num_bidders);
        for (double& a : config.initial_alpha)
            a = std::exp(rng.uniform(std::log(0.3), std::log(3.0)));

        const SimulationTrace trace = run_dynamics(inst, config);
        ++result.instances;
        if (!trace.last().converged) continue;
        ++converged_count;

        MultiplierProfile profile{trace.last().alpha};
        const auto boosts = zero_boosts(inst);
        const auto certificate =
            best_response_certificate(inst, Mechanism::FpaUniformEnforced, boosts, profile);
        if (!certificate.certified) continue;
        ++certified_count;

        const double welfare = trace.last().welfare;
        const double optimal = optimal_welfare_no_budget(inst).welfare;
        result.min_slack =
            std::min(result.min_slack, 1.0 - std::abs(welfare - optimal) / std::max(1.0, optimal));
        if (std::abs(welfare - optimal) > params.welfare_tol * std::max(1.0, optimal)) {
            ++result.violations;
            std::ostringstream os;
            os << "certified equilibrium welfare " << welfare << " != optimum " << optimal;
            result.notes.push_back(os.str());
        } else {
            ++result.theta_samples;
        }
    }

    {
        std::ostringstream os;
        os << result.instances << " runs: " << converged_count << " converged, " << certified_count
           << " certified, " << result.theta_samples << " matched the optimum; "
           << result.instances - certified_count << " reported without certification";
        result.notes.push_back(os.str());
    }
    result.passed = result.violations == 0 && result.instances >= params.samples &&
                    certified_count >= 1;
    result.elapsed_seconds = timer.seconds();
    return result;
}

struct TrendSuiteParams {
    int batch = 96;
    std::vector<double> weights = {0.3, 0.6, 0.9, 1.2, 1.5};
    GeneratorParams generator;
    ExperimentConfig experiment;
    std::uint64_t seed = 0x7a3010ull;

    // The defaults put the batch in the heavy-tailed budget-constrained
    // regime where benchmark boosts dominate uniform boosts, converged
    // benchmark revenue recovers above the baseline, and the first boosted
    // iteration always dents revenue. Uniform-boost welfare lifts rise and
    // flatten across these weights; see the suite assertions for what is
    // checked.
    TrendSuiteParams() {
        generator.num_bidders = 10;
        generator.num_auctions = 80;
        generator.min_slots = 1;
        generator.max_slots = 2;
        generator.value_location = 0.0;
        generator.value_scale = 1.35;
        generator.bidder_location_spread = 0.5;
        generator.position_decay = 0.6;
        generator.budgeted_fraction = 0.55;
        generator.mu_lo = 0.4;
        generator.mu_hi = 0.75;
        experiment.mechanism = Mechanism::Vcg;
        experiment.pretrain_iterations = 25;
        experiment.boosted_iterations = 25;
    }
};

struct TrendAggregate {
    std::string label;
    BoostSchemeSpec scheme;
    double mean_welfare_lift = 0.0;
    double mean_revenue_lift = 0.0;
    double mean_first_revenue_lift = 0.0;
    double mean_first_welfare_lift = 0.0;
};

struct TrendReport {
    std::vector<TrendAggregate> aggregates;  // uboost rows then benchmark rows, by weight
    SuiteResult suite;
};

/// Directional reproduction of the headline experiment over a seeded batch
/// of mu-augmented instances: benchmark boosts beat uniform boosts on
/// welfare at every weight, the first boosted iteration always dents
/// revenue, converged benchmark revenue lifts are positive, uniform-boost
/// welfare lifts rise then fall in the weight while benchmark lifts are
/// non-decreasing.
inline TrendReport run_trend_suite(const TrendSuiteParams& params = {}) {
    detail::SuiteTimer timer;
    TrendReport report;
    SuiteResult& result = report.suite;
    result.name = "trends";

    std::vector<BoostSchemeSpec> schemes;
    for (double c : params.weights) schemes.push_back({BoostScheme::Uniform, c});
    for (double c : params.weights) schemes.push_back({BoostScheme::Benchmark, c});

    report.aggregates.resize(schemes.size());
    for (std::size_t k = 0; k < schemes.size(); ++k) {
        report.aggregates[k].label = schemes[k].label();
        report.aggregates[k].scheme = schemes[k];
    }

    for (int b = 0; b < params.batch; ++b) {
        GeneratorParams gen = params.generator;
        gen.seed = mix_seed(params.seed + static_cast<std::uint64_t>(b), 1);
        const ProblemInstance base = generate_instance(gen);
        const auto aug = assign_budgets_via_benchmark(
            base, gen.budgeted_fraction, gen.mu_lo, gen.mu_hi,
            mix_seed(params.seed + static_cast<std::uint64_t>(b), 2));

        const SweepReport sweep =
            run_sweep(aug.instance, schemes, params.experiment, &aug.benchmark);
        // rows[0] is the baseline; scheme rows follow in order
        for (std::size_t k = 0; k < schemes.size(); ++k) {
            const SweepRow& row = sweep.rows[k + 1];
            report.aggregates[k].mean_welfare_lift += row.welfare_lift;
            report.aggregates[k].mean_revenue_lift += row.revenue_lift;
            report.aggregates[k].mean_first_revenue_lift += row.first_revenue_lift;
            report.aggregates[k].mean_first_welfare_lift += row.first_welfare_lift;
        }
        ++result.instances;
    }
    for (auto& agg : report.aggregates) {
        agg.mean_welfare_lift /= params.batch;
        agg.mean_revenue_lift /= params.batch;
        agg.mean_first_revenue_lift /= params.batch;
        agg.mean_first_welfare_lift /= params.batch;
    }

    const std::size_t w = params.weights.size();
    auto uboost = [&](std::size_t k) -> const TrendAggregate& { return report.aggregates[k]; };
    auto bench = [&](std::size_t k) -> const TrendAggregate& { return report.aggregates[w + k]; };
    auto fail = [&](const std::string& message) {
        ++result.violations;
        result.notes.push_back(message);
    };

    for (std::size_t k = 0; k < w; ++k) {
        if (!(bench(k).mean_welfare_lift > uboost(k).mean_welfare_lift))
            fail("benchmark welfare lift does not exceed uniform at weight " +
                 format_weight(params.weights[k]));
        if (!(bench(k).mean_revenue_lift > 0.0))
            fail("benchmark converged revenue lift not positive at weight " +
                 format_weight(params.weights[k]));
    }
    for (const auto& agg : report.aggregates) {
        if (!(agg.mean_first_revenue_lift < 0.0))
            fail("first boosted iteration revenue lift not negative for " + agg.label);
    }
    {
        std::size_t peak = 0;
        for (std::size_t k = 1; k < w; ++k)
            if (uboost(k).mean_welfare_lift > uboost(peak).mean_welfare_lift) peak = k;
        const bool interior = peak != 0 && peak != w - 1;
        if (!interior || !(uboost(peak).mean_welfare_lift > uboost(0).mean_welfare_lift) ||
            !(uboost(peak).mean_welfare_lift > uboost(w - 1).mean_welfare_lift))
            fail("uniform-boost welfare lift is not rise-then-fall in the weight");
        for (std::size_t k = 1; k < w; ++k) {
            if (!(bench(k).mean_welfare_lift >= bench(k - 1).mean_welfare_lift))
                fail("benchmark welfare lift decreases from weight " +
                     format_weight(params.weights[k - 1]) + " to " +
                     format_weight(params.weights[k]));
        }
    }

    for (const auto& agg : report.aggregates) {
        std::ostringstream os;
        os << agg.label << ": welfare " << agg.mean_welfare_lift * 100.0 << "%, revenue "
           << agg.mean_revenue_lift * 100.0 << "%, first-iteration revenue "
           << agg.mean_first_revenue_lift * 100.0 << "%";
        result.notes.push_back(os.str());
    }
    result.passed = result.violations == 0 && result.instances >= params.batch;
    result.elapsed_seconds = timer.seconds();
    return report;
}

}  // namespace autobid
