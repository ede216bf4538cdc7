#pragma once

#include <cmath>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "autobid/fixtures.hpp"
#include "autobid/metrics.hpp"

namespace autobid {

inline std::string format_weight(double c) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", c);
    return buf;
}

struct BoostSchemeSpec {
    BoostScheme kind = BoostScheme::None;
    double c = 0.0;

    std::string label() const {
        switch (kind) {
            case BoostScheme::None: return "baseline";
            case BoostScheme::Uniform: return "uboost-" + format_weight(c);
            case BoostScheme::Benchmark: return "benchmark-" + format_weight(c);
            case BoostScheme::Custom: return "custom";
        }
        return "unknown";
    }
};

inline BoostMatrix make_scheme_boosts(const ProblemInstance& inst, const BoostSchemeSpec& spec,
                                      const BenchmarkOrder* benchmark) {
    switch (spec.kind) {
        case BoostScheme::None: return zero_boosts(inst);
        case BoostScheme::Uniform: return uniform_boosts(inst, spec.c);
        case BoostScheme::Benchmark:
            if (benchmark == nullptr)
                throw std::invalid_argument("benchmark boosts need a benchmark order");
            return benchmark_boosts(inst, *benchmark, spec.c);
        case BoostScheme::Custom:
            throw std::invalid_argument("custom boosts cannot be constructed from a scheme spec");
    }
    throw std::invalid_argument("unknown boost scheme");
}

/// eta_t for the 1-based iteration t within a phase: flat for the first
/// `hold_iterations`, then decaying as eta / sqrt(t - hold + 1).
struct LearningSchedule {
    double eta = 0.3;
    int hold_iterations = 10;

    double rate(int t) const {
        if (t <= hold_iterations) return eta;
        return eta / std::sqrt(static_cast<double>(t - hold_iterations + 1));
    }
};

struct ConvergenceParams {
    double tol = 1e-4;
    int window = 3;
};

struct ExperimentConfig {
    Mechanism mechanism = Mechanism::Vcg;
    BoostSchemeSpec scheme;
    int pretrain_iterations = 25;
    int boosted_iterations = 25;
    LearningSchedule learning;
    ConvergenceParams convergence;
    UpdateOptions update;
    double theta_tol = 1e-9;
    bool early_stop = false;
    std::vector<double> initial_alpha;  // empty = all ones
    std::uint64_t seed = 0;
};

inline void validate_experiment_config(const ExperimentConfig& config) {
    if (config.pretrain_iterations < 0 || config.boosted_iterations < 0)
        throw std::invalid_argument("iteration counts must be non-negative");
    if (!(config.scheme.c >= 0.0)) throw std::invalid_argument("boost weight must be non-negative");
    if (config.mechanism == Mechanism::FpaUniformEnforced &&
        config.scheme.kind != BoostScheme::None)
        throw std::invalid_argument("first-price auctions do not take boosts");
    if (!(config.learning.eta > 0.0 && config.learning.eta <= 1.0))
        throw std::invalid_argument("learning rate must be in (0, 1]");
    if (config.convergence.window < 1) throw std::invalid_argument("convergence window must be >= 1");
    if (!(config.convergence.tol > 0.0)) throw std::invalid_argument("convergence tol must be positive");
}

struct IterationRecord {
    int iteration = 0;  // 1-based, global across phases
    int phase = 0;      // 1 = no boosts, 2 = boosts active
    std::vector<double> alpha;
    BidderLedger ledger;
    double welfare = 0.0;
    double revenue = 0.0;
    std::vector<bool> feasible;
    bool in_theta = false;
    bool converged = false;
};

namespace detail {

inline double max_log_step(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(std::log(a[i]) - std::log(b[i])));
    return worst;
}

}  // namespace detail

/// True iff the last `window` multiplier steps in the record sequence all
/// stayed below tol in max log distance. Needs window+1 records.
inline bool detect_convergence(std::span<const IterationRecord> records, double tol = 1e-4,
                               int window = 3) {
    if (static_cast<int>(records.size()) < window + 1) return false;
    for (int s = 0; s < window; ++s) {
        const auto& cur = records[records.size() - 1 - s];
        const auto& prev = records[records.size() - 2 - s];
        if (detail::max_log_step(cur.alpha, prev.alpha) >= tol) return false;
    }
    return true;
}

struct SimulationTrace {
    std::vector<IterationRecord> records;
    MultiplierProfile final_alpha;  // post-update state, the continuation point
    double reference_welfare = 0.0;  // no-boost converged values, for normalization
    double reference_revenue = 0.0;

    const IterationRecord& last() const { return records.back(); }

    const IterationRecord* first_of_phase(int phase) const {
        for (const auto& r : records)
            if (r.phase == phase) return &r;
        return nullptr;
    }
};

namespace detail {

inline IterationRecord log_iteration(const ProblemInstance& inst, const ExperimentConfig& config,
                                     const MultiplierProfile& alpha, const BoostMatrix& boosts,
                                     int phase, int global, BidderLedger& ledger_out) {
    const auto outcome = clear_auctions(inst, uniform_bids(inst, alpha), boosts, config.mechanism);
    IterationRecord rec;
    rec.iteration = global;
    rec.phase = phase;
    rec.alpha = alpha.alpha;
    rec.welfare = liquid_welfare(inst, outcome);
    rec.revenue = revenue(outcome);
    rec.ledger = ledger_from_outcome(inst, outcome);
    std::vector<bool> undominated;
    classify_flags(inst, alpha, rec.ledger, config.theta_tol, rec.feasible, undominated);
    rec.in_theta = true;
    for (int i = 0; i < inst.num_bidders; ++i)
        rec.in_theta = rec.in_theta && rec.feasible[i] && undominated[i];
    ledger_out = rec.ledger;
    return rec;
}

/// One response phase: clear, log, update, for `iterations` steps. The
/// learning-rate schedule restarts at every phase so bidders re-adapt
/// quickly when the mechanism changes under them.
inline void run_phase(std::vector<IterationRecord>& records, const ProblemInstance& inst,
                      const ExperimentConfig& config, int phase, const BoostMatrix& boosts,
                      int iterations, MultiplierProfile& alpha, int& global) {
    const std::size_t phase_start = records.size();
    for (int t = 1; t <= iterations; ++t) {
        BidderLedger ledger;
        records.push_back(log_iteration(inst, config, alpha, boosts, phase, ++global, ledger));
        const std::span<const IterationRecord> phase_span{records.data() + phase_start,
                                                          records.size() - phase_start};
        records.back().converged =
            detect_convergence(phase_span, config.convergence.tol, config.convergence.window);
        if (config.early_stop && records.back().converged) break;
        alpha = update_multipliers(alpha, ledger, config.learning.rate(t), config.update);
    }
}

}  // namespace detail

/// The two-phase response protocol: pre-train the multipliers on the bare
/// mechanism, switch the configured boosts on, and keep iterating. Every
/// record reflects the outcome of the multipliers *before* that iteration's
/// update. Fully deterministic in (instance, config).
inline SimulationTrace run_dynamics(const ProblemInstance& inst, const ExperimentConfig& config,
                                    const BenchmarkOrder* benchmark = nullptr) {
    require_valid(inst);
    validate_experiment_config(config);

    MultiplierProfile alpha;
    alpha.alpha = config.initial_alpha.empty() ? std::vector<double>(inst.num_bidders, 1.0)
                                               : config.initial_alpha;
    validate_profile(alpha, inst.num_bidders);

    const BoostMatrix no_boosts = zero_boosts(inst);
    const BoostMatrix boosted = make_scheme_boosts(inst, config.scheme, benchmark);

    SimulationTrace trace;
    int global = 0;
    detail::run_phase(trace.records, inst, config, 1, no_boosts, config.pretrain_iterations, alpha,
                      global);
    const bool had_pretrain = !trace.records.empty();
    const IterationRecord* reference = had_pretrain ? &trace.records.back() : nullptr;
    detail::run_phase(trace.records, inst, config, 2, boosted, config.boosted_iterations, alpha,
                      global);

    if (trace.records.empty()) {
        // 0+0 iterations: log the initial state once, without updating.
        BidderLedger ledger;
        trace.records.push_back(
            detail::log_iteration(inst, config, alpha, no_boosts, 1, ++global, ledger));
        reference = &trace.records.back();
    } else if (reference == nullptr) {
        reference = &trace.records.front();
    }
    trace.reference_welfare = reference->welfare;
    trace.reference_revenue = reference->revenue;
    trace.final_alpha = alpha;
    return trace;
}

struct SweepRow {
    std::string label;
    BoostSchemeSpec scheme;
    double first_welfare = 0.0;
    double first_revenue = 0.0;
    double final_welfare = 0.0;
    double final_revenue = 0.0;
    bool converged = false;
    double welfare_lift = 0.0;        // final vs baseline final
    double revenue_lift = 0.0;
    double first_welfare_lift = 0.0;  // boosted first iteration vs baseline final
    double first_revenue_lift = 0.0;
};

struct SweepReport {
    std::vector<IterationRecord> pretrain_records;
    MultiplierProfile shared_alpha;  // common starting point of every branch
    std::vector<std::pair<BoostSchemeSpec, SimulationTrace>> branches;  // baseline first
    double baseline_welfare = 0.0;
    double baseline_revenue = 0.0;
    std::vector<SweepRow> rows;  // baseline row first
};

/// Runs the shared pre-train once, then continues one branch per scheme
/// (plus the no-boost baseline) from the same equilibrium starting point.
/// Lifts are relative to the baseline branch's converged values.
inline SweepReport run_sweep(const ProblemInstance& inst,
                             const std::vector<BoostSchemeSpec>& schemes,
                             const ExperimentConfig& base,
                             const BenchmarkOrder* benchmark = nullptr) {
    validate_experiment_config(base);

    ExperimentConfig pretrain_config = base;
    pretrain_config.scheme = {};
    pretrain_config.boosted_iterations = 0;

    SweepReport report;
    if (base.pretrain_iterations > 0) {
        SimulationTrace pretrain = run_dynamics(inst, pretrain_config, benchmark);
        report.pretrain_records = std::move(pretrain.records);
        report.shared_alpha = pretrain.final_alpha;
    } else {
        report.shared_alpha.alpha = base.initial_alpha.empty()
                                        ? std::vector<double>(inst.num_bidders, 1.0)
                                        : base.initial_alpha;
    }

    auto run_branch = [&](const BoostSchemeSpec& spec) {
        ExperimentConfig cfg = base;
        cfg.scheme = spec;
        cfg.pretrain_iterations = 0;
        cfg.initial_alpha = report.shared_alpha.alpha;
        SimulationTrace trace = run_dynamics(inst, cfg, benchmark);
        const int offset = static_cast<int>(report.pretrain_records.size());
        for (auto& rec : trace.records) rec.iteration += offset;
        return trace;
    };

    report.branches.emplace_back(BoostSchemeSpec{}, run_branch(BoostSchemeSpec{}));
    for (const auto& spec : schemes) report.branches.emplace_back(spec, run_branch(spec));

    const SimulationTrace& baseline = report.branches.front().second;
    report.baseline_welfare = baseline.last().welfare;
    report.baseline_revenue = baseline.last().revenue;
    for (auto& [spec, trace] : report.branches) {
        trace.reference_welfare = report.baseline_welfare;
        trace.reference_revenue = report.baseline_revenue;
    }

    auto lift = [](double value, double base_value) {
        return base_value > 0.0 ? value / base_value - 1.0 : 0.0;
    };
    for (const auto& [spec, trace] : report.branches) {
        SweepRow row;
        row.label = spec.label();
        row.scheme = spec;
        const IterationRecord* first = trace.first_of_phase(2);
        if (first == nullptr) first = &trace.records.front();
        row.first_welfare = first->welfare;
        row.first_revenue = first->revenue;
        row.final_welfare = trace.last().welfare;
        row.final_revenue = trace.last().revenue;
        row.converged = trace.last().converged;
        row.welfare_lift = lift(row.final_welfare, report.baseline_welfare);
        row.revenue_lift = lift(row.final_revenue, report.baseline_revenue);
        row.first_welfare_lift = lift(row.first_welfare, report.baseline_welfare);
        row.first_revenue_lift = lift(row.first_revenue, report.baseline_revenue);
        report.rows.push_back(std::move(row));
    }
    return report;
}

struct BestResponseOptions {
    int grid_points = 200;
    double grid_lo = 1e-3;
    double grid_hi = 1e3;
    bool add_thresholds = true;  // win-threshold multipliers, so no improvement hides between grid points
    double value_tol = 1e-9;
    double feasibility_tol = 1e-9;
};

namespace detail {

inline std::vector<double> deviation_candidates(const ProblemInstance& inst,
                                                const BoostMatrix& boosts,
                                                const MultiplierProfile& profile, int bidder,
                                                const BestResponseOptions& opts) {
    std::vector<double> candidates;
    candidates.reserve(opts.grid_points + 2 * inst.num_bidders * inst.num_auctions + 2);
    const double log_lo = std::log(opts.grid_lo);
    const double log_hi = std::log(opts.grid_hi);
    for (int g = 0; g < opts.grid_points; ++g) {
        const double f = opts.grid_points == 1 ? 0.0
                                               : static_cast<double>(g) / (opts.grid_points - 1);
        candidates.push_back(std::exp(log_lo + f * (log_hi - log_lo)));
    }
    candidates.push_back(1.0);
    if (opts.add_thresholds) {
        for (int j = 0; j < inst.num_auctions; ++j) {
            const double v = inst.values[bidder][j];
            if (v <= 0.0) continue;
            for (int other = 0; other < inst.num_bidders; ++other) {
                if (other == bidder) continue;
                const double score = profile.alpha[other] * inst.values[other][j] + boosts.at(other, j);
                const double a = (score - boosts.at(bidder, j)) / v;
                if (a > 0.0 && std::isfinite(a)) {
                    candidates.push_back(a);
                    candidates.push_back(a * (1.0 + 1e-9));
                }
            }
        }
    }
    return candidates;
}

}  // namespace detail

struct DeviationScan {
    double best_value = 0.0;
    double best_alpha = 0.0;
};

/// Max value `bidder` can reach feasibly by moving only her own multiplier,
/// over the candidate set (log grid plus every win threshold).
inline DeviationScan max_feasible_uniform_value(const ProblemInstance& inst, Mechanism mech,
                                                const BoostMatrix& boosts,
                                                const MultiplierProfile& profile, int bidder,
                                                const BestResponseOptions& opts = {}) {
    DeviationScan scan;
    MultiplierProfile candidate = profile;
    for (double a : detail::deviation_candidates(inst, boosts, profile, bidder, opts)) {
        candidate.alpha[bidder] = a;
        const auto outcome = clear_auctions(inst, uniform_bids(inst, candidate), boosts, mech);
        const auto ledger = ledger_from_outcome(inst, outcome);
        const double budget =
            inst.budgets[bidder].value_or(std::numeric_limits<double>::infinity());
        const double cap = std::min(budget, ledger.value[bidder]);
        const bool feasible =
            ledger.spend[bidder] <= cap + opts.feasibility_tol * std::max(1.0, cap);
        if (feasible && ledger.value[bidder] > scan.best_value) {
            scan.best_value = ledger.value[bidder];
            scan.best_alpha = a;
        }
    }
    return scan;
}

struct BestResponseResult {
    bool certified = false;  // no bidder has a feasible value-improving deviation
    int improving_bidder = -1;
    double improving_alpha = 0.0;
    double value_gain = 0.0;
};

/// Approximate-Nash certificate by line search over each bidder's
/// multiplier. Win thresholds are included in the candidate set, so for
/// mechanisms whose value function only changes at those thresholds the
/// certificate is effectively exact.
inline BestResponseResult best_response_certificate(const ProblemInstance& inst, Mechanism mech,
                                                    const BoostMatrix& boosts,
                                                    const MultiplierProfile& profile,
                                                    const BestResponseOptions& opts = {}) {
    const auto current = ledger_from_outcome(
        inst, clear_auctions(inst, uniform_bids(inst, profile), boosts, mech));
    BestResponseResult result;
    result.certified = true;
    for (int i = 0; i < inst.num_bidders; ++i) {
        const auto scan = max_feasible_uniform_value(inst, mech, boosts, profile, i, opts);
        const double threshold = current.value[i] * (1.0 + opts.value_tol) + 1e-12;
        if (scan.best_value > threshold) {
            result.certified = false;
            result.improving_bidder = i;
            result.improving_alpha = scan.best_alpha;
            result.value_gain = scan.best_value - current.value[i];
            return result;
        }
    }
    return result;
}

struct FixtureCheck {
    std::string name;
    double expected = 0.0;
    double actual = 0.0;
    bool pass = false;
};

struct FixtureReport {
    std::vector<FixtureCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Replays the three hand-built cases and asserts their known numbers.
inline FixtureReport replay_examples(double tol = 1e-12) {
    FixtureReport report;
    auto check = [&](const std::string& name, double expected, double actual) {
        const bool pass = std::abs(actual - expected) <= tol * std::max(1.0, std::abs(expected));
        report.checks.push_back({name, expected, actual, pass});
    };
    auto check_flag = [&](const std::string& name, bool expected, bool actual) {
        report.checks.push_back({name, expected ? 1.0 : 0.0, actual ? 1.0 : 0.0,
                                 expected == actual});
    };

    {
        // Uniform-boost worst case at d = 1, eps = 0.1, c = 0: the corner
        // profile wins both auctions for bidder 1, welfare 2.1 of optimal 3.
        const auto fixture = fixtures::uniform_boost_worst_case(1.0, 0.1);
        const auto& inst = fixture.instance;
        const double c = 0.0;
        const auto boosts = uniform_boosts(inst, c);
        const auto profile = fixture.corner_profile(c);

        check("uboost-worst-case/wel_opt", 3.0, optimal_welfare_no_budget(inst).welfare);
        const auto cls = classify_profile(inst, Mechanism::Vcg, boosts, profile);
        check("uboost-worst-case/welfare", 2.1, liquid_welfare(inst, cls.outcome));
        check("uboost-worst-case/revenue", 1.0, revenue(cls.outcome));
        check_flag("uboost-worst-case/in_theta", true, cls.in_theta);
        const auto ratio = check_ratio_bound(inst, Mechanism::Vcg, boosts, profile,
                                             {BaselineKind::OptNoBudget}, (c + 1.0) / (c + 2.0));
        check("uboost-worst-case/ratio", 0.7, ratio.achieved);
        check_flag("uboost-worst-case/bound_holds", true, ratio.status == CheckStatus::Pass);

        // Bidder 2's cheapest winning deviation in auction 2 must pay the
        // corner bid 1.1, above her value 1, so the profile is a Nash
        // equilibrium.
        MultiplierProfile deviation = profile;
        deviation.alpha[1] = 1.2;
        const auto dev = classify_profile(inst, Mechanism::Vcg, boosts, deviation);
        check("uboost-worst-case/deviation_payment", 1.1, dev.ledger.spend[1]);
        check_flag("uboost-worst-case/deviation_wins", true,
                   dev.outcome.slot_of(1, 1).has_value());
        check_flag("uboost-worst-case/deviation_infeasible", true, !dev.feasible[1]);
        check_flag("uboost-worst-case/nash_certified", true,
                   best_response_certificate(inst, Mechanism::Vcg, boosts, profile).certified);
    }

    {
        // GSP case: the best uniform multiplier nets bidder 1 value 1, while
        // the non-uniform profile nets 1.7 for a total payment of 1.
        const auto inst = fixtures::gsp_nonuniform_case();
        const auto boosts = zero_boosts(inst);
        const auto outcome = run_gsp(inst, fixtures::gsp_nonuniform_bids(), boosts);
        const auto ledger = ledger_from_outcome(inst, outcome);
        check("gsp-nonuniform/value", 1.7, ledger.value[0]);
        check("gsp-nonuniform/payment", 1.0, ledger.spend[0]);

        const MultiplierProfile ones{{1.0, 1.0, 1.0}};
        const auto scan = max_feasible_uniform_value(inst, Mechanism::Gsp, boosts, ones, 0);
        check("gsp-nonuniform/best_uniform_value", 1.0, scan.best_value);
    }

    {
        // First-price case: uniform bidding forces multiplier 1 with values
        // (4, 2); bidder 1 bidding (2, 3) instead takes both auctions.
        const auto inst = fixtures::fpa_nonuniform_case();
        const auto boosts = zero_boosts(inst);
        const MultiplierProfile ones{{1.0, 1.0}};
        const auto uniform = classify_profile(inst, Mechanism::FpaUniformEnforced, boosts, ones);
        check("fpa-nonuniform/uniform_value_1", 4.0, uniform.ledger.value[0]);
        check("fpa-nonuniform/uniform_value_2", 2.0, uniform.ledger.value[1]);
        check_flag("fpa-nonuniform/uniform_nash_certified", true,
                   best_response_certificate(inst, Mechanism::FpaUniformEnforced, boosts, ones)
                       .certified);

        const auto bids = fixtures::fpa_nonuniform_bids();
        const auto outcome = run_fpa(inst, bids);
        const auto ledger = ledger_from_outcome(inst, outcome);
        check("fpa-nonuniform/nonuniform_value", 5.0, ledger.value[0]);
        check("fpa-nonuniform/nonuniform_payment", 5.0, ledger.spend[0]);

        // Bidder 2 cannot win either auction without overpaying: winning
        // bids exceed her values outright.
        bool deviations_blocked = true;
        for (const auto& deviation : {std::vector<double>{2.0 + 1e-9, 0.0},
                                      std::vector<double>{0.0, 3.0 + 1e-9},
                                      std::vector<double>{2.0 + 1e-9, 3.0 + 1e-9}}) {
            BidProfile dev_bids = bids;
            dev_bids.bids[1] = deviation;
            const auto dev_outcome = run_fpa(inst, dev_bids);
            const auto dev_ledger = ledger_from_outcome(inst, dev_outcome);
            if (dev_ledger.spend[1] <= dev_ledger.value[1]) deviations_blocked = false;
        }
        check_flag("fpa-nonuniform/nonuniform_equilibrium", true, deviations_blocked);
    }

    return report;
}

}  // namespace autobid
